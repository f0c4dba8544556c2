"""Statistical estimation by finite automata: exact limits, learning, simulation.

The package answers one family of questions: what does a binary-alphabet
DFA converge to when fed a random bit process, and how far is that from
any {0,1}-valued decision about the process parameter? It provides the
majority-automaton family and example machines (automata), generative
process models with reproducible sampling (processes), the induced-chain
analysis giving exact limiting acceptance (markov), closed-form error
rates and consistency refutation certificates (estimation), active
learning of small agreeing machines (learner), Monte Carlo validation
(sim), and a CLI (cli).
"""

from .automata import (
    Dfa,
    DfaFormatError,
    agreement_check,
    all_dfas,
    bits,
    build_majority_dfa,
    dfa_from_text,
    dfa_to_text,
    example_degeneracy_dfa,
    example_dominance_dfa,
    isomorphic,
    languages_equal,
    majority_fn,
    minimize,
)
from .estimation import (
    EtaReport,
    RefutationCertificate,
    Table,
    Threshold,
    discrepancy_rows,
    error_rate,
    eta_bound,
    eta_derived,
    eta_printed,
    eta_report,
    maj_agreement_bound,
    numeric_eta,
    refute_consistency,
)
from .learner import LearnResult, brute_force_min_agreeing, learn
from .markov import (
    AcceptanceLimit,
    ChainStructure,
    ClassAnalysis,
    InducedChain,
    UnsupportedModelError,
    decompose,
    induce_chain,
    limiting_acceptance,
    stationary,
)
from .processes import (
    Bernoulli,
    Degenerate,
    Dominant,
    MarkovBinary,
    ProcessSpec,
    hoeffding_bound,
    incremental_mean,
    parse_process,
    parse_theta,
    sample,
    trial_rng,
)
from .sim import TrialReport, disagreement_trials, run_trials, trajectory

__version__ = "0.1.0"

__all__ = [
    "AcceptanceLimit",
    "Bernoulli",
    "ChainStructure",
    "ClassAnalysis",
    "Degenerate",
    "Dfa",
    "DfaFormatError",
    "Dominant",
    "EtaReport",
    "InducedChain",
    "LearnResult",
    "MarkovBinary",
    "ProcessSpec",
    "RefutationCertificate",
    "Table",
    "Threshold",
    "TrialReport",
    "UnsupportedModelError",
    "agreement_check",
    "all_dfas",
    "bits",
    "brute_force_min_agreeing",
    "build_majority_dfa",
    "decompose",
    "dfa_from_text",
    "dfa_to_text",
    "disagreement_trials",
    "discrepancy_rows",
    "error_rate",
    "eta_bound",
    "eta_derived",
    "eta_printed",
    "eta_report",
    "example_degeneracy_dfa",
    "example_dominance_dfa",
    "hoeffding_bound",
    "incremental_mean",
    "induce_chain",
    "isomorphic",
    "languages_equal",
    "learn",
    "limiting_acceptance",
    "maj_agreement_bound",
    "majority_fn",
    "minimize",
    "numeric_eta",
    "parse_process",
    "parse_theta",
    "refute_consistency",
    "run_trials",
    "sample",
    "stationary",
    "trajectory",
    "trial_rng",
]
