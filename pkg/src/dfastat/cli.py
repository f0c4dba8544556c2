"""Command-line surface: construct, learn, analyze, simulate, report.

Subcommands: maj-dfa, learn, analyze, curve, refute, simulate, eta.
Automata are passed between commands in the text format of the automata
module. Exit codes: 0 success, 2 usage/precondition error, 3 model not
representable as a finite chain (simulation-only process).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .automata import (
    Dfa,
    build_majority_dfa,
    dfa_from_text,
    dfa_to_text,
    example_degeneracy_dfa,
    example_dominance_dfa,
)
from .estimation import (
    Table,
    Threshold,
    discrepancy_rows,
    eta_report,
    format_certificate,
    refute_consistency,
)
from .learner import learn
from .markov import (
    UnsupportedModelError,
    decompose,
    induce_chain,
    limiting_acceptance,
    stationary,
)
from .processes import Bernoulli, parse_process, parse_theta
from .sim import run_trials

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3

SEED_ENV_VAR = "DFASTAT_SEED"


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR, "0")
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}")


def dfa_from_source(source: str) -> Dfa:
    """Resolve a --dfa argument.

    Accepted forms: `maj:<k>`, `learn:<a>:<k>`, `example:dominance`,
    `example:degeneracy`, or a path to a DFA text file.
    """
    if source.startswith("maj:"):
        return build_majority_dfa(int(source.split(":", 1)[1]))
    if source.startswith("learn:"):
        parts = source.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected learn:<a>:<k>, got {source!r}")
        return learn(Fraction(parts[1]), int(parts[2])).dfa
    if source == "example:dominance":
        return example_dominance_dfa()
    if source == "example:degeneracy":
        return example_degeneracy_dfa()
    with open(source) as fh:
        return dfa_from_text(fh.read())


def _write(path: Optional[str], text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


@dataclass(frozen=True)
class CurveSpec:
    """A theta grid to sweep with one automaton."""

    source: str
    theta_min: float
    theta_max: float
    steps: int
    out: Optional[str] = None

    def __post_init__(self):
        if not 0.0 < self.theta_min < self.theta_max < 1.0:
            raise ValueError("theta grid must satisfy 0 < min < max < 1")
        if self.steps < 2:
            raise ValueError("theta grid needs at least 2 steps")


def run_curve(spec: CurveSpec) -> str:
    """CSV of limiting acceptance across the theta grid."""
    dfa = dfa_from_source(spec.source)
    lines = ["theta,limiting_acceptance"]
    for theta in np.linspace(spec.theta_min, spec.theta_max, spec.steps):
        theta = float(theta)
        value = limiting_acceptance(dfa, Bernoulli(theta)).value
        lines.append(f"{theta!r},{value!r}")
    return "\n".join(lines) + "\n"


def _parse_theta_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected <min>:<max>:<steps>, got {text!r}")
    return float(parts[0]), float(parts[1]), int(parts[2])


def _chain_state_name(label: tuple[int, ...]) -> str:
    # (dfa state,) for memoryless sources, (dfa state, last bit) otherwise
    return "/".join(str(x) for x in label)


def cmd_maj_dfa(args) -> int:
    _write(args.out, dfa_to_text(build_majority_dfa(args.k)))
    return EXIT_OK


def cmd_learn(args) -> int:
    result = learn(Fraction(args.a), args.k)
    stats = (
        f"# states={result.dfa.state_count}"
        f" equivalence_queries={result.equivalence_queries}"
        f" membership_queries={result.membership_queries}\n"
    )
    _write(args.out, dfa_to_text(result.dfa) + stats)
    return EXIT_OK


def cmd_analyze(args) -> int:
    dfa = dfa_from_source(args.dfa)
    spec = parse_process(args.process)
    chain = induce_chain(dfa, spec)
    structure = decompose(chain)
    limit = limiting_acceptance(dfa, spec)

    rows = []
    for ci in structure.recurrent_ids:
        analysis = stationary(chain, ci, structure)
        members = ";".join(
            _chain_state_name(chain.labels[v]) for v in analysis.states
        )
        rows.append(
            (ci, members, structure.periods[ci], structure.absorption[ci],
             analysis.acceptance_mass)
        )

    if args.format == "csv":
        lines = ["kind,class,members,period,absorption,acceptance_mass,"
                 "value,is_true_limit"]
        for ci, members, period, absorption, mass in rows:
            lines.append(
                f"class,{ci},{members},{period},{absorption!r},{mass!r},,"
            )
        lines.append(f"limit,,,,,,{limit.value!r},{str(limit.is_true_limit).lower()}")
        _write(args.out, "\n".join(lines) + "\n")
    else:
        lines = []
        for ci, members, period, absorption, mass in rows:
            lines.append(
                f"recurrent class {ci}: members [{members}] period {period}"
                f" absorption {absorption:.10g} acceptance_mass {mass:.10g}"
            )
        kind = "plain limit" if limit.is_true_limit else "Cesaro average only"
        lines.append(f"limiting acceptance = {limit.value:.10g} ({kind})")
        _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_curve(args) -> int:
    mn, mx, steps = _parse_theta_grid(args.theta)
    spec = CurveSpec(source=args.dfa, theta_min=mn, theta_max=mx, steps=steps,
                     out=args.out)
    _write(spec.out, run_curve(spec))
    return EXIT_OK


def cmd_refute(args) -> int:
    dfa = dfa_from_source(args.dfa)
    if (args.a is None) == (args.table is None):
        raise ValueError("exactly one of --a or --table is required")
    if args.a is not None:
        functional = Threshold(Fraction(args.a))
    else:
        entries = []
        for pair in args.table.split(","):
            theta_text, _, bit_text = pair.partition("=")
            if not bit_text:
                raise ValueError(f"expected <theta>=<bit>, got {pair!r}")
            entries.append((float(parse_theta(theta_text)), int(bit_text)))
        functional = Table(tuple(entries))
    if args.thetas is not None:
        thetas = [parse_theta(t) for t in args.thetas.split(",") if t.strip()]
    elif isinstance(functional, Table):
        thetas = [theta for theta, _ in functional.entries]
    else:
        raise ValueError("--thetas is required with --a")
    cert = refute_consistency(dfa, functional, thetas)
    sys.stdout.write(format_certificate(cert))
    return EXIT_OK if cert.epsilon_star > 0 else 1


def cmd_simulate(args) -> int:
    dfa = dfa_from_source(args.dfa)
    spec = parse_process(args.process)
    seed = args.seed if args.seed is not None else default_seed()
    report = run_trials(dfa, spec, args.n, args.trials, seed)
    lines = ["checkpoint_n,acceptance,stderr"]
    checkpoints = report.checkpoints or ((report.n, report.frequency, report.stderr),)
    for cp, freq, se in checkpoints:
        lines.append(f"{cp},{freq!r},{se!r}")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_eta(args) -> int:
    if args.report is not None:
        rows = discrepancy_rows()
        lines = ["k,theta,derived,printed,complement_candidate,"
                 "swapped_candidate,numeric,printed_matches,"
                 "complement_matches,swapped_matches"]
        for r in rows:
            lines.append(
                f"{r.k},{r.theta!r},{r.derived!r},{r.printed!r},"
                f"{r.complement_candidate!r},{r.swapped_candidate!r},"
                f"{r.numeric!r},{int(r.printed_matches)},"
                f"{int(r.complement_matches)},{int(r.swapped_matches)}"
            )
        _write(args.report, "\n".join(lines) + "\n")
        if args.k is None:
            return EXIT_OK
    if args.k is None or args.theta is None:
        raise ValueError("--k and --theta are required (or use --report)")
    report = eta_report(args.k, parse_theta(args.theta))
    printed = "n/a" if report.printed is None else f"{report.printed:.12g}"
    bound = "n/a" if report.bound is None else f"{report.bound:.12g}"
    sys.stdout.write(
        f"k={report.k} theta={report.theta:.12g} derived={report.derived:.12g}"
        f" printed={printed} bound={bound} numeric={report.numeric:.12g}\n"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dfastat",
        description="Finite-state estimation toolkit: majority automata, "
        "induced-chain analysis, learning, refutation, simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("maj-dfa", help="write the k-state majority automaton")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_maj_dfa)

    p = sub.add_parser("learn", help="learn a DFA agreeing with threshold-"
                       "majority on strings shorter than k")
    p.add_argument("--a", required=True, help="threshold, e.g. 1/3 or 0.5")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("analyze", help="decompose the chain a process induces "
                       "on a DFA")
    p.add_argument("--dfa", required=True)
    p.add_argument("--process", required=True,
                   help="bernoulli:<theta> | degenerate:<bit> | "
                   "dominant:<bit>:<rate> | markov:<p01>:<p10>")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("curve", help="limiting acceptance across a theta grid")
    p.add_argument("--dfa", required=True)
    p.add_argument("--theta", required=True, help="<min>:<max>:<steps>")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("refute", help="certificate that a DFA cannot decide a "
                       "threshold or table functional in the limit")
    p.add_argument("--dfa", required=True)
    p.add_argument("--a", default=None, help="threshold functional, e.g. 1/2")
    p.add_argument("--table", default=None,
                   help="table functional, e.g. 0.3=0,0.7=1")
    p.add_argument("--thetas", default=None,
                   help="comma-separated parameters to test")
    p.set_defaults(func=cmd_refute)

    p = sub.add_parser("simulate", help="Monte Carlo acceptance of a DFA on a "
                       "sampled process")
    p.add_argument("--dfa", required=True)
    p.add_argument("--process", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=None,
                   help=f"default: ${SEED_ENV_VAR} or 0")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("eta", help="limiting rejection of the majority "
                       "automaton: closed forms, bound, solver")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--theta", default=None)
    p.add_argument("--report", default=None,
                   help="write the full discrepancy grid as CSV to this path")
    p.set_defaults(func=cmd_eta)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
