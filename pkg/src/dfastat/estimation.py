"""Threshold functionals, closed-form error limits, and the consistency refuter.

`eta` throughout means the limiting probability that the k-state majority
automaton rejects a Bernoulli(theta) stream: the stationary mass of its
rejecting states. Two closed forms are provided: `eta_derived`, obtained
from the stationary vector of the induced birth-death chain, and
`eta_printed`, a circulating closed form kept only for side-by-side
comparison because it does not match the derivation, the numeric solver,
or the bound `eta_bound` (see `discrepancy_rows`).

`refute_consistency` is the structural argument that no DFA computes a
nontrivial {0,1}-valued functional of theta in the limit: after
minimization, every recurrent class of the induced chain either pins the
acceptance limit (homogeneous class) or keeps it strictly inside (0,1)
(heterogeneous class). Either way some tested theta has positive error,
and the certificate records it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .automata import Dfa, build_majority_dfa, minimize
from .markov import decompose, induce_chain, limiting_acceptance
from .processes import Bernoulli

ThetaLike = Union[float, Fraction]

HOMOGENEOUS_ACCEPTING = "homogeneous-accepting"
HOMOGENEOUS_REJECTING = "homogeneous-rejecting"
HETEROGENEOUS = "heterogeneous"


def _check_open_unit(theta) -> None:
    if not 0 < theta < 1:
        raise ValueError(f"parameter must lie in (0, 1), got {theta}")


@dataclass(frozen=True)
class Threshold:
    """T(theta) = 1 iff theta > a, with the threshold held exactly."""

    a: Fraction

    def __post_init__(self):
        if isinstance(self.a, float):
            raise TypeError("threshold must be an exact rational, not a float")
        object.__setattr__(self, "a", Fraction(self.a))
        if not 0 < self.a < 1:
            raise ValueError(f"threshold must lie in (0, 1), got {self.a}")

    def label(self, theta: ThetaLike) -> int:
        # Fraction/float comparison is exact in Python; no epsilon games.
        return int(theta > self.a)


@dataclass(frozen=True)
class Table:
    """Finite lookup functional: explicit {0,1} labels on a finite parameter set.

    Entries are (process parameter, label) pairs. Parameters compare by
    float value, so 0.3 given on the command line matches 0.3 given
    programmatically.
    """

    entries: tuple[tuple[float, int], ...]

    def __post_init__(self):
        norm = []
        seen = set()
        for theta, bit in self.entries:
            if bit not in (0, 1):
                raise ValueError(f"label must be 0 or 1, got {bit}")
            key = float(theta)
            if key in seen:
                raise ValueError(f"duplicate table entry for {key}")
            seen.add(key)
            norm.append((key, int(bit)))
        object.__setattr__(self, "entries", tuple(norm))

    @property
    def is_nontrivial(self) -> bool:
        labels = {bit for _, bit in self.entries}
        return labels == {0, 1}

    def label(self, theta: ThetaLike) -> int:
        key = float(theta)
        for entry_theta, bit in self.entries:
            if entry_theta == key:
                return bit
        raise ValueError(f"functional is undefined at parameter {theta}")


Functional = Union[Threshold, Table]


# --- closed forms for the majority automaton ----------------------------------


def eta_derived(k: int, theta: ThetaLike):
    """Limiting rejection probability of the k-state majority automaton.

    The induced chain is a birth-death chain with stationary weights
    proportional to r^i, r = theta/(1-theta); the rejecting states are
    the bottom ceil(k/2). Hence (r^ceil(k/2) - 1)/(r^k - 1), read as
    ceil(k/2)/k at the removable singularity theta = 1/2. Exact when
    theta is a Fraction, float otherwise.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    _check_open_unit(theta)
    m = (k + 1) // 2
    if theta == Fraction(1, 2):
        return Fraction(m, k) if isinstance(theta, Fraction) else m / k
    if isinstance(theta, Fraction):
        r = theta / (1 - theta)
        return (r**m - 1) / (r**k - 1)
    r = theta / (1.0 - theta)
    return (r**m - 1.0) / (r**k - 1.0)


def eta_printed(k: int, theta: ThetaLike):
    """Literal evaluation of the circulating closed form for eta.

    With s = 1/theta - 1: (s - s^(floor(k/2)+1)) / (s - s^(k+1)). This
    evaluates the stationary mass of the top floor(k/2) states, i.e. the
    acceptance side, so it disagrees with eta_derived and the solver;
    kept callable so reports can show the mismatch (eta_printed(4, 3/4)
    = 0.9 against derived/numeric 0.1).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    _check_open_unit(theta)
    if theta == Fraction(1, 2):
        raise ValueError("the printed form is 0/0 at theta = 1/2")
    if isinstance(theta, Fraction):
        s = 1 / theta - 1
        return (s - s ** (k // 2 + 1)) / (s - s ** (k + 1))
    s = 1.0 / theta - 1.0
    return (s - s ** (k // 2 + 1)) / (s - s ** (k + 1))


def eta_swapped_candidate(k: int, theta: ThetaLike):
    """The printed form with the ratio inverted: s replaced by theta/(1-theta).

    One of the two candidate repairs evaluated in the discrepancy
    report. Agrees with eta_derived for even k, misses the middle state
    for odd k.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    _check_open_unit(theta)
    if theta == Fraction(1, 2):
        raise ValueError("the swapped form is 0/0 at theta = 1/2")
    if isinstance(theta, Fraction):
        r = theta / (1 - theta)
        return (r - r ** (k // 2 + 1)) / (r - r ** (k + 1))
    r = theta / (1.0 - theta)
    return (r - r ** (k // 2 + 1)) / (r - r ** (k + 1))


def eta_complement_candidate(k: int, theta: ThetaLike):
    """1 minus the printed form: the other candidate repair.

    Complementing turns the printed acceptance-side mass into the
    rejection-side mass; empirically this matches eta_derived for every
    k and theta on the scan grid.
    """
    return 1 - eta_printed(k, theta)


def eta_bound(k: int, theta: ThetaLike):
    """Upper bound (1/2)(2 - 2 theta)^(k/2) on eta, for even k, theta in [1/2, 1)."""
    if k < 1 or k % 2 != 0:
        raise ValueError(f"bound applies to even k only, got {k}")
    if not Fraction(1, 2) <= theta < 1:
        raise ValueError(f"bound applies to theta in [1/2, 1), got {theta}")
    if isinstance(theta, Fraction):
        return Fraction(1, 2) * (2 - 2 * theta) ** (k // 2)
    return 0.5 * (2.0 - 2.0 * theta) ** (k // 2)


def numeric_eta(k: int, theta: ThetaLike) -> float:
    """Limiting rejection probability via the chain solver (independent path)."""
    dfa = build_majority_dfa(k)
    return 1.0 - limiting_acceptance(dfa, Bernoulli(float(theta))).value


def maj_agreement_bound(theta: ThetaLike, n: int) -> float:
    """Bound exp(-2 n (theta - 1/2)^2) on the majority vote missing its limit label."""
    if theta == Fraction(1, 2):
        raise ValueError("the bound is vacuous at theta = 1/2")
    if n < 1:
        raise ValueError("n must be >= 1")
    d = float(theta) - 0.5
    return math.exp(-2.0 * n * d * d)


@dataclass(frozen=True)
class EtaReport:
    """Side-by-side eta values for one (k, theta) cell.

    printed is None at theta = 1/2 (that form is 0/0 there); bound is
    None outside even k with theta in [1/2, 1).
    """

    k: int
    theta: float
    derived: float
    printed: Optional[float]
    numeric: float
    bound: Optional[float]


def eta_report(k: int, theta: ThetaLike) -> EtaReport:
    derived = float(eta_derived(k, theta))
    printed = None if theta == Fraction(1, 2) else float(eta_printed(k, theta))
    bound = None
    if k % 2 == 0 and Fraction(1, 2) <= theta < 1:
        bound = float(eta_bound(k, theta))
    return EtaReport(
        k=k,
        theta=float(theta),
        derived=derived,
        printed=printed,
        numeric=numeric_eta(k, theta),
        bound=bound,
    )


@dataclass(frozen=True)
class DiscrepancyRow:
    k: int
    theta: float
    derived: float
    printed: float
    complement_candidate: float
    swapped_candidate: float
    numeric: float
    printed_matches: bool
    complement_matches: bool
    swapped_matches: bool


def discrepancy_rows(
    ks: Sequence[int] = tuple(range(1, 13)),
    thetas: Sequence[float] = tuple(i / 20 for i in range(1, 20) if i != 10),
    tol: float = 1e-10,
) -> list[DiscrepancyRow]:
    """Grid scan comparing the printed eta form and its candidate repairs.

    Each row records which of {printed, 1-printed, ratio-swapped}
    matches the numeric solver within tol. theta = 1/2 is excluded (the
    printed form is undefined there).
    """
    rows = []
    for k in ks:
        for theta in thetas:
            if theta == 0.5:
                continue
            numeric = numeric_eta(k, theta)
            printed = float(eta_printed(k, theta))
            complement = float(eta_complement_candidate(k, theta))
            swapped = float(eta_swapped_candidate(k, theta))
            rows.append(
                DiscrepancyRow(
                    k=k,
                    theta=theta,
                    derived=float(eta_derived(k, theta)),
                    printed=printed,
                    complement_candidate=complement,
                    swapped_candidate=swapped,
                    numeric=numeric,
                    printed_matches=abs(printed - numeric) <= tol,
                    complement_matches=abs(complement - numeric) <= tol,
                    swapped_matches=abs(swapped - numeric) <= tol,
                )
            )
    return rows


def format_discrepancy(rows: Sequence[DiscrepancyRow]) -> str:
    """Human-readable discrepancy table plus per-candidate match counts."""
    out = ["  k  theta    derived    printed  1-printed    swapped    numeric"]
    for r in rows:
        out.append(
            f"{r.k:3d}  {r.theta:5.2f}  {r.derived:9.6f}  {r.printed:9.6f}"
            f"  {r.complement_candidate:9.6f}  {r.swapped_candidate:9.6f}"
            f"  {r.numeric:9.6f}"
        )
    total = len(rows)
    counts = (
        sum(r.printed_matches for r in rows),
        sum(r.complement_matches for r in rows),
        sum(r.swapped_matches for r in rows),
    )
    out.append(
        f"matches/{total}: printed={counts[0]}"
        f" complement={counts[1]} ratio-swapped={counts[2]}"
    )
    return "\n".join(out) + "\n"


# --- limiting error and the consistency refuter --------------------------------


def error_rate(dfa: Dfa, functional: Threshold, theta: ThetaLike) -> float:
    """Limiting probability that the DFA's verdict differs from T(theta).

    At theta equal to the threshold itself the target label is 0 by the
    strict inequality, but the value is boundary-sensitive; a warning is
    attached so callers do not over-read it.
    """
    _check_open_unit(theta)
    if not isinstance(functional, Threshold):
        raise TypeError("error_rate is defined for Threshold functionals")
    if theta == functional.a:
        warnings.warn(
            f"theta equals the threshold {functional.a}; the limiting error "
            "there tends to 1/2 as the automaton grows",
            stacklevel=2,
        )
    acc = limiting_acceptance(dfa, Bernoulli(float(theta))).value
    return acc if functional.label(theta) == 0 else 1.0 - acc


@dataclass(frozen=True)
class ThetaError:
    theta: float
    acceptance_limit: float
    required: int
    error: float


@dataclass(frozen=True)
class RefutationCertificate:
    """Structural evidence that a DFA cannot track a {0,1} functional.

    class_members/class_labels describe every recurrent class of the
    minimized automaton's induced chain (the structure is the same for
    every parameter in (0,1), since all edges carry positive
    probability). epsilon_star is the worst-case limiting error over the
    tested parameters; it is strictly positive whenever the functional
    takes both labels on them.
    """

    dfa: Dfa
    class_members: tuple[tuple[int, ...], ...]
    class_labels: tuple[str, ...]
    per_theta: tuple[ThetaError, ...]
    epsilon_star: float
    clause: str
    explanation: str


def refute_consistency(
    dfa: Dfa, functional: Functional, thetas: Sequence[ThetaLike]
) -> RefutationCertificate:
    """Certificate that `dfa` fails to decide `functional` on `thetas` in the limit.

    Raises ValueError when the functional is constant on the tested set
    (nothing to refute) or a parameter leaves (0,1).
    """
    values = sorted(thetas, key=float)
    if not values:
        raise ValueError("at least one parameter value is required")
    for theta in values:
        _check_open_unit(theta)
    labels = [functional.label(theta) for theta in values]
    if len(set(labels)) < 2:
        raise ValueError(
            "functional is constant on the tested parameter values; "
            "refutation would be vacuous"
        )

    small = minimize(dfa)
    # Recurrent structure is parameter-independent on (0,1): every DFA edge
    # has positive probability, so any probe value gives the same classes.
    chain = induce_chain(small, Bernoulli(float(values[0])))
    structure = decompose(chain)
    class_members = []
    class_labels = []
    for ci in structure.recurrent_ids:
        states = tuple(
            sorted({chain.labels[v][0] for v in structure.components[ci]})
        )
        flags = [s in small.accepting for s in states]
        if all(flags):
            label = HOMOGENEOUS_ACCEPTING
        elif not any(flags):
            label = HOMOGENEOUS_REJECTING
        else:
            label = HETEROGENEOUS
        class_members.append(states)
        class_labels.append(label)

    rows = []
    for theta, required in zip(values, labels):
        acc = limiting_acceptance(small, Bernoulli(float(theta))).value
        rows.append(
            ThetaError(
                theta=float(theta),
                acceptance_limit=acc,
                required=required,
                error=abs(acc - required),
            )
        )
    worst = max(rows, key=lambda r: r.error)
    epsilon_star = worst.error

    homogeneous = [
        (members, label)
        for members, label in zip(class_members, class_labels)
        if label != HETEROGENEOUS
    ]
    if homogeneous:
        clause = "a"
        members, label = homogeneous[0]
        explanation = (
            f"clause (a): recurrent class {members} is {label}; the chain is "
            "trapped there with positive probability at every parameter in "
            "(0,1), which pins the acceptance limit. At theta="
            f"{worst.theta:g} the limit is {worst.acceptance_limit:.6g} "
            f"but the required label is {worst.required}, error "
            f"{worst.error:.6g}."
        )
    else:
        clause = "b"
        explanation = (
            "clause (b): every recurrent class mixes accepting and rejecting "
            "states, so the acceptance limit lies strictly inside (0,1) at "
            "every parameter in (0,1) while the required label is 0 or 1. "
            f"At theta={worst.theta:g} the limit is "
            f"{worst.acceptance_limit:.6g} but the required label is "
            f"{worst.required}, error {worst.error:.6g}."
        )

    return RefutationCertificate(
        dfa=small,
        class_members=tuple(class_members),
        class_labels=tuple(class_labels),
        per_theta=tuple(rows),
        epsilon_star=epsilon_star,
        clause=clause,
        explanation=explanation,
    )


def format_certificate(cert: RefutationCertificate) -> str:
    out = [f"minimized automaton: {cert.dfa.state_count} states"]
    for members, label in zip(cert.class_members, cert.class_labels):
        out.append(f"recurrent class {list(members)}: {label}")
    out.append("theta  acceptance_limit  required  error")
    for row in cert.per_theta:
        out.append(
            f"{row.theta:<6g} {row.acceptance_limit:<17.10g} "
            f"{row.required:<9d} {row.error:.10g}"
        )
    out.append(f"epsilon_star = {cert.epsilon_star:.10g}")
    out.append(cert.explanation)
    return "\n".join(out) + "\n"
