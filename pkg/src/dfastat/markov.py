"""The Markov chain a random process induces on DFA states, and its limits.

Feeding a Bernoulli(theta) process into a DFA drives a chain on the DFA's
reachable states with P(q -> delta(q,1)) = theta and
P(q -> delta(q,0)) = 1 - theta. A stationary binary Markov source drives
a chain on (DFA state, last emitted bit) pairs. The long-run acceptance
probability is the absorption-weighted stationary acceptance mass of the
recurrent classes; for periodic classes the Cesaro limit is reported and
flagged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .automata import Dfa
from .processes import Bernoulli, Degenerate, MarkovBinary, ProcessSpec

_ROW_TOL = 1e-12


class UnsupportedModelError(ValueError):
    """The process has no finite-state joint chain with the DFA."""


@dataclass(frozen=True)
class InducedChain:
    """Finite chain on (reachable DFA state) x (process memory) pairs.

    `labels[i]` names chain state i: (dfa_state,) for memoryless sources,
    (dfa_state, last_bit) for the binary Markov source. `accepting[i]`
    is inherited from the DFA state component.
    """

    matrix: np.ndarray
    start: np.ndarray
    accepting: np.ndarray
    labels: tuple[tuple[int, ...], ...]

    @property
    def state_count(self) -> int:
        return self.matrix.shape[0]

    def __post_init__(self):
        p = self.matrix
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError("matrix must be square")
        if np.any(p < 0) or np.max(np.abs(p.sum(axis=1) - 1.0)) > _ROW_TOL:
            raise ValueError("matrix must be row-stochastic")
        if abs(self.start.sum() - 1.0) > _ROW_TOL or np.any(self.start < 0):
            raise ValueError("start must be a probability distribution")


@dataclass(frozen=True)
class ChainStructure:
    """Transient/recurrent decomposition of an induced chain.

    Components are strongly connected components in a deterministic
    order; a component is recurrent iff it is closed (no positive-
    probability edge leaves it). `periods` and `absorption` are keyed by
    component index and defined for recurrent components only;
    absorption is measured from the chain's start distribution.
    """

    components: tuple[tuple[int, ...], ...]
    recurrent: tuple[bool, ...]
    periods: dict[int, int]
    absorption: dict[int, float]

    @property
    def recurrent_ids(self) -> list[int]:
        return [i for i, r in enumerate(self.recurrent) if r]


@dataclass(frozen=True)
class ClassAnalysis:
    """Stationary distribution of one recurrent class."""

    class_id: int
    states: tuple[int, ...]
    stationary: np.ndarray
    acceptance_mass: float


@dataclass(frozen=True)
class AcceptanceLimit:
    """Long-run acceptance probability.

    When a reachable recurrent class is periodic with acceptance mass
    varying across its cyclic classes, the plain limit does not exist;
    `value` is then the Cesaro limit and `is_true_limit` is False.
    """

    value: float
    is_true_limit: bool


def induce_chain(dfa: Dfa, spec: ProcessSpec) -> InducedChain:
    """Build the joint chain of the DFA reading the process.

    The DFA is reachability-pruned first, so chain states correspond to
    states the automaton can actually occupy. Dominant processes are not
    Markov jointly with the DFA on any finite state space; simulate
    those instead.
    """
    reach = dfa.reachable_states()
    index = {q: i for i, q in enumerate(reach)}
    m = len(reach)

    if isinstance(spec, (Bernoulli, Degenerate)):
        theta = float(spec.theta) if isinstance(spec, Bernoulli) else float(spec.bit)
        p = np.zeros((m, m))
        for q in reach:
            i = index[q]
            p[i, index[dfa.delta[q][0]]] += 1.0 - theta
            p[i, index[dfa.delta[q][1]]] += theta
        start = np.zeros(m)
        start[index[dfa.start]] = 1.0
        accepting = np.array([q in dfa.accepting for q in reach])
        labels = tuple((q,) for q in reach)
        return InducedChain(p, start, accepting, labels)

    if isinstance(spec, MarkovBinary):
        # Chain state (q, b) = automaton in q, last bit read was b. The
        # virtual bit before the first real one follows the stationary law,
        # which matches a stationary source started at X_1 ~ pi.
        pi1 = spec.stationary_one
        emit = ((1.0 - spec.p01, spec.p01), (spec.p10, 1.0 - spec.p10))
        n = 2 * m
        p = np.zeros((n, n))
        for q in reach:
            for b in (0, 1):
                i = 2 * index[q] + b
                for b2 in (0, 1):
                    j = 2 * index[dfa.delta[q][b2]] + b2
                    p[i, j] += emit[b][b2]
        start = np.zeros(n)
        start[2 * index[dfa.start] + 0] = 1.0 - pi1
        start[2 * index[dfa.start] + 1] = pi1
        accepting = np.array([reach[i // 2] in dfa.accepting for i in range(n)])
        labels = tuple((reach[i // 2], i % 2) for i in range(n))
        return InducedChain(p, start, accepting, labels)

    raise UnsupportedModelError(
        f"{type(spec).__name__} processes have no finite induced chain; "
        "use the simulation module (run_trials) instead"
    )


def _tarjan_scc(adj: list[list[int]]) -> list[list[int]]:
    """Strongly connected components, iterative Tarjan, deterministic order."""
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, ei = work[-1]
            if ei == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for k in range(ei, len(adj[v])):
                w = adj[v][k]
                if index[w] == -1:
                    work[-1] = (v, k + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    comps.sort(key=min)
    return comps


def _class_period(members: list[int], adj: list[list[int]]) -> int:
    """gcd of cycle lengths within one closed SCC."""
    member_set = set(members)
    dist = {members[0]: 0}
    queue = [members[0]]
    period = 0
    while queue:
        v = queue.pop()
        for w in adj[v]:
            if w not in member_set:
                continue
            if w in dist:
                period = math.gcd(period, dist[v] + 1 - dist[w])
            else:
                dist[w] = dist[v] + 1
                queue.append(w)
    return abs(period) if period else 1


def decompose(chain: InducedChain) -> ChainStructure:
    """SCC decomposition with recurrence flags, periods, absorption mass."""
    n = chain.state_count
    adj = [[int(j) for j in np.nonzero(chain.matrix[i] > 0)[0]] for i in range(n)]
    comps = _tarjan_scc(adj)
    comp_of = np.empty(n, dtype=int)
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    recurrent = []
    for ci, comp in enumerate(comps):
        closed = all(comp_of[w] == ci for v in comp for w in adj[v])
        recurrent.append(closed)

    periods = {
        ci: _class_period(list(comp), adj)
        for ci, comp in enumerate(comps)
        if recurrent[ci]
    }

    absorption = _absorption_from_start(chain, comps, recurrent, comp_of)
    return ChainStructure(
        components=tuple(tuple(c) for c in comps),
        recurrent=tuple(recurrent),
        periods=periods,
        absorption=absorption,
    )


def _absorption_from_start(chain, comps, recurrent, comp_of) -> dict[int, float]:
    n = chain.state_count
    rec_ids = [ci for ci, r in enumerate(recurrent) if r]
    transient = [v for v in range(n) if not recurrent[comp_of[v]]]
    start = chain.start
    # single destination: absorption is certain, and the (I - Ptt) solve can
    # be arbitrarily ill-conditioned when the transient part drains slowly
    if len(rec_ids) == 1:
        return {rec_ids[0]: 1.0}
    absorption = {}
    if transient:
        p_tt = chain.matrix[np.ix_(transient, transient)]
        a = np.eye(len(transient)) - p_tt
        b = np.zeros((len(transient), len(rec_ids)))
        for j, ci in enumerate(rec_ids):
            cols = list(comps[ci])
            b[:, j] = chain.matrix[np.ix_(transient, cols)].sum(axis=1)
        try:
            hit = np.linalg.solve(a, b)
        except np.linalg.LinAlgError as exc:
            raise RuntimeError("absorption system is singular") from exc
        for j, ci in enumerate(rec_ids):
            mass = float(start[list(comps[ci])].sum())
            mass += float(start[transient] @ hit[:, j])
            absorption[ci] = min(max(mass, 0.0), 1.0)
        total = sum(absorption.values())
        if total > 0:
            absorption = {ci: m / total for ci, m in absorption.items()}
    else:
        for ci in rec_ids:
            absorption[ci] = float(start[list(comps[ci])].sum())
    return absorption


def stationary(chain: InducedChain, class_id: int,
               structure: Optional[ChainStructure] = None) -> ClassAnalysis:
    """Stationary distribution of a recurrent class, by dense linear solve."""
    structure = structure or decompose(chain)
    if not structure.recurrent[class_id]:
        raise ValueError(f"component {class_id} is transient")
    states = list(structure.components[class_id])
    p = chain.matrix[np.ix_(states, states)]
    k = len(states)
    a = p.T - np.eye(k)
    a[-1, :] = 1.0
    rhs = np.zeros(k)
    rhs[-1] = 1.0
    try:
        pi = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(
            f"stationary solve failed for recurrent class {class_id}"
        ) from exc
    mass = float(pi[chain.accepting[states]].sum())
    return ClassAnalysis(
        class_id=class_id,
        states=tuple(states),
        stationary=pi,
        acceptance_mass=mass,
    )


def limiting_acceptance(dfa: Dfa, spec: ProcessSpec) -> AcceptanceLimit:
    """Long-run probability the DFA is in an accepting state.

    Absorption-weighted acceptance mass over recurrent classes. The
    value is always the Cesaro limit; it is a plain limit unless some
    reachable recurrent class is periodic with acceptance differing
    across its cyclic classes.
    """
    chain = induce_chain(dfa, spec)
    structure = decompose(chain)
    value = 0.0
    is_true_limit = True
    for ci in structure.recurrent_ids:
        weight = structure.absorption[ci]
        if weight <= 0.0:
            continue
        analysis = stationary(chain, ci, structure)
        value += weight * analysis.acceptance_mass
        p = structure.periods[ci]
        if p > 1 and _phase_acceptance_spread(chain, analysis, p) > _ROW_TOL:
            is_true_limit = False
    return AcceptanceLimit(value=float(value), is_true_limit=is_true_limit)


def _phase_acceptance_spread(chain, analysis: ClassAnalysis, period: int) -> float:
    """Max - min acceptance probability across the cyclic classes."""
    states = analysis.states
    member = {v: i for i, v in enumerate(states)}
    dist = {states[0]: 0}
    queue = [states[0]]
    while queue:
        v = queue.pop()
        for w in np.nonzero(chain.matrix[v] > 0)[0]:
            w = int(w)
            if w in member and w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    phase_acc = np.zeros(period)
    for v in states:
        if chain.accepting[v]:
            phase_acc[dist[v] % period] += analysis.stationary[member[v]]
    phase_acc *= period
    return float(phase_acc.max() - phase_acc.min())


# --- exact-arithmetic path ----------------------------------------------------


def bernoulli_matrix_exact(dfa: Dfa, theta: Fraction) -> list[list[Fraction]]:
    """Chain matrix over the DFA's reachable states, in exact rationals."""
    theta = Fraction(theta)
    reach = dfa.reachable_states()
    index = {q: i for i, q in enumerate(reach)}
    m = len(reach)
    p = [[Fraction(0)] * m for _ in range(m)]
    for q in reach:
        i = index[q]
        p[i][index[dfa.delta[q][0]]] += 1 - theta
        p[i][index[dfa.delta[q][1]]] += theta
    return p


def stationary_exact(p: list[list[Fraction]], states: list[int]) -> list[Fraction]:
    """Solve pi P = pi, sum(pi) = 1 on a closed class, in exact rationals.

    Fraction Gaussian elimination; intended for certifying closed forms
    on small classes, not for production sizes.
    """
    k = len(states)
    # Rows of A are equations sum_i pi_i (P[i][j] - [i==j]) = 0, last row sum=1.
    a = [[p[states[i]][states[j]] - (1 if i == j else 0) for i in range(k)]
         for j in range(k)]
    a[-1] = [Fraction(1)] * k
    rhs = [Fraction(0)] * k
    rhs[-1] = Fraction(1)
    for col in range(k):
        piv = next((r for r in range(col, k) if a[r][col] != 0), None)
        if piv is None:
            raise RuntimeError("exact stationary solve hit a singular system")
        a[col], a[piv] = a[piv], a[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        rhs[col] *= inv
        for r in range(k):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                rhs[r] -= f * rhs[col]
    return rhs
