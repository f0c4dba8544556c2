"""Binary-alphabet DFAs: representation, execution, construction, minimization.

States are 0-indexed. A DFA is immutable after construction; every
operation returns a new value. The threshold-majority family built by
:func:`build_majority_dfa` uses the conventional 1-indexed description in
its docstring but stores 0-indexed states.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

BitString = Sequence[int]


class DfaFormatError(ValueError):
    """Raised when DFA text input is malformed."""


def bits(s: str) -> tuple[int, ...]:
    """Parse a string like '0110' into a bit tuple."""
    if any(c not in "01" for c in s):
        raise ValueError(f"not a bit string: {s!r}")
    return tuple(int(c) for c in s)


@dataclass(frozen=True)
class Dfa:
    """A complete DFA over the alphabet {0, 1}.

    ``delta[q]`` is the pair of successor states ``(on 0, on 1)``.
    """

    state_count: int
    start: int
    accepting: frozenset[int] = field(default_factory=frozenset)
    delta: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        n = self.state_count
        if n < 1:
            raise ValueError("state_count must be >= 1")
        if not 0 <= self.start < n:
            raise ValueError(f"start state {self.start} out of range")
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(
            self, "delta", tuple((int(a), int(b)) for a, b in self.delta)
        )
        if not all(0 <= q < n for q in self.accepting):
            raise ValueError("accepting set contains invalid state")
        if len(self.delta) != n:
            raise ValueError(f"delta must have one row per state, got {len(self.delta)}")
        for q, row in enumerate(self.delta):
            if len(row) != 2 or not all(0 <= t < n for t in row):
                raise ValueError(f"invalid transition row for state {q}: {row}")

    def step(self, state: int, bit: int) -> int:
        return self.delta[state][bit]

    def run(self, input_bits: BitString) -> tuple[int, int]:
        """Return (final state, accepted bit) after reading the input."""
        q = self.start
        for b in input_bits:
            q = self.delta[q][b]
        return q, int(q in self.accepting)

    def accepts(self, input_bits: BitString) -> bool:
        return self.run(input_bits)[1] == 1

    def reachable_states(self) -> list[int]:
        """States reachable from start, in BFS order (0-edge before 1-edge)."""
        seen = {self.start}
        order = [self.start]
        queue = deque([self.start])
        while queue:
            q = queue.popleft()
            for t in self.delta[q]:
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        return order


def run(dfa: Dfa, input_bits: BitString) -> tuple[int, int]:
    """Left-fold the transition function over the input from the start state."""
    return dfa.run(input_bits)


def _as_fraction(a) -> Fraction:
    if isinstance(a, float):
        raise TypeError("threshold must be an exact rational, not a float")
    return Fraction(a)


def majority_fn(input_bits: BitString, threshold=Fraction(1, 2)) -> int:
    """Threshold-majority: 1 iff the fraction of ones strictly exceeds `threshold`.

    The comparison is done by integer cross-multiplication, so ties are
    bit-exact: a string with exactly the threshold fraction of ones maps
    to 0.
    """
    a = _as_fraction(threshold)
    if not 0 < a < 1:
        raise ValueError(f"threshold must lie in (0, 1), got {a}")
    n = len(input_bits)
    try:
        ones = int(input_bits.sum())  # fast path for numpy arrays
    except AttributeError:
        ones = sum(int(b) for b in input_bits)
    return int(ones * a.denominator > a.numerator * n)


def build_majority_dfa(k: int) -> Dfa:
    """The k-state unbiased-majority automaton.

    In 1-indexed terms: states 1..k, start floor((k+1)/2), accepting
    ceil(k/2)+1..k, with 0 moving down and 1 moving up, saturating at
    both ends. Agrees with majority_fn at threshold 1/2 on every string
    of length < k. Stored 0-indexed.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    start = (k + 1) // 2 - 1
    accepting = frozenset(range((k + 1) // 2, k))
    delta = tuple((max(i - 1, 0), min(i + 1, k - 1)) for i in range(k))
    return Dfa(state_count=k, start=start, accepting=accepting, delta=delta)


def example_dominance_dfa() -> Dfa:
    """Two states; every 1 leads to the accepting state, every 0 back out.

    Tracks the last symbol read, so it separates eventually-all-ones
    processes from eventually-all-zeros ones.
    """
    return Dfa(state_count=2, start=0, accepting=frozenset({1}),
               delta=((0, 1), (0, 1)))


def example_degeneracy_dfa() -> Dfa:
    """Four states; accepts once both symbols have been seen.

    State 0 = nothing read, 1 = only zeros so far, 2 = only ones so far,
    3 = both symbols seen (absorbing, accepting). Separates constant
    processes from ones that emit both symbols.
    """
    return Dfa(
        state_count=4,
        start=0,
        accepting=frozenset({3}),
        delta=((1, 2), (1, 3), (3, 2), (3, 3)),
    )


def _canonical_renumber(state_count: int, start: int, accepting: set[int],
                        delta0: Sequence[int], delta1: Sequence[int]) -> Dfa:
    """Renumber states in BFS order from start, following 0 before 1.

    All states must be reachable from start.
    """
    order: dict[int, int] = {start: 0}
    queue = deque([start])
    while queue:
        q = queue.popleft()
        for t in (delta0[q], delta1[q]):
            if t not in order:
                order[t] = len(order)
                queue.append(t)
    if len(order) != state_count:
        raise ValueError("canonical renumbering requires all states reachable")
    new_delta = [None] * state_count
    for q, new_q in order.items():
        new_delta[new_q] = (order[delta0[q]], order[delta1[q]])
    return Dfa(
        state_count=state_count,
        start=0,
        accepting=frozenset(order[q] for q in accepting),
        delta=tuple(new_delta),
    )


def minimize(dfa: Dfa) -> Dfa:
    """Language-equivalent DFA with no unreachable and no equivalent states.

    Moore partition refinement on the reachable part, followed by a
    canonical BFS renumbering (0-edge before 1-edge), so equal languages
    yield identical objects.
    """
    reach = dfa.reachable_states()
    index = {q: i for i, q in enumerate(reach)}
    n = len(reach)
    d0 = [index[dfa.delta[q][0]] for q in reach]
    d1 = [index[dfa.delta[q][1]] for q in reach]
    acc = [q in dfa.accepting for q in reach]

    # Moore refinement: split blocks on (block, block after 0, block after 1).
    block = [1 if acc[i] else 0 for i in range(n)]
    while True:
        sigs = {}
        new_block = [0] * n
        for i in range(n):
            sig = (block[i], block[d0[i]], block[d1[i]])
            if sig not in sigs:
                sigs[sig] = len(sigs)
            new_block[i] = sigs[sig]
        if new_block == block:
            break
        block = new_block

    m = max(block) + 1
    rep = [0] * m
    for i in range(n):
        rep[block[i]] = i
    delta0 = [block[d0[rep[b]]] for b in range(m)]
    delta1 = [block[d1[rep[b]]] for b in range(m)]
    accepting = {b for b in range(m) if acc[rep[b]]}
    start = block[index[dfa.start]]
    return _canonical_renumber(m, start, accepting, delta0, delta1)


def isomorphic(d1: Dfa, d2: Dfa) -> bool:
    """Whether a start/acceptance/transition-preserving state bijection exists.

    Decided by parallel BFS from the two starts; DFAs with unreachable
    states are never reported isomorphic (minimize first).
    """
    if d1.state_count != d2.state_count:
        return False
    pairing = {d1.start: d2.start}
    queue = deque([(d1.start, d2.start)])
    while queue:
        q1, q2 = queue.popleft()
        if (q1 in d1.accepting) != (q2 in d2.accepting):
            return False
        for b in (0, 1):
            t1, t2 = d1.delta[q1][b], d2.delta[q2][b]
            if t1 in pairing:
                if pairing[t1] != t2:
                    return False
            else:
                if t2 in set(pairing.values()):
                    return False
                pairing[t1] = t2
                queue.append((t1, t2))
    return len(pairing) == d1.state_count


def agreement_check(dfa: Dfa, oracle: Callable[[BitString], int],
                    max_len: int) -> Optional[tuple[int, ...]]:
    """First disagreement between `dfa` and `oracle` on {0,1}^{<=max_len}.

    Strings are scanned in shortlex order (by length, then 0 before 1),
    so the returned witness is the lexicographically-least shortest one.
    Returns None if they agree everywhere up to max_len. Cost is
    exponential in max_len; intended for small bounds.
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    # Track DFA states level by level so each string costs O(1) to extend.
    level: list[tuple[tuple[int, ...], int]] = [((), dfa.start)]
    for length in range(max_len + 1):
        for word, state in level:
            if int(state in dfa.accepting) != int(oracle(word)):
                return word
        if length < max_len:
            level = [
                (word + (b,), dfa.delta[state][b])
                for word, state in level
                for b in (0, 1)
            ]
    return None


def languages_equal(d1: Dfa, d2: Dfa) -> bool:
    """Exact language equality, by reachability in the product automaton."""
    seen = {(d1.start, d2.start)}
    queue = deque(seen)
    while queue:
        q1, q2 = queue.popleft()
        if (q1 in d1.accepting) != (q2 in d2.accepting):
            return False
        for b in (0, 1):
            pair = (d1.delta[q1][b], d2.delta[q2][b])
            if pair not in seen:
                seen.add(pair)
                queue.append(pair)
    return True


# --- text interchange format -------------------------------------------------
#
# One directive per line, '#' starts a comment, fields whitespace-separated:
#   states <k>
#   start <q>
#   accept [<q1> <q2> ...]
#   trans <q> <bit> <q'>     (exactly 2k lines, one per (state, bit) pair)


def dfa_to_text(dfa: Dfa) -> str:
    lines = [f"states {dfa.state_count}", f"start {dfa.start}"]
    lines.append(" ".join(["accept"] + [str(q) for q in sorted(dfa.accepting)]).rstrip())
    for q in range(dfa.state_count):
        for b in (0, 1):
            lines.append(f"trans {q} {b} {dfa.delta[q][b]}")
    return "\n".join(lines) + "\n"


def dfa_from_text(text: str) -> Dfa:
    state_count = None
    start = None
    accepting: Optional[list[int]] = None
    trans: dict[tuple[int, int], int] = {}

    def fail(lineno: int, msg: str):
        raise DfaFormatError(f"line {lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        key, args = fields[0], fields[1:]
        try:
            if key == "states":
                if state_count is not None:
                    fail(lineno, "duplicate states directive")
                (state_count,) = (int(a) for a in args)
            elif key == "start":
                if start is not None:
                    fail(lineno, "duplicate start directive")
                (start,) = (int(a) for a in args)
            elif key == "accept":
                if accepting is not None:
                    fail(lineno, "duplicate accept directive")
                accepting = [int(a) for a in args]
            elif key == "trans":
                q, b, t = (int(a) for a in args)
                if b not in (0, 1):
                    fail(lineno, f"bit must be 0 or 1, got {b}")
                if (q, b) in trans:
                    fail(lineno, f"duplicate transition for state {q} on {b}")
                trans[(q, b)] = t
            else:
                fail(lineno, f"unknown directive {key!r}")
        except (ValueError, TypeError) as exc:
            if isinstance(exc, DfaFormatError):
                raise
            fail(lineno, f"malformed directive: {line!r}")

    if state_count is None:
        raise DfaFormatError("missing states directive")
    if start is None:
        raise DfaFormatError("missing start directive")
    if accepting is None:
        raise DfaFormatError("missing accept directive")
    missing = [(q, b) for q in range(state_count) for b in (0, 1)
               if (q, b) not in trans]
    if missing:
        raise DfaFormatError(f"missing transitions: {missing[:4]}...")
    extra = [qb for qb in trans if not (0 <= qb[0] < state_count)]
    if extra:
        raise DfaFormatError(f"transition from invalid state: {extra[:4]}")
    delta = tuple(
        (trans[(q, 0)], trans[(q, 1)]) for q in range(state_count)
    )
    try:
        return Dfa(state_count=state_count, start=start,
                   accepting=frozenset(accepting), delta=delta)
    except ValueError as exc:
        raise DfaFormatError(str(exc)) from exc


def all_transition_tables(state_count: int) -> Iterable[tuple[tuple[int, int], ...]]:
    """Canonical transition tables of initially-connected DFAs, one per
    isomorphism class of the underlying transition graph (start 0, states
    numbered by first reference, 0-edge before 1-edge).

    Enumerates slot by slot: a slot may point at any already-introduced
    state or introduce the next fresh one. Exponential; meant for
    exhaustive searches over tiny sizes.
    """

    n = state_count

    def extend(slots: list[int], introduced: int):
        pos = len(slots)
        if pos == 2 * n:
            if introduced == n:
                yield tuple(slots)
            return
        # A row is only enumerable once its state has been referenced from an
        # earlier row; otherwise that state could never be reached from 0.
        if pos % 2 == 0 and pos // 2 >= introduced:
            return
        # States must be introduced in order for canonical numbering; the
        # remaining slots must still be able to introduce all missing states.
        remaining = 2 * n - pos - 1
        limit = min(introduced, n - 1)
        for t in range(limit + 1):
            new_intro = introduced + (1 if t == introduced else 0)
            if n - new_intro <= remaining:
                slots.append(t)
                yield from extend(slots, new_intro)
                slots.pop()

    for table in extend([], 1):
        yield tuple((table[2 * q], table[2 * q + 1]) for q in range(n))


def all_dfas(state_count: int) -> Iterable[Dfa]:
    """All initially-connected DFAs with `state_count` states, one canonical
    representative per isomorphism class, acceptance ranging over all subsets.
    """
    n = state_count
    for delta in all_transition_tables(n):
        for acc_bits in range(2 ** n):
            accepting = frozenset(q for q in range(n) if acc_bits >> q & 1)
            yield Dfa(state_count=n, start=0, accepting=accepting, delta=delta)
