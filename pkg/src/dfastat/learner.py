"""Learning small DFAs that agree with threshold-majority on short strings.

`learn(a, k)` runs an observation-table learner (membership oracle =
threshold-majority at a, equivalence oracle = comparison over all strings
of length < k) and returns the first hypothesis with no counterexample.
Counterexamples are the lexicographically-least shortest disagreements
and are processed by adding all their prefixes to the access set, with
the usual closedness / consistency repair before each hypothesis, so a
whole run is deterministic and its output is reproducible.

The alternative counterexample treatment (all suffixes into the
experiment set) also terminates with an agreeing machine, but for skewed
thresholds and wide windows it converges to a language with an accepting
sink, whose long-run acceptance under coin flips is constant instead of
threshold-like. Prefix processing keeps the learned machines threshold-
like out of window, which is what downstream acceptance-curve analysis
needs, so it is the shipped policy.

`brute_force_min_agreeing` is the independent minimality oracle: an
exhaustive scan of canonical DFAs by increasing size. Exponential, hence
gated to k <= 4.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .automata import Dfa, all_transition_tables, majority_fn

Word = tuple[int, ...]


class ObservationTable:
    """Classic observation table over access words S and experiments E.

    S is prefix-closed, E is suffix-closed. Counterexample prefixes land
    in S, so two access words may share a row; `repair` then interleaves
    closedness promotion (first unmatched boundary word, scanning S in
    insertion order, 0-edge first) with consistency extension (first
    clashing pair, prepend the bit to the first separating experiment)
    until a hypothesis is well defined. Both scans are deterministic, so
    the whole table evolution is too. Membership answers are cached;
    `queries` counts actual oracle calls.
    """

    def __init__(self, oracle: Callable[[Word], int]):
        self._oracle = oracle
        self.S: list[Word] = [()]
        self.E: list[Word] = [()]
        self._cache: dict[Word, int] = {}
        self.queries = 0

    def member(self, word: Word) -> int:
        if word not in self._cache:
            self._cache[word] = int(self._oracle(word))
            self.queries += 1
        return self._cache[word]

    def row(self, word: Word) -> tuple[int, ...]:
        return tuple(self.member(word + e) for e in self.E)

    def _find_unclosed(self) -> Optional[Word]:
        rows = {self.row(s) for s in self.S}
        for s in self.S:
            for b in (0, 1):
                if self.row(s + (b,)) not in rows:
                    return s + (b,)
        return None

    def _find_inconsistency(self) -> Optional[Word]:
        """New experiment separating two equal-row access words, if any."""
        for i in range(len(self.S)):
            for j in range(i + 1, len(self.S)):
                if self.row(self.S[i]) != self.row(self.S[j]):
                    continue
                for b in (0, 1):
                    ri = self.row(self.S[i] + (b,))
                    rj = self.row(self.S[j] + (b,))
                    if ri != rj:
                        m = next(m for m in range(len(self.E))
                                 if ri[m] != rj[m])
                        return (b,) + self.E[m]
        return None

    def repair(self) -> None:
        """Alternate closing and consistency fixes to a stable table."""
        while True:
            unclosed = self._find_unclosed()
            if unclosed is not None:
                self.S.append(unclosed)
                continue
            experiment = self._find_inconsistency()
            if experiment is None:
                return
            # b + suffix-closed E stays suffix-closed; never a duplicate,
            # or E[m] would not have separated the successor rows.
            self.E.append(experiment)

    def add_prefixes(self, word: Word) -> None:
        """Add every prefix of a counterexample to S (kept prefix-closed)."""
        for i in range(1, len(word) + 1):
            p = word[:i]
            if p not in self.S:
                self.S.append(p)

    def hypothesis(self) -> Dfa:
        """The automaton over distinct access rows; requires a repaired table."""
        index: dict[tuple[int, ...], int] = {}
        reps: list[Word] = []
        for s in self.S:
            r = self.row(s)
            if r not in index:
                index[r] = len(index)
                reps.append(s)
        delta = tuple(
            (index[self.row(s + (0,))], index[self.row(s + (1,))])
            for s in reps
        )
        # E[0] is the empty experiment, so column 0 is the membership bit.
        accepting = frozenset(i for i, s in enumerate(reps)
                              if self.row(s)[0] == 1)
        return Dfa(state_count=len(reps), start=index[self.row(())],
                   accepting=accepting, delta=delta)


def _lex_least_disagreement(hyp: Dfa, a: Fraction, k: int) -> Optional[Word]:
    """Lex-least shortest w, |w| < k, with hyp(w) != threshold-majority(w).

    The target function depends only on (length, ones count), so the
    search walks hypothesis-state x ones-count pairs level by level
    instead of individual strings; the answer is identical to scanning
    {0,1}^{<k} in shortlex order, at polynomial cost.
    """
    num, den = a.numerator, a.denominator

    def disagrees(state: int, ones: int, length: int) -> bool:
        return int(state in hyp.accepting) != int(ones * den > num * length)

    layer = {(hyp.start, 0)}
    layers = [layer]
    target = None
    for length in range(k):
        if any(disagrees(q, ones, length) for q, ones in layers[length]):
            target = length
            break
        if length + 1 < k:
            nxt = set()
            for q, ones in layers[length]:
                nxt.add((hyp.delta[q][0], ones))
                nxt.add((hyp.delta[q][1], ones + 1))
            layers.append(nxt)
    if target is None:
        return None

    # goods[t] = pairs at depth t from which some length-(target-t) extension
    # ends in a disagreement. Built backward; then a greedy 0-first walk
    # through goods yields the lex-least witness of the minimal length.
    good = {
        (q, ones)
        for q in range(hyp.state_count)
        for ones in range(target + 1)
        if disagrees(q, ones, target)
    }
    goods = [good]
    for t in range(target - 1, -1, -1):
        prev = {
            (q, ones)
            for q in range(hyp.state_count)
            for ones in range(t + 1)
            if (hyp.delta[q][0], ones) in goods[-1]
            or (hyp.delta[q][1], ones + 1) in goods[-1]
        }
        goods.append(prev)
    goods.reverse()

    word = []
    q, ones = hyp.start, 0
    for t in range(target):
        if (hyp.delta[q][0], ones) in goods[t + 1]:
            word.append(0)
            q = hyp.delta[q][0]
        else:
            word.append(1)
            q = hyp.delta[q][1]
            ones += 1
    return tuple(word)


@dataclass(frozen=True)
class LearnResult:
    """Outcome of one learning run.

    The dfa agrees with the target on every string of length < k (that
    is what the equivalence oracle enforced); it is minimal for its own
    language and reachable throughout, but global minimality among all
    agreeing automata is only confirmed separately for tiny k.
    """

    dfa: Dfa
    equivalence_queries: int
    membership_queries: int
    counterexamples: tuple[Word, ...]


def learn(a, k: int) -> LearnResult:
    """Learn a DFA agreeing with threshold-majority at `a` on {0,1}^{<k}."""
    if isinstance(a, float):
        raise TypeError("threshold must be an exact rational, not a float")
    a = Fraction(a)
    if not 0 < a < 1:
        raise ValueError(f"threshold must lie in (0, 1), got {a}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")

    if k == 1:
        # Only the empty string is constrained, and it is always rejected;
        # closing the table against the total oracle would add a second
        # state the constraint set cannot justify.
        return LearnResult(
            dfa=Dfa(state_count=1, start=0, accepting=frozenset(),
                    delta=((0, 0),)),
            equivalence_queries=1,
            membership_queries=1,
            counterexamples=(),
        )

    table = ObservationTable(lambda w: majority_fn(w, a))
    counterexamples: list[Word] = []
    eq_queries = 0
    while True:
        table.repair()
        hyp = table.hypothesis()
        eq_queries += 1
        cex = _lex_least_disagreement(hyp, a, k)
        if cex is None:
            return LearnResult(
                dfa=hyp,
                equivalence_queries=eq_queries,
                membership_queries=table.queries,
                counterexamples=tuple(counterexamples),
            )
        counterexamples.append(cex)
        table.add_prefixes(cex)


_BRUTE_FORCE_MAX_K = 4
_BRUTE_FORCE_MAX_STATES = 8


def _labeled_words(a: Fraction, k: int) -> list[tuple[Word, int]]:
    words = []
    for length in range(k):
        for w in itertools.product((0, 1), repeat=length):
            words.append((w, majority_fn(w, a)))
    return words


def _consistent_acceptance(delta, words) -> Optional[list[Optional[int]]]:
    """Per-state acceptance forced by the labeled words, or None on conflict.

    States no word ends in stay None: their acceptance is unconstrained.
    """
    assign: list[Optional[int]] = [None] * len(delta)
    for word, label in words:
        q = 0
        for b in word:
            q = delta[q][b]
        if assign[q] is None:
            assign[q] = label
        elif assign[q] != label:
            return None
    return assign


def _check_brute_force_args(a, k: int) -> Fraction:
    if isinstance(a, float):
        raise TypeError("threshold must be an exact rational, not a float")
    a = Fraction(a)
    if not 0 < a < 1:
        raise ValueError(f"threshold must lie in (0, 1), got {a}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > _BRUTE_FORCE_MAX_K:
        raise ValueError(
            f"size budget: exhaustive search is supported for k <= "
            f"{_BRUTE_FORCE_MAX_K}, got {k}"
        )
    return a


def brute_force_min_agreeing(a, k: int) -> Dfa:
    """Smallest DFA agreeing with threshold-majority at `a` on {0,1}^{<k}.

    Scans canonical transition skeletons by increasing state count. Each
    labeled word forces the acceptance bit of the state it ends in, so a
    skeleton either conflicts or determines an agreeing machine directly;
    no per-subset acceptance scan. The first hit has provably minimum
    size. Refuses k > 4 (exponential in both k and the state count).
    """
    a = _check_brute_force_args(a, k)
    words = _labeled_words(a, k)
    for n in itertools.count(1):
        if n > _BRUTE_FORCE_MAX_STATES:
            raise RuntimeError("no agreeing DFA found within the size cap")
        for delta in all_transition_tables(n):
            assign = _consistent_acceptance(delta, words)
            if assign is not None:
                accepting = frozenset(q for q in range(n) if assign[q] == 1)
                return Dfa(state_count=n, start=0, accepting=accepting,
                           delta=delta)


def min_agreeing_machines(a, k: int) -> list[Dfa]:
    """All minimum-size canonical DFAs agreeing with threshold-majority at `a`.

    Machines differing only in the acceptance of states no short word
    reaches count separately; they are distinct automata that all agree.
    Same budget gate as brute_force_min_agreeing; used to probe how far
    the smallest agreeing machine is from unique at tiny k.
    """
    smallest = brute_force_min_agreeing(a, k)
    n = smallest.state_count
    a = Fraction(a)
    words = _labeled_words(a, k)
    out = []
    for delta in all_transition_tables(n):
        assign = _consistent_acceptance(delta, words)
        if assign is None:
            continue
        free = [q for q in range(n) if assign[q] is None]
        for bits in itertools.product((0, 1), repeat=len(free)):
            acc = {q for q in range(n) if assign[q] == 1}
            acc.update(q for q, bit in zip(free, bits) if bit)
            out.append(Dfa(state_count=n, start=0,
                           accepting=frozenset(acc), delta=delta))
    return out
