"""Seeded Monte Carlo execution of DFAs on sampled processes.

Trials are generated one per (seed, trial) generator per the processes
module contract, then stepped through the automaton in vectorized
batches. Aggregates are sums of per-trial counts, so results are
independent of batch size and execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .automata import Dfa
from .processes import ProcessSpec, trial_rng

_BATCH = 2048


@dataclass(frozen=True)
class TrialReport:
    """Aggregate of one Monte Carlo run.

    `frequency` is the fraction of trials with the measured event at
    full length n: acceptance for run_trials, disagreement for
    disagreement_trials. checkpoints, when present, hold
    (length, acceptance frequency, stderr) at a geometric schedule of
    prefix lengths ending at n.
    """

    trials: int
    n: int
    frequency: float
    stderr: float
    checkpoints: Optional[tuple[tuple[int, float, float], ...]] = None


def _stderr(p: float, trials: int) -> float:
    return math.sqrt(p * (1.0 - p) / trials)


def checkpoint_schedule(n: int) -> list[int]:
    """Geometric prefix lengths n/16, n/8, n/4, n/2, n (deduped, no zeros)."""
    return sorted({n >> i for i in range(5)} - {0})


def _delta_array(dfa: Dfa) -> np.ndarray:
    # D[b, q] = successor of q on bit b
    return np.array(dfa.delta, dtype=np.int64).T.copy()


def _accept_mask(dfa: Dfa) -> np.ndarray:
    mask = np.zeros(dfa.state_count, dtype=bool)
    mask[list(dfa.accepting)] = True
    return mask


def _sample_batch(spec: ProcessSpec, n: int, seed: int, lo: int, hi: int) -> np.ndarray:
    rows = [spec.sample_path(n, trial_rng(seed, t)) for t in range(lo, hi)]
    return np.stack(rows) if rows else np.zeros((0, n), dtype=np.uint8)


def run_trials(dfa: Dfa, spec: ProcessSpec, n: int, trials: int,
               seed: int) -> TrialReport:
    """Acceptance frequency of the DFA over independent sampled streams."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if n == 0:
        p = float(dfa.start in dfa.accepting)
        return TrialReport(trials=trials, n=0, frequency=p, stderr=0.0,
                           checkpoints=())

    dmat = _delta_array(dfa)
    accept = _accept_mask(dfa)
    cps = checkpoint_schedule(n)
    counts = np.zeros(len(cps), dtype=np.int64)
    for lo in range(0, trials, _BATCH):
        hi = min(lo + _BATCH, trials)
        paths = _sample_batch(spec, n, seed, lo, hi)
        states = np.full(hi - lo, dfa.start, dtype=np.int64)
        ci = 0
        for t in range(n):
            states = dmat[paths[:, t], states]
            if t + 1 == cps[ci]:
                counts[ci] += int(np.count_nonzero(accept[states]))
                ci += 1
    freqs = counts / trials
    checkpoints = tuple(
        (cp, float(f), _stderr(float(f), trials)) for cp, f in zip(cps, freqs)
    )
    final = checkpoints[-1]
    return TrialReport(trials=trials, n=n, frequency=final[1], stderr=final[2],
                       checkpoints=checkpoints)


def disagreement_trials(dfa: Dfa, reference: Callable[[Sequence[int]], int],
                        spec: ProcessSpec, n: int, trials: int,
                        seed: int) -> TrialReport:
    """Frequency of dfa(x) != reference(x) over sampled length-n streams."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    dmat = _delta_array(dfa)
    accept = _accept_mask(dfa)
    mismatches = 0
    for lo in range(0, trials, _BATCH):
        hi = min(lo + _BATCH, trials)
        paths = _sample_batch(spec, n, seed, lo, hi)
        states = np.full(hi - lo, dfa.start, dtype=np.int64)
        for t in range(n):
            states = dmat[paths[:, t], states]
        dfa_bits = accept[states]
        for i in range(hi - lo):
            if bool(dfa_bits[i]) != bool(reference(paths[i])):
                mismatches += 1
    p = mismatches / trials
    return TrialReport(trials=trials, n=n, frequency=p,
                       stderr=_stderr(p, trials), checkpoints=None)


def trajectory(dfa: Dfa, input_bits: Sequence[int]) -> tuple[int, ...]:
    """The state sequence while reading the input; length |input|+1."""
    states = [dfa.start]
    q = dfa.start
    for b in input_bits:
        q = dfa.delta[q][b]
        states.append(q)
    return tuple(states)
