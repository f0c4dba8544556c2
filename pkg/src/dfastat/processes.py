"""Generative models of {0,1}-valued random processes and reproducible sampling.

Sampling is counter-based: trial t under master seed s uses a fresh
Philox4x64 generator keyed by (s, t), so sample paths are a pure function
of (spec, n, seed, trial) and independent across trials regardless of
execution order. The draw order per spec is fixed (documented on each
class) and must not change, or stored golden values break.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass(frozen=True)
class ProcessSpec:
    """Base class for process models. Subclasses are immutable."""

    def sample_path(self, n: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class Bernoulli(ProcessSpec):
    """Iid bits, each 1 with probability theta.

    Full support for theta in (0, 1). Draw order: n uniforms, bit = u < theta.
    """

    theta: float

    def __post_init__(self):
        if not 0 <= self.theta <= 1:
            raise ValueError(f"theta must lie in [0, 1], got {self.theta}")

    def sample_path(self, n, rng):
        return (rng.random(n) < float(self.theta)).astype(np.uint8)


@dataclass(frozen=True)
class Degenerate(ProcessSpec):
    """The constant process emitting `bit` forever. No randomness drawn."""

    bit: int

    def __post_init__(self):
        if self.bit not in (0, 1):
            raise ValueError("bit must be 0 or 1")

    def sample_path(self, n, rng):
        return np.full(n, self.bit, dtype=np.uint8)


@dataclass(frozen=True)
class Dominant(ProcessSpec):
    """Fair-coin prefix of geometric length, then `target_bit` forever.

    The marginal law of the n-th bit converges to a point mass on
    target_bit. Draw order: one geometric(switch_rate) variate L (prefix
    length L-1), then the prefix uniforms.
    """

    target_bit: int
    switch_rate: float

    def __post_init__(self):
        if self.target_bit not in (0, 1):
            raise ValueError("target_bit must be 0 or 1")
        if not 0 < self.switch_rate <= 1:
            raise ValueError(f"switch_rate must lie in (0, 1], got {self.switch_rate}")

    def sample_path(self, n, rng):
        prefix_len = min(int(rng.geometric(self.switch_rate)) - 1, n)
        out = np.full(n, self.target_bit, dtype=np.uint8)
        out[:prefix_len] = rng.random(prefix_len) < 0.5
        return out


@dataclass(frozen=True)
class MarkovBinary(ProcessSpec):
    """Stationary two-state binary Markov source.

    p01 = P(next=1 | current=0), p10 = P(next=0 | current=1), both in
    (0, 1), so every finite pattern has positive probability. Started
    from the stationary law, the process is stationary. Draw order: n
    uniforms consumed left to right.
    """

    p01: float
    p10: float

    def __post_init__(self):
        for name in ("p01", "p10"):
            p = getattr(self, name)
            if not 0 < p < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {p}")

    @property
    def stationary_one(self) -> float:
        """Stationary probability of emitting 1."""
        return self.p01 / (self.p01 + self.p10)

    def sample_path(self, n, rng):
        u = rng.random(n)
        out = np.empty(n, dtype=np.uint8)
        if n == 0:
            return out
        out[0] = u[0] < self.stationary_one
        stay1 = 1.0 - self.p10
        for i in range(1, n):
            out[i] = u[i] < (stay1 if out[i - 1] else self.p01)
        return out


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Per-trial generator: Philox4x64 keyed by (master seed, trial index)."""
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    if trial < 0:
        raise ValueError("trial index must be >= 0")
    return np.random.Generator(np.random.Philox(key=np.array([seed, trial], dtype=np.uint64)))


def sample(spec: ProcessSpec, n: int, seed: int, trial: int = 0) -> np.ndarray:
    """Length-n realization of the process; deterministic in (spec, n, seed, trial)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return spec.sample_path(n, trial_rng(seed, trial))


def incremental_mean(stream) -> Fraction:
    """Running mean of a bit stream, kept exact as a count/length pair."""
    ones = 0
    n = 0
    for b in stream:
        ones += int(b)
        n += 1
    if n == 0:
        raise ValueError("mean of an empty stream is undefined")
    return Fraction(ones, n)


def hoeffding_bound(n: int, eps: float) -> float:
    """Upper bound exp(-2 n eps^2) on a one-sided deviation of the empirical mean."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if eps <= 0:
        raise ValueError("eps must be > 0")
    return math.exp(-2.0 * n * eps * eps)


def parse_theta(text: str):
    """Parse a probability given as a decimal ('0.75') or a ratio ('3/4').

    Ratios come back as exact Fractions, decimals as floats.
    """
    text = text.strip()
    try:
        if "/" in text:
            return Fraction(text)
        return float(text)
    except ZeroDivisionError as exc:
        raise ValueError(f"bad probability {text!r}: zero denominator") from exc


def parse_process(text: str) -> ProcessSpec:
    """Parse a process spec string.

    Syntax: bernoulli:<theta> | degenerate:<bit> | dominant:<bit>:<rate>
    | markov:<p01>:<p10>.
    """
    parts = text.strip().split(":")
    kind, args = parts[0].lower(), parts[1:]
    try:
        if kind == "bernoulli" and len(args) == 1:
            return Bernoulli(parse_theta(args[0]))
        if kind == "degenerate" and len(args) == 1:
            return Degenerate(int(args[0]))
        if kind == "dominant" and len(args) == 2:
            return Dominant(int(args[0]), float(parse_theta(args[1])))
        if kind == "markov" and len(args) == 2:
            return MarkovBinary(float(parse_theta(args[0])), float(parse_theta(args[1])))
    except ValueError as exc:
        raise ValueError(f"bad process spec {text!r}: {exc}") from exc
    raise ValueError(f"bad process spec {text!r}")
