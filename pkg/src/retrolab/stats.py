"""Deterministic random streams, Monte Carlo tallies, and the distribution
statistics (total variation, Wilson intervals, mutual information) that every
audit in this package leans on.

Streams are counter-based (Philox) and keyed by (seed, stream_id), so any
sub-experiment can be replayed bit-identically on its own, in any order, on
any platform.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Callable, Hashable

import numpy as np

_MASK64 = (1 << 64) - 1

# how far an input distribution may drift from sum == 1 before it is rejected
_NORM_TOL = 1e-6


def _mix64(a: int, b: int) -> int:
    # splitmix64-style avalanche of two 64-bit words; used to derive child
    # stream ids so nested splits stay reproducible and order-independent
    x = (a * 0x9E3779B97F4A7C15 + b + 0x632BE59BD9B4E019) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


@dataclass(frozen=True)
class RandomStream:
    """Value-typed handle on one reproducible random stream.

    Equal (seed, stream_id) regenerate exactly the same draws.  Children
    derived with :meth:`child` are statistically independent of the parent
    and of each other, and do not depend on consumption order.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not isinstance(self.seed, int) or not isinstance(self.stream_id, int):
            raise ValueError("seed and stream_id must be integers")

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at draw index zero of this stream."""
        key = ((self.seed & _MASK64) << 64) | (self.stream_id & _MASK64)
        return np.random.Generator(np.random.Philox(key=key))

    def child(self, index: int) -> "RandomStream":
        """Derived stream number ``index``; same seed, hashed stream id."""
        if index < 0:
            raise ValueError("child index must be nonnegative")
        return RandomStream(self.seed, _mix64(self.stream_id, index))


@dataclass
class TallyTable:
    """Counts of discrete outcomes from one batch of draws."""

    cells: dict
    total: int

    def __post_init__(self):
        if self.total != sum(self.cells.values()):
            raise ValueError("cell counts do not add up to the declared total")

    def frequency(self, outcome) -> float:
        return self.cells.get(outcome, 0) / self.total

    def distribution(self) -> dict:
        return {k: v / self.total for k, v in self.cells.items()}

    def merged(self, other: "TallyTable") -> "TallyTable":
        """Pool two tallies; associative and commutative by construction."""
        cells = dict(self.cells)
        for k, v in other.cells.items():
            cells[k] = cells.get(k, 0) + v
        return TallyTable(cells, self.total + other.total)


def mc_estimate(
    sampler: Callable[[np.random.Generator, int], object],
    n: int,
    stream: RandomStream,
) -> TallyTable:
    """Tally ``n`` draws from ``sampler``.

    ``sampler(rng, n)`` must return the n outcomes as a 1-d array or a
    sequence of hashables.  It receives a generator owned by this call, so
    the tally is a pure function of (sampler, n, stream).
    """
    n = int(n)
    if n < 1:
        raise ValueError("need at least one draw")
    out = sampler(stream.generator(), n)
    if isinstance(out, np.ndarray):
        values, counts = np.unique(out, return_counts=True)
        cells = {v.item(): int(c) for v, c in zip(values, counts)}
    else:
        cells = {k: int(v) for k, v in Counter(out).items()}
    total = sum(cells.values())
    if total != n:
        raise ValueError(f"sampler produced {total} outcomes for n={n}")
    return TallyTable(cells, total)


def _check_normalized(total: float, label: str) -> None:
    if abs(total - 1.0) > _NORM_TOL:
        raise ValueError(f"{label} distribution sums to {total!r}, not 1")


def tv_distance(p, q) -> float:
    """Half the L1 distance between two probability distributions.

    Accepts two mappings outcome -> probability (outcomes of probability zero
    may be omitted) or two probability vectors of equal length; vectors of
    different length describe different outcome spaces and are rejected.
    """
    if isinstance(p, Mapping) and isinstance(q, Mapping):
        _check_normalized(math.fsum(p.values()), "first")
        _check_normalized(math.fsum(q.values()), "second")
        keys = set(p) | set(q)
        return 0.5 * math.fsum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)
    pa = np.asarray(p, dtype=float)
    qa = np.asarray(q, dtype=float)
    if pa.shape != qa.shape:
        raise ValueError(f"outcome spaces differ: {pa.shape} vs {qa.shape}")
    _check_normalized(float(pa.sum()), "first")
    _check_normalized(float(qa.sum()), "second")
    return 0.5 * float(np.abs(pa - qa).sum())


def wilson_interval(successes: int, n: int, z: float = 4.0) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion at z standard errors."""
    if n < 1:
        raise ValueError("need at least one trial")
    if not 0 <= successes <= n:
        raise ValueError("successes must lie in [0, n]")
    if z <= 0.0:
        raise ValueError("z must be positive")
    phat = successes / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (phat + z2 / (2.0 * n)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom
    lo = max(0.0, center - half)
    hi = min(1.0, center + half)
    # at the endpoints center and half agree analytically; snap the
    # cancellation residue so the bound never excludes the estimate itself
    if successes == 0:
        lo = 0.0
    if successes == n:
        hi = 1.0
    return (lo, hi)


def binomial_se(p: float, n: int) -> float:
    """Standard error of a frequency estimate of a probability p over n draws."""
    if n < 1:
        raise ValueError("need at least one trial")
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


def mutual_information_bits(joint: Mapping[tuple[Hashable, Hashable], float]) -> float:
    """Mutual information, in bits, of a joint distribution over pairs.

    Terms of probability zero are skipped, and a ratio that is exactly 1
    contributes exactly 0.0, so independent joints built from exact products
    come out at exactly zero.
    """
    _check_normalized(math.fsum(joint.values()), "joint")
    px: dict = {}
    py: dict = {}
    for (x, y), pr in joint.items():
        if pr < 0.0:
            raise ValueError("probabilities must be nonnegative")
        px[x] = px.get(x, 0.0) + pr
        py[y] = py.get(y, 0.0) + pr
    mi = 0.0
    for (x, y), pr in joint.items():
        if pr <= 0.0:
            continue
        mi += pr * math.log2(pr / (px[x] * py[y]))
    return mi
