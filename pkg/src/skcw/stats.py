"""Streaming moment accumulation and error estimates for sampled runs."""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError


class MomentAccumulator:
    """Count/sum/sum-of-squares per named observable.

    merge() is associative and side-effect free, so partial accumulators can
    be combined in any grouping; callers that need bit-for-bit reproducible
    totals should merge in a fixed order.
    """

    __slots__ = ("_stats",)

    def __init__(self):
        self._stats: dict[str, tuple[int, float, float]] = {}

    def add(self, name: str, value: float) -> None:
        v = float(value)
        c, s, s2 = self._stats.get(name, (0, 0.0, 0.0))
        self._stats[name] = (c + 1, s + v, s2 + v * v)

    def add_dict(self, values: dict) -> None:
        for name, value in values.items():
            self.add(name, value)

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        out = MomentAccumulator()
        out._stats = dict(self._stats)
        for name, (c, s, s2) in other._stats.items():
            c0, s0, s20 = out._stats.get(name, (0, 0.0, 0.0))
            out._stats[name] = (c0 + c, s0 + s, s20 + s2)
        return out

    def names(self) -> list[str]:
        return sorted(self._stats)

    def count(self, name: str) -> int:
        return self._stats.get(name, (0, 0.0, 0.0))[0]

    def mean(self, name: str) -> float:
        c, s, _ = self._stats.get(name, (0, 0.0, 0.0))
        if c == 0:
            raise DomainError(f"no samples for {name!r}")
        return s / c

    def variance(self, name: str) -> float:
        """Unbiased sample variance, clamped at zero against roundoff."""
        c, s, s2 = self._stats.get(name, (0, 0.0, 0.0))
        if c < 2:
            raise DomainError(f"need at least 2 samples for variance of {name!r}")
        return max(0.0, (s2 - s * s / c) / (c - 1))

    def stderr(self, name: str) -> float:
        return math.sqrt(self.variance(name) / self.count(name))


def blocked_stderr(series: np.ndarray, blocks: int) -> float:
    """Standard error of the series mean from non-overlapping block means;
    robust to autocorrelation shorter than a block."""
    series = np.asarray(series, dtype=np.float64).ravel()
    if blocks < 2:
        raise DomainError(f"need at least 2 blocks, got {blocks}")
    length = len(series) // blocks
    if length < 1:
        raise DomainError(f"series of {len(series)} too short for {blocks} blocks")
    trimmed = series[: blocks * length].reshape(blocks, length)
    means = trimmed.mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(blocks))


def jackknife_stderr(statistic, samples: dict[str, np.ndarray]) -> float:
    """Leave-one-out error of statistic(means dict) over aligned per-sample
    arrays.  statistic receives {name: mean over the retained samples}."""
    names = sorted(samples)
    arrays = [np.asarray(samples[k], dtype=np.float64) for k in names]
    m = len(arrays[0])
    for a in arrays:
        if len(a) != m:
            raise DomainError("jackknife inputs must have equal lengths")
    if m < 2:
        raise DomainError("jackknife needs at least 2 samples")
    sums = [a.sum() for a in arrays]
    reps = np.empty(m)
    for i in range(m):
        means = {k: (s - a[i]) / (m - 1) for k, s, a in zip(names, sums, arrays)}
        reps[i] = statistic(means)
    center = reps.mean()
    return float(math.sqrt((m - 1) / m * np.sum((reps - center) ** 2)))
