"""Seeded percentile bootstrap for the sample mean (or any statistic).

Resample r draws its indices from ``substream(seed, r)``, so the interval is
bit-identical across platforms and independent of any parallel fan-out.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .rng import substream


class EmptyInputError(ValueError):
    """Bootstrap needs at least one observation."""


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def _percentile(sorted_values: list[float], q: float) -> float:
    """Type-7 (linear interpolation) percentile of pre-sorted data, q in [0,100]."""
    if not sorted_values:
        raise EmptyInputError("percentile of empty data")
    h = (len(sorted_values) - 1) * (q / 100.0)
    lo = int(h)
    if lo >= len(sorted_values) - 1:
        return sorted_values[-1]
    frac = h - lo
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo])


def bootstrap_ci(values: Sequence[float], seed: int, n_resamples: int = 1000,
                 statistic: Callable[[Sequence[float]], float] = _mean,
                 confidence: float = 0.95) -> tuple[float, float]:
    """Percentile confidence interval over resampled statistics."""
    values = list(values)
    if not values:
        raise EmptyInputError("bootstrap_ci needs a nonempty sample")
    n = len(values)
    stats = []
    for r in range(n_resamples):
        stream = substream(seed, r)
        resample = [values[stream.below(n)] for _ in range(n)]
        stats.append(statistic(resample))
    stats.sort()
    alpha = (1.0 - confidence) / 2.0
    return (_percentile(stats, 100.0 * alpha),
            _percentile(stats, 100.0 * (1.0 - alpha)))
