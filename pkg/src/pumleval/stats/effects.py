"""Nonparametric effect sizes and their magnitude labels."""

from __future__ import annotations

from dataclasses import dataclass


class EmptyInputError(ValueError):
    """Both samples must be nonempty."""


@dataclass(frozen=True)
class EffectThresholds:
    """Magnitude cut points (small, medium, large), strictly increasing."""

    cliffs: tuple[float, float, float] = (0.147, 0.33, 0.474)
    cramers_v: tuple[float, float, float] = (0.1, 0.3, 0.5)


DEFAULT_THRESHOLDS = EffectThresholds()


def magnitude_label(value: float, cuts: tuple[float, float, float]) -> str:
    """negligible / small / medium / large by |value| against the cut points."""
    small, medium, large = cuts
    v = abs(value)
    if v < small:
        return "negligible"
    if v < medium:
        return "small"
    if v < large:
        return "medium"
    return "large"


def cliffs_delta(x: list[float], y: list[float],
                 thresholds: EffectThresholds = DEFAULT_THRESHOLDS,
                 ) -> tuple[float, str]:
    """Dominance effect size: (#(x>y) - #(x<y)) / (nx*ny), with magnitude."""
    if not x or not y:
        raise EmptyInputError("cliffs_delta needs two nonempty samples")
    greater = sum(1 for xi in x for yj in y if xi > yj)
    less = sum(1 for xi in x for yj in y if xi < yj)
    delta = (greater - less) / (len(x) * len(y))
    return delta, magnitude_label(delta, thresholds.cliffs)


def cramers_v(chi2: float, n: float, min_dim: int,
              thresholds: EffectThresholds = DEFAULT_THRESHOLDS,
              ) -> tuple[float, str]:
    """V = sqrt(chi2 / (N * (k - 1))) with k the smaller table dimension."""
    if min_dim < 2:
        raise ValueError("min_dim must be at least 2")
    if n <= 0:
        raise ValueError("N must be positive")
    v = (chi2 / (n * (min_dim - 1))) ** 0.5
    return v, magnitude_label(v, thresholds.cramers_v)


def mann_whitney_u(x: list[float], y: list[float]) -> float:
    """U statistic counting x-over-y pairs; ties contribute one half."""
    if not x or not y:
        raise EmptyInputError("mann_whitney_u needs two nonempty samples")
    u = 0.0
    for xi in x:
        for yj in y:
            if xi > yj:
                u += 1.0
            elif xi == yj:
                u += 0.5
    return u


def rank_biserial(x: list[float], y: list[float]) -> float:
    """Rank-biserial correlation 2U/(nx*ny) - 1; numerically equals Cliff's delta."""
    u = mann_whitney_u(x, y)
    return 2.0 * u / (len(x) * len(y)) - 1.0
