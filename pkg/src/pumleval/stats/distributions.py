"""Upper-tail probabilities for the chi-squared and standard normal laws."""

from __future__ import annotations

import math

from scipy.special import gammaincc


class InvalidDfError(ValueError):
    """Degrees of freedom must be a positive integer."""


def chi2_survival(x: float, df: int) -> float:
    """P(X >= x) for X ~ chi-squared(df), via the regularized upper
    incomplete gamma function Q(df/2, x/2)."""
    if df < 1 or int(df) != df:
        raise InvalidDfError(f"df must be a positive integer, got {df!r}")
    if x < 0:
        raise ValueError("chi-squared statistic must be nonnegative")
    return float(gammaincc(df / 2.0, x / 2.0))


def normal_survival(z: float) -> float:
    """P(Z >= z) for standard normal Z, via the complementary error function."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))
