"""Nonparametric statistics: tests, effect sizes, tails, seeded bootstrap."""

from .bootstrap import bootstrap_ci
from .distributions import InvalidDfError, chi2_survival, normal_survival
from .effects import (
    DEFAULT_THRESHOLDS,
    EffectThresholds,
    cliffs_delta,
    cramers_v,
    magnitude_label,
    mann_whitney_u,
    rank_biserial,
)
from .rng import SplitMix64, substream
from .tests import (
    AllZeroDifferencesError,
    DegenerateInputError,
    DegenerateMarginsError,
    EffectSize,
    OutOfRangeError,
    StatResult,
    chi2_independence,
    dunn_posthoc,
    holm_adjust,
    kruskal_wallis,
    midranks,
    wilcoxon_signed_rank,
)

__all__ = [
    "AllZeroDifferencesError",
    "DEFAULT_THRESHOLDS",
    "DegenerateInputError",
    "DegenerateMarginsError",
    "EffectSize",
    "EffectThresholds",
    "InvalidDfError",
    "OutOfRangeError",
    "SplitMix64",
    "StatResult",
    "bootstrap_ci",
    "chi2_independence",
    "chi2_survival",
    "cliffs_delta",
    "cramers_v",
    "dunn_posthoc",
    "holm_adjust",
    "kruskal_wallis",
    "magnitude_label",
    "mann_whitney_u",
    "midranks",
    "normal_survival",
    "rank_biserial",
    "substream",
    "wilcoxon_signed_rank",
]
