"""Nonparametric test battery: Kruskal-Wallis, Dunn post hoc, Holm
step-down, chi-squared independence with Cramér's V, Wilcoxon signed rank.

Conventions fixed across the battery: mid-ranks for ties, two-sided
p-values, Wilcoxon drops exact zero differences and switches from the exact
null distribution to a tie-corrected normal approximation above n = 25.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .distributions import chi2_survival, normal_survival
from .effects import DEFAULT_THRESHOLDS, EffectThresholds, cramers_v


class DegenerateInputError(ValueError):
    """Inputs admit no rank variation (e.g. all values identical)."""


class DegenerateMarginsError(ValueError):
    """Contingency table has an empty row/column or fewer than 2 of either."""


class AllZeroDifferencesError(ValueError):
    """Every paired difference is exactly zero."""


class OutOfRangeError(ValueError):
    """A p-value lies outside [0, 1]."""


@dataclass(frozen=True)
class EffectSize:
    name: str
    value: float
    magnitude: str


@dataclass
class StatResult:
    test_name: str
    statistic: float
    df: int | tuple[int, int] | None
    p_raw: float
    p_adjusted: float | None = None
    effect: EffectSize | None = None
    extra: dict = field(default_factory=dict)


def midranks(values: list[float]) -> list[float]:
    """Ranks 1..n with tied values sharing their average rank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2.0 + 1.0
        for idx in order[i:j + 1]:
            ranks[idx] = mean_rank
        i = j + 1
    return ranks


def _tie_groups(values: list[float]) -> list[int]:
    counts: dict[float, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return [c for c in counts.values() if c > 1]


def kruskal_wallis(groups: list[list[float]]) -> StatResult:
    """Rank-based k-sample test; H is tie-corrected, p from chi-squared(k-1)."""
    if len(groups) < 2:
        raise DegenerateInputError("kruskal_wallis needs at least 2 groups")
    if any(len(g) == 0 for g in groups):
        raise DegenerateInputError("kruskal_wallis groups must be nonempty")
    pooled = [v for g in groups for v in g]
    n_total = len(pooled)
    ranks = midranks(pooled)

    h = 0.0
    pos = 0
    for g in groups:
        r_sum = sum(ranks[pos:pos + len(g)])
        h += r_sum * r_sum / len(g)
        pos += len(g)
    h = 12.0 / (n_total * (n_total + 1)) * h - 3.0 * (n_total + 1)

    tie_term = sum(t ** 3 - t for t in _tie_groups(pooled))
    correction = 1.0 - tie_term / (n_total ** 3 - n_total)
    if correction == 0.0:
        raise DegenerateInputError("all pooled values are identical")
    h /= correction

    df = len(groups) - 1
    return StatResult(
        test_name="kruskal_wallis",
        statistic=h,
        df=df,
        p_raw=chi2_survival(max(h, 0.0), df),
        extra={"n": n_total, "groups": len(groups)},
    )


def dunn_posthoc(groups: list[list[float]],
                 labels: list[str] | None = None) -> list[StatResult]:
    """All pairwise Dunn comparisons on pooled mid-ranks.

    Z_ij = (mean rank i - mean rank j) / sqrt(N(N+1)/12 * (1/n_i + 1/n_j)),
    two-sided p from the normal tail, Holm-adjusted within the family.
    """
    if len(groups) < 2:
        raise DegenerateInputError("dunn_posthoc needs at least 2 groups")
    if any(len(g) == 0 for g in groups):
        raise DegenerateInputError("dunn_posthoc groups must be nonempty")
    if labels is None:
        labels = [f"group{i}" for i in range(len(groups))]
    pooled = [v for g in groups for v in g]
    n_total = len(pooled)
    if len(set(pooled)) == 1:
        raise DegenerateInputError("all pooled values are identical")
    ranks = midranks(pooled)

    mean_ranks = []
    pos = 0
    for g in groups:
        mean_ranks.append(sum(ranks[pos:pos + len(g)]) / len(g))
        pos += len(g)

    base_var = n_total * (n_total + 1) / 12.0
    results = []
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            se = (base_var * (1.0 / len(groups[i]) + 1.0 / len(groups[j]))) ** 0.5
            z = (mean_ranks[i] - mean_ranks[j]) / se
            results.append(StatResult(
                test_name="dunn",
                statistic=z,
                df=None,
                p_raw=2.0 * normal_survival(abs(z)),
                extra={"pair": (labels[i], labels[j])},
            ))
    adjusted = holm_adjust([r.p_raw for r in results])
    for r, p_adj in zip(results, adjusted):
        r.p_adjusted = p_adj
    return results


def holm_adjust(p_values: list[float]) -> list[float]:
    """Holm step-down adjustment; monotone, capped at 1, original order kept."""
    for p in p_values:
        if not 0.0 <= p <= 1.0:
            raise OutOfRangeError(f"p-value {p} outside [0, 1]")
    m = len(p_values)
    order = sorted(range(m), key=lambda i: p_values[i])
    adjusted = [0.0] * m
    running_max = 0.0
    for rank, idx in enumerate(order):
        value = (m - rank) * p_values[idx]
        running_max = max(running_max, value)
        adjusted[idx] = min(1.0, running_max)
    return adjusted


def chi2_independence(table: list[list[float]],
                      thresholds: EffectThresholds = DEFAULT_THRESHOLDS,
                      ) -> StatResult:
    """Pearson chi-squared test of independence with Cramér's V effect size."""
    rows = len(table)
    cols = len(table[0]) if rows else 0
    if rows < 2 or cols < 2:
        raise DegenerateMarginsError("table needs at least 2 rows and 2 columns")
    if any(len(row) != cols for row in table):
        raise DegenerateMarginsError("ragged contingency table")
    row_sums = [sum(row) for row in table]
    col_sums = [sum(table[i][j] for i in range(rows)) for j in range(cols)]
    if any(s <= 0 for s in row_sums) or any(s <= 0 for s in col_sums):
        raise DegenerateMarginsError("all row and column sums must be positive")
    n_total = sum(row_sums)

    chi2 = 0.0
    for i in range(rows):
        for j in range(cols):
            expected = row_sums[i] * col_sums[j] / n_total
            diff = table[i][j] - expected
            chi2 += diff * diff / expected

    df = (rows - 1) * (cols - 1)
    v, magnitude = cramers_v(chi2, n_total, min(rows, cols), thresholds)
    return StatResult(
        test_name="chi2_independence",
        statistic=chi2,
        df=df,
        p_raw=chi2_survival(chi2, df),
        effect=EffectSize("cramers_v", v, magnitude),
        extra={"n": n_total, "shape": (rows, cols)},
    )


def _wilcoxon_exact_cdf(doubled_ranks: list[int], w_doubled: float) -> float:
    """P(W+ <= w) under the signed-rank null, by subset-sum counting.

    Ranks arrive doubled so mid-ranks (halves) become integers.
    """
    total = sum(doubled_ranks)
    counts = [0] * (total + 1)
    counts[0] = 1
    for r in doubled_ranks:
        for s in range(total - r, -1, -1):
            if counts[s]:
                counts[s + r] += counts[s]
    limit = int(w_doubled + 1e-9)
    favorable = sum(counts[: limit + 1])
    return favorable / (1 << len(doubled_ranks))


def wilcoxon_signed_rank(values: list[float], mu0: float = 0.0) -> StatResult:
    """One-sample signed-rank test of location against mu0.

    Zero differences are dropped; W = min(W+, W-).  Exact null distribution
    for n <= 25 (mid-ranks handled by doubling), tie-corrected normal
    approximation beyond.
    """
    diffs = [v - mu0 for v in values if v != mu0]
    n = len(diffs)
    if n == 0:
        raise AllZeroDifferencesError("no nonzero differences")
    abs_ranks = midranks([abs(d) for d in diffs])
    w_plus = float(sum(r for r, d in zip(abs_ranks, diffs) if d > 0))
    w_minus = float(sum(r for r, d in zip(abs_ranks, diffs) if d < 0))
    w = min(w_plus, w_minus)

    if n <= 25:
        doubled = [int(round(2 * r)) for r in abs_ranks]
        p = min(1.0, 2.0 * _wilcoxon_exact_cdf(doubled, 2 * w))
        method = "exact"
    else:
        mean = n * (n + 1) / 4.0
        tie_term = sum(t ** 3 - t for t in _tie_groups([abs(d) for d in diffs]))
        variance = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0
        if variance <= 0:
            raise DegenerateInputError("zero variance in signed-rank statistic")
        # continuity correction: shrink |W+ - mean| by 1/2, floored at 0
        delta = w_plus - mean
        z = (abs(delta) - 0.5 if abs(delta) > 0.5 else 0.0) / variance ** 0.5
        p = min(1.0, 2.0 * normal_survival(z))
        method = "normal"

    return StatResult(
        test_name="wilcoxon_signed_rank",
        statistic=w,
        df=None,
        p_raw=min(p, 1.0),
        extra={"n": n, "w_plus": w_plus, "w_minus": w_minus, "method": method,
               "mu0": mu0},
    )
