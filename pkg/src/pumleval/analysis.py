"""Corpus-level analysis: consensus sets, the statistical battery, bootstrap.

Pulls the per-diagram metric frame together with the consensus machinery and
produces StatResults grouped into the eight metric families, Holm-corrected
within each family.  Invalid diagrams participate only in the syntactic
correctness family.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import consensus as cns
from . import metrics as mt
from .corpus import CorpusIndex
from .stats import (
    DegenerateInputError,
    DegenerateMarginsError,
    StatResult,
    bootstrap_ci,
    chi2_independence,
    cliffs_delta,
    dunn_posthoc,
    holm_adjust,
    kruskal_wallis,
    rank_biserial,
    wilcoxon_signed_rank,
)

log = logging.getLogger(__name__)

DEFAULT_SEEDS = (17, 42, 123)


@dataclass
class PosthocPair:
    family: str
    group_a: str
    group_b: str
    z: float
    p_raw: float
    p_holm: float
    cliffs: float
    magnitude: str
    r_rb: float


@dataclass
class BootstrapRow:
    metric: str
    model: str
    seed: int
    mean: float
    ci_low: float
    ci_high: float


@dataclass
class ConsensusResults:
    k_computed: int
    k_used: int
    tmc_benchmark: cns.ConsensusSet
    cmc_benchmark: cns.ConsensusSet
    run_indices: dict[str, list[int]]
    tmc_per_run: dict[str, list[float]]
    cmc_per_run: dict[str, list[float]]
    tmc_run_jaccard: dict[str, list[float]]
    jaccard_matrix: dict[tuple[str, str], float]
    agreement: dict[str, int]
    core_counts: dict[str, int]
    presence: dict[str, dict[str, bool]]
    placements: list[cns.PlacementRecord]
    spc_mean: float


@dataclass
class ModelSummary:
    """Per-model aggregate row; pooled statistics weight every method equally."""

    model: str
    runs_total: int
    runs_valid: int
    mq_total: int
    mq_min: int
    mq_max: int
    syntax_errors: int
    visibility_pct: dict[str, float]
    camelcase_pct: float | None
    mean_params: float | None
    param_iqr: float | None
    rtc_pct: float | None
    redundancy: float | None
    lexdiv_run_mean: float | None
    lexdiv_pooled: float | None
    ac_full: int
    ac_uc_only: int
    ac_action_only: int
    ac_none: int
    sf_means: dict[str, float]
    sf_global: float | None
    tmc_mean: float | None = None
    cmc_mean: float | None = None


@dataclass
class AnalysisBundle:
    frame: list[mt.DiagramMetrics]
    models: list[str]
    sc_counts: dict[str, tuple[int, int]]
    consensus: ConsensusResults | None
    stat_results: list[tuple[str, StatResult]]  # (family, result)
    posthoc: list[PosthocPair]
    bootstrap: list[BootstrapRow]
    model_summaries: list[ModelSummary] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def _per_model_values(frame: list[mt.DiagramMetrics], getter) -> dict[str, list[float]]:
    values: dict[str, list[float]] = {}
    for row in frame:
        v = getter(row)
        if v is None:
            continue
        values.setdefault(row.model, []).append(float(v))
    return values


def _kw_or_note(family: str, test_label: str, groups_by_model: dict[str, list[float]],
                results: list[tuple[str, StatResult]], notes: list[str]) -> None:
    groups = [g for g in groups_by_model.values() if g]
    if len(groups) < 2:
        notes.append(f"{family}/{test_label}: fewer than 2 nonempty groups; skipped")
        return
    try:
        result = kruskal_wallis(groups)
    except DegenerateInputError as exc:
        notes.append(f"{family}/{test_label}: {exc}; skipped")
        return
    result.extra["measure"] = test_label
    results.append((family, result))


def _chi2_or_note(family: str, test_label: str, table: dict[str, list[float]],
                  columns: list[str], results: list[tuple[str, StatResult]],
                  notes: list[str]) -> None:
    """Build a models x columns contingency test, dropping empty rows/columns."""
    rows = [(model, counts) for model, counts in sorted(table.items())
            if sum(counts) > 0]
    if len(rows) < 2:
        notes.append(f"{family}/{test_label}: fewer than 2 nonempty rows; skipped")
        return
    keep = [j for j in range(len(columns))
            if sum(counts[j] for _, counts in rows) > 0]
    if len(keep) < 2:
        notes.append(f"{family}/{test_label}: fewer than 2 nonempty columns; skipped")
        return
    matrix = [[counts[j] for j in keep] for _, counts in rows]
    try:
        result = chi2_independence(matrix)
    except DegenerateMarginsError as exc:
        notes.append(f"{family}/{test_label}: {exc}; skipped")
        return
    result.extra["measure"] = test_label
    result.extra["columns"] = [columns[j] for j in keep]
    results.append((family, result))


def _dunn_with_effects(family: str, groups_by_model: dict[str, list[float]],
                       ) -> list[PosthocPair]:
    labels = [m for m, g in sorted(groups_by_model.items()) if g]
    groups = [groups_by_model[m] for m in labels]
    if len(groups) < 2:
        return []
    try:
        dunn = dunn_posthoc(groups, labels)
    except DegenerateInputError:
        return []
    pairs = []
    for result in dunn:
        a, b = result.extra["pair"]
        delta, magnitude = cliffs_delta(groups_by_model[a], groups_by_model[b])
        pairs.append(PosthocPair(
            family=family,
            group_a=a,
            group_b=b,
            z=result.statistic,
            p_raw=result.p_raw,
            p_holm=result.p_adjusted if result.p_adjusted is not None else result.p_raw,
            cliffs=delta,
            magnitude=magnitude,
            r_rb=rank_biserial(groups_by_model[a], groups_by_model[b]),
        ))
    return pairs


def compute_consensus(index: CorpusIndex, top_k_override: int | None = None,
                      ) -> ConsensusResults | None:
    entries = index.valid_entries()
    if not entries:
        return None
    total_methods = sum(mt.method_quantity(e.diagram) for e in entries)
    if total_methods == 0:
        return None
    k_computed = cns.compute_k(total_methods, len(entries))

    norm_table = cns.build_frequency_table(entries)
    raw_table = cns.FrequencyTable()
    for entry in entries:
        for cls in entry.diagram.classes:
            seen: set[str] = set()
            for method in cls.methods:
                stats = raw_table.entries.setdefault(method.name, cns.NameStats())
                stats.raw_variants.add(method.name)
                if method.name in seen:
                    continue
                seen.add(method.name)
                stats.count += 1
                stats.class_counts[cls.name] = stats.class_counts.get(cls.name, 0) + 1

    k_used = top_k_override if top_k_override else k_computed
    k_norm = min(k_used, len(norm_table.entries))
    k_raw = min(k_used, len(raw_table.entries))
    tmc_benchmark = cns.top_k(norm_table, k_norm)
    cmc_benchmark = cns.top_k(raw_table, k_raw)

    indexed = cns.per_model_indexed_sets(entries, normalized=True)
    run_indices = {m: [idx for idx, _ in runs] for m, runs in indexed.items()}
    norm_runs = {m: [s for _, s in runs] for m, runs in indexed.items()}
    raw_runs = cns.per_model_run_sets(entries, normalized=False)
    norm_pooled = cns.per_model_pooled_sets(entries, normalized=True)
    raw_pooled = cns.per_model_pooled_sets(entries, normalized=False)

    tmc_per_run = {m: cns.coverage(runs, tmc_benchmark)[0]
                   for m, runs in norm_runs.items()}
    cmc_per_run = {m: cns.coverage(runs, cmc_benchmark)[0]
                   for m, runs in raw_runs.items()}
    bench_set = tmc_benchmark.as_set()
    tmc_run_jaccard = {
        m: [cns.pairwise_model_jaccard(run, bench_set) * 100.0 for run in runs]
        for m, runs in norm_runs.items()
    }

    models = sorted(raw_pooled)
    jaccard_matrix = {}
    for i, a in enumerate(models):
        for b in models[i:]:
            value = (1.0 if a == b else
                     cns.pairwise_model_jaccard(raw_pooled[a], raw_pooled[b]))
            jaccard_matrix[(a, b)] = value
            jaccard_matrix[(b, a)] = value

    agreement = cns.agreement_counts(tmc_benchmark, norm_pooled)
    presence = {
        name: {m: name in norm_pooled[m] for m in models}
        for name in tmc_benchmark.names
    }

    per_model_tables = {}
    for model in models:
        per_model_tables[model] = cns.build_frequency_table(
            [e for e in entries if e.model_name == model]
        )
    placements = cns.placement_records(tmc_benchmark, norm_table, per_model_tables)
    generated = [p for p in placements if p.models_generating > 0]
    spc_mean = (sum(p.consistency_pct for p in generated) / len(generated)
                if generated else 0.0)

    return ConsensusResults(
        k_computed=k_computed,
        k_used=k_used,
        tmc_benchmark=tmc_benchmark,
        cmc_benchmark=cmc_benchmark,
        run_indices=run_indices,
        tmc_per_run=tmc_per_run,
        cmc_per_run=cmc_per_run,
        tmc_run_jaccard=tmc_run_jaccard,
        jaccard_matrix=jaccard_matrix,
        agreement=agreement,
        core_counts={n: norm_table.entries[n].count for n in tmc_benchmark.names},
        presence=presence,
        placements=placements,
        spc_mean=spc_mean,
    )


def summarize_models(index: CorpusIndex, frame: list[mt.DiagramMetrics],
                     sc_counts: dict[str, tuple[int, int]],
                     consensus: ConsensusResults | None) -> list[ModelSummary]:
    summaries = []
    for model in index.models():
        entries = index.entries_for(model)
        valid = [e for e in entries if e.diagram is not None and e.is_valid]
        rows = [r for r in frame if r.model == model]
        methods = [m for e in valid for m in e.diagram.all_methods()]
        names = [m.name for m in methods]
        mqs = [r.mq for r in rows]

        if methods:
            visibility = mt.visibility_percentages(methods)
            camel = mt.naming_convention_rate(names)
            mean_params, iqr = mt.param_stats(methods)
            rtc = mt.return_type_completeness(methods)
            redundancy = mt.name_redundancy(names)
            unique = set(names)
            lexdiv_pooled = (mt.levenshtein_diversity(unique)
                             if len(unique) >= 2 else None)
        else:
            visibility = {k: 0.0 for k in mt.VISIBILITY_KEYS}
            camel = mean_params = iqr = rtc = redundancy = lexdiv_pooled = None

        run_lexdivs = [r.sr.lexdiv for r in rows
                       if r.sr is not None and r.sr.lexdiv is not None]
        sf_means = {
            c: float(np.mean([r.sf.per_category[c] for r in rows])) if rows else 0.0
            for c in mt.SF_CATEGORIES
        }
        tmc_mean = cmc_mean = None
        if consensus is not None:
            if consensus.tmc_per_run.get(model):
                values = consensus.tmc_per_run[model]
                tmc_mean = sum(values) / len(values)
            if consensus.cmc_per_run.get(model):
                values = consensus.cmc_per_run[model]
                cmc_mean = sum(values) / len(values)

        summaries.append(ModelSummary(
            model=model,
            runs_total=len(entries),
            runs_valid=len(valid),
            mq_total=sum(mqs),
            mq_min=min(mqs) if mqs else 0,
            mq_max=max(mqs) if mqs else 0,
            syntax_errors=sc_counts.get(model, (0, 0))[1],
            visibility_pct=visibility,
            camelcase_pct=camel,
            mean_params=mean_params,
            param_iqr=iqr,
            rtc_pct=rtc,
            redundancy=redundancy,
            lexdiv_run_mean=(sum(run_lexdivs) / len(run_lexdivs)
                             if run_lexdivs else None),
            lexdiv_pooled=lexdiv_pooled,
            ac_full=sum(r.ac.full for r in rows),
            ac_uc_only=sum(r.ac.uc_only for r in rows),
            ac_action_only=sum(r.ac.action_only for r in rows),
            ac_none=sum(r.ac.none for r in rows),
            sf_means=sf_means,
            sf_global=(float(np.mean([r.sf.global_pct for r in rows]))
                       if rows else None),
            tmc_mean=tmc_mean,
            cmc_mean=cmc_mean,
        ))
    return summaries


def analyze(index: CorpusIndex, top_k_override: int | None = None,
            seeds: tuple[int, ...] = DEFAULT_SEEDS) -> AnalysisBundle:
    frame = mt.compute_frame(index)
    sc_counts = mt.syntactic_correctness(index)
    consensus = compute_consensus(index, top_k_override)
    notes: list[str] = []
    results: list[tuple[str, StatResult]] = []
    posthoc: list[PosthocPair] = []

    # MQ family
    mq_groups = _per_model_values(frame, lambda r: r.mq)
    _kw_or_note("MQ", "methods_per_run", mq_groups, results, notes)
    posthoc.extend(_dunn_with_effects("MQ", mq_groups))

    # SR family
    params_groups = _per_model_values(
        frame, lambda r: r.sr.mean_params if r.sr else None)
    _kw_or_note("SR", "mean_params_per_run", params_groups, results, notes)
    posthoc.extend(_dunn_with_effects("SR", params_groups))
    lexdiv_groups = _per_model_values(
        frame, lambda r: r.sr.lexdiv if r.sr else None)
    _kw_or_note("SR", "lexdiv_per_run", lexdiv_groups, results, notes)

    vis_counts: dict[str, list[float]] = {}
    ret_counts: dict[str, list[float]] = {}
    ac_counts: dict[str, list[float]] = {}
    for entry in index.valid_entries():
        methods = entry.diagram.all_methods()
        vis = vis_counts.setdefault(entry.model_name, [0.0] * len(mt.VISIBILITY_KEYS))
        for m in methods:
            vis[mt.VISIBILITY_KEYS.index(m.visibility.value or "none")] += 1
        ret = ret_counts.setdefault(entry.model_name, [0.0, 0.0])
        for m in methods:
            non_void = m.return_type is not None and m.return_type.lower() != "void"
            ret[0 if non_void else 1] += 1
        ac_row = mt.annotation_completeness(methods)
        ac = ac_counts.setdefault(entry.model_name, [0.0, 0.0, 0.0])
        ac[0] += ac_row.full
        ac[1] += ac_row.uc_only
        ac[2] += ac_row.action_only + ac_row.none
    _chi2_or_note("SR", "visibility_usage", vis_counts, list(mt.VISIBILITY_KEYS),
                  results, notes)
    _chi2_or_note("SR", "return_types", ret_counts, ["non_void", "void"],
                  results, notes)

    # AC family (three columns: full, uc_only, none; action-only folds into none)
    _chi2_or_note("AC", "annotation_contingency", ac_counts,
                  ["full", "uc_only", "none"], results, notes)

    # SF family: per-category Kruskal-Wallis substitutes for the mixed ANOVA
    for category in mt.SF_CATEGORIES:
        groups = _per_model_values(frame, lambda r, c=category: r.sf.per_category[c])
        _kw_or_note("SF", f"jaccard_{category}", groups, results, notes)
    _kw_or_note("SF", "jaccard_global",
                _per_model_values(frame, lambda r: r.sf.global_pct), results, notes)

    # SC family
    sc_table = {m: [float(c), float(e)] for m, (c, e) in sc_counts.items()}
    _chi2_or_note("SC", "compilation", sc_table, ["correct", "errored"],
                  results, notes)

    # Consensus families
    if consensus is not None:
        _kw_or_note("TMC", "coverage_per_run", consensus.tmc_per_run, results, notes)
        _kw_or_note("TMC", "jaccard_to_benchmark", consensus.tmc_run_jaccard,
                    results, notes)
        posthoc.extend(_dunn_with_effects("TMC", consensus.tmc_per_run))
        _kw_or_note("CMC", "coverage_per_run", consensus.cmc_per_run, results, notes)
        posthoc.extend(_dunn_with_effects("CMC", consensus.cmc_per_run))
        consistencies = [p.consistency_pct for p in consensus.placements
                         if p.models_generating > 0]
        try:
            spc_result = wilcoxon_signed_rank(consistencies, mu0=100.0)
            spc_result.extra["measure"] = "consistency_vs_100"
            results.append(("SPC", spc_result))
        except (DegenerateInputError, ValueError) as exc:
            notes.append(f"SPC/consistency_vs_100: {exc}; skipped")

    # Holm correction within each family
    by_family: dict[str, list[StatResult]] = {}
    for family, result in results:
        by_family.setdefault(family, []).append(result)
    for family, family_results in by_family.items():
        adjusted = holm_adjust([r.p_raw for r in family_results])
        for result, p_adj in zip(family_results, adjusted):
            result.p_adjusted = p_adj

    # Bootstrap CIs for the headline per-model means, one row per seed
    bootstrap_rows: list[BootstrapRow] = []

    def _bootstrap_metric(metric: str, groups: dict[str, list[float]]) -> None:
        for model, values in sorted(groups.items()):
            if not values:
                continue
            mean = sum(values) / len(values)
            for seed in seeds:
                low, high = bootstrap_ci(values, seed=seed)
                bootstrap_rows.append(BootstrapRow(metric, model, seed, mean,
                                                   low, high))

    _bootstrap_metric("mq", mq_groups)
    if consensus is not None:
        _bootstrap_metric("tmc_coverage", consensus.tmc_per_run)
        _bootstrap_metric("cmc_coverage", consensus.cmc_per_run)

    return AnalysisBundle(
        frame=frame,
        models=index.models(),
        sc_counts=sc_counts,
        consensus=consensus,
        stat_results=results,
        posthoc=posthoc,
        bootstrap=bootstrap_rows,
        model_summaries=summarize_models(index, frame, sc_counts, consensus),
        notes=notes,
    )
