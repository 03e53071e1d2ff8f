"""Report emission: CSV tables, a Markdown summary, and deterministic SVG charts.

CSV dialect: UTF-8, comma separator, LF line endings, header row, minimal
RFC quoting.  Percentages display with 2 decimals (4 in the metric frame);
identical inputs produce byte-identical output files.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import metrics as mt
from .analysis import AnalysisBundle

KNOWN_TABLES = ("mq_summary", "sr_metrics", "ac_breakdown", "sf_detail",
                "sc_contingency", "tmc", "cmc", "spc", "stats")


class EmptySelectionError(ValueError):
    pass


class UnknownTableError(ValueError):
    pass


@dataclass
class ReportSpec:
    tables: tuple[str, ...] = KNOWN_TABLES
    rounding: int = 2
    chart_toggle: bool = False
    format: str = "csv"  # csv | json

    def __post_init__(self) -> None:
        if not self.tables:
            raise EmptySelectionError("no tables selected")
        unknown = set(self.tables) - set(KNOWN_TABLES)
        if unknown:
            raise UnknownTableError(f"unknown tables: {sorted(unknown)}")
        if self.rounding < 0:
            raise ValueError("rounding must be >= 0")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    path.write_bytes(buffer.getvalue().encode("utf-8"))


def _write_json(path: Path, header: list[str], rows: list[list]) -> None:
    records = [dict(zip(header, row)) for row in rows]
    path.write_bytes((json.dumps(records, indent=2) + "\n").encode("utf-8"))


def _num(value, places: int) -> str:
    if value is None:
        return ""
    return f"{value:.{places}f}"


def emit_tables(bundle: AnalysisBundle, spec: ReportSpec,
                out_dir: Path | str) -> list[Path]:
    """Write every selected table; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    r = spec.rounding
    written: list[Path] = []

    def emit(name: str, header: list[str], rows: list[list]) -> None:
        if spec.format == "json":
            path = out / f"{name}.json"
            _write_json(path, header, rows)
        else:
            path = out / f"{name}.csv"
            _write_csv(path, header, rows)
        written.append(path)

    summaries = bundle.model_summaries

    if "mq_summary" in spec.tables:
        ordered = sorted(summaries, key=lambda s: (-s.mq_total, s.model))
        emit("mq_summary",
             ["model", "total_methods", "min_per_run", "max_per_run",
              "syntax_errors"],
             [[s.model, s.mq_total, s.mq_min, s.mq_max, s.syntax_errors]
              for s in ordered])

    if "sr_metrics" in spec.tables:
        emit("sr_metrics",
             ["model", "mean_params", "param_iqr", "rtc_pct", "lexdiv_run_mean",
              "lexdiv_pooled", "redundancy", "camelcase_pct",
              "vis_public", "vis_private", "vis_protected", "vis_package",
              "vis_none"],
             [[s.model, _num(s.mean_params, r), _num(s.param_iqr, r),
               _num(s.rtc_pct, r), _num(s.lexdiv_run_mean, 3),
               _num(s.lexdiv_pooled, 3), _num(s.redundancy, r),
               _num(s.camelcase_pct, r)]
              + [_num(s.visibility_pct.get(k), r)
                 for k in mt.VISIBILITY_KEYS]
              for s in summaries])

    if "ac_breakdown" in spec.tables:
        rows = []
        for s in summaries:
            total = s.ac_full + s.ac_uc_only + s.ac_action_only + s.ac_none
            def pct(x: int) -> str:
                return _num(100.0 * x / total, r) if total else ""
            rows.append([s.model, s.ac_full, s.ac_uc_only, s.ac_action_only,
                         s.ac_none, pct(s.ac_full), pct(s.ac_uc_only),
                         pct(s.ac_action_only), pct(s.ac_none)])
        emit("ac_breakdown",
             ["model", "full", "uc_only", "action_only", "none", "full_pct",
              "uc_only_pct", "action_only_pct", "none_pct"], rows)

    if "sf_detail" in spec.tables:
        emit("sf_detail",
             ["model", "package", "enum", "enum_value", "class", "attribute",
              "relationship", "global"],
             [[s.model] + [_num(s.sf_means.get(c), r) for c in mt.SF_CATEGORIES]
              + [_num(s.sf_global, r)] for s in summaries])

    if "sc_contingency" in spec.tables:
        emit("sc_contingency",
             ["model", "correct", "errored"],
             [[m, c, e] for m, (c, e) in sorted(bundle.sc_counts.items())])

    consensus = bundle.consensus
    if "tmc" in spec.tables and consensus is not None:
        rows = []
        for model in sorted(consensus.tmc_per_run):
            values = consensus.tmc_per_run[model]
            mean = float(np.mean(values))
            sem = (float(np.std(values, ddof=1)) / len(values) ** 0.5
                   if len(values) > 1 else 0.0)
            rows.append([model, len(values), _num(mean, r), _num(sem, 4),
                         _num(mean - 1.96 * sem, r), _num(mean + 1.96 * sem, r)])
        emit("tmc_coverage",
             ["model", "runs", "mean_coverage_pct", "sem", "ci95_low",
              "ci95_high"], rows)
        emit("tmc_per_run",
             ["model", "run", "coverage_pct", "benchmark_jaccard"],
             [[model, run, _num(cov, r), _num(jac, 4)]
              for model in sorted(consensus.tmc_per_run)
              for run, cov, jac in zip(consensus.run_indices[model],
                                       consensus.tmc_per_run[model],
                                       consensus.tmc_run_jaccard[model])])
        models = sorted(consensus.tmc_per_run)
        emit("tmc_jaccard_matrix",
             ["model"] + models,
             [[a] + [_num(consensus.jaccard_matrix.get((a, b)), 4)
                     for b in models] for a in models])

    if "cmc" in spec.tables and consensus is not None:
        rows = []
        for model in sorted(consensus.cmc_per_run):
            values = consensus.cmc_per_run[model]
            mean = float(np.mean(values))
            sem = (float(np.std(values, ddof=1)) / len(values) ** 0.5
                   if len(values) > 1 else 0.0)
            rows.append([model, len(values), _num(mean, r), _num(sem, 4),
                         _num(mean - 1.96 * sem, r), _num(mean + 1.96 * sem, r)])
        emit("cmc_coverage",
             ["model", "runs", "mean_coverage_pct", "sem", "ci95_low",
              "ci95_high"], rows)
        emit("cmc_per_run",
             ["model", "run", "coverage_pct"],
             [[model, run, _num(cov, r)]
              for model in sorted(consensus.cmc_per_run)
              for run, cov in zip(consensus.run_indices[model],
                                  consensus.cmc_per_run[model])])
        emit("core_methods",
             ["rank", "method", "count", "models_generating"],
             [[i + 1, name, consensus.core_counts[name],
               consensus.agreement[name]]
              for i, name in enumerate(consensus.tmc_benchmark.names)])
        models = sorted(next(iter(consensus.presence.values())).keys()) \
            if consensus.presence else []
        emit("presence_matrix",
             ["method"] + models,
             [[name] + [int(consensus.presence[name][m]) for m in models]
              for name in consensus.tmc_benchmark.names])

    if "spc" in spec.tables and consensus is not None:
        emit("spc_placement",
             ["method", "dominant_class", "models_generating",
              "models_matching", "consistency_pct", "dominant_tied"],
             [[p.method, p.dominant_class, p.models_generating,
               p.models_matching, _num(p.consistency_pct, 1),
               int(p.dominant_tied)] for p in consensus.placements])

    if "stats" in spec.tables:
        rows = []
        for family, result in bundle.stat_results:
            effect = result.effect
            rows.append([
                family, result.test_name, result.extra.get("measure", ""),
                _num(result.statistic, 4),
                str(result.df) if result.df is not None else "",
                _num(result.p_raw, 6),
                _num(result.p_adjusted, 6) if result.p_adjusted is not None else "",
                effect.name if effect else "",
                _num(effect.value, 4) if effect else "",
                effect.magnitude if effect else "",
            ])
        emit("stats",
             ["family", "test", "measure", "statistic", "df", "p_raw", "p_holm",
              "effect_name", "effect_value", "magnitude"], rows)
        emit("posthoc",
             ["family", "group_a", "group_b", "z", "p_raw", "p_holm",
              "cliffs_delta", "magnitude", "rank_biserial"],
             [[p.family, p.group_a, p.group_b, _num(p.z, 4), _num(p.p_raw, 6),
               _num(p.p_holm, 6), _num(p.cliffs, 4), p.magnitude,
               _num(p.r_rb, 4)] for p in bundle.posthoc])
        emit("bootstrap",
             ["metric", "model", "seed", "mean", "ci_low", "ci_high"],
             [[b.metric, b.model, b.seed, _num(b.mean, 4), _num(b.ci_low, 4),
               _num(b.ci_high, 4)] for b in bundle.bootstrap])

    # The per-run metric frame always ships with the report.
    if spec.format == "json":
        frame_path = out / "metric_frame.json"
        _write_json(frame_path, list(mt.FRAME_COLUMNS), mt.frame_rows(bundle.frame))
    else:
        frame_path = out / "metric_frame.csv"
        _write_csv(frame_path, list(mt.FRAME_COLUMNS), mt.frame_rows(bundle.frame))
    written.append(frame_path)

    summary_path = out / "summary.md"
    summary_path.write_bytes(render_summary(bundle, spec).encode("utf-8"))
    written.append(summary_path)
    return written


def render_summary(bundle: AnalysisBundle, spec: ReportSpec) -> str:
    r = spec.rounding
    lines = ["# Corpus evaluation summary", ""]
    total_methods = sum(s.mq_total for s in bundle.model_summaries)
    total_diagrams = sum(s.runs_total for s in bundle.model_summaries)
    valid_diagrams = sum(s.runs_valid for s in bundle.model_summaries)
    lines.append(f"- diagrams: {total_diagrams} ({valid_diagrams} valid)")
    lines.append(f"- methods (valid diagrams): {total_methods}")
    if bundle.consensus is not None:
        lines.append(f"- consensus k: {bundle.consensus.k_used} "
                     f"(computed {bundle.consensus.k_computed})")
        lines.append(f"- mean placement consistency: "
                     f"{bundle.consensus.spc_mean:.{r}f}%")
    lines.append("")
    lines.append("## Methods per model")
    lines.append("")
    lines.append("| model | total | min/run | max/run | syntax errors |")
    lines.append("|---|---|---|---|---|")
    for s in sorted(bundle.model_summaries, key=lambda s: (-s.mq_total, s.model)):
        lines.append(f"| {s.model} | {s.mq_total} | {s.mq_min} | {s.mq_max} "
                     f"| {s.syntax_errors} |")
    lines.append("")
    lines.append("## Statistical tests")
    lines.append("")
    lines.append("| family | test | measure | statistic | df | p (raw) | p (Holm) |")
    lines.append("|---|---|---|---|---|---|---|")
    for family, result in bundle.stat_results:
        p_holm = (f"{result.p_adjusted:.6f}"
                  if result.p_adjusted is not None else "")
        df = str(result.df) if result.df is not None else ""
        lines.append(
            f"| {family} | {result.test_name} | {result.extra.get('measure', '')} "
            f"| {result.statistic:.4f} | {df} | {result.p_raw:.6f} | {p_holm} |"
        )
    if bundle.notes:
        lines.append("")
        lines.append("## Notes")
        lines.append("")
        for note in bundle.notes:
            lines.append(f"- {note}")
    lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Deterministic SVG charts

_PALETTE = ("#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3",
            "#937860", "#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd")


def _svg_header(width: int, height: int) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]


def _f(x: float) -> str:
    return f"{x:.2f}"


def svg_bar_chart(labels: list[str], values: list[float], sems: list[float],
                  title: str, path: Path) -> None:
    """Bar chart with +-SEM (thick) and +-1.96*SEM (thin) whiskers."""
    width, height = 640, 400
    margin_left, margin_bottom, margin_top = 50, 70, 30
    plot_w = width - margin_left - 20
    plot_h = height - margin_top - margin_bottom
    top = max((v + 1.96 * s for v, s in zip(values, sems)), default=1.0) or 1.0
    top *= 1.05

    def y(v: float) -> float:
        return margin_top + plot_h * (1.0 - v / top)

    parts = _svg_header(width, height)
    parts.append(f'<text x="{width // 2}" y="18" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="13">{title}</text>')
    n = max(len(labels), 1)
    slot = plot_w / n
    bar_w = slot * 0.6
    parts.append(f'<line x1="{margin_left}" y1="{_f(y(0))}" '
                 f'x2="{width - 20}" y2="{_f(y(0))}" stroke="black"/>')
    parts.append(f'<line x1="{margin_left}" y1="{margin_top}" '
                 f'x2="{margin_left}" y2="{_f(y(0))}" stroke="black"/>')
    for i, (label, value, sem) in enumerate(zip(labels, values, sems)):
        x0 = margin_left + slot * i + (slot - bar_w) / 2
        color = _PALETTE[i % len(_PALETTE)]
        parts.append(f'<rect x="{_f(x0)}" y="{_f(y(value))}" width="{_f(bar_w)}" '
                     f'height="{_f(y(0) - y(value))}" fill="{color}"/>')
        cx = x0 + bar_w / 2
        if sem > 0:
            for mult, stroke_w in ((1.0, 2.0), (1.96, 1.0)):
                lo, hi = y(value - mult * sem), y(value + mult * sem)
                parts.append(f'<line x1="{_f(cx)}" y1="{_f(hi)}" x2="{_f(cx)}" '
                             f'y2="{_f(lo)}" stroke="black" '
                             f'stroke-width="{stroke_w}"/>')
                cap = 4 * stroke_w
                for yy in (hi, lo):
                    parts.append(f'<line x1="{_f(cx - cap)}" y1="{_f(yy)}" '
                                 f'x2="{_f(cx + cap)}" y2="{_f(yy)}" '
                                 f'stroke="black" stroke-width="{stroke_w}"/>')
        parts.append(f'<text x="{_f(cx)}" y="{height - margin_bottom + 14}" '
                     f'text-anchor="end" font-family="sans-serif" font-size="10" '
                     f'transform="rotate(-35 {_f(cx)} '
                     f'{height - margin_bottom + 14})">{label}</text>')
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        v = top * frac
        parts.append(f'<text x="{margin_left - 4}" y="{_f(y(v) + 3)}" '
                     f'text-anchor="end" font-family="sans-serif" '
                     f'font-size="9">{v:.0f}</text>')
    parts.append("</svg>")
    path.write_bytes(("\n".join(parts) + "\n").encode("utf-8"))


def svg_box_plot(labels: list[str], groups: list[list[float]], title: str,
                 path: Path) -> None:
    """Box plot with type-7 quartiles and min/max whiskers."""
    width, height = 640, 400
    margin_left, margin_bottom, margin_top = 50, 70, 30
    plot_w = width - margin_left - 20
    plot_h = height - margin_top - margin_bottom
    all_values = [v for g in groups for v in g]
    top = (max(all_values) if all_values else 1.0) or 1.0
    top *= 1.05

    def y(v: float) -> float:
        return margin_top + plot_h * (1.0 - v / top)

    parts = _svg_header(width, height)
    parts.append(f'<text x="{width // 2}" y="18" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="13">{title}</text>')
    n = max(len(labels), 1)
    slot = plot_w / n
    box_w = slot * 0.5
    parts.append(f'<line x1="{margin_left}" y1="{_f(y(0))}" '
                 f'x2="{width - 20}" y2="{_f(y(0))}" stroke="black"/>')
    for i, (label, group) in enumerate(zip(labels, groups)):
        if not group:
            continue
        q1, q2, q3 = (float(q) for q in np.percentile(group, [25, 50, 75]))
        lo, hi = min(group), max(group)
        cx = margin_left + slot * i + slot / 2
        x0 = cx - box_w / 2
        color = _PALETTE[i % len(_PALETTE)]
        parts.append(f'<line x1="{_f(cx)}" y1="{_f(y(hi))}" x2="{_f(cx)}" '
                     f'y2="{_f(y(lo))}" stroke="black"/>')
        parts.append(f'<rect x="{_f(x0)}" y="{_f(y(q3))}" width="{_f(box_w)}" '
                     f'height="{_f(y(q1) - y(q3))}" fill="{color}" '
                     f'stroke="black"/>')
        parts.append(f'<line x1="{_f(x0)}" y1="{_f(y(q2))}" '
                     f'x2="{_f(x0 + box_w)}" y2="{_f(y(q2))}" stroke="black" '
                     f'stroke-width="2"/>')
        parts.append(f'<text x="{_f(cx)}" y="{height - margin_bottom + 14}" '
                     f'text-anchor="end" font-family="sans-serif" font-size="10" '
                     f'transform="rotate(-35 {_f(cx)} '
                     f'{height - margin_bottom + 14})">{label}</text>')
    parts.append("</svg>")
    path.write_bytes(("\n".join(parts) + "\n").encode("utf-8"))


def emit_charts(bundle: AnalysisBundle, spec: ReportSpec,
                out_dir: Path | str) -> list[Path]:
    """Write SVG charts (bar + box for MQ, coverage bars, SF global bar)."""
    if not spec.chart_toggle:
        return []
    charts_dir = Path(out_dir) / "charts"
    charts_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    mq_by_model: dict[str, list[float]] = {}
    for row in bundle.frame:
        mq_by_model.setdefault(row.model, []).append(float(row.mq))
    labels = sorted(mq_by_model)

    def sem(values: list[float]) -> float:
        if len(values) < 2:
            return 0.0
        return float(np.std(values, ddof=1)) / len(values) ** 0.5

    if labels:
        means = [float(np.mean(mq_by_model[m])) for m in labels]
        sems = [sem(mq_by_model[m]) for m in labels]
        path = charts_dir / "mq_mean_bar.svg"
        svg_bar_chart(labels, means, sems, "Mean methods per run", path)
        written.append(path)
        path = charts_dir / "mq_box.svg"
        svg_box_plot(labels, [mq_by_model[m] for m in labels],
                     "Methods per run", path)
        written.append(path)

    consensus = bundle.consensus
    if consensus is not None:
        for metric, per_run in (("tmc", consensus.tmc_per_run),
                                ("cmc", consensus.cmc_per_run)):
            models = sorted(per_run)
            if not models:
                continue
            means = [float(np.mean(per_run[m])) for m in models]
            sems = [sem(per_run[m]) for m in models]
            path = charts_dir / f"{metric}_coverage_bar.svg"
            svg_bar_chart(models, means, sems,
                          f"{metric.upper()} coverage (%)", path)
            written.append(path)

    sf_by_model: dict[str, list[float]] = {}
    for row in bundle.frame:
        sf_by_model.setdefault(row.model, []).append(row.sf.global_pct)
    if sf_by_model:
        models = sorted(sf_by_model)
        means = [float(np.mean(sf_by_model[m])) for m in models]
        sems = [sem(sf_by_model[m]) for m in models]
        path = charts_dir / "sf_global_bar.svg"
        svg_bar_chart(models, means, sems, "Structural fidelity (global %)", path)
        written.append(path)
    return written
