"""Per-diagram and per-model metric computation.

Covers method quantity, signature richness (visibility mix, camelCase rate,
parameter statistics, return-type completeness, name redundancy, lexical
diversity), annotation completeness, structural fidelity against the
methodless baseline, and syntactic correctness counts.

All functions are pure; raw method names are treated case-sensitively here
(name normalization belongs to the consensus analysis).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .corpus import CorpusEntry, CorpusIndex
from .puml import Diagram, MethodRecord, RelationshipKind

VISIBILITY_KEYS = ("+", "-", "#", "~", "none")

_CAMEL_RE = re.compile(r"[a-z][A-Za-z0-9]*")


class EmptyInputError(ValueError):
    """Operation requires at least one element."""


class TooFewNamesError(ValueError):
    """Lexical diversity needs at least two unique names."""


# ---------------------------------------------------------------------------
# Method quantity

def method_quantity(diagram: Diagram) -> int:
    """Total number of methods across all classes."""
    return sum(len(c.methods) for c in diagram.classes)


def methods_per_class(diagram: Diagram) -> dict[str, int]:
    return {c.name: len(c.methods) for c in diagram.classes}


# ---------------------------------------------------------------------------
# Signature richness components

def name_redundancy(names: list[str]) -> float:
    """Total names divided by distinct names (raw strings); 1.0 means all unique."""
    if not names:
        raise EmptyInputError("name_redundancy needs at least one name")
    return len(names) / len(set(names))


def return_type_completeness(methods: list[MethodRecord]) -> float:
    """Percent of methods with an explicit non-void return type."""
    if not methods:
        raise EmptyInputError("return_type_completeness needs at least one method")
    non_void = sum(
        1 for m in methods
        if m.return_type is not None and m.return_type.lower() != "void"
    )
    return 100.0 * non_void / len(methods)


@lru_cache(maxsize=1 << 20)
def _lev_dp(a: str, b: str) -> int:
    previous = list(range(len(b) + 1))
    for i in range(1, len(a) + 1):
        ca = a[i - 1]
        current = [i] + [0] * len(b)
        for j in range(1, len(b) + 1):
            sub = previous[j - 1] + (ca != b[j - 1])
            delete = previous[j] + 1
            insert = current[j - 1] + 1
            if delete < sub:
                sub = delete
            if insert < sub:
                sub = insert
            current[j] = sub
        previous = current
    return previous[-1]


def levenshtein(a: str, b: str) -> int:
    """Classic edit distance (insert/delete/substitute, unit costs).

    Pairs are memoized after stripping any common prefix/suffix, which makes
    corpus-wide pairwise sweeps cheap (method-name vocabularies repeat
    heavily across runs and models).
    """
    if a == b:
        return 0
    # shared affixes never change the distance
    start = 0
    limit = min(len(a), len(b))
    while start < limit and a[start] == b[start]:
        start += 1
    end_a, end_b = len(a), len(b)
    while end_a > start and end_b > start and a[end_a - 1] == b[end_b - 1]:
        end_a -= 1
        end_b -= 1
    a, b = a[start:end_a], b[start:end_b]
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b) or (len(a) == len(b) and a > b):
        a, b = b, a
    return _lev_dp(a, b)


def levenshtein_diversity(unique_names: set[str] | list[str]) -> float:
    """Mean pairwise normalized edit distance over unique names, in [0, 1]."""
    names = sorted(set(unique_names))
    if len(names) < 2:
        raise TooFewNamesError("levenshtein_diversity needs at least 2 unique names")
    total = 0.0
    pairs = 0
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            total += levenshtein(names[i], names[j]) / max(len(names[i]), len(names[j]))
            pairs += 1
    return total / pairs


def param_stats(methods: list[MethodRecord]) -> tuple[float, float]:
    """(mean, IQR) of per-method parameter counts; IQR uses type-7 quantiles."""
    if not methods:
        raise EmptyInputError("param_stats needs at least one method")
    counts = np.array([len(m.parameters) for m in methods], dtype=float)
    q1, q3 = np.percentile(counts, [25, 75])  # linear interpolation (type 7)
    return float(counts.mean()), float(q3 - q1)


def naming_convention_rate(names: list[str]) -> float:
    """Percent of names that are camelCase: lowercase initial, no underscores."""
    if not names:
        raise EmptyInputError("naming_convention_rate needs at least one name")
    ok = sum(1 for n in names if _CAMEL_RE.fullmatch(n))
    return 100.0 * ok / len(names)


def visibility_percentages(methods: list[MethodRecord]) -> dict[str, float]:
    """Share of each visibility marker among methods; keys are +,-,#,~,none."""
    if not methods:
        raise EmptyInputError("visibility_percentages needs at least one method")
    counts = {key: 0 for key in VISIBILITY_KEYS}
    for m in methods:
        counts[m.visibility.value or "none"] += 1
    return {key: 100.0 * n / len(methods) for key, n in counts.items()}


@dataclass
class SRRow:
    """Signature-richness summary for one method population."""

    visibility_pct: dict[str, float]
    camelcase_pct: float
    mean_params: float
    param_iqr: float
    rtc_pct: float
    redundancy: float
    lexdiv: float | None  # None when fewer than 2 unique names


def signature_richness(diagram: Diagram) -> SRRow:
    methods = diagram.all_methods()
    if not methods:
        raise EmptyInputError("signature_richness needs at least one method")
    names = [m.name for m in methods]
    unique = set(names)
    mean_params, iqr = param_stats(methods)
    return SRRow(
        visibility_pct=visibility_percentages(methods),
        camelcase_pct=naming_convention_rate(names),
        mean_params=mean_params,
        param_iqr=iqr,
        rtc_pct=return_type_completeness(methods),
        redundancy=name_redundancy(names),
        lexdiv=levenshtein_diversity(unique) if len(unique) >= 2 else None,
    )


# ---------------------------------------------------------------------------
# Annotation completeness

@dataclass
class ACRow:
    """Partition of methods by annotation completeness; categories sum to MQ."""

    full: int = 0
    uc_only: int = 0
    action_only: int = 0
    none: int = 0

    @property
    def total(self) -> int:
        return self.full + self.uc_only + self.action_only + self.none


def annotation_completeness(methods: list[MethodRecord]) -> ACRow:
    row = ACRow()
    for m in methods:
        if m.has_uc and m.has_action:
            row.full += 1
        elif m.has_uc:
            row.uc_only += 1
        elif m.has_action:
            row.action_only += 1
        else:
            row.none += 1
    return row


# ---------------------------------------------------------------------------
# Structural fidelity

SF_CATEGORIES = ("package", "enum", "enum_value", "class", "attribute", "relationship")

_UNDIRECTED_KINDS = {RelationshipKind.ASSOCIATION}


def _relationship_key(rel) -> tuple:
    if rel.kind in _UNDIRECTED_KINDS:
        endpoints: tuple = tuple(sorted((rel.source, rel.target)))
    else:
        endpoints = (rel.source, rel.target)
    return (rel.kind.value, endpoints)


def element_keys(diagram: Diagram) -> dict[str, set]:
    """Canonical element keys per category, ignoring cosmetic details.

    Attributes are keyed by (class, name) ignoring type and visibility;
    relationships by kind and endpoints (unordered for associations),
    ignoring multiplicities and labels.
    """
    return {
        "package": {p.name for p in diagram.packages},
        "enum": {e.name for e in diagram.enums},
        "enum_value": {(e.name, v) for e in diagram.enums for v in e.values},
        "class": {c.name for c in diagram.classes},
        "attribute": {(c.name, a.name) for c in diagram.classes for a in c.attributes},
        "relationship": {_relationship_key(r) for r in diagram.relationships},
    }


def jaccard_percent(a: set, b: set) -> float:
    """100 * |a∩b| / |a∪b|; both-empty counts as full preservation (100)."""
    union = a | b
    if not union:
        return 100.0
    return 100.0 * len(a & b) / len(union)


@dataclass
class SFRow:
    per_category: dict[str, float]
    global_pct: float


def structural_fidelity(augmented: Diagram, baseline: Diagram) -> SFRow:
    """Per-category Jaccard preservation of baseline structure, plus the mean."""
    aug_keys = element_keys(augmented)
    base_keys = element_keys(baseline)
    per_category = {
        cat: jaccard_percent(aug_keys[cat], base_keys[cat]) for cat in SF_CATEGORIES
    }
    global_pct = sum(per_category.values()) / len(SF_CATEGORIES)
    return SFRow(per_category=per_category, global_pct=global_pct)


# ---------------------------------------------------------------------------
# Syntactic correctness

def syntactic_correctness(index: CorpusIndex) -> dict[str, tuple[int, int]]:
    """Per-model (correct, errored) diagram counts."""
    result: dict[str, tuple[int, int]] = {}
    for model in index.models():
        entries = index.entries_for(model)
        correct = sum(1 for e in entries if e.is_valid)
        result[model] = (correct, len(entries) - correct)
    return result


# ---------------------------------------------------------------------------
# Metric frame

@dataclass
class DiagramMetrics:
    """One metric-frame row: every per-diagram measure for one (model, run)."""

    model: str
    run: int
    mq: int
    sr: SRRow | None
    ac: ACRow
    sf: SFRow
    per_class_mq: dict[str, int] = field(default_factory=dict)


def compute_entry_metrics(entry: CorpusEntry, baseline: Diagram) -> DiagramMetrics:
    assert entry.diagram is not None
    d = entry.diagram
    methods = d.all_methods()
    return DiagramMetrics(
        model=entry.model_name,
        run=entry.run_index,
        mq=method_quantity(d),
        sr=signature_richness(d) if methods else None,
        ac=annotation_completeness(methods),
        sf=structural_fidelity(d, baseline),
        per_class_mq=methods_per_class(d),
    )


def compute_frame(index: CorpusIndex) -> list[DiagramMetrics]:
    """Metric rows for every valid entry, ordered by (model, run)."""
    return [compute_entry_metrics(e, index.baseline) for e in index.valid_entries()]


FRAME_COLUMNS = (
    ["model", "run", "mq"]
    + [f"vis_{k}" for k in VISIBILITY_KEYS]
    + ["camelcase_pct", "mean_params", "param_iqr", "rtc_pct", "redundancy",
       "lexdiv", "ac_full", "ac_uc_only", "ac_action_only", "ac_none"]
    + [f"sf_{c}" for c in SF_CATEGORIES]
    + ["sf_global"]
)


def _fmt(value: float | None, places: int = 4) -> str:
    return "" if value is None else f"{value:.{places}f}"


def frame_rows(frame: list[DiagramMetrics]) -> list[list[str]]:
    """Render the metric frame as CSV-ready string rows (4 decimal places)."""
    rows = []
    for m in frame:
        sr = m.sr
        rows.append(
            [m.model, str(m.run), str(m.mq)]
            + [_fmt(sr.visibility_pct[k]) if sr else "" for k in VISIBILITY_KEYS]
            + [
                _fmt(sr.camelcase_pct) if sr else "",
                _fmt(sr.mean_params) if sr else "",
                _fmt(sr.param_iqr) if sr else "",
                _fmt(sr.rtc_pct) if sr else "",
                _fmt(sr.redundancy) if sr else "",
                _fmt(sr.lexdiv) if sr and sr.lexdiv is not None else "",
                str(m.ac.full), str(m.ac.uc_only), str(m.ac.action_only),
                str(m.ac.none),
            ]
            + [_fmt(m.sf.per_category[c]) for c in SF_CATEGORIES]
            + [_fmt(m.sf.global_pct)]
        )
    return rows
