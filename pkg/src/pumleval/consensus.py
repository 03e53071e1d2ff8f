"""Cross-model lexical agreement and structural placement consistency.

Method names are pooled over the corpus into a frequency table keyed by
normalized name (lowercased, non-alphanumerics stripped).  The counting unit
is one occurrence per (diagram, class, name) triple, so a name repeated
inside one class of one diagram counts once for that class.  The top-k names
form the benchmark set; coverage, per-method model agreement, and dominant
class placement are all derived from it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .corpus import CorpusEntry
from .puml import Diagram

_NON_ALNUM_RE = re.compile(r"[^a-z0-9]+")


class EmptyInputError(ValueError):
    pass


class ZeroDiagramsError(ValueError):
    pass


class InsufficientNamesError(ValueError):
    pass


class UnknownNameError(KeyError):
    pass


class NoCoreMethodsGeneratedError(ValueError):
    pass


def normalize_name(raw: str) -> str:
    """Collapse camelCase / snake_case spelling variants to one canonical form."""
    if not raw:
        raise EmptyInputError("cannot normalize an empty name")
    return _NON_ALNUM_RE.sub("", raw.lower())


def compute_k(total_methods: int, total_diagrams: int) -> int:
    """Benchmark size: ceiling of mean methods per diagram."""
    if total_diagrams <= 0:
        raise ZeroDiagramsError("total_diagrams must be positive")
    return -(-total_methods // total_diagrams)


@dataclass
class NameStats:
    count: int = 0
    raw_variants: set[str] = field(default_factory=set)
    class_counts: dict[str, int] = field(default_factory=dict)


@dataclass
class FrequencyTable:
    entries: dict[str, NameStats] = field(default_factory=dict)

    def add_diagram(self, diagram: Diagram) -> None:
        for cls in diagram.classes:
            seen_in_class: set[str] = set()
            for method in cls.methods:
                norm = normalize_name(method.name)
                stats = self.entries.setdefault(norm, NameStats())
                stats.raw_variants.add(method.name)
                if norm in seen_in_class:
                    continue
                seen_in_class.add(norm)
                stats.count += 1
                stats.class_counts[cls.name] = stats.class_counts.get(cls.name, 0) + 1

    def merge(self, other: "FrequencyTable") -> None:
        for norm, stats in other.entries.items():
            mine = self.entries.setdefault(norm, NameStats())
            mine.count += stats.count
            mine.raw_variants |= stats.raw_variants
            for cls, count in stats.class_counts.items():
                mine.class_counts[cls] = mine.class_counts.get(cls, 0) + count

    def ordered_names(self) -> list[str]:
        return sorted(self.entries, key=lambda n: (-self.entries[n].count, n))


def build_frequency_table(entries: list[CorpusEntry]) -> FrequencyTable:
    table = FrequencyTable()
    for entry in entries:
        if entry.diagram is not None:
            table.add_diagram(entry.diagram)
    return table


@dataclass
class ConsensusSet:
    """The k most frequent names, ordered by (-count, name)."""

    k: int
    names: list[str]

    def as_set(self) -> set[str]:
        return set(self.names)


def top_k(table: FrequencyTable, k: int) -> ConsensusSet:
    if k < 1:
        raise InsufficientNamesError("k must be at least 1")
    ordered = table.ordered_names()
    if len(ordered) < k:
        raise InsufficientNamesError(
            f"table has {len(ordered)} names, cannot take top {k}"
        )
    return ConsensusSet(k=k, names=ordered[:k])


def coverage(model_runs: list[set[str]],
             benchmark: ConsensusSet) -> tuple[list[float], float]:
    """Per-run percent of benchmark names present, and the mean over runs."""
    if not benchmark.names:
        raise EmptyInputError("benchmark set is empty")
    bench = benchmark.as_set()
    per_run = [100.0 * len(run & bench) / benchmark.k for run in model_runs]
    mean = sum(per_run) / len(per_run) if per_run else 0.0
    return per_run, mean


def pairwise_model_jaccard(model_a_names: set[str], model_b_names: set[str]) -> float:
    if not model_a_names and not model_b_names:
        raise EmptyInputError("both name sets are empty")
    union = model_a_names | model_b_names
    return len(model_a_names & model_b_names) / len(union)


def agreement_counts(core: ConsensusSet,
                     per_model_names: dict[str, set[str]]) -> dict[str, int]:
    """For each core name, how many models generated it (in any run)."""
    return {
        name: sum(1 for names in per_model_names.values() if name in names)
        for name in core.names
    }


def dominant_class(table: FrequencyTable, name: str) -> tuple[str, bool]:
    """Class most frequently owning *name*; lexicographic tie-break, flagged."""
    stats = table.entries.get(name)
    if stats is None or not stats.class_counts:
        raise UnknownNameError(name)
    best = min(stats.class_counts, key=lambda c: (-stats.class_counts[c], c))
    top_count = stats.class_counts[best]
    tied = sum(1 for c in stats.class_counts.values() if c == top_count) > 1
    return best, tied


def class_match_rate(model_assignments: dict[str, str], core: ConsensusSet,
                     dominants: dict[str, str]) -> float:
    """Percent of generated core methods the model placed in the dominant class."""
    generated = [name for name in core.names if name in model_assignments]
    if not generated:
        raise NoCoreMethodsGeneratedError("model generated no core methods")
    matching = sum(1 for name in generated
                   if model_assignments[name] == dominants.get(name))
    return 100.0 * matching / len(generated)


@dataclass
class PlacementRecord:
    method: str
    dominant_class: str
    models_generating: int
    models_matching: int
    consistency_pct: float
    dominant_tied: bool = False


def placement_records(core: ConsensusSet, global_table: FrequencyTable,
                      per_model_tables: dict[str, FrequencyTable],
                      ) -> list[PlacementRecord]:
    """Placement-consistency table: one record per core method.

    A model "matches" when its own modal placement for the method equals the
    corpus-wide dominant class.
    """
    records = []
    for name in core.names:
        dominant, tied = dominant_class(global_table, name)
        generating = 0
        matching = 0
        for table in per_model_tables.values():
            if name not in table.entries:
                continue
            generating += 1
            model_dominant, _ = dominant_class(table, name)
            if model_dominant == dominant:
                matching += 1
        consistency = 100.0 * matching / generating if generating else 0.0
        records.append(PlacementRecord(
            method=name,
            dominant_class=dominant,
            models_generating=generating,
            models_matching=matching,
            consistency_pct=consistency,
            dominant_tied=tied,
        ))
    return records


def model_modal_assignments(table: FrequencyTable) -> dict[str, str]:
    """Each normalized name's modal owning class within one model's table."""
    return {name: dominant_class(table, name)[0] for name in table.entries}


# ---------------------------------------------------------------------------
# Name-set extraction helpers

def run_name_set(diagram: Diagram, normalized: bool) -> set[str]:
    names = {m.name for m in diagram.all_methods()}
    if normalized:
        return {normalize_name(n) for n in names}
    return names


def per_model_run_sets(entries: list[CorpusEntry],
                       normalized: bool) -> dict[str, list[set[str]]]:
    """Model -> per-run method-name sets, runs in run-index order."""
    return {
        model: [s for _, s in runs]
        for model, runs in per_model_indexed_sets(entries, normalized).items()
    }


def per_model_indexed_sets(entries: list[CorpusEntry], normalized: bool,
                           ) -> dict[str, list[tuple[int, set[str]]]]:
    """Like per_model_run_sets but keeps each run's index alongside its set."""
    result: dict[str, list[tuple[int, set[str]]]] = {}
    for entry in sorted(entries, key=lambda e: (e.model_name, e.run_index)):
        if entry.diagram is None:
            continue
        result.setdefault(entry.model_name, []).append(
            (entry.run_index, run_name_set(entry.diagram, normalized))
        )
    return result


def per_model_pooled_sets(entries: list[CorpusEntry],
                          normalized: bool) -> dict[str, set[str]]:
    pooled: dict[str, set[str]] = {}
    for model, runs in per_model_run_sets(entries, normalized).items():
        pooled[model] = set().union(*runs) if runs else set()
    return pooled
