"""Corpus discovery, loading and persistence.

Corpus files follow the ``ModelName_RunX.puml`` naming convention.  Entries
that fail to parse stay in the index (their validity feeds the syntactic
correctness statistics) but carry no diagram, which excludes them from every
other metric.
"""

from __future__ import annotations

import json
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .puml import (
    AttributeDecl,
    Diagram,
    EnumDecl,
    MethodRecord,
    PackageDecl,
    Parameter,
    Provenance,
    Relationship,
    RelationshipKind,
    UmlClass,
    ValidationReport,
    Visibility,
    parse_and_validate,
)

log = logging.getLogger(__name__)

_FILENAME_RE = re.compile(r"^(?P<model>.+)_[Rr][Uu][Nn](?P<run>\d+)$")


class NamingError(ValueError):
    """Filename does not follow the ModelName_RunX pattern."""


class BaselineInvalidError(ValueError):
    """The baseline diagram failed to parse or contains methods."""


class CorpusError(ValueError):
    """Inconsistent corpus contents (e.g. duplicate model/run pairs)."""


def parse_filename(name: str) -> tuple[str, int]:
    """Extract (model_name, run_index) from a corpus file basename.

    Splits at the last underscore before a case-insensitive ``run<digits>``
    suffix; the extension is ignored.
    """
    stem = Path(name).stem
    match = _FILENAME_RE.match(stem)
    if not match:
        raise NamingError(f"{name!r} does not match the ModelName_RunX pattern")
    run_index = int(match.group("run"))
    if run_index < 1:
        raise NamingError(f"{name!r} has non-positive run index {run_index}")
    return match.group("model"), run_index


@dataclass
class CorpusEntry:
    model_name: str
    run_index: int
    source_path: str
    diagram: Diagram | None
    validation: ValidationReport
    external_valid: bool | None = None  # set by the external-validator hook

    @property
    def is_valid(self) -> bool:
        if self.external_valid is not None:
            return self.external_valid
        return self.validation.is_valid


@dataclass
class CorpusIndex:
    entries: list[CorpusEntry]
    baseline: Diagram
    skipped_files: list[str] = field(default_factory=list)

    def models(self) -> list[str]:
        return sorted({e.model_name for e in self.entries})

    def entries_for(self, model: str) -> list[CorpusEntry]:
        return [e for e in self.entries if e.model_name == model]

    def valid_entries(self) -> list[CorpusEntry]:
        """Entries that parsed and validated; the ones metrics run on."""
        return [e for e in self.entries if e.diagram is not None and e.is_valid]

    def get(self, model: str, run: int) -> CorpusEntry | None:
        for e in self.entries:
            if e.model_name == model and e.run_index == run:
                return e
        return None


def load_baseline(path: Path | str) -> Diagram:
    """Parse the methodless baseline; any method makes it invalid."""
    text = Path(path).read_text(encoding="utf-8")
    diagram, report = parse_and_validate(text)
    if diagram is None:
        raise BaselineInvalidError(
            f"baseline {path} failed to parse: {report.issues[0].message}"
        )
    method_count = len(diagram.all_methods())
    if method_count:
        raise BaselineInvalidError(
            f"baseline {path} must be methodless but declares {method_count} method(s)"
        )
    return diagram


def _load_entry(path: Path) -> CorpusEntry:
    model, run = parse_filename(path.name)
    text = path.read_text(encoding="utf-8")
    diagram, report = parse_and_validate(text)
    if diagram is not None:
        diagram.provenance = Provenance(model_name=model, run_index=run)
    return CorpusEntry(
        model_name=model,
        run_index=run,
        source_path=str(path),
        diagram=diagram,
        validation=report,
    )


def scan_corpus(directory: Path | str, baseline: Path | str,
                workers: int = 1) -> CorpusIndex:
    """Load every ``.puml`` file under *directory* into a deterministic index.

    Files that do not follow the naming pattern are skipped (and recorded);
    unparseable diagrams are retained with ``diagram=None``.  Entry order is
    (model_name, run_index) regardless of filesystem enumeration order.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {directory}")
    baseline_diagram = load_baseline(baseline)

    paths = []
    skipped = []
    for path in sorted(directory.glob("*.puml")):
        try:
            parse_filename(path.name)
        except NamingError:
            log.warning("skipping %s: not a ModelName_RunX name", path.name)
            skipped.append(path.name)
            continue
        paths.append(path)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(_load_entry, paths))
    else:
        entries = [_load_entry(p) for p in paths]

    entries.sort(key=lambda e: (e.model_name, e.run_index))
    seen: set[tuple[str, int]] = set()
    for entry in entries:
        key = (entry.model_name, entry.run_index)
        if key in seen:
            raise CorpusError(f"duplicate corpus entry for {key}")
        seen.add(key)
    return CorpusIndex(entries=entries, baseline=baseline_diagram,
                       skipped_files=skipped)


class NoDiagramError(ValueError):
    """Entry has no parsed diagram to export."""


def export_parsed(entry: CorpusEntry) -> dict:
    """Flatten a parsed entry to the JSON schema used for persisted artifacts."""
    if entry.diagram is None:
        raise NoDiagramError(f"{entry.source_path} has no parsed diagram")
    d = entry.diagram
    return {
        "model": entry.model_name,
        "run": entry.run_index,
        "diagram_name": d.name,
        "packages": [{"name": p.name, "parent": p.parent_path} for p in d.packages],
        "classes": [
            {
                "name": c.name,
                "package": c.package_path,
                "stereotype": c.stereotype,
                "is_abstract": c.is_abstract,
                "is_interface": c.is_interface,
                "attributes": [
                    {"visibility": a.visibility.value, "name": a.name, "type": a.type}
                    for a in c.attributes
                ],
                "methods": [
                    {
                        "visibility": m.visibility.value,
                        "name": m.name,
                        "params": [{"name": p.name, "type": p.type}
                                   for p in m.parameters],
                        "return": m.return_type,
                        "uc_ids": list(m.uc_ids),
                        "action_text": m.action_text,
                    }
                    for m in c.methods
                ],
            }
            for c in d.classes
        ],
        "enums": [
            {"name": e.name, "package": e.package_path, "values": list(e.values)}
            for e in d.enums
        ],
        "relationships": [
            {
                "kind": r.kind.value,
                "source": r.source,
                "target": r.target,
                "source_multiplicity": r.source_multiplicity,
                "target_multiplicity": r.target_multiplicity,
                "label": r.label,
            }
            for r in d.relationships
        ],
    }


def import_parsed(doc: dict) -> Diagram:
    """Rebuild a Diagram from an exported JSON document (inverse of export)."""
    diagram = Diagram(name=doc.get("diagram_name"))
    diagram.provenance = Provenance(doc["model"], doc["run"])
    for p in doc.get("packages", []):
        diagram.packages.append(PackageDecl(name=p["name"], parent_path=list(p["parent"])))
    for c in doc.get("classes", []):
        cls = UmlClass(
            name=c["name"],
            package_path=list(c["package"]),
            stereotype=c.get("stereotype"),
            is_abstract=c.get("is_abstract", False),
            is_interface=c.get("is_interface", False),
        )
        for a in c.get("attributes", []):
            cls.attributes.append(AttributeDecl(
                name=a["name"], visibility=Visibility(a["visibility"]),
                type=a.get("type"),
            ))
        for m in c.get("methods", []):
            cls.methods.append(MethodRecord(
                name=m["name"],
                visibility=Visibility(m["visibility"]),
                parameters=[Parameter(p["name"], p.get("type"))
                            for p in m.get("params", [])],
                return_type=m.get("return"),
                uc_ids=list(m.get("uc_ids", [])),
                action_text=m.get("action_text"),
                owning_class=c["name"],
            ))
        diagram.classes.append(cls)
    for e in doc.get("enums", []):
        diagram.enums.append(EnumDecl(
            name=e["name"], package_path=list(e["package"]), values=list(e["values"]),
        ))
    for r in doc.get("relationships", []):
        diagram.relationships.append(Relationship(
            kind=RelationshipKind(r["kind"]),
            source=r["source"],
            target=r["target"],
            source_multiplicity=r.get("source_multiplicity"),
            target_multiplicity=r.get("target_multiplicity"),
            label=r.get("label"),
        ))
    return diagram


def write_parsed_json(entry: CorpusEntry, out_dir: Path | str) -> Path:
    """Write ``ModelName_RunX.json`` for one entry; returns the path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{entry.model_name}_Run{entry.run_index}.json"
    doc = export_parsed(entry)
    path.write_text(json.dumps(doc, indent=2, sort_keys=False) + "\n",
                    encoding="utf-8")
    return path
