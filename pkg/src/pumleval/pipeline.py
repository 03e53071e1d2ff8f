"""End-to-end pipeline: scan -> validate -> metrics -> consensus -> stats -> report.

Each stage persists its outputs under the configured output directory;
reruns with unchanged inputs and seeds produce a byte-identical tree.
"""

from __future__ import annotations

import json
import logging
import shlex
import subprocess
from dataclasses import dataclass
from pathlib import Path

from .analysis import DEFAULT_SEEDS, AnalysisBundle, analyze
from .corpus import CorpusIndex, scan_corpus, write_parsed_json
from .report import ReportSpec, emit_charts, emit_tables

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    corpus_dir: Path
    baseline_path: Path
    output_dir: Path
    top_k_override: int | None = None
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    external_validator_cmd: str | None = None
    workers: int = 1
    charts: bool = False
    tables: tuple[str, ...] | None = None
    format: str = "csv"

    def __post_init__(self) -> None:
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if self.top_k_override is not None and self.top_k_override < 1:
            raise ConfigError("top_k_override must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        for attr in ("corpus_dir", "baseline_path", "output_dir"):
            setattr(self, attr, Path(getattr(self, attr)))
        if not self.corpus_dir.is_dir():
            raise ConfigError(f"corpus directory not found: {self.corpus_dir}")
        if not self.baseline_path.is_file():
            raise ConfigError(f"baseline file not found: {self.baseline_path}")


def apply_external_validator(index: CorpusIndex, command_template: str) -> None:
    """Run ``command_template`` (with ``{file}`` placeholder) per corpus file.

    Exit status 0 marks the file externally valid; the internal judgment
    stays recorded on the entry's ValidationReport.
    """
    for entry in index.entries:
        if "{file}" in command_template:
            cmd = [part.replace("{file}", entry.source_path)
                   for part in shlex.split(command_template)]
        else:
            cmd = shlex.split(command_template) + [entry.source_path]
        result = subprocess.run(cmd, capture_output=True)
        entry.external_valid = result.returncode == 0


def stage_scan(config: RunConfig) -> CorpusIndex:
    index = scan_corpus(config.corpus_dir, config.baseline_path,
                        workers=config.workers)
    if config.external_validator_cmd:
        apply_external_validator(index, config.external_validator_cmd)
    return index


def stage_parse(index: CorpusIndex, output_dir: Path) -> list[Path]:
    """Persist parsed JSON per entry plus the validation report."""
    parsed_dir = output_dir / "parsed"
    written = []
    for entry in index.entries:
        if entry.diagram is not None:
            written.append(write_parsed_json(entry, parsed_dir))
    report = {
        "entries": [
            {
                "model": e.model_name,
                "run": e.run_index,
                "file": Path(e.source_path).name,
                "internal_valid": e.validation.is_valid,
                "external_valid": e.external_valid,
                "issues": e.validation.to_dict()["issues"],
            }
            for e in index.entries
        ],
        "skipped_files": index.skipped_files,
    }
    output_dir.mkdir(parents=True, exist_ok=True)
    validation_path = output_dir / "validation.json"
    validation_path.write_text(json.dumps(report, indent=2) + "\n",
                               encoding="utf-8")
    written.append(validation_path)
    return written


def run_pipeline(config: RunConfig) -> AnalysisBundle:
    """Run every stage and persist the full artifact tree."""
    index = stage_scan(config)
    stage_parse(index, config.output_dir)
    bundle = analyze(index, top_k_override=config.top_k_override,
                     seeds=config.seeds)
    spec = ReportSpec(
        tables=config.tables if config.tables else ReportSpec().tables,
        chart_toggle=config.charts,
        format=config.format,
    )
    reports_dir = config.output_dir / "reports"
    emit_tables(bundle, spec, reports_dir)
    emit_charts(bundle, spec, reports_dir)
    log.info("pipeline complete: %d entries, %d valid",
             len(index.entries), len(index.valid_entries()))
    return bundle
