"""Command-line entry point.

Subcommands mirror the pipeline stages (parse, validate, metrics, consensus,
stats, report), `all` runs the whole chain, and `run-llm` drives the prompt
gateway from a provider config file.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 baseline
parse failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .analysis import DEFAULT_SEEDS, analyze
from .corpus import BaselineInvalidError
from .gateway import GatewayError, ProviderConfig, assemble_session, execute
from .pipeline import ConfigError, RunConfig, run_pipeline, stage_parse, stage_scan
from .report import KNOWN_TABLES, ReportSpec, emit_charts, emit_tables

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_BASELINE = 4


def _add_corpus_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--corpus", required=True, help="directory of .puml files")
    parser.add_argument("--baseline", required=True,
                        help="methodless baseline .puml")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--top-k", type=int, default=None,
                        help="override the computed consensus k")
    parser.add_argument("--seed", type=int, action="append", default=None,
                        help="bootstrap seed (repeatable; default 17 42 123)")
    parser.add_argument("--workers", type=int, default=1,
                        help="parallel workers for per-diagram stages")
    parser.add_argument("--external-validator", default=None, metavar="CMD",
                        help="command template run per file, e.g. "
                             "'plantuml -checkonly {file}'")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="tabular output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pumleval",
        description="Evaluate method-enriched PlantUML class-diagram corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("parse", "parse the corpus and persist per-diagram JSON"),
        ("validate", "validate the corpus and write validation.json"),
        ("metrics", "compute the per-run metric frame"),
        ("consensus", "compute consensus/placement tables"),
        ("stats", "run the statistical battery"),
        ("report", "emit the full report tree"),
        ("all", "run the complete pipeline"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_corpus_args(p)
        if name in ("report", "all"):
            p.add_argument("--charts", action="store_true",
                           help="emit SVG charts")
            p.add_argument("--tables", default=None,
                           help="comma-separated table subset "
                                f"({','.join(KNOWN_TABLES)})")

    run_llm = sub.add_parser("run-llm", help="execute prompt sessions via the "
                                             "gateway (live/record/replay)")
    run_llm.add_argument("--config", required=True,
                         help="JSON provider config file")
    run_llm.add_argument("--instruction", required=True,
                         help="instruction prompt text file")
    run_llm.add_argument("--baseline", required=True,
                         help="methodless baseline .puml")
    run_llm.add_argument("--use-cases", required=True,
                         help="use-case block text file")
    run_llm.add_argument("--archive", required=True,
                         help="archive root directory")
    run_llm.add_argument("--runs", type=int, default=1,
                         help="number of runs per provider")
    return parser


def _table_selection(args: argparse.Namespace,
                     default: tuple[str, ...]) -> tuple[str, ...]:
    raw = getattr(args, "tables", None)
    if not raw:
        return default
    return tuple(t.strip() for t in raw.split(",") if t.strip())


def _run_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        corpus_dir=Path(args.corpus),
        baseline_path=Path(args.baseline),
        output_dir=Path(args.out),
        top_k_override=args.top_k,
        seeds=tuple(args.seed) if args.seed else DEFAULT_SEEDS,
        external_validator_cmd=args.external_validator,
        workers=args.workers,
        charts=bool(getattr(args, "charts", False)),
        tables=_table_selection(args, KNOWN_TABLES)
        if getattr(args, "tables", None) else None,
        format=args.format,
    )


def _cmd_stage(args: argparse.Namespace) -> int:
    config = _run_config(args)
    index = stage_scan(config)
    out = config.output_dir
    if args.command in ("parse", "validate"):
        stage_parse(index, out)
        valid = len(index.valid_entries())
        print(f"{len(index.entries)} entries, {valid} valid")
        return EXIT_OK

    bundle = analyze(index, top_k_override=config.top_k_override,
                     seeds=config.seeds)
    if args.command == "metrics":
        spec = ReportSpec(tables=("mq_summary", "sr_metrics", "ac_breakdown",
                                  "sf_detail", "sc_contingency"),
                          format=config.format)
    elif args.command == "consensus":
        spec = ReportSpec(tables=("tmc", "cmc", "spc"), format=config.format)
    elif args.command == "stats":
        spec = ReportSpec(tables=("stats",), format=config.format)
    else:  # report
        spec = ReportSpec(tables=config.tables or KNOWN_TABLES,
                          chart_toggle=config.charts, format=config.format)
    written = emit_tables(bundle, spec, out / "reports")
    written += emit_charts(bundle, spec, out / "reports")
    print(f"wrote {len(written)} files under {out / 'reports'}")
    return EXIT_OK


def _cmd_all(args: argparse.Namespace) -> int:
    config = _run_config(args)
    bundle = run_pipeline(config)
    valid = sum(s.runs_valid for s in bundle.model_summaries)
    total = sum(s.runs_total for s in bundle.model_summaries)
    print(f"pipeline complete: {total} diagrams ({valid} valid), "
          f"reports under {config.output_dir / 'reports'}")
    return EXIT_OK


def _cmd_run_llm(args: argparse.Namespace) -> int:
    providers = json.loads(Path(args.config).read_text(encoding="utf-8"))
    if isinstance(providers, dict):
        providers = [providers]
    instruction = Path(args.instruction).read_text(encoding="utf-8")
    baseline = Path(args.baseline).read_text(encoding="utf-8")
    use_cases = Path(args.use_cases).read_text(encoding="utf-8")
    seq = assemble_session(instruction, baseline, use_cases)
    for provider in providers:
        config = ProviderConfig(**provider)
        for run in range(1, args.runs + 1):
            execute(config, seq, run, args.archive)
            print(f"{config.name} run {run}: archived")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "all":
            return _cmd_all(args)
        if args.command == "run-llm":
            return _cmd_run_llm(args)
        return _cmd_stage(args)
    except BaselineInvalidError as exc:
        print(f"baseline error: {exc}", file=sys.stderr)
        return EXIT_BASELINE
    except (ConfigError, GatewayError, json.JSONDecodeError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
