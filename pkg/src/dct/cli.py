"""Command-line surface: extract, detect, graph, plan, pipeline.

Exit codes: 0 success, 1 error, 2 clump budget exceeded (the CI gate via
--fail-threshold). Diagnostics go to stderr, one per line, as
``LEVEL file:line message``; machine artifacts are written exactly as the
document modules define them.
"""

from __future__ import annotations

import argparse
import os
import sys
from datetime import datetime, timezone
from typing import List, Optional

from .detector import DetectorConfig, detect
from .diagnostics import Diagnostics
from .errors import DctError, RootNotFound
from .extractor import ExtractorConfig, extract_project
from .graph import build_graph, to_dot, write_graph
from .planner import build_plan, write_plan
from .report import parse_report, summarize, write_report
from .storage import BUNDLE_FILENAME, read_ast_dir, write_ast_dir


class UsageError(DctError):
    """Bad command line; reported as a normal error (status 1)."""


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; 2 is reserved for the
    # clump budget gate, so usage problems become status-1 errors instead.
    def error(self, message):
        raise UsageError(message)


def _write_text(path: str, text: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _rfc3339_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _extract_bundle(args, diagnostics: Diagnostics):
    cfg = ExtractorConfig(aux_roots=tuple(args.aux_root))
    bundle = extract_project(
        args.input,
        cfg,
        module_detection=args.module_detection == "on",
        jobs=args.jobs,
        diagnostics=diagnostics,
    )
    return bundle, cfg


def cmd_extract(args, diagnostics: Diagnostics) -> int:
    bundle, cfg = _extract_bundle(args, diagnostics)
    if args.strict and diagnostics.errors:
        return 1
    write_ast_dir(bundle, args.output, cfg.to_doc())
    files = len({c.file_path for c in bundle.classes.values()})
    print(f"extracted {len(bundle.classes)} classes from {files} files -> {args.output}")
    return 0


def _detector_config(args) -> DetectorConfig:
    try:
        return DetectorConfig(
            min_clump_size=args.min_size,
            match_types=not args.no_type_match,
            scope=args.scope,
            include_aux_counterpart=args.include_aux_counterpart,
            include_own_class_param_field=args.include_own_class_param_field,
            include_overrides=args.include_overrides,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _load_bundle_for_detect(args, diagnostics: Diagnostics):
    """AST dir, pipeline output dir, or raw project dir, in that order."""
    if not os.path.isdir(args.input):
        raise RootNotFound(f"input not found: {args.input}")
    if os.path.isfile(os.path.join(args.input, BUNDLE_FILENAME)):
        bundle, _ = read_ast_dir(args.input, diagnostics)
        return bundle, False
    nested = os.path.join(args.input, "ast")
    if os.path.isfile(os.path.join(nested, BUNDLE_FILENAME)):
        bundle, _ = read_ast_dir(nested, diagnostics)
        return bundle, False
    bundle, _ = _extract_bundle(args, diagnostics)
    return bundle, True


def _run_detection(bundle, args, diagnostics: Diagnostics):
    cfg = _detector_config(args)
    timestamp = _rfc3339_now() if args.timestamp else None
    return detect(bundle, cfg, jobs=args.jobs, timestamp=timestamp)


def cmd_detect(args, diagnostics: Diagnostics) -> int:
    bundle, extracted = _load_bundle_for_detect(args, diagnostics)
    if extracted and args.strict and diagnostics.errors:
        return 1
    report = _run_detection(bundle, args, diagnostics)
    _write_text(args.output, write_report(report))
    print(summarize(report), end="")
    if args.fail_threshold is not None and report.summary["total"] > args.fail_threshold:
        return 2
    return 0


def cmd_graph(args, diagnostics: Diagnostics) -> int:
    with open(args.report, encoding="utf-8") as fh:
        report = parse_report(fh.read(), diagnostics)
    graph = build_graph(report)
    _write_text(args.output, write_graph(graph))
    if args.dot:
        _write_text(args.dot, to_dot(graph))
    print(f"graph: {len(graph.nodes)} nodes, {len(graph.edges)} edges -> {args.output}")
    return 0


def _parse_name_overrides(pairs: List[str]) -> dict:
    names = {}
    for pair in pairs:
        group_id, sep, name = pair.partition("=")
        if not sep or not group_id or not name:
            raise UsageError(f"--name expects GROUP_ID=NAME, got '{pair}'")
        names[group_id] = name
    return names


def cmd_plan(args, diagnostics: Diagnostics) -> int:
    with open(args.report, "rb") as fh:
        raw = fh.read()
    report = parse_report(raw.decode("utf-8"), diagnostics)
    selected = list(report.keys()) if args.all else list(args.select)
    names = _parse_name_overrides(args.name)
    plan = build_plan(report, selected, names, report_bytes=raw)
    _write_text(args.output, write_plan(plan))
    print(f"plan: {len(plan.groups)} groups -> {args.output}")
    return 0


def cmd_pipeline(args, diagnostics: Diagnostics) -> int:
    bundle, cfg = _extract_bundle(args, diagnostics)
    if args.strict and diagnostics.errors:
        return 1
    ast_dir = os.path.join(args.output, "ast")
    write_ast_dir(bundle, ast_dir, cfg.to_doc())

    bundle, _ = read_ast_dir(ast_dir, diagnostics)
    report = _run_detection(bundle, args, diagnostics)
    report_path = os.path.join(args.output, "report.json")
    _write_text(report_path, write_report(report))
    print(summarize(report), end="")

    graph = build_graph(report)
    _write_text(os.path.join(args.output, "graph.json"), write_graph(graph))

    if args.fail_threshold is not None and report.summary["total"] > args.fail_threshold:
        return 2
    return 0


# ---------------------------------------------------------------------------
# Argument wiring
# ---------------------------------------------------------------------------

def _add_extract_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="project root to scan")
    p.add_argument("--aux-root", action="append", default=[], metavar="PATH",
                   help="project-relative prefix of auxiliary/library sources (repeatable)")
    p.add_argument("--strict", action="store_true",
                   help="fail instead of skipping files that do not parse")
    p.add_argument("--module-detection", choices=("on", "off"), default="on",
                   help="detect build modules from build descriptors (default on)")
    p.add_argument("--jobs", type=int, default=1, metavar="N",
                   help="parallel workers (default 1; output is identical either way)")


def _add_detect_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--min-size", type=int, default=3, metavar="N",
                   help="smallest reported variable group (default 3)")
    p.add_argument("--no-type-match", action="store_true",
                   help="match variables by name only")
    p.add_argument("--scope", choices=("project", "module"), default="project",
                   help="compare endpoints project-wide or within one module")
    p.add_argument("--include-aux-counterpart", action="store_true",
                   help="allow auxiliary classes as the to-side endpoint")
    p.add_argument("--include-own-class-param-field", action="store_true",
                   help="compare method parameters against the declaring class's fields")
    p.add_argument("--include-overrides", action="store_true",
                   help="include methods that override a supertype method")
    p.add_argument("--fail-threshold", type=int, default=None, metavar="N",
                   help="exit with status 2 when total occurrences exceed N")
    p.add_argument("--timestamp", action="store_true",
                   help="stamp the report with the current time (off by default)")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="dct",
        description="Data clump detection and extract-class planning toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_ArgumentParser)

    p = sub.add_parser("extract", help="parse a project into AST documents")
    _add_extract_flags(p)
    p.add_argument("--output", required=True, help="AST directory to write")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("detect", help="detect data clumps and write a report")
    p.add_argument("--input", required=True,
                   help="AST directory, pipeline output directory, or project root")
    p.add_argument("--output", required=True, help="report path to write")
    p.add_argument("--aux-root", action="append", default=[], metavar="PATH")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--module-detection", choices=("on", "off"), default="on")
    p.add_argument("--jobs", type=int, default=1, metavar="N")
    _add_detect_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("graph", help="build the clump graph from a report")
    p.add_argument("--report", required=True, help="report document to read")
    p.add_argument("--output", required=True, help="graph document to write")
    p.add_argument("--dot", default=None, metavar="PATH",
                   help="also write a DOT rendering")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("plan", help="build extract-class plans for selected occurrences")
    p.add_argument("--report", required=True, help="report document to read")
    p.add_argument("--output", required=True, help="plan document to write")
    p.add_argument("--select", action="append", default=[], metavar="KEY",
                   help="occurrence key to include (repeatable)")
    p.add_argument("--all", action="store_true", help="select every occurrence")
    p.add_argument("--name", action="append", default=[], metavar="GROUP_ID=NAME",
                   help="class name override for one group (repeatable)")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("pipeline", help="extract, detect, and graph in one run")
    _add_extract_flags(p)
    p.add_argument("--output", required=True, help="output directory")
    _add_detect_flags(p)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    diagnostics = Diagnostics()
    try:
        args = parser.parse_args(argv)
        status = args.func(args, diagnostics)
    except UsageError as exc:
        diagnostics.error(str(exc))
        status = 1
    except DctError as exc:
        diagnostics.error(str(exc))
        status = 1
    except OSError as exc:
        diagnostics.error(str(exc))
        status = 1
    diagnostics.print_to(sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
