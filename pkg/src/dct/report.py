"""The data-clumps-report document: schema, writer, reader, merge, summary.

The report is the pipeline's portable artifact: self-contained (detector
config echoed inside), deterministic (sorted keys, no timestamp unless
asked for), and the only input the graph builder, the planner, and the
browser visualizer need.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

from . import DETECTOR_NAME, __version__
from .detector import (
    DataClumpOccurrence,
    DetectorConfig,
    config_from_doc,
    occurrence_from_doc,
    occurrence_key,
)
from .errors import (
    ConfigMismatch,
    ConflictingOccurrence,
    KeyMismatch,
    MalformedDocument,
    SummaryMismatch,
    UnsupportedVersion,
)
from .jsonio import dumps_canonical, loads_document
from .model import AstBundle

REPORT_VERSION = "1.0"

_REPORT_KEYS = {
    "report_version", "detector", "config", "project", "summary",
    "data_clumps", "timestamp",
}


@dataclass(frozen=True)
class DataClumpsReport:
    """A detection run's complete result. Occurrences are sorted by key."""

    report_version: str
    detector_name: str
    detector_version: str
    config: DetectorConfig
    project_name: str
    number_of_classes: int
    number_of_methods: int
    occurrences: Tuple[DataClumpOccurrence, ...]
    timestamp: Optional[str] = None

    @property
    def summary(self) -> Dict[str, int]:
        counts = Counter(o.kind for o in self.occurrences)
        return {
            "total": len(self.occurrences),
            "fields_to_fields": counts.get("fields_to_fields", 0),
            "parameters_to_parameters": counts.get("parameters_to_parameters", 0),
            "parameters_to_fields": counts.get("parameters_to_fields", 0),
        }

    def keys(self) -> Tuple[str, ...]:
        return tuple(o.key for o in self.occurrences)

    def by_key(self) -> Dict[str, DataClumpOccurrence]:
        return {o.key: o for o in self.occurrences}


def build_report(
    bundle: AstBundle,
    cfg: DetectorConfig,
    occurrences: Sequence[DataClumpOccurrence],
    timestamp: Optional[str] = None,
) -> DataClumpsReport:
    """Assemble a report value for one bundle's detection result."""
    return DataClumpsReport(
        report_version=REPORT_VERSION,
        detector_name=DETECTOR_NAME,
        detector_version=__version__,
        config=cfg,
        project_name=bundle.project_name,
        number_of_classes=len(bundle.classes),
        number_of_methods=sum(len(c.methods) for c in bundle.classes.values()),
        occurrences=tuple(sorted(occurrences, key=lambda o: o.key)),
        timestamp=timestamp,
    )


def write_report(r: DataClumpsReport) -> str:
    """Canonical document text; byte-identical for equal report values."""
    doc = {
        "report_version": r.report_version,
        "detector": {"name": r.detector_name, "version": r.detector_version},
        "config": r.config.to_doc(),
        "project": {
            "name": r.project_name,
            "number_of_classes": r.number_of_classes,
            "number_of_methods": r.number_of_methods,
        },
        "summary": r.summary,
        "data_clumps": {o.key: o.to_doc() for o in r.occurrences},
    }
    if r.timestamp is not None:
        doc["timestamp"] = r.timestamp
    return dumps_canonical(doc)


def parse_report(text: str, diagnostics=None) -> DataClumpsReport:
    """Validating reader for report documents.

    Unknown keys warn; wrong shapes raise MalformedDocument; version,
    summary, and key consistency raise their dedicated errors.
    """
    from .model import _require, _warn_unknown

    doc = loads_document(text)
    if not isinstance(doc, dict):
        raise MalformedDocument("report: expected object")
    _warn_unknown(doc, _REPORT_KEYS, "report", diagnostics)

    version = _require(doc, "report_version", str, "report")
    if version != REPORT_VERSION:
        raise UnsupportedVersion(f"unsupported report_version '{version}'")

    detector_doc = _require(doc, "detector", dict, "report")
    _warn_unknown(detector_doc, {"name", "version"}, "report.detector", diagnostics)
    detector_name = _require(detector_doc, "name", str, "report.detector")
    detector_version = _require(detector_doc, "version", str, "report.detector")

    config = config_from_doc(doc.get("config"), "report.config", diagnostics)

    project_doc = _require(doc, "project", dict, "report")
    _warn_unknown(
        project_doc,
        {"name", "number_of_classes", "number_of_methods"},
        "report.project",
        diagnostics,
    )
    project_name = _require(project_doc, "name", str, "report.project")
    number_of_classes = _require(project_doc, "number_of_classes", int, "report.project")
    number_of_methods = _require(project_doc, "number_of_methods", int, "report.project")

    clumps_doc = _require(doc, "data_clumps", dict, "report")
    occurrences: List[DataClumpOccurrence] = []
    for key in sorted(clumps_doc):
        occurrence = occurrence_from_doc(
            clumps_doc[key], f"report.data_clumps[{key}]", diagnostics
        )
        if occurrence.key != key:
            raise KeyMismatch(
                f"map key '{key}' does not match occurrence key '{occurrence.key}'"
            )
        recomputed = occurrence_key(occurrence)
        if recomputed != key:
            raise KeyMismatch(
                f"occurrence key '{key}' does not match its contents ('{recomputed}')"
            )
        occurrences.append(occurrence)

    summary_doc = _require(doc, "summary", dict, "report")
    _warn_unknown(
        summary_doc,
        {"total", "fields_to_fields", "parameters_to_parameters", "parameters_to_fields"},
        "report.summary",
        diagnostics,
    )
    counts = Counter(o.kind for o in occurrences)
    expected = {
        "total": len(occurrences),
        "fields_to_fields": counts.get("fields_to_fields", 0),
        "parameters_to_parameters": counts.get("parameters_to_parameters", 0),
        "parameters_to_fields": counts.get("parameters_to_fields", 0),
    }
    for field_name, value in expected.items():
        declared = _require(summary_doc, field_name, int, "report.summary")
        if declared != value:
            raise SummaryMismatch(
                f"summary.{field_name} is {declared} but occurrences give {value}"
            )

    timestamp = doc.get("timestamp")
    if timestamp is not None and not isinstance(timestamp, str):
        raise MalformedDocument("report.timestamp: expected str")

    return DataClumpsReport(
        report_version=version,
        detector_name=detector_name,
        detector_version=detector_version,
        config=config,
        project_name=project_name,
        number_of_classes=number_of_classes,
        number_of_methods=number_of_methods,
        occurrences=tuple(occurrences),
        timestamp=timestamp,
    )


def merge_reports(reports: Sequence[DataClumpsReport]) -> DataClumpsReport:
    """Union of several runs' occurrences, e.g. one report per build module.

    Inputs must agree on report_version and on every config field except
    scope. Identical keys must carry identical occurrences. Project names
    join with "+" (deduplicated, first-appearance order) and class/method
    counts sum over distinct project names, so self-merge is a no-op.
    """
    if not reports:
        raise ValueError("merge_reports needs at least one report")
    base = reports[0]
    for r in reports[1:]:
        if r.report_version != base.report_version:
            raise ConfigMismatch(
                f"report_version differs: '{base.report_version}' vs '{r.report_version}'"
            )
        if replace(r.config, scope=base.config.scope) != base.config:
            raise ConfigMismatch("detector configs differ beyond scope")

    merged: Dict[str, DataClumpOccurrence] = {}
    for r in reports:
        for occurrence in r.occurrences:
            existing = merged.get(occurrence.key)
            if existing is None:
                merged[occurrence.key] = occurrence
            elif existing != occurrence:
                raise ConflictingOccurrence(
                    f"key '{occurrence.key}' maps to different occurrences"
                )

    names: List[str] = []
    classes = 0
    methods = 0
    for r in reports:
        if r.project_name not in names:
            names.append(r.project_name)
            classes += r.number_of_classes
            methods += r.number_of_methods

    scopes = {r.config.scope for r in reports}
    scope = scopes.pop() if len(scopes) == 1 else "project"
    timestamps = {r.timestamp for r in reports}
    timestamp = timestamps.pop() if len(timestamps) == 1 else None

    return DataClumpsReport(
        report_version=base.report_version,
        detector_name=base.detector_name,
        detector_version=base.detector_version,
        config=replace(base.config, scope=scope),
        project_name="+".join(names),
        number_of_classes=classes,
        number_of_methods=methods,
        occurrences=tuple(merged[k] for k in sorted(merged)),
        timestamp=timestamp,
    )


def participation(r: DataClumpsReport) -> List[Tuple[str, int]]:
    """Classes ranked by how many occurrences they touch.

    A method endpoint counts toward its declaring class; each class counts
    once per occurrence. Ties break lexicographically.
    """
    counter: Counter = Counter()
    for occurrence in r.occurrences:
        touched = {
            occurrence.from_endpoint.class_qualified_name,
            occurrence.to_endpoint.class_qualified_name,
        }
        counter.update(touched)
    return sorted(counter.items(), key=lambda item: (-item[1], item[0]))


def summarize(r: DataClumpsReport) -> str:
    """Fixed-format text table for terminal output."""
    s = r.summary
    lines = [
        f"project: {r.project_name}",
        f"classes: {r.number_of_classes}  methods: {r.number_of_methods}",
        "",
        f"{'kind':<26}{'count':>7}",
        f"{'fields_to_fields':<26}{s['fields_to_fields']:>7}",
        f"{'parameters_to_parameters':<26}{s['parameters_to_parameters']:>7}",
        f"{'parameters_to_fields':<26}{s['parameters_to_fields']:>7}",
        f"{'total':<26}{s['total']:>7}",
        "",
        "top classes by participation:",
    ]
    for qname, count in participation(r)[:10]:
        lines.append(f"{count:>7}  {qname}")
    return "\n".join(lines) + "\n"
