"""Extract-class refactoring plans.

Occurrences sharing an endpoint and an identical variable set collapse into
one refactoring group; each selected group yields a new-class stub (written
in the same declaration subset the extractor parses, so plans are
self-checking) plus the list of sites whose fields or parameters it would
replace. Plans are documents, never source edits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

from .errors import (
    EmptyGroup,
    InvalidName,
    MalformedDocument,
    UnknownKey,
    UnsupportedVersion,
)
from .jsonio import dumps_canonical, fingerprint, loads_document
from .report import DataClumpsReport, write_report

PLAN_VERSION = "1.0"

IDENTIFIER_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")

ACTIONS = ("replace_fields", "replace_parameters")


@dataclass(frozen=True)
class RefactorGroup:
    """Occurrences that could share one extracted class."""

    group_id: str
    variable_set: Tuple[Tuple[str, str], ...]  # (name, type), sorted by name
    occurrence_keys: Tuple[str, ...]
    affected_endpoints: Tuple[str, ...]  # endpoint refs, sorted

    def to_doc(self) -> dict:
        return {
            "group_id": self.group_id,
            "variable_set": [{"name": n, "type": t} for n, t in self.variable_set],
            "occurrence_keys": list(self.occurrence_keys),
            "affected_endpoints": list(self.affected_endpoints),
        }


@dataclass(frozen=True)
class PlanSite:
    endpoint: str  # endpoint ref
    action: str

    def to_doc(self) -> dict:
        return {"endpoint": self.endpoint, "action": self.action}


@dataclass(frozen=True)
class PlannedGroup:
    group: RefactorGroup
    new_class_name: str
    new_class_package: str
    class_stub: str
    sites: Tuple[PlanSite, ...]

    def to_doc(self) -> dict:
        return {
            "group": self.group.to_doc(),
            "new_class_name": self.new_class_name,
            "new_class_package": self.new_class_package,
            "class_stub": self.class_stub,
            "sites": [s.to_doc() for s in self.sites],
        }


@dataclass(frozen=True)
class RefactorPlan:
    plan_version: str
    source_report_fingerprint: str
    groups: Tuple[PlannedGroup, ...]


def group_occurrences(r: DataClumpsReport) -> List[RefactorGroup]:
    """Partition occurrences into refactoring groups.

    Two occurrences land in one group when they are connected through a
    chain of occurrences that share an endpoint AND carry exactly the same
    (name, type) variable set. Output sorted by group_id.
    """
    def variable_set(o) -> Tuple[Tuple[str, str], ...]:
        return tuple(sorted((v.name, v.type) for v in o.variables))

    buckets: Dict[Tuple[Tuple[str, str], ...], List] = {}
    for occurrence in r.occurrences:
        buckets.setdefault(variable_set(occurrence), []).append(occurrence)

    groups: List[RefactorGroup] = []
    for var_set, members in buckets.items():
        by_endpoint: Dict[str, List[int]] = {}
        for index, occurrence in enumerate(members):
            for ref in (occurrence.from_endpoint.ref, occurrence.to_endpoint.ref):
                by_endpoint.setdefault(ref, []).append(index)

        visited: Set[int] = set()
        for start in range(len(members)):
            if start in visited:
                continue
            component = []
            stack = [start]
            visited.add(start)
            while stack:
                index = stack.pop()
                component.append(members[index])
                occurrence = members[index]
                for ref in (occurrence.from_endpoint.ref, occurrence.to_endpoint.ref):
                    for other in by_endpoint[ref]:
                        if other not in visited:
                            visited.add(other)
                            stack.append(other)
            keys = tuple(sorted(o.key for o in component))
            endpoints = tuple(sorted({
                ref for o in component
                for ref in (o.from_endpoint.ref, o.to_endpoint.ref)
            }))
            groups.append(RefactorGroup(
                group_id=keys[0],
                variable_set=var_set,
                occurrence_keys=keys,
                affected_endpoints=endpoints,
            ))
    return sorted(groups, key=lambda g: g.group_id)


def suggest_name(g: RefactorGroup) -> str:
    """Default class name: sorted variable names, capitalized, + "Data".

    Characters outside [A-Za-z0-9] are dropped; a fallback prefix keeps the
    result a valid identifier; the final text is capped at 40 characters.
    """
    if not g.variable_set:
        raise EmptyGroup("cannot name a group with no variables")
    raw = "".join(
        name[:1].upper() + name[1:] for name, _ in g.variable_set
    ) + "Data"
    cleaned = re.sub(r"[^A-Za-z0-9]", "", raw)
    if not IDENTIFIER_RE.fullmatch(cleaned):
        cleaned = "Clump" + cleaned
    return cleaned[:40]


def render_extracted_class(
    variable_set: Sequence[Tuple[str, str]],
    name: str,
    package: str,
) -> str:
    """Java-subset source for the extracted class.

    Private fields in sorted order, an all-args constructor, one getter per
    field. The text parses back through the extractor with exactly the
    given fields, which is how plans stay checkable without an IDE.
    """
    if not IDENTIFIER_RE.fullmatch(name):
        raise InvalidName(f"'{name}' is not a valid class name")
    if not variable_set:
        raise EmptyGroup("cannot render a class with no fields")
    ordered = sorted(variable_set, key=lambda v: v[0])

    lines: List[str] = []
    if package:
        lines.append(f"package {package};")
        lines.append("")
    lines.append(f"public class {name} {{")
    for var_name, var_type in ordered:
        lines.append(f"    private {var_type} {var_name};")
    lines.append("")
    args = ", ".join(f"{t} {n}" for n, t in ordered)
    lines.append(f"    public {name}({args}) {{")
    for var_name, _ in ordered:
        lines.append(f"        this.{var_name} = {var_name};")
    lines.append("    }")
    for var_name, var_type in ordered:
        getter = "get" + var_name[:1].upper() + var_name[1:]
        lines.append("")
        lines.append(f"    public {var_type} {getter}() {{")
        lines.append(f"        return {var_name};")
        lines.append("    }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def build_plan(
    r: DataClumpsReport,
    selected: Sequence[str],
    names: Optional[Mapping[str, str]] = None,
    report_bytes: Optional[bytes] = None,
) -> RefactorPlan:
    """Plan covering every group that contains a selected occurrence key.

    ``names`` overrides the suggested class name per group_id. The
    fingerprint binds the plan to the exact report document bytes; when the
    caller has no original bytes, the canonical serialization stands in.
    """
    names = dict(names or {})
    known_keys = set(r.keys())
    for key in selected:
        if key not in known_keys:
            raise UnknownKey(f"occurrence key not in report: '{key}'")

    all_groups = group_occurrences(r)
    selected_set = set(selected)
    kept = [
        g for g in all_groups
        if any(k in selected_set for k in g.occurrence_keys)
    ]

    kept_ids = {g.group_id for g in kept}
    for group_id, name in sorted(names.items()):
        if group_id not in kept_ids:
            raise UnknownKey(f"name override for unknown group: '{group_id}'")
        if not IDENTIFIER_RE.fullmatch(name):
            raise InvalidName(f"'{name}' is not a valid class name")

    planned: List[PlannedGroup] = []
    for group in kept:
        name = names.get(group.group_id) or suggest_name(group)
        packages = sorted(
            _package_of(ref) for ref in group.affected_endpoints
        )
        package = packages[0]
        planned.append(PlannedGroup(
            group=group,
            new_class_name=name,
            new_class_package=package,
            class_stub=render_extracted_class(group.variable_set, name, package),
            sites=tuple(
                PlanSite(
                    endpoint=ref,
                    action="replace_parameters" if "#" in ref else "replace_fields",
                )
                for ref in group.affected_endpoints
            ),
        ))

    if report_bytes is None:
        report_bytes = write_report(r).encode("utf-8")
    return RefactorPlan(
        plan_version=PLAN_VERSION,
        source_report_fingerprint=fingerprint(report_bytes),
        groups=tuple(planned),
    )


def _package_of(endpoint_ref: str) -> str:
    qname = endpoint_ref.split("#", 1)[0]
    if "." not in qname:
        return ""
    return qname.rsplit(".", 1)[0]


# ---------------------------------------------------------------------------
# Plan document
# ---------------------------------------------------------------------------

def plan_to_doc(plan: RefactorPlan) -> dict:
    return {
        "plan_version": plan.plan_version,
        "source_report_fingerprint": plan.source_report_fingerprint,
        "groups": [g.to_doc() for g in plan.groups],
    }


def write_plan(plan: RefactorPlan) -> str:
    """Canonical plan document (groups stay sorted by group_id)."""
    return dumps_canonical(plan_to_doc(plan))


_PLAN_KEYS = {"plan_version", "source_report_fingerprint", "groups"}
_PLANNED_GROUP_KEYS = {"group", "new_class_name", "new_class_package", "class_stub", "sites"}
_GROUP_KEYS = {"group_id", "variable_set", "occurrence_keys", "affected_endpoints"}


def parse_plan(text: str, diagnostics=None) -> RefactorPlan:
    """Validating reader for plan documents."""
    from .model import _require, _warn_unknown

    doc = loads_document(text)
    if not isinstance(doc, dict):
        raise MalformedDocument("plan: expected object")
    _warn_unknown(doc, _PLAN_KEYS, "plan", diagnostics)
    version = _require(doc, "plan_version", str, "plan")
    if version != PLAN_VERSION:
        raise UnsupportedVersion(f"unsupported plan_version '{version}'")
    fingerprint_text = _require(doc, "source_report_fingerprint", str, "plan")

    groups_doc = _require(doc, "groups", list, "plan")
    groups: List[PlannedGroup] = []
    seen_ids: Set[str] = set()
    for i, group_doc in enumerate(groups_doc):
        path = f"plan.groups[{i}]"
        if not isinstance(group_doc, dict):
            raise MalformedDocument(f"{path}: expected object")
        _warn_unknown(group_doc, _PLANNED_GROUP_KEYS, path, diagnostics)
        inner = _require(group_doc, "group", dict, path)
        _warn_unknown(inner, _GROUP_KEYS, f"{path}.group", diagnostics)
        group_id = _require(inner, "group_id", str, f"{path}.group")
        if group_id in seen_ids:
            raise MalformedDocument(f"{path}.group.group_id: duplicate '{group_id}'")
        seen_ids.add(group_id)

        variable_set: List[Tuple[str, str]] = []
        for j, var_doc in enumerate(_require(inner, "variable_set", list, f"{path}.group")):
            var_path = f"{path}.group.variable_set[{j}]"
            if not isinstance(var_doc, dict):
                raise MalformedDocument(f"{var_path}: expected object")
            _warn_unknown(var_doc, {"name", "type"}, var_path, diagnostics)
            variable_set.append((
                _require(var_doc, "name", str, var_path),
                _require(var_doc, "type", str, var_path),
            ))

        name = _require(group_doc, "new_class_name", str, path)
        if not IDENTIFIER_RE.fullmatch(name):
            raise InvalidName(f"{path}.new_class_name: '{name}' is not a valid identifier")

        sites: List[PlanSite] = []
        for j, site_doc in enumerate(_require(group_doc, "sites", list, path)):
            site_path = f"{path}.sites[{j}]"
            if not isinstance(site_doc, dict):
                raise MalformedDocument(f"{site_path}: expected object")
            _warn_unknown(site_doc, {"endpoint", "action"}, site_path, diagnostics)
            action = _require(site_doc, "action", str, site_path)
            if action not in ACTIONS:
                raise MalformedDocument(f"{site_path}.action: unknown action '{action}'")
            sites.append(PlanSite(
                endpoint=_require(site_doc, "endpoint", str, site_path),
                action=action,
            ))

        groups.append(PlannedGroup(
            group=RefactorGroup(
                group_id=group_id,
                variable_set=tuple(variable_set),
                occurrence_keys=tuple(
                    _parse_str_items(inner, "occurrence_keys", f"{path}.group")
                ),
                affected_endpoints=tuple(
                    _parse_str_items(inner, "affected_endpoints", f"{path}.group")
                ),
            ),
            new_class_name=name,
            new_class_package=_require(group_doc, "new_class_package", str, path),
            class_stub=_require(group_doc, "class_stub", str, path),
            sites=tuple(sites),
        ))

    return RefactorPlan(
        plan_version=version,
        source_report_fingerprint=fingerprint_text,
        groups=tuple(groups),
    )


def _parse_str_items(doc: dict, key: str, path: str) -> List[str]:
    from .model import _require

    items = _require(doc, key, list, path)
    if not all(isinstance(x, str) for x in items):
        raise MalformedDocument(f"{path}.{key}: expected list of strings")
    return items
