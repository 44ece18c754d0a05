"""Data clump detection over AST bundles.

The detector is the environment-independent core of the pipeline: it never
touches source files, only an :class:`~dct.model.AstBundle`. Three clump
kinds are covered: recurring field groups between two classes
(fields_to_fields), recurring parameter groups between two methods
(parameters_to_parameters), and parameter groups mirroring another class's
fields (parameters_to_fields).

Two variables match when their names are equal and, unless type matching is
disabled, their normalized types are equal too. A pair of endpoints yields
an occurrence when at least ``min_clump_size`` variables match.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import InvalidBundle, MalformedDocument
from .model import (
    AstBundle,
    Position,
    VariableDecl,
    parse_position,
    position_to_doc,
    validate_bundle,
)

KINDS = ("fields_to_fields", "parameters_to_parameters", "parameters_to_fields")

SCOPES = ("project", "module")


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DetectorConfig:
    """Detection thresholds and exclusion switches.

    ``min_clump_size`` is the smallest matched-variable group reported (at
    least 2). ``scope="module"`` compares only endpoints within one build
    module, which deliberately misses inter-module clumps. The include_*
    switches lift the default exclusions: auxiliary classes as counterpart
    (`to` side) endpoints, overriding methods, and parameter groups matched
    against the method's own class fields.
    """

    min_clump_size: int = 3
    match_types: bool = True
    scope: str = "project"
    include_aux_counterpart: bool = False
    include_own_class_param_field: bool = False
    include_overrides: bool = False

    def __post_init__(self):
        if self.min_clump_size < 2:
            raise ValueError("min_clump_size must be at least 2")
        if self.scope not in SCOPES:
            raise ValueError(f"scope must be one of {SCOPES}")

    def to_doc(self) -> dict:
        return {
            "min_clump_size": self.min_clump_size,
            "match_types": self.match_types,
            "scope": self.scope,
            "include_aux_counterpart": self.include_aux_counterpart,
            "include_own_class_param_field": self.include_own_class_param_field,
            "include_overrides": self.include_overrides,
        }


_CONFIG_KEYS = {
    "min_clump_size", "match_types", "scope", "include_aux_counterpart",
    "include_own_class_param_field", "include_overrides",
}


def config_from_doc(doc, path: str = "config", diagnostics=None) -> DetectorConfig:
    if not isinstance(doc, dict):
        raise MalformedDocument(f"{path}: expected object")
    from .model import _require, _warn_unknown  # shared schema plumbing

    _warn_unknown(doc, _CONFIG_KEYS, path, diagnostics)
    try:
        return DetectorConfig(
            min_clump_size=_require(doc, "min_clump_size", int, path),
            match_types=_require(doc, "match_types", bool, path),
            scope=_require(doc, "scope", str, path),
            include_aux_counterpart=_require(doc, "include_aux_counterpart", bool, path),
            include_own_class_param_field=_require(
                doc, "include_own_class_param_field", bool, path
            ),
            include_overrides=_require(doc, "include_overrides", bool, path),
        )
    except ValueError as exc:
        raise MalformedDocument(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Occurrence model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Endpoint:
    """One side of an occurrence: a class (fields) or a method (parameters)."""

    class_qualified_name: str
    method_signature: Optional[str]
    file_path: str
    module: str
    position: Position

    @property
    def ref(self) -> str:
        if self.method_signature is None:
            return self.class_qualified_name
        return f"{self.class_qualified_name}#{self.method_signature}"

    def to_doc(self) -> dict:
        doc = {
            "class_qualified_name": self.class_qualified_name,
            "file_path": self.file_path,
            "module": self.module,
            "position": position_to_doc(self.position),
        }
        if self.method_signature is not None:
            doc["method_signature"] = self.method_signature
        return doc


@dataclass(frozen=True)
class MatchedVariable:
    """One variable shared by both endpoints; type is the from-side's."""

    name: str
    type: str
    from_position: Position
    to_position: Position

    def to_doc(self) -> dict:
        return {
            "name": self.name,
            "type": self.type,
            "from_position": position_to_doc(self.from_position),
            "to_position": position_to_doc(self.to_position),
        }


@dataclass(frozen=True)
class DataClumpOccurrence:
    key: str
    kind: str
    from_endpoint: Endpoint
    to_endpoint: Endpoint
    variables: Tuple[MatchedVariable, ...]

    def to_doc(self) -> dict:
        return {
            "key": self.key,
            "kind": self.kind,
            "from": self.from_endpoint.to_doc(),
            "to": self.to_endpoint.to_doc(),
            "variables": [v.to_doc() for v in self.variables],
        }


def _key_text(kind: str, from_ref: str, to_ref: str,
              variables: Iterable[MatchedVariable]) -> str:
    joined = ",".join(f"{v.name}:{v.type}" for v in variables)
    return f"{kind}|{from_ref}|{to_ref}|{joined}"


def occurrence_key(o: DataClumpOccurrence) -> str:
    """Stable identity: kind|fromRef|toRef|name:type,... (variables by name)."""
    return _key_text(o.kind, o.from_endpoint.ref, o.to_endpoint.ref, o.variables)


# -- document readers --------------------------------------------------------

_ENDPOINT_KEYS = {"class_qualified_name", "method_signature", "file_path", "module", "position"}
_VARIABLE_KEYS = {"name", "type", "from_position", "to_position"}
_OCCURRENCE_KEYS = {"key", "kind", "from", "to", "variables"}


def endpoint_from_doc(doc, path: str, diagnostics=None) -> Endpoint:
    if not isinstance(doc, dict):
        raise MalformedDocument(f"{path}: expected object")
    from .model import _require, _warn_unknown

    _warn_unknown(doc, _ENDPOINT_KEYS, path, diagnostics)
    signature = doc.get("method_signature")
    if signature is not None and not isinstance(signature, str):
        raise MalformedDocument(f"{path}.method_signature: expected str")
    return Endpoint(
        class_qualified_name=_require(doc, "class_qualified_name", str, path),
        method_signature=signature,
        file_path=_require(doc, "file_path", str, path),
        module=_require(doc, "module", str, path),
        position=parse_position(doc.get("position"), f"{path}.position", diagnostics),
    )


def _variable_from_doc(doc, path: str, diagnostics=None) -> MatchedVariable:
    if not isinstance(doc, dict):
        raise MalformedDocument(f"{path}: expected object")
    from .model import _require, _warn_unknown

    _warn_unknown(doc, _VARIABLE_KEYS, path, diagnostics)
    return MatchedVariable(
        name=_require(doc, "name", str, path),
        type=_require(doc, "type", str, path),
        from_position=parse_position(doc.get("from_position"), f"{path}.from_position", diagnostics),
        to_position=parse_position(doc.get("to_position"), f"{path}.to_position", diagnostics),
    )


def occurrence_from_doc(doc, path: str, diagnostics=None) -> DataClumpOccurrence:
    if not isinstance(doc, dict):
        raise MalformedDocument(f"{path}: expected object")
    from .model import _require, _warn_unknown

    _warn_unknown(doc, _OCCURRENCE_KEYS, path, diagnostics)
    kind = _require(doc, "kind", str, path)
    if kind not in KINDS:
        raise MalformedDocument(f"{path}.kind: unknown kind '{kind}'")
    variables_doc = _require(doc, "variables", list, path)
    variables = tuple(
        _variable_from_doc(v, f"{path}.variables[{i}]", diagnostics)
        for i, v in enumerate(variables_doc)
    )
    return DataClumpOccurrence(
        key=_require(doc, "key", str, path),
        kind=kind,
        from_endpoint=endpoint_from_doc(doc.get("from"), f"{path}.from", diagnostics),
        to_endpoint=endpoint_from_doc(doc.get("to"), f"{path}.to", diagnostics),
        variables=variables,
    )


# ---------------------------------------------------------------------------
# Matching
# ---------------------------------------------------------------------------

def match_variables(
    a: Sequence[VariableDecl],
    b: Sequence[VariableDecl],
    cfg: DetectorConfig,
) -> List[MatchedVariable]:
    """Pairs of same-named variables, sorted by name.

    With type matching on, the types must agree as well. The reported type
    is the from (``a``) side's, which matters only when matching by name
    alone.
    """
    by_name = {w.name: w for w in b}
    matched = [
        MatchedVariable(v.name, v.type, v.position, w.position)
        for v in a
        if (w := by_name.get(v.name)) is not None
        and (not cfg.match_types or v.type == w.type)
    ]
    matched.sort(key=lambda m: m.name)
    return matched


def detect_pairwise(
    kind: str,
    left: Tuple[Endpoint, Sequence[VariableDecl]],
    right: Tuple[Endpoint, Sequence[VariableDecl]],
    cfg: DetectorConfig,
) -> Optional[DataClumpOccurrence]:
    """Occurrence for one endpoint pair, or None below the threshold.

    For the symmetric kinds the endpoints are put in canonical order
    (from-ref lexicographically smallest) before matching, so supplying
    (B, A) and (A, B) produce identical occurrences. parameters_to_fields
    keeps the method as the from side.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind '{kind}'")
    if kind != "parameters_to_fields" and right[0].ref < left[0].ref:
        left, right = right, left
    (from_ep, from_vars), (to_ep, to_vars) = left, right
    variables = tuple(match_variables(from_vars, to_vars, cfg))
    if len(variables) < cfg.min_clump_size:
        return None
    return DataClumpOccurrence(
        key=_key_text(kind, from_ep.ref, to_ep.ref, variables),
        kind=kind,
        from_endpoint=from_ep,
        to_endpoint=to_ep,
        variables=variables,
    )


# ---------------------------------------------------------------------------
# Bundle-wide enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _ClassUnit:
    endpoint: Endpoint
    variables: Tuple[VariableDecl, ...]
    is_aux: bool
    module: str


@dataclass(frozen=True)
class _MethodUnit:
    endpoint: Endpoint
    variables: Tuple[VariableDecl, ...]
    is_aux: bool
    is_override: bool
    declaring_class: str
    module: str


def _units(bundle: AstBundle) -> Tuple[List[_ClassUnit], List[_MethodUnit]]:
    class_units: List[_ClassUnit] = []
    method_units: List[_MethodUnit] = []
    for info in bundle.sorted_classes():
        class_units.append(_ClassUnit(
            endpoint=Endpoint(
                class_qualified_name=info.qualified_name,
                method_signature=None,
                file_path=info.file_path,
                module=info.module,
                position=info.position,
            ),
            variables=info.fields,
            is_aux=info.is_aux,
            module=info.module,
        ))
        for m in info.methods:
            method_units.append(_MethodUnit(
                endpoint=Endpoint(
                    class_qualified_name=info.qualified_name,
                    method_signature=m.signature,
                    file_path=info.file_path,
                    module=info.module,
                    position=m.position,
                ),
                variables=m.parameters,
                is_aux=info.is_aux,
                is_override=m.is_override,
                declaring_class=info.qualified_name,
                module=info.module,
            ))
    method_units.sort(key=lambda u: u.endpoint.ref)
    return class_units, method_units


def _scan_from_class(
    i: int, class_units: Sequence[_ClassUnit], cfg: DetectorConfig
) -> List[DataClumpOccurrence]:
    """fields_to_fields occurrences whose canonical from endpoint is unit i."""
    unit = class_units[i]
    found: List[DataClumpOccurrence] = []
    if unit.is_aux or len(unit.variables) < cfg.min_clump_size:
        return found
    for j in range(i + 1, len(class_units)):
        other = class_units[j]
        if other.is_aux and not cfg.include_aux_counterpart:
            continue
        if len(other.variables) < cfg.min_clump_size:
            continue
        if cfg.scope == "module" and unit.module != other.module:
            continue
        occurrence = detect_pairwise(
            "fields_to_fields",
            (unit.endpoint, unit.variables),
            (other.endpoint, other.variables),
            cfg,
        )
        if occurrence is not None:
            found.append(occurrence)
    return found


def _scan_from_method(
    i: int,
    method_units: Sequence[_MethodUnit],
    class_units: Sequence[_ClassUnit],
    cfg: DetectorConfig,
) -> List[DataClumpOccurrence]:
    """parameters_to_parameters with canonical from = method i, plus that
    method's parameters_to_fields occurrences."""
    unit = method_units[i]
    found: List[DataClumpOccurrence] = []
    if unit.is_aux or len(unit.variables) < cfg.min_clump_size:
        return found
    if unit.is_override and not cfg.include_overrides:
        return found
    for j in range(i + 1, len(method_units)):
        other = method_units[j]
        if other.is_aux and not cfg.include_aux_counterpart:
            continue
        if other.is_override and not cfg.include_overrides:
            continue
        if len(other.variables) < cfg.min_clump_size:
            continue
        if cfg.scope == "module" and unit.module != other.module:
            continue
        occurrence = detect_pairwise(
            "parameters_to_parameters",
            (unit.endpoint, unit.variables),
            (other.endpoint, other.variables),
            cfg,
        )
        if occurrence is not None:
            found.append(occurrence)
    for target in class_units:
        if target.is_aux and not cfg.include_aux_counterpart:
            continue
        if (
            target.endpoint.class_qualified_name == unit.declaring_class
            and not cfg.include_own_class_param_field
        ):
            continue
        if len(target.variables) < cfg.min_clump_size:
            continue
        if cfg.scope == "module" and unit.module != target.module:
            continue
        occurrence = detect_pairwise(
            "parameters_to_fields",
            (unit.endpoint, unit.variables),
            (target.endpoint, target.variables),
            cfg,
        )
        if occurrence is not None:
            found.append(occurrence)
    return found


def detect_occurrences(
    bundle: AstBundle,
    cfg: Optional[DetectorConfig] = None,
    jobs: int = 1,
) -> Tuple[DataClumpOccurrence, ...]:
    """All occurrences in the bundle, deduplicated and sorted by key.

    The pair space is partitioned by the canonical from endpoint, so the
    result is identical for any worker count.
    """
    cfg = cfg or DetectorConfig()
    violations = validate_bundle(bundle)
    if violations:
        raise InvalidBundle(violations)
    class_units, method_units = _units(bundle)

    def scan_class(i: int) -> List[DataClumpOccurrence]:
        return _scan_from_class(i, class_units, cfg)

    def scan_method(i: int) -> List[DataClumpOccurrence]:
        return _scan_from_method(i, method_units, class_units, cfg)

    class_range = range(len(class_units))
    method_range = range(len(method_units))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            class_parts = list(pool.map(scan_class, class_range))
            method_parts = list(pool.map(scan_method, method_range))
    else:
        class_parts = [scan_class(i) for i in class_range]
        method_parts = [scan_method(i) for i in method_range]

    by_key: Dict[str, DataClumpOccurrence] = {}
    for part in class_parts + method_parts:
        for occurrence in part:
            by_key.setdefault(occurrence.key, occurrence)
    return tuple(by_key[k] for k in sorted(by_key))


def detect(
    bundle: AstBundle,
    cfg: Optional[DetectorConfig] = None,
    jobs: int = 1,
    timestamp: Optional[str] = None,
):
    """Detect clumps and wrap them in a report document value.

    Returns a :class:`~dct.report.DataClumpsReport`; the import happens
    lazily because the report module builds on detector types.
    """
    from .report import build_report

    cfg = cfg or DetectorConfig()
    occurrences = detect_occurrences(bundle, cfg, jobs)
    return build_report(bundle, cfg, occurrences, timestamp=timestamp)
