"""Language-neutral class declaration model and its document format.

This is the intermediate representation between source access and clump
detection: one :class:`ClassInfo` per analyzed class/interface/enum, carrying
declarations only (no statement-level detail), aggregated into an
:class:`AstBundle` per extraction run. Any language adapter that can emit
these documents plugs into the rest of the pipeline.

All types are immutable values; every operation here is a pure function.
Serialization is bit-exact: equal values produce byte-identical documents.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple

from .diagnostics import Diagnostics
from .errors import InvariantViolation, MalformedDocument, UnbalancedGenerics, UnsupportedVersion
from .jsonio import dumps_canonical, loads_document

FORMAT_VERSION = "1.0"

CLASS_KINDS = ("class", "interface", "enum")


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Position:
    """1-based source span. ``end`` is inclusive and never precedes ``start``."""

    start_line: int
    start_column: int
    end_line: int
    end_column: int

    def check(self) -> Optional[str]:
        """Return a violation message, or None if the span is well-formed."""
        if self.start_line < 1 or self.start_column < 1:
            return "start must be 1-based"
        if self.end_line < self.start_line:
            return "end_line precedes start_line"
        if self.end_line == self.start_line and self.end_column < self.start_column:
            return "end_column precedes start_column on one line"
        return None


@dataclass(frozen=True)
class VariableDecl:
    """One declared variable: a class field or a method parameter."""

    name: str
    type: str  # normalized type text
    modifiers: Tuple[str, ...]
    position: Position


@dataclass(frozen=True)
class MethodInfo:
    """One declared method or constructor (bodies are not modeled)."""

    name: str
    signature: str  # canonical: name(type1,type2,...)
    return_type: str  # "" for constructors
    modifiers: Tuple[str, ...]
    is_constructor: bool
    is_override: bool
    parameters: Tuple[VariableDecl, ...]
    position: Position


def method_signature(name: str, parameter_types: Iterable[str]) -> str:
    """Canonical signature text: no whitespace, comma-separated parameter types."""
    return f"{name}({','.join(parameter_types)})"


@dataclass(frozen=True)
class ClassInfo:
    """Declaration-level view of one class, interface, or enum.

    ``module`` is the build-module id owning the file ("" means the root
    module); ``is_aux`` marks classes that came from library/auxiliary roots
    rather than project sources. First-level nested types record their name
    as ``Outer.Inner`` so ``qualified_name == package + "." + name`` holds
    uniformly.
    """

    name: str
    qualified_name: str
    kind: str  # one of CLASS_KINDS
    file_path: str
    module: str
    is_aux: bool
    package: str
    extends: Tuple[str, ...]
    implements: Tuple[str, ...]
    fields: Tuple[VariableDecl, ...]
    methods: Tuple[MethodInfo, ...]
    position: Position
    format_version: str = FORMAT_VERSION

    def canonicalized(self) -> "ClassInfo":
        """Copy with member lists in canonical document order."""
        return replace(
            self,
            fields=tuple(sorted(self.fields, key=lambda v: v.name)),
            methods=tuple(sorted(self.methods, key=lambda m: m.signature)),
        )


@dataclass
class AstBundle:
    """Every ClassInfo from one extraction run, keyed by qualified name."""

    classes: Dict[str, ClassInfo] = field(default_factory=dict)
    project_name: str = ""
    source_root: str = ""

    @classmethod
    def from_class_infos(
        cls, infos: Iterable[ClassInfo], project_name: str = "", source_root: str = ""
    ) -> "AstBundle":
        """Assemble a bundle; duplicate qualified names are rejected outright."""
        classes: Dict[str, ClassInfo] = {}
        for info in infos:
            if info.qualified_name in classes:
                raise InvariantViolation(
                    info.qualified_name, "duplicate qualified_name in bundle"
                )
            classes[info.qualified_name] = info
        return cls(classes=classes, project_name=project_name, source_root=source_root)

    def sorted_classes(self) -> List[ClassInfo]:
        return [self.classes[name] for name in sorted(self.classes)]


@dataclass(frozen=True, order=True)
class Violation:
    """One validation finding: which class, which field path, what is wrong."""

    qualified_name: str
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.qualified_name} {self.path}: {self.message}"


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _position_to_doc(p: Position) -> dict:
    return {
        "start_line": p.start_line,
        "start_column": p.start_column,
        "end_line": p.end_line,
        "end_column": p.end_column,
    }


def position_to_doc(p: Position) -> dict:
    """Plain-dict form of a Position (shared by other document schemas)."""
    return _position_to_doc(p)


def parse_position(doc, path: str, diagnostics: Optional["Diagnostics"] = None) -> Position:
    """Validating Position reader (shared by other document schemas)."""
    return _parse_position(doc, path, diagnostics)


def _variable_to_doc(v: VariableDecl) -> dict:
    return {
        "name": v.name,
        "type": v.type,
        "modifiers": list(v.modifiers),
        "position": _position_to_doc(v.position),
    }


def _method_to_doc(m: MethodInfo) -> dict:
    return {
        "name": m.name,
        "signature": m.signature,
        "return_type": m.return_type,
        "modifiers": list(m.modifiers),
        "is_constructor": m.is_constructor,
        "is_override": m.is_override,
        "parameters": [_variable_to_doc(p) for p in m.parameters],
        "position": _position_to_doc(m.position),
    }


def class_to_doc(c: ClassInfo) -> dict:
    """Plain-dict form of a ClassInfo, members in canonical order."""
    c = c.canonicalized()
    return {
        "format_version": c.format_version,
        "name": c.name,
        "qualified_name": c.qualified_name,
        "kind": c.kind,
        "file_path": c.file_path,
        "module": c.module,
        "is_aux": c.is_aux,
        "package": c.package,
        "extends": list(c.extends),
        "implements": list(c.implements),
        "fields": [_variable_to_doc(v) for v in c.fields],
        "methods": [_method_to_doc(m) for m in c.methods],
        "position": _position_to_doc(c.position),
    }


def serialize_class(c: ClassInfo) -> str:
    """Render one class document (canonical JSON, byte-deterministic)."""
    return dumps_canonical(class_to_doc(c))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_POSITION_KEYS = {"start_line", "start_column", "end_line", "end_column"}
_VARIABLE_KEYS = {"name", "type", "modifiers", "position"}
_METHOD_KEYS = {
    "name", "signature", "return_type", "modifiers", "is_constructor",
    "is_override", "parameters", "position",
}
_CLASS_KEYS = {
    "format_version", "name", "qualified_name", "kind", "file_path", "module",
    "is_aux", "package", "extends", "implements", "fields", "methods", "position",
}


def _require(doc: dict, key: str, kind: type, path: str):
    if key not in doc:
        raise MalformedDocument(f"{path}.{key}: missing")
    value = doc[key]
    if kind is bool:
        if not isinstance(value, bool):
            raise MalformedDocument(f"{path}.{key}: expected boolean")
    elif kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise MalformedDocument(f"{path}.{key}: expected integer")
    elif not isinstance(value, kind):
        raise MalformedDocument(f"{path}.{key}: expected {kind.__name__}")
    return value


def _warn_unknown(doc: dict, known: Set[str], path: str, diagnostics: Optional[Diagnostics]):
    if diagnostics is None:
        return
    for key in sorted(set(doc) - known):
        diagnostics.warn(f"ignoring unknown key {path}.{key}")


def _parse_position(doc, path: str, diagnostics: Optional[Diagnostics]) -> Position:
    if not isinstance(doc, dict):
        raise MalformedDocument(f"{path}: expected object")
    _warn_unknown(doc, _POSITION_KEYS, path, diagnostics)
    pos = Position(
        start_line=_require(doc, "start_line", int, path),
        start_column=_require(doc, "start_column", int, path),
        end_line=_require(doc, "end_line", int, path),
        end_column=_require(doc, "end_column", int, path),
    )
    problem = pos.check()
    if problem:
        raise InvariantViolation(path, problem)
    return pos


def _parse_str_list(doc, path: str) -> Tuple[str, ...]:
    if not isinstance(doc, list) or not all(isinstance(x, str) for x in doc):
        raise MalformedDocument(f"{path}: expected list of strings")
    return tuple(doc)


def _parse_variable(doc, path: str, diagnostics: Optional[Diagnostics]) -> VariableDecl:
    if not isinstance(doc, dict):
        raise MalformedDocument(f"{path}: expected object")
    _warn_unknown(doc, _VARIABLE_KEYS, path, diagnostics)
    name = _require(doc, "name", str, path)
    if not name:
        raise InvariantViolation(f"{path}.name", "empty variable name")
    return VariableDecl(
        name=name,
        type=_require(doc, "type", str, path),
        modifiers=_parse_str_list(_require(doc, "modifiers", list, path), f"{path}.modifiers"),
        position=_parse_position(_require(doc, "position", dict, path), f"{path}.position", diagnostics),
    )


def _check_unique_names(variables: Iterable[VariableDecl], path: str) -> None:
    seen: Set[str] = set()
    for i, v in enumerate(variables):
        if v.name in seen:
            raise InvariantViolation(f"{path}[{i}].name", f"duplicate name '{v.name}'")
        seen.add(v.name)


def _parse_method(doc, path: str, diagnostics: Optional[Diagnostics]) -> MethodInfo:
    if not isinstance(doc, dict):
        raise MalformedDocument(f"{path}: expected object")
    _warn_unknown(doc, _METHOD_KEYS, path, diagnostics)
    params_doc = _require(doc, "parameters", list, path)
    parameters = tuple(
        _parse_variable(p, f"{path}.parameters[{i}]", diagnostics)
        for i, p in enumerate(params_doc)
    )
    _check_unique_names(parameters, f"{path}.parameters")
    name = _require(doc, "name", str, path)
    if not name:
        raise InvariantViolation(f"{path}.name", "empty method name")
    signature = _require(doc, "signature", str, path)
    expected = method_signature(name, (p.type for p in parameters))
    if signature != expected:
        raise InvariantViolation(
            f"{path}.signature", f"'{signature}' does not match derived '{expected}'"
        )
    return MethodInfo(
        name=name,
        signature=signature,
        return_type=_require(doc, "return_type", str, path),
        modifiers=_parse_str_list(_require(doc, "modifiers", list, path), f"{path}.modifiers"),
        is_constructor=_require(doc, "is_constructor", bool, path),
        is_override=_require(doc, "is_override", bool, path),
        parameters=parameters,
        position=_parse_position(_require(doc, "position", dict, path), f"{path}.position", diagnostics),
    )


def class_from_doc(doc, diagnostics: Optional[Diagnostics] = None) -> ClassInfo:
    """Build a ClassInfo from a plain dict, enforcing schema and invariants."""
    if not isinstance(doc, dict):
        raise MalformedDocument("document root: expected object")
    version = _require(doc, "format_version", str, "")
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(f"format_version '{version}' (supported: '{FORMAT_VERSION}')")
    _warn_unknown(doc, _CLASS_KEYS, "", diagnostics)

    name = _require(doc, "name", str, "")
    if not name:
        raise InvariantViolation(".name", "empty class name")
    kind = _require(doc, "kind", str, "")
    if kind not in CLASS_KINDS:
        raise InvariantViolation(".kind", f"unknown kind '{kind}'")
    package = _require(doc, "package", str, "")
    qualified_name = _require(doc, "qualified_name", str, "")
    expected_qname = f"{package}.{name}" if package else name
    if qualified_name != expected_qname:
        raise InvariantViolation(
            ".qualified_name", f"'{qualified_name}' does not match derived '{expected_qname}'"
        )

    fields_doc = _require(doc, "fields", list, "")
    fields = tuple(
        _parse_variable(f, f"fields[{i}]", diagnostics) for i, f in enumerate(fields_doc)
    )
    _check_unique_names(fields, "fields")
    methods_doc = _require(doc, "methods", list, "")
    methods = tuple(
        _parse_method(m, f"methods[{i}]", diagnostics) for i, m in enumerate(methods_doc)
    )

    info = ClassInfo(
        name=name,
        qualified_name=qualified_name,
        kind=kind,
        file_path=_require(doc, "file_path", str, ""),
        module=_require(doc, "module", str, ""),
        is_aux=_require(doc, "is_aux", bool, ""),
        package=package,
        extends=_parse_str_list(_require(doc, "extends", list, ""), "extends"),
        implements=_parse_str_list(_require(doc, "implements", list, ""), "implements"),
        fields=fields,
        methods=methods,
        position=_parse_position(_require(doc, "position", dict, ""), "position", diagnostics),
        format_version=version,
    )
    # Tolerant reader: member order is re-canonicalized rather than rejected.
    return info.canonicalized()


def parse_class_document(text: str, diagnostics: Optional[Diagnostics] = None) -> ClassInfo:
    """Parse one class document produced by (or compatible with) serialize_class."""
    return class_from_doc(loads_document(text), diagnostics)


# ---------------------------------------------------------------------------
# Bundle validation
# ---------------------------------------------------------------------------

def _validate_position(pos: Position, qname: str, path: str, out: List[Violation]) -> None:
    problem = pos.check()
    if problem:
        out.append(Violation(qname, path, problem))


def _validate_variables(
    variables: Tuple[VariableDecl, ...], qname: str, path: str,
    require_sorted: bool, out: List[Violation],
) -> None:
    seen: Set[str] = set()
    for i, v in enumerate(variables):
        if not v.name:
            out.append(Violation(qname, f"{path}[{i}].name", "empty variable name"))
        elif v.name in seen:
            out.append(Violation(qname, f"{path}[{i}].name", f"duplicate name '{v.name}'"))
        seen.add(v.name)
        if not v.type:
            out.append(Violation(qname, f"{path}[{i}].type", "empty type"))
        _validate_position(v.position, qname, f"{path}[{i}].position", out)
    if require_sorted and [v.name for v in variables] != sorted(v.name for v in variables):
        out.append(Violation(qname, path, "not sorted by name"))


def validate_class(info: ClassInfo) -> List[Violation]:
    """Check every ClassInfo-level invariant; empty list means valid."""
    qname = info.qualified_name
    out: List[Violation] = []
    if info.format_version != FORMAT_VERSION:
        out.append(Violation(qname, "format_version", f"unsupported '{info.format_version}'"))
    if not info.name:
        out.append(Violation(qname, "name", "empty class name"))
    if info.kind not in CLASS_KINDS:
        out.append(Violation(qname, "kind", f"unknown kind '{info.kind}'"))
    expected_qname = f"{info.package}.{info.name}" if info.package else info.name
    if qname != expected_qname:
        out.append(Violation(qname, "qualified_name", f"does not match derived '{expected_qname}'"))
    _validate_position(info.position, qname, "position", out)
    _validate_variables(info.fields, qname, "fields", require_sorted=True, out=out)
    signatures = [m.signature for m in info.methods]
    if signatures != sorted(signatures):
        out.append(Violation(qname, "methods", "not sorted by signature"))
    for i, m in enumerate(info.methods):
        path = f"methods[{i}]"
        if not m.name:
            out.append(Violation(qname, f"{path}.name", "empty method name"))
        expected = method_signature(m.name, (p.type for p in m.parameters))
        if m.signature != expected:
            out.append(Violation(qname, f"{path}.signature", f"does not match derived '{expected}'"))
        _validate_variables(m.parameters, qname, f"{path}.parameters", require_sorted=False, out=out)
        _validate_position(m.position, qname, f"{path}.position", out)
    return out


def validate_bundle(bundle: AstBundle) -> List[Violation]:
    """Every violation in the bundle, sorted by qualified name then path.

    External supertype names (extends/implements entries that resolve to
    nothing in the bundle) are allowed and not reported.
    """
    out: List[Violation] = []
    qname_counts: Dict[str, int] = {}
    for info in bundle.classes.values():
        qname_counts[info.qualified_name] = qname_counts.get(info.qualified_name, 0) + 1
    for qname, count in qname_counts.items():
        if count > 1:
            out.append(Violation(qname, "qualified_name", "duplicate qualified_name"))
    for key, info in bundle.classes.items():
        if key != info.qualified_name:
            out.append(Violation(
                info.qualified_name, "qualified_name",
                f"bundle key '{key}' does not match",
            ))
        out.extend(validate_class(info))
    return sorted(out)


# ---------------------------------------------------------------------------
# Type normalization
# ---------------------------------------------------------------------------

_TYPE_IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*(?:\.[A-Za-z_$][A-Za-z0-9_$]*)*")


def normalize_type(
    raw: str,
    imports: Mapping[str, str],
    same_package_names: Set[str],
    package: str,
) -> str:
    """Canonicalize one type text.

    Strips all whitespace, then rewrites each identifier segment (outermost
    and inside generic arguments, recursively): an explicit import wins,
    else a same-package declaration qualifies it with ``package``, else the
    segment is left as written. Dotted segments are already qualified and
    never rewritten, which makes the operation idempotent. Array suffixes
    are preserved.

    Raises UnbalancedGenerics when angle brackets do not match.
    """
    if not raw:
        raise ValueError("type text must be non-empty")
    text = "".join(raw.split())
    depth = 0
    for ch in text:
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
            if depth < 0:
                raise UnbalancedGenerics(f"unbalanced '>' in '{raw}'")
    if depth != 0:
        raise UnbalancedGenerics(f"unclosed '<' in '{raw}'")

    def resolve(match: "re.Match[str]") -> str:
        segment = match.group(0)
        if "." in segment:
            return segment
        if segment in imports:
            return imports[segment]
        if package and segment in same_package_names:
            return f"{package}.{segment}"
        return segment

    return _TYPE_IDENT_RE.sub(resolve, text)
