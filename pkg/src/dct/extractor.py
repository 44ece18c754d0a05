"""Built-in source-access adapter for Java-style projects.

Scans a project tree, parses a pragmatic Java declaration subset, resolves
type names through imports and same-package declarations, detects build
modules, marks auxiliary (library) sources, and assembles an
:class:`~dct.model.AstBundle`.

Supported declaration subset: package declaration; single-type imports
(on-demand ``.*`` imports contribute nothing to resolution and produce a
warning); top-level plus one nesting level of class/interface/enum; field
declarations including multi-declarator form (``int x, y;``); method and
constructor declarations; modifiers; extends/implements; generic types kept
as text; annotations skipped except the override marker. Method bodies and
initializers are skipped entirely: declarations are all that downstream
detection needs. Anything outside the subset raises ParseError with a
source position.
"""

from __future__ import annotations

import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fnmatch import fnmatchcase
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .diagnostics import Diagnostics
from .errors import ParseError, RootNotFound, RootNotReadable
from .model import (
    AstBundle,
    ClassInfo,
    MethodInfo,
    Position,
    VariableDecl,
    method_signature,
    normalize_type,
)

BUILD_DESCRIPTORS = ("build.gradle", "build.gradle.kts", "pom.xml", "build.xml")

_MODIFIERS = frozenset({
    "public", "private", "protected", "static", "final", "abstract",
    "default", "native", "synchronized", "transient", "volatile", "strictfp",
})

_TYPE_KEYWORDS = frozenset({"class", "interface", "enum"})


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtractorConfig:
    """How a project tree is scanned and marked.

    ``exclude_dirs`` entries are directory-name patterns (fnmatch syntax);
    the default drops hidden directories and common build output dirs.
    ``aux_roots`` are project-relative path prefixes whose classes are
    flagged as auxiliary/library sources.
    """

    include_globs: Tuple[str, ...] = ("**/*.java",)
    exclude_dirs: Tuple[str, ...] = (".*", "build", "target", "out")
    aux_roots: Tuple[str, ...] = ()
    follow_symlinks: bool = False

    def __post_init__(self):
        if not self.include_globs:
            raise ValueError("include_globs must be non-empty")

    def to_doc(self) -> dict:
        return {
            "include_globs": list(self.include_globs),
            "exclude_dirs": list(self.exclude_dirs),
            "aux_roots": list(self.aux_roots),
            "follow_symlinks": self.follow_symlinks,
        }


@dataclass(frozen=True)
class ModuleMap:
    """Directory path -> module id. The root module always exists as ""."""

    entries: Mapping[str, str] = field(default_factory=lambda: {"": ""})

    def module_for(self, file_path: str) -> str:
        """Module id of the deepest module directory prefixing file_path."""
        best_dir = ""
        best_id = self.entries.get("", "")
        for directory, module_id in self.entries.items():
            if directory and _is_path_prefix(directory, file_path):
                if len(directory) > len(best_dir):
                    best_dir = directory
                    best_id = module_id
        return best_id


def _is_path_prefix(prefix: str, path: str) -> bool:
    prefix = prefix.rstrip("/")
    if not prefix:
        return True
    return path == prefix or path.startswith(prefix + "/")


# ---------------------------------------------------------------------------
# Project scanning
# ---------------------------------------------------------------------------

def _glob_to_regex(pattern: str) -> "re.Pattern[str]":
    """Translate a path glob (with ** spanning directories) to a regex."""
    parts = pattern.split("/")
    out = []
    for i, part in enumerate(parts):
        last = i == len(parts) - 1
        if part == "**":
            out.append(".*" if last else "(?:[^/]+/)*")
            continue
        piece = "".join(
            "[^/]*" if ch == "*" else "[^/]" if ch == "?" else re.escape(ch)
            for ch in part
        )
        out.append(piece if last else piece + "/")
    return re.compile("^" + "".join(out) + "$")


def scan_project(root: str, cfg: ExtractorConfig) -> List[str]:
    """Project-relative source paths matching the config, sorted.

    Directories whose name matches an exclude pattern are pruned with their
    whole subtree. The listing is stable across runs on an unchanged tree.
    """
    if not os.path.isdir(root):
        raise RootNotFound(f"project root not found: {root}")
    if not os.access(root, os.R_OK):
        raise RootNotReadable(f"project root not readable: {root}")
    include = [_glob_to_regex(g) for g in cfg.include_globs]
    found: List[str] = []
    for dirpath, dirnames, filenames in os.walk(root, followlinks=cfg.follow_symlinks):
        dirnames[:] = sorted(
            d for d in dirnames
            if not any(fnmatchcase(d, pat) for pat in cfg.exclude_dirs)
        )
        rel_dir = os.path.relpath(dirpath, root).replace(os.sep, "/")
        for name in filenames:
            rel = name if rel_dir == "." else f"{rel_dir}/{name}"
            if any(rx.match(rel) for rx in include):
                found.append(rel)
    return sorted(found)


def detect_modules(root: str) -> ModuleMap:
    """Module map from build descriptors (Gradle/Maven/Ant files).

    Every directory holding a descriptor becomes a module whose id is its
    root-relative path; the project root is always the "" module. Hidden
    directories are not searched and symlinks are not followed.
    """
    if not os.path.isdir(root):
        raise RootNotFound(f"project root not found: {root}")
    entries: Dict[str, str] = {"": ""}
    for dirpath, dirnames, filenames in os.walk(root, followlinks=False):
        dirnames[:] = sorted(d for d in dirnames if not d.startswith("."))
        if any(name in BUILD_DESCRIPTORS for name in filenames):
            rel = os.path.relpath(dirpath, root).replace(os.sep, "/")
            rel = "" if rel == "." else rel
            entries[rel] = rel
    return ModuleMap(entries=entries)


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # ident | punct | string | char | number | eof
    text: str
    line: int
    column: int


_IDENT_START = frozenset(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$"
)
_IDENT_CONT = _IDENT_START | frozenset("0123456789")
_DIGITS = frozenset("0123456789")


def _tokenize(source: str) -> List[_Token]:
    tokens: List[_Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def advance(k: int):
        nonlocal i, line, col
        for _ in range(k):
            if source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n\f":
            advance(1)
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "/":
            while i < n and source[i] != "\n":
                advance(1)
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "*":
            start_line, start_col = line, col
            advance(2)
            while i < n and not (source[i] == "*" and i + 1 < n and source[i + 1] == "/"):
                advance(1)
            if i >= n:
                raise ParseError("unterminated block comment", start_line, start_col)
            advance(2)
            continue
        if ch in "\"'":
            quote = ch
            start_line, start_col = line, col
            advance(1)
            text = []
            while i < n and source[i] != quote:
                if source[i] == "\\" and i + 1 < n:
                    text.append(source[i : i + 2])
                    advance(2)
                elif source[i] == "\n":
                    raise ParseError("unterminated literal", start_line, start_col)
                else:
                    text.append(source[i])
                    advance(1)
            if i >= n:
                raise ParseError("unterminated literal", start_line, start_col)
            advance(1)
            kind = "string" if quote == '"' else "char"
            tokens.append(_Token(kind, "".join(text), start_line, start_col))
            continue
        if ch in _IDENT_START:
            start_line, start_col = line, col
            j = i
            while j < n and source[j] in _IDENT_CONT:
                j += 1
            tokens.append(_Token("ident", source[i:j], start_line, start_col))
            advance(j - i)
            continue
        if ch in _DIGITS:
            start_line, start_col = line, col
            j = i
            while j < n and (source[j] in _IDENT_CONT or source[j] == "."):
                j += 1
            tokens.append(_Token("number", source[i:j], start_line, start_col))
            advance(j - i)
            continue
        tokens.append(_Token("punct", ch, line, col))
        advance(1)
    tokens.append(_Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Declaration parser
# ---------------------------------------------------------------------------

@dataclass
class _RawVariable:
    name: str
    raw_type: str
    modifiers: Tuple[str, ...]
    position: Position


@dataclass
class _RawMethod:
    name: str
    raw_return_type: str  # "" for constructors
    modifiers: Tuple[str, ...]
    is_constructor: bool
    override_marker: bool
    parameters: List[_RawVariable]
    position: Position


@dataclass
class _RawType:
    kind: str
    name: str  # "Outer.Inner" for nested types
    modifiers: Tuple[str, ...]
    extends: List[str]
    implements: List[str]
    fields: List[_RawVariable]
    methods: List[_RawMethod]
    position: Position


@dataclass
class ParsedFile:
    """Raw parse result for one source file, before type normalization."""

    package: str
    imports: Dict[str, str]  # simple name -> qualified name
    types: List[_RawType]  # top-level and first-level nested, in source order


class _Parser:
    def __init__(self, source: str, file_path: str, diagnostics: Optional[Diagnostics]):
        self.tokens = _tokenize(source)
        self.pos = 0
        self.file_path = file_path
        self.diagnostics = diagnostics

    # -- token plumbing ------------------------------------------------------

    def peek(self, offset: int = 0) -> _Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message: str, tok: Optional[_Token] = None) -> "ParseError":
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.column)

    def expect_punct(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind != "punct" or tok.text != text:
            raise self.fail(f"expected '{text}', found '{tok.text or tok.kind}'")
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> _Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.fail(f"expected {what}, found '{tok.text or tok.kind}'")
        return self.advance()

    def at_punct(self, text: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok.kind == "punct" and tok.text == text

    def at_ident(self, text: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok.kind == "ident" and tok.text == text

    def warn(self, message: str, tok: _Token) -> None:
        if self.diagnostics is not None:
            self.diagnostics.warn(message, file=self.file_path, line=tok.line)

    # -- small grammar pieces ------------------------------------------------

    def dotted_name(self) -> str:
        parts = [self.expect_ident("name").text]
        while self.at_punct("."):
            self.advance()
            if self.at_punct("*"):
                self.advance()
                parts.append("*")
                break
            parts.append(self.expect_ident("name").text)
        return ".".join(parts)

    def skip_balanced(self, open_text: str, close_text: str) -> _Token:
        """Consume from the current opener to its matching closer; returns the closer."""
        opener = self.expect_punct(open_text)
        depth = 1
        while depth > 0:
            tok = self.advance()
            if tok.kind == "eof":
                raise self.fail(f"unterminated '{open_text}'", opener)
            if tok.kind == "punct":
                if tok.text == open_text:
                    depth += 1
                elif tok.text == close_text:
                    depth -= 1
        return self.tokens[self.pos - 1]

    def annotations(self) -> bool:
        """Consume leading annotations; True when an override marker was present."""
        override = False
        while self.at_punct("@"):
            self.advance()
            name = self.dotted_name()
            if name.split(".")[-1] == "Override":
                override = True
            if self.at_punct("("):
                self.skip_balanced("(", ")")
        return override

    def modifiers(self) -> Tuple[str, ...]:
        mods: List[str] = []
        while self.peek().kind == "ident" and self.peek().text in _MODIFIERS:
            # 'default' only acts as a modifier when a declaration follows it
            mods.append(self.advance().text)
        return tuple(mods)

    def read_type_text(self) -> str:
        """One type reference as compact text: Name, a.b.Name<args>[]..."""
        parts = [self.dotted_name()]
        if self.at_punct("<"):
            depth = 0
            while True:
                tok = self.peek()
                if tok.kind == "eof":
                    raise self.fail("unterminated generic arguments")
                if tok.kind == "punct" and tok.text == "<":
                    depth += 1
                elif tok.kind == "punct" and tok.text == ">":
                    depth -= 1
                parts.append(tok.text)
                self.advance()
                if depth == 0:
                    break
        while self.at_punct("[") and self.at_punct("]", 1):
            self.advance()
            self.advance()
            parts.append("[]")
        return "".join(parts)

    # -- compilation unit ----------------------------------------------------

    def parse_file(self) -> ParsedFile:
        package = ""
        imports: Dict[str, str] = {}
        if self.at_ident("package"):
            self.advance()
            package = self.dotted_name()
            self.expect_punct(";")
        while self.at_ident("import"):
            start = self.advance()
            if self.at_ident("static"):
                self.advance()
                self.dotted_name()
                self.warn("static import ignored for type resolution", start)
            else:
                name = self.dotted_name()
                if name.endswith(".*"):
                    self.warn(f"on-demand import '{name}' contributes nothing to resolution", start)
                elif "." not in name:
                    self.warn(f"single-segment import '{name}' ignored", start)
                else:
                    imports[name.rsplit(".", 1)[1]] = name
            self.expect_punct(";")

        types: List[_RawType] = []
        while self.peek().kind != "eof":
            if self.at_punct(";"):
                self.advance()
                continue
            self.type_declaration(types, outer=None)
        return ParsedFile(package=package, imports=imports, types=types)

    def type_declaration(self, out: List[_RawType], outer: Optional[str]) -> None:
        start = self.peek()
        self.annotations()
        mods = self.modifiers()
        tok = self.peek()
        if tok.kind != "ident" or tok.text not in _TYPE_KEYWORDS:
            raise self.fail("expected class, interface, or enum declaration", tok)
        self._type_declaration_tail(out, outer, start, mods)

    def _type_declaration_tail(self, out: List[_RawType], outer: Optional[str],
                               start: _Token, mods: Tuple[str, ...]) -> None:
        """Parse from the class/interface/enum keyword onward."""
        kind = self.advance().text
        name_tok = self.expect_ident("type name")
        name = f"{outer}.{name_tok.text}" if outer else name_tok.text
        if self.at_punct("<"):
            self.skip_balanced("<", ">")

        extends: List[str] = []
        implements: List[str] = []
        if self.at_ident("extends"):
            self.advance()
            extends.append(self.read_type_text())
            while self.at_punct(","):
                if kind != "interface":
                    raise self.fail("only interfaces may extend multiple types")
                self.advance()
                extends.append(self.read_type_text())
        if self.at_ident("implements"):
            if kind == "interface":
                raise self.fail("interfaces cannot implement")
            self.advance()
            implements.append(self.read_type_text())
            while self.at_punct(","):
                self.advance()
                implements.append(self.read_type_text())

        self.expect_punct("{")
        raw = _RawType(
            kind=kind, name=name, modifiers=mods, extends=extends,
            implements=implements, fields=[], methods=[],
            position=Position(start.line, start.column, start.line, start.column),
        )
        out.append(raw)
        if kind == "enum":
            self.enum_constants()
        closer = self.type_body(raw, out, outer_name=name, nested=outer is not None)
        raw.position = Position(start.line, start.column, closer.line, closer.column)

    def enum_constants(self) -> None:
        # Constant list runs to the first ';' at body level (or the whole
        # body). Constants are not recorded: they are values, not fields.
        while True:
            if self.at_punct(";"):
                self.advance()
                return
            if self.at_punct("}"):
                return  # body closer handled by caller
            self.annotations()
            self.expect_ident("enum constant")
            if self.at_punct("("):
                self.skip_balanced("(", ")")
            if self.at_punct("{"):
                self.skip_balanced("{", "}")
            if self.at_punct(","):
                self.advance()
            elif not (self.at_punct(";") or self.at_punct("}")):
                raise self.fail("expected ',', ';', or '}' in enum constant list")

    def type_body(self, raw: _RawType, out: List[_RawType], outer_name: str, nested: bool) -> _Token:
        while True:
            if self.at_punct("}"):
                return self.advance()
            if self.peek().kind == "eof":
                raise self.fail("unterminated type body")
            if self.at_punct(";"):
                self.advance()
                continue
            self.member(raw, out, outer_name, nested)

    def member(self, raw: _RawType, out: List[_RawType], outer_name: str, nested: bool) -> None:
        start = self.peek()
        override = self.annotations()
        mods = self.modifiers()
        tok = self.peek()
        if tok.kind == "ident" and tok.text in _TYPE_KEYWORDS:
            if nested:
                raise self.fail("types nested deeper than one level are not supported", tok)
            self._type_declaration_tail(out, outer_name, start, mods)
            return
        simple_name = raw.name.split(".")[-1]
        if tok.kind == "ident" and tok.text == simple_name and self.at_punct("(", 1):
            self.constructor(raw, mods, override, start)
            return
        if self.at_punct("<"):
            self.skip_balanced("<", ">")  # method type parameters
        raw_type = self.read_type_text()
        name_tok = self.expect_ident("member name")
        if self.at_punct("("):
            self.method(raw, mods, override, raw_type, name_tok, start)
        else:
            self.field_declarators(raw, mods, raw_type, name_tok, start)

    def parameters(self) -> List[_RawVariable]:
        self.expect_punct("(")
        params: List[_RawVariable] = []
        if self.at_punct(")"):
            self.advance()
            return params
        while True:
            mods: List[str] = []
            while self.at_punct("@") or self.at_ident("final"):
                if self.at_punct("@"):
                    self.advance()
                    self.dotted_name()
                    if self.at_punct("("):
                        self.skip_balanced("(", ")")
                else:
                    mods.append(self.advance().text)
            raw_type = self.read_type_text()
            name_tok = self.expect_ident("parameter name")
            if any(p.name == name_tok.text for p in params):
                raise self.fail(f"duplicate parameter name '{name_tok.text}'", name_tok)
            params.append(_RawVariable(
                name=name_tok.text, raw_type=raw_type, modifiers=tuple(mods),
                position=_ident_span(name_tok),
            ))
            if self.at_punct(","):
                self.advance()
                continue
            self.expect_punct(")")
            return params

    def _method_tail(self) -> _Token:
        if self.at_ident("throws"):
            self.advance()
            self.dotted_name()
            while self.at_punct(","):
                self.advance()
                self.dotted_name()
        if self.at_punct(";"):
            return self.advance()
        if self.at_punct("{"):
            return self.skip_balanced("{", "}")
        raise self.fail("expected method body or ';'")

    def constructor(self, raw: _RawType, mods: Tuple[str, ...], override: bool, start: _Token) -> None:
        name_tok = self.expect_ident("constructor name")
        params = self.parameters()
        end = self._method_tail()
        raw.methods.append(_RawMethod(
            name=name_tok.text, raw_return_type="", modifiers=mods,
            is_constructor=True, override_marker=override, parameters=params,
            position=Position(start.line, start.column, end.line, end.column),
        ))

    def method(self, raw: _RawType, mods: Tuple[str, ...], override: bool,
               raw_return: str, name_tok: _Token, start: _Token) -> None:
        params = self.parameters()
        end = self._method_tail()
        raw.methods.append(_RawMethod(
            name=name_tok.text, raw_return_type=raw_return, modifiers=mods,
            is_constructor=False, override_marker=override, parameters=params,
            position=Position(start.line, start.column, end.line, end.column),
        ))

    def field_declarators(self, raw: _RawType, mods: Tuple[str, ...],
                          raw_type: str, first_name: _Token, start: _Token) -> None:
        names = [first_name]
        while True:
            if self.at_punct("="):
                self.advance()
                self._skip_initializer()
            if self.at_punct(","):
                self.advance()
                names.append(self.expect_ident("field name"))
                continue
            self.expect_punct(";")
            break
        for tok in names:
            if any(f.name == tok.text for f in raw.fields):
                raise self.fail(f"duplicate field name '{tok.text}'", tok)
            raw.fields.append(_RawVariable(
                name=tok.text, raw_type=raw_type, modifiers=mods,
                position=_ident_span(tok),
            ))

    def _skip_initializer(self) -> None:
        # Runs to the next ',' or ';' outside any (), [], {} nesting.
        depth = 0
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                raise self.fail("unterminated field initializer")
            if tok.kind == "punct":
                if tok.text in "([{":
                    depth += 1
                elif tok.text in ")]}":
                    if depth == 0:
                        raise self.fail("unbalanced bracket in initializer")
                    depth -= 1
                elif depth == 0 and tok.text in ",;":
                    return
            self.advance()


def _ident_span(tok: _Token) -> Position:
    return Position(tok.line, tok.column, tok.line, tok.column + len(tok.text) - 1)


def parse_source(source: str, file_path: str = "",
                 diagnostics: Optional[Diagnostics] = None) -> ParsedFile:
    """Parse one source file into raw declarations (types not yet normalized)."""
    return _Parser(source, file_path, diagnostics).parse_file()


# ---------------------------------------------------------------------------
# ClassInfo construction
# ---------------------------------------------------------------------------

def _top_level_names(parsed: ParsedFile) -> Set[str]:
    return {t.name for t in parsed.types if "." not in t.name}


def class_infos_from_parsed(
    parsed: ParsedFile,
    file_path: str,
    module_map: Optional[ModuleMap] = None,
    package_names: Optional[Mapping[str, Set[str]]] = None,
) -> List[ClassInfo]:
    """Normalize a parsed file into ClassInfo records.

    ``package_names`` maps package -> top-level type names declared anywhere
    in the bundle; the file's own declarations always take part, so a lone
    file resolves self-references without any bundle context.
    """
    module_map = module_map or ModuleMap()
    package = parsed.package
    same_package = set((package_names or {}).get(package, set())) | _top_level_names(parsed)
    module = module_map.module_for(file_path)

    def norm(raw: str) -> str:
        return normalize_type(raw, parsed.imports, same_package, package)

    infos: List[ClassInfo] = []
    for raw in parsed.types:
        fields = tuple(sorted(
            (VariableDecl(v.name, norm(v.raw_type), v.modifiers, v.position)
             for v in raw.fields),
            key=lambda v: v.name,
        ))
        methods: List[MethodInfo] = []
        seen_signatures: Set[str] = set()
        for m in raw.methods:
            params = tuple(
                VariableDecl(p.name, norm(p.raw_type), p.modifiers, p.position)
                for p in m.parameters
            )
            signature = method_signature(m.name, (p.type for p in params))
            if signature in seen_signatures:
                raise ParseError(
                    f"duplicate method signature '{signature}' in {raw.name}",
                    m.position.start_line, m.position.start_column,
                )
            seen_signatures.add(signature)
            methods.append(MethodInfo(
                name=m.name,
                signature=signature,
                return_type=norm(m.raw_return_type) if m.raw_return_type else "",
                modifiers=m.modifiers,
                is_constructor=m.is_constructor,
                is_override=m.override_marker,
                parameters=params,
                position=m.position,
            ))
        infos.append(ClassInfo(
            name=raw.name,
            qualified_name=f"{package}.{raw.name}" if package else raw.name,
            kind=raw.kind,
            file_path=file_path,
            module=module,
            is_aux=False,
            package=package,
            extends=tuple(norm(t) for t in raw.extends),
            implements=tuple(norm(t) for t in raw.implements),
            fields=fields,
            methods=tuple(sorted(methods, key=lambda m: m.signature)),
            position=raw.position,
        ))
    return infos


def extract_class_infos(
    source: str,
    file_path: str,
    module_map: Optional[ModuleMap] = None,
    package_names: Optional[Mapping[str, Set[str]]] = None,
    diagnostics: Optional[Diagnostics] = None,
) -> List[ClassInfo]:
    """Parse one file's text into ClassInfo records (empty for type-free files)."""
    parsed = parse_source(source, file_path, diagnostics)
    return class_infos_from_parsed(parsed, file_path, module_map, package_names)


# ---------------------------------------------------------------------------
# Bundle-level passes
# ---------------------------------------------------------------------------

def mark_aux(bundle: AstBundle, aux_roots: Sequence[str]) -> AstBundle:
    """New bundle with is_aux set on every class under any aux root.

    Roots are matched on whole path components: "libs" and "libs/" both
    cover "libs/Vendor.java" but never "libs2/...".
    """
    if not aux_roots:
        return bundle
    classes = {}
    for qname, info in bundle.classes.items():
        if any(_is_path_prefix(root, info.file_path) for root in aux_roots):
            info = replace(info, is_aux=True)
        classes[qname] = info
    return AstBundle(classes=classes, project_name=bundle.project_name,
                     source_root=bundle.source_root)


def _supertype_key(type_text: str) -> str:
    """Bundle-lookup key for an extends/implements entry: drop generics/arrays."""
    base = type_text.split("<", 1)[0]
    while base.endswith("[]"):
        base = base[:-2]
    return base


def _inherited_signatures(qname: str, classes: Mapping[str, ClassInfo]) -> Set[str]:
    """Signatures declared by all transitive in-bundle supertypes of qname."""
    signatures: Set[str] = set()
    visited: Set[str] = {qname}
    stack = [
        _supertype_key(t)
        for t in list(classes[qname].extends) + list(classes[qname].implements)
    ]
    while stack:
        current = stack.pop()
        if current in visited or current not in classes:
            continue
        visited.add(current)
        info = classes[current]
        signatures.update(m.signature for m in info.methods if not m.is_constructor)
        stack.extend(
            _supertype_key(t) for t in list(info.extends) + list(info.implements)
        )
    return signatures


def resolve_overrides(bundle: AstBundle) -> AstBundle:
    """Flag methods that redeclare a supertype method resolvable in the bundle.

    Keeps any override markers carried from source. Supertype cycles are
    tolerated; supertypes outside the bundle never flag anything. Idempotent.
    """
    classes = bundle.classes
    updated: Dict[str, ClassInfo] = {}
    for qname in classes:
        info = classes[qname]
        inherited = _inherited_signatures(qname, classes)
        methods = tuple(
            replace(m, is_override=True)
            if not m.is_constructor and not m.is_override and m.signature in inherited
            else m
            for m in info.methods
        )
        updated[qname] = replace(info, methods=methods)
    return AstBundle(classes=updated, project_name=bundle.project_name,
                     source_root=bundle.source_root)


# ---------------------------------------------------------------------------
# Whole-project extraction
# ---------------------------------------------------------------------------

def extract_project(
    root: str,
    cfg: Optional[ExtractorConfig] = None,
    module_detection: bool = True,
    jobs: int = 1,
    project_name: Optional[str] = None,
    diagnostics: Optional[Diagnostics] = None,
) -> AstBundle:
    """Scan, parse, and assemble a full project bundle.

    Files that violate the declaration subset are skipped and reported as
    ERROR diagnostics; callers wanting strict behavior check the channel.
    Parsing runs per file (optionally in parallel); results are merged in
    sorted order so output is independent of scheduling.
    """
    cfg = cfg or ExtractorConfig()
    files = scan_project(root, cfg)
    module_map = detect_modules(root) if module_detection else ModuleMap()

    def parse_one(rel_path: str) -> Optional[ParsedFile]:
        try:
            with open(os.path.join(root, rel_path), encoding="utf-8", errors="replace") as fh:
                source = fh.read()
            return parse_source(source, rel_path, diagnostics)
        except ParseError as exc:
            if diagnostics is not None:
                diagnostics.error(f"skipped: {exc}", file=rel_path, line=exc.line)
            return None

    if jobs > 1 and len(files) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parsed_list = list(pool.map(parse_one, files))
    else:
        parsed_list = [parse_one(f) for f in files]
    parsed_by_file = {f: p for f, p in zip(files, parsed_list) if p is not None}

    package_names: Dict[str, Set[str]] = {}
    for parsed in parsed_by_file.values():
        package_names.setdefault(parsed.package, set()).update(_top_level_names(parsed))

    def build_one(rel_path: str) -> List[ClassInfo]:
        try:
            return class_infos_from_parsed(
                parsed_by_file[rel_path], rel_path, module_map, package_names
            )
        except ParseError as exc:
            if diagnostics is not None:
                diagnostics.error(f"skipped: {exc}", file=rel_path, line=exc.line)
            return []

    ordered_files = sorted(parsed_by_file)
    if jobs > 1 and len(ordered_files) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_file = list(pool.map(build_one, ordered_files))
    else:
        per_file = [build_one(f) for f in ordered_files]

    classes: Dict[str, ClassInfo] = {}
    for infos in per_file:
        for info in infos:
            if info.qualified_name in classes:
                if diagnostics is not None:
                    diagnostics.error(
                        f"skipped duplicate declaration of {info.qualified_name} "
                        f"(kept {classes[info.qualified_name].file_path})",
                        file=info.file_path,
                        line=info.position.start_line,
                    )
                continue
            classes[info.qualified_name] = info

    bundle = AstBundle(
        classes={q: classes[q] for q in sorted(classes)},
        project_name=project_name if project_name is not None else os.path.basename(
            os.path.abspath(root)
        ),
        source_root=root.replace(os.sep, "/"),
    )
    bundle = mark_aux(bundle, cfg.aux_roots)
    return resolve_overrides(bundle)
