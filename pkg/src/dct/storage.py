"""On-disk layout for extracted AST bundles.

An AST directory holds one JSON document per class, named by qualified
name, plus a ``bundle.json`` manifest. The layout is the handoff point
between extraction and detection: a detector run needs only this
directory, never the original sources.
"""

from __future__ import annotations

import os
from typing import Optional, Tuple

from .diagnostics import Diagnostics
from .errors import MalformedDocument, RootNotFound
from .jsonio import dumps_canonical, loads_document
from .model import AstBundle, parse_class_document, serialize_class

BUNDLE_FILENAME = "bundle.json"


def write_ast_dir(bundle: AstBundle, out_dir: str, config_echo: Optional[dict] = None) -> None:
    """Write one document per class plus the bundle manifest.

    Writes are sorted by qualified name; two runs over equal bundles
    produce byte-identical trees.
    """
    os.makedirs(out_dir, exist_ok=True)
    for info in bundle.sorted_classes():
        path = os.path.join(out_dir, f"{info.qualified_name}.json")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(serialize_class(info))
    manifest = {
        "project_name": bundle.project_name,
        "source_root": bundle.source_root,
        "class_count": len(bundle.classes),
        "config": config_echo if config_echo is not None else {},
    }
    with open(os.path.join(out_dir, BUNDLE_FILENAME), "w", encoding="utf-8", newline="") as fh:
        fh.write(dumps_canonical(manifest))


def read_ast_dir(ast_dir: str, diagnostics: Optional[Diagnostics] = None) -> Tuple[AstBundle, dict]:
    """Load an AST directory back into a bundle plus its manifest.

    Raises MalformedDocument or UnsupportedVersion when any class document
    is unreadable; missing manifests raise MalformedDocument too.
    """
    if not os.path.isdir(ast_dir):
        raise RootNotFound(f"AST directory not found: {ast_dir}")
    manifest_path = os.path.join(ast_dir, BUNDLE_FILENAME)
    if not os.path.isfile(manifest_path):
        raise MalformedDocument(f"missing {BUNDLE_FILENAME} in {ast_dir}")
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = loads_document(fh.read())
    if not isinstance(manifest, dict):
        raise MalformedDocument(f"{BUNDLE_FILENAME} must hold an object")

    infos = []
    for name in sorted(os.listdir(ast_dir)):
        if name == BUNDLE_FILENAME or not name.endswith(".json"):
            continue
        path = os.path.join(ast_dir, name)
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        try:
            infos.append(parse_class_document(text, diagnostics))
        except MalformedDocument as exc:
            raise MalformedDocument(f"{name}: {exc}") from exc
    return (
        AstBundle.from_class_infos(
            infos,
            project_name=str(manifest.get("project_name", "")),
            source_root=str(manifest.get("source_root", "")),
        ),
        manifest,
    )
