"""Clump graph: files, classes, methods, and variables as nodes.

Built from a report, never from sources. Two edge kinds: ``contains``
(file > class > method, variables under their class or method) gives
renderers the hierarchy; ``clump`` connects the two endpoints of one
occurrence and carries its key so a UI can map selections back to the
report.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from .errors import InvalidReport
from .jsonio import dumps_canonical
from .report import DataClumpsReport

NODE_KINDS = ("file", "class", "method", "variable")
EDGE_KINDS = ("contains", "clump")


@dataclass(frozen=True)
class GraphNode:
    id: str
    kind: str
    label: str
    parent: Optional[str] = None

    def to_doc(self) -> dict:
        doc = {"id": self.id, "kind": self.kind, "label": self.label}
        if self.parent is not None:
            doc["parent"] = self.parent
        return doc


@dataclass(frozen=True)
class GraphEdge:
    id: str
    kind: str
    source: str
    target: str
    occurrence_key: Optional[str] = None

    def to_doc(self) -> dict:
        doc = {
            "id": self.id,
            "kind": self.kind,
            "source": self.source,
            "target": self.target,
        }
        if self.occurrence_key is not None:
            doc["occurrence_key"] = self.occurrence_key
        return doc


@dataclass(frozen=True)
class ClumpGraph:
    nodes: Tuple[GraphNode, ...]
    edges: Tuple[GraphEdge, ...]

    def node_ids(self) -> Set[str]:
        return {n.id for n in self.nodes}

    def clump_edges(self) -> Tuple[GraphEdge, ...]:
        return tuple(e for e in self.edges if e.kind == "clump")


def build_graph(r: DataClumpsReport) -> ClumpGraph:
    """Graph over everything the report's occurrences touch.

    Node ids: file path for files, qualified name for classes,
    ``qname#signature`` for methods, ``endpointRef/name`` for variables.
    Nodes and edges come out sorted by id.
    """
    keys = [o.key for o in r.occurrences]
    if len(set(keys)) != len(keys):
        raise InvalidReport("duplicate occurrence keys")

    nodes: Dict[str, GraphNode] = {}
    edges: Dict[str, GraphEdge] = {}

    def add_node(node_id: str, kind: str, label: str, parent: Optional[str]) -> None:
        if node_id not in nodes:
            nodes[node_id] = GraphNode(id=node_id, kind=kind, label=label, parent=parent)

    def add_contains(source: str, target: str) -> None:
        edge_id = f"contains:{source}->{target}"
        if edge_id not in edges:
            edges[edge_id] = GraphEdge(
                id=edge_id, kind="contains", source=source, target=target
            )

    for occurrence in r.occurrences:
        endpoint_node_ids = []
        for side, endpoint in (("from", occurrence.from_endpoint),
                               ("to", occurrence.to_endpoint)):
            qname = endpoint.class_qualified_name
            add_node(endpoint.file_path, "file", endpoint.file_path, None)
            add_node(qname, "class", qname, endpoint.file_path)
            add_contains(endpoint.file_path, qname)
            if endpoint.method_signature is not None:
                add_node(endpoint.ref, "method", endpoint.method_signature, qname)
                add_contains(qname, endpoint.ref)
            endpoint_node_ids.append(endpoint.ref)
            for variable in occurrence.variables:
                var_id = f"{endpoint.ref}/{variable.name}"
                add_node(var_id, "variable", variable.name, endpoint.ref)
                add_contains(endpoint.ref, var_id)
        source_id, target_id = endpoint_node_ids
        edge_id = f"clump:{occurrence.key}"
        edges[edge_id] = GraphEdge(
            id=edge_id,
            kind="clump",
            source=source_id,
            target=target_id,
            occurrence_key=occurrence.key,
        )

    return ClumpGraph(
        nodes=tuple(nodes[k] for k in sorted(nodes)),
        edges=tuple(edges[k] for k in sorted(edges)),
    )


def graph_to_doc(g: ClumpGraph) -> dict:
    return {
        "graph_version": "1.0",
        "nodes": [n.to_doc() for n in g.nodes],
        "edges": [e.to_doc() for e in g.edges],
    }


def write_graph(g: ClumpGraph) -> str:
    """Canonical graph document (lists stay in sorted-by-id order)."""
    return dumps_canonical(graph_to_doc(g))


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: ClumpGraph) -> str:
    """DOT digraph; node statements sorted by id, then edge statements.

    Edge kind rides along as an attribute; clump edges also get a visual
    style so standard renderers separate them from containment.
    """
    lines = ["digraph clumps {"]
    for node in sorted(g.nodes, key=lambda n: n.id):
        lines.append(
            f"  {_dot_quote(node.id)} "
            f"[label={_dot_quote(node.label)}, kind={_dot_quote(node.kind)}];"
        )
    for edge in sorted(g.edges, key=lambda e: e.id):
        attrs = [f"kind={_dot_quote(edge.kind)}"]
        if edge.kind == "clump":
            attrs.append("style=bold")
            attrs.append("color=crimson")
        lines.append(
            f"  {_dot_quote(edge.source)} -> {_dot_quote(edge.target)} "
            f"[{', '.join(attrs)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def components(g: ClumpGraph) -> List[List[str]]:
    """Connected components over clump edges only.

    Each cluster is the sorted list of endpoint node ids it contains;
    clusters sort by their first member. Nodes without clump edges do not
    appear.
    """
    adjacency: Dict[str, Set[str]] = {}
    for edge in g.clump_edges():
        adjacency.setdefault(edge.source, set()).add(edge.target)
        adjacency.setdefault(edge.target, set()).add(edge.source)

    clusters: List[List[str]] = []
    visited: Set[str] = set()
    for start in sorted(adjacency):
        if start in visited:
            continue
        stack = [start]
        members: List[str] = []
        visited.add(start)
        while stack:
            current = stack.pop()
            members.append(current)
            for neighbor in adjacency[current]:
                if neighbor not in visited:
                    visited.add(neighbor)
                    stack.append(neighbor)
        clusters.append(sorted(members))
    return sorted(clusters, key=lambda c: c[0])
