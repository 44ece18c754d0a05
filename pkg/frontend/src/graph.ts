/**
 * Clump graph built client-side from a parsed report, with the same node
 * and edge construction rules as the pipeline's graph stage. Node ids:
 * file path for files, qualified name for classes, `qname#signature` for
 * methods, `endpointRef/name` for variables. Nodes and edges come out
 * sorted by id, so counts and documents match the pipeline exactly.
 */

import { compareCodePoints, JsonObject, stringifyCanonical } from "./documents";
import { InvalidReport } from "./errors";
import { endpointRef, Report } from "./report";

export const NODE_KINDS = ["file", "class", "method", "variable"] as const;
export const EDGE_KINDS = ["contains", "clump"] as const;

export interface GraphNode {
  id: string;
  kind: string;
  label: string;
  parent: string | null;
}

export interface GraphEdge {
  id: string;
  kind: string;
  source: string;
  target: string;
  occurrence_key: string | null;
}

export interface ClumpGraph {
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export function clumpEdges(g: ClumpGraph): GraphEdge[] {
  return g.edges.filter((e) => e.kind === "clump");
}

export function buildGraph(r: Report): ClumpGraph {
  const keys = r.occurrences.map((o) => o.key);
  if (new Set(keys).size !== keys.length) {
    throw new InvalidReport("duplicate occurrence keys");
  }

  const nodes = new Map<string, GraphNode>();
  const edges = new Map<string, GraphEdge>();

  const addNode = (id: string, kind: string, label: string, parent: string | null) => {
    if (!nodes.has(id)) nodes.set(id, { id, kind, label, parent });
  };
  const addContains = (source: string, target: string) => {
    const id = `contains:${source}->${target}`;
    if (!edges.has(id)) {
      edges.set(id, { id, kind: "contains", source, target, occurrence_key: null });
    }
  };

  for (const occurrence of r.occurrences) {
    const endpointIds: string[] = [];
    for (const endpoint of [occurrence.from, occurrence.to]) {
      const qname = endpoint.class_qualified_name;
      addNode(endpoint.file_path, "file", endpoint.file_path, null);
      addNode(qname, "class", qname, endpoint.file_path);
      addContains(endpoint.file_path, qname);
      const ref = endpointRef(endpoint);
      if (endpoint.method_signature !== null) {
        addNode(ref, "method", endpoint.method_signature, qname);
        addContains(qname, ref);
      }
      endpointIds.push(ref);
      for (const variable of occurrence.variables) {
        const varId = `${ref}/${variable.name}`;
        addNode(varId, "variable", variable.name, ref);
        addContains(ref, varId);
      }
    }
    const edgeId = `clump:${occurrence.key}`;
    edges.set(edgeId, {
      id: edgeId,
      kind: "clump",
      source: endpointIds[0]!,
      target: endpointIds[1]!,
      occurrence_key: occurrence.key,
    });
  }

  const byId = (ids: Iterable<string>) => [...ids].sort(compareCodePoints);
  return {
    nodes: byId(nodes.keys()).map((id) => nodes.get(id)!),
    edges: byId(edges.keys()).map((id) => edges.get(id)!),
  };
}

function nodeToDoc(n: GraphNode): JsonObject {
  const doc: JsonObject = { id: n.id, kind: n.kind, label: n.label };
  if (n.parent !== null) doc["parent"] = n.parent;
  return doc;
}

function edgeToDoc(e: GraphEdge): JsonObject {
  const doc: JsonObject = {
    id: e.id,
    kind: e.kind,
    source: e.source,
    target: e.target,
  };
  if (e.occurrence_key !== null) doc["occurrence_key"] = e.occurrence_key;
  return doc;
}

export function graphToDoc(g: ClumpGraph): JsonObject {
  return {
    graph_version: "1.0",
    nodes: g.nodes.map(nodeToDoc),
    edges: g.edges.map(edgeToDoc),
  };
}

/** Canonical graph document (lists stay in sorted-by-id order). */
export function writeGraph(g: ClumpGraph): string {
  return stringifyCanonical(graphToDoc(g));
}

function dotQuote(text: string): string {
  return '"' + text.replace(/\\/g, "\\\\").replace(/"/g, '\\"') + '"';
}

/** DOT digraph; node statements sorted by id, then edge statements. */
export function toDot(g: ClumpGraph): string {
  const lines = ["digraph clumps {"];
  for (const node of [...g.nodes].sort((a, b) => compareCodePoints(a.id, b.id))) {
    lines.push(
      `  ${dotQuote(node.id)} [label=${dotQuote(node.label)}, kind=${dotQuote(node.kind)}];`,
    );
  }
  for (const edge of [...g.edges].sort((a, b) => compareCodePoints(a.id, b.id))) {
    const attrs = [`kind=${dotQuote(edge.kind)}`];
    if (edge.kind === "clump") {
      attrs.push("style=bold");
      attrs.push("color=crimson");
    }
    lines.push(`  ${dotQuote(edge.source)} -> ${dotQuote(edge.target)} [${attrs.join(", ")}];`);
  }
  lines.push("}");
  return lines.join("\n") + "\n";
}

/**
 * Connected components over clump edges only. Each cluster is the sorted
 * list of endpoint node ids it contains; clusters sort by first member.
 */
export function components(g: ClumpGraph): string[][] {
  const adjacency = new Map<string, Set<string>>();
  const connect = (a: string, b: string) => {
    let neighbors = adjacency.get(a);
    if (!neighbors) adjacency.set(a, (neighbors = new Set()));
    neighbors.add(b);
  };
  for (const edge of clumpEdges(g)) {
    connect(edge.source, edge.target);
    connect(edge.target, edge.source);
  }

  const clusters: string[][] = [];
  const visited = new Set<string>();
  for (const start of [...adjacency.keys()].sort(compareCodePoints)) {
    if (visited.has(start)) continue;
    const stack = [start];
    const members: string[] = [];
    visited.add(start);
    while (stack.length > 0) {
      const current = stack.pop()!;
      members.push(current);
      for (const neighbor of adjacency.get(current)!) {
        if (!visited.has(neighbor)) {
          visited.add(neighbor);
          stack.push(neighbor);
        }
      }
    }
    clusters.push(members.sort(compareCodePoints));
  }
  return clusters.sort((a, b) => compareCodePoints(a[0]!, b[0]!));
}
