/**
 * View state over one loaded report. Filters and selection are pure view
 * concerns: they never mutate the report or the graph, they only decide
 * what is visible and what an export will cover.
 */

import { compareCodePoints, Diagnostics } from "./documents";
import { EmptySelection } from "./errors";
import { buildGraph, ClumpGraph, GraphEdge, GraphNode } from "./graph";
import { buildPlan, groupOccurrences, RefactorGroup, writePlan } from "./planner";
import { endpointRef, KINDS, Occurrence, parseReport, Report, writeReport } from "./report";

export interface Filters {
  kinds: Set<string>;
  min_size: number;
  module: string | null;
  text_query: string;
}

export interface ViewModel {
  report: Report;
  graph: ClumpGraph;
  filters: Filters;
  selection: Set<string>;
  pending_names: Map<string, string>;
}

/** All kinds on, size and text inert, no module restriction. */
export function defaultFilters(): Filters {
  return { kinds: new Set(KINDS), min_size: 0, module: null, text_query: "" };
}

export function loadReport(text: string, diagnostics?: Diagnostics): ViewModel {
  const report = parseReport(text, diagnostics);
  return {
    report,
    graph: buildGraph(report),
    filters: defaultFilters(),
    selection: new Set(),
    pending_names: new Map(),
  };
}

/**
 * Conjunction of the active filters: kind membership, variable count at
 * least min_size, either endpoint in the named module, and the query text
 * contained in an endpoint ref or variable name.
 */
export function occurrenceMatches(o: Occurrence, filters: Filters): boolean {
  if (!filters.kinds.has(o.kind)) return false;
  if (o.variables.length < filters.min_size) return false;
  if (
    filters.module !== null &&
    o.from.module !== filters.module &&
    o.to.module !== filters.module
  ) {
    return false;
  }
  if (filters.text_query !== "") {
    const q = filters.text_query;
    const hit =
      endpointRef(o.from).includes(q) ||
      endpointRef(o.to).includes(q) ||
      o.variables.some((v) => v.name.includes(q));
    if (!hit) return false;
  }
  return true;
}

export interface VisibleGraph {
  nodes: GraphNode[];
  edges: GraphEdge[];
  visible_keys: Set<string>;
}

/**
 * The subgraph the filters leave visible. A clump edge shows iff its
 * occurrence passes every filter; nodes show iff they are an endpoint of
 * a visible clump edge, a containment ancestor of one, or a matched
 * variable of a visible occurrence; containment edges need both ends.
 * With default filters this reproduces the full graph.
 */
export function applyFilters(vm: ViewModel): VisibleGraph {
  const visible = vm.report.occurrences.filter((o) => occurrenceMatches(o, vm.filters));
  const visibleKeys = new Set(visible.map((o) => o.key));

  const parents = new Map(vm.graph.nodes.map((n) => [n.id, n.parent]));
  const nodeIds = new Set<string>();
  for (const o of visible) {
    for (const endpoint of [o.from, o.to]) {
      const ref = endpointRef(endpoint);
      let cursor: string | null = ref;
      while (cursor !== null && !nodeIds.has(cursor)) {
        nodeIds.add(cursor);
        cursor = parents.get(cursor) ?? null;
      }
      for (const variable of o.variables) nodeIds.add(`${ref}/${variable.name}`);
    }
  }

  return {
    nodes: vm.graph.nodes.filter((n) => nodeIds.has(n.id)),
    edges: vm.graph.edges.filter((e) =>
      e.kind === "clump"
        ? visibleKeys.has(e.occurrence_key!)
        : nodeIds.has(e.source) && nodeIds.has(e.target),
    ),
    visible_keys: visibleKeys,
  };
}

export type Warner = (message: string) => void;

const consoleWarner: Warner = (message) => console.warn(message);

/**
 * Flip one key's membership in the selection. Selection is data-level:
 * filtered-out keys toggle too. Unknown keys are ignored with a
 * console-level diagnostic and leave the view model untouched.
 */
export function toggleSelection(
  vm: ViewModel,
  key: string,
  warn: Warner = consoleWarner,
): ViewModel {
  if (!vm.report.occurrences.some((o) => o.key === key)) {
    warn(`unknown occurrence key: '${key}'`);
    return vm;
  }
  const selection = new Set(vm.selection);
  if (selection.has(key)) {
    selection.delete(key);
  } else {
    selection.add(key);
  }
  return { ...vm, selection };
}

/** Groups touched by the current selection, in group_id order. */
export function selectedGroups(vm: ViewModel): RefactorGroup[] {
  return groupOccurrences(vm.report).filter((g) =>
    g.occurrence_keys.some((k) => vm.selection.has(k)),
  );
}

/**
 * Plan document for the current selection, with pending names applied to
 * the groups they belong to. Byte-identical to `dct plan` on the same
 * report, selection, and name overrides. `reportText` should be the exact
 * text the report was loaded from so the fingerprint binds to it.
 */
export async function exportPlan(vm: ViewModel, reportText?: string): Promise<string> {
  if (vm.selection.size === 0) {
    throw new EmptySelection("select at least one occurrence to export a plan");
  }
  const keptIds = new Set(selectedGroups(vm).map((g) => g.group_id));
  const names = new Map<string, string>();
  for (const [groupId, name] of vm.pending_names) {
    // blank entry means "accept the suggested name"; names for groups the
    // selection does not touch stay behind as ordinary UI state
    if (keptIds.has(groupId) && name !== "") names.set(groupId, name);
  }
  const selected = [...vm.selection].sort(compareCodePoints);
  const plan = await buildPlan(vm.report, selected, names, reportText);
  return writePlan(plan);
}

/** Report document restricted to the selected keys, summary recomputed. */
export function exportFilteredReport(vm: ViewModel): string {
  if (vm.selection.size === 0) {
    throw new EmptySelection("select at least one occurrence to export a report");
  }
  const occurrences = vm.report.occurrences.filter((o) => vm.selection.has(o.key));
  return writeReport({ ...vm.report, occurrences });
}
