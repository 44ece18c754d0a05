import { describe, expect, it } from "vitest";
import { EmptySelection, InvalidName, MalformedDocument } from "../src/errors";
import { clumpEdges } from "../src/graph";
import { parseReport, summaryOf } from "../src/report";
import {
  applyFilters,
  defaultFilters,
  exportFilteredReport,
  exportPlan,
  loadReport,
  selectedGroups,
  toggleSelection,
  ViewModel,
} from "../src/viewmodel";
import { fixture, recorder } from "./helpers";

const F2F_KEY = "fields_to_fields|shop.Customer|shop.Order|city:String,street:String,zip:String";

function clumpy(): ViewModel {
  return loadReport(fixture("report.json"));
}

function selectAll(vm: ViewModel): ViewModel {
  let current = vm;
  for (const o of vm.report.occurrences) current = toggleSelection(current, o.key);
  return current;
}

describe("loadReport", () => {
  it("builds the same graph the pipeline writes for the report", () => {
    const vm = clumpy();
    const golden = JSON.parse(fixture("graph.json"));
    expect(vm.graph.nodes).toHaveLength(golden.nodes.length);
    expect(vm.graph.edges).toHaveLength(golden.edges.length);
    expect(vm.selection.size).toBe(0);
    expect(vm.pending_names.size).toBe(0);
  });

  it("shows an empty report as an empty view", () => {
    const vm = loadReport(fixture("report_empty.json"));
    expect(vm.graph.nodes).toHaveLength(0);
    expect(summaryOf(vm.report.occurrences).total).toBe(0);
    expect(applyFilters(vm).edges).toHaveLength(0);
  });

  it("surfaces parse errors instead of producing a view", () => {
    expect(() => loadReport(fixture("report.json").slice(0, 60))).toThrow(MalformedDocument);
  });

  it("passes reader warnings through to the caller's sink", () => {
    const doc = JSON.parse(fixture("report.json"));
    doc.extra = true;
    const diagnostics = recorder();
    loadReport(JSON.stringify(doc), diagnostics);
    expect(diagnostics.warnings).toContain("ignoring unknown key report.extra");
  });
});

describe("applyFilters", () => {
  it("is the identity under default filters", () => {
    const vm = clumpy();
    const view = applyFilters(vm);
    expect(view.nodes).toEqual(vm.graph.nodes);
    expect(view.edges).toEqual(vm.graph.edges);
    expect(view.visible_keys.size).toBe(8);
  });

  it("restricts by kind and hides untouched containment", () => {
    const vm = clumpy();
    vm.filters.kinds = new Set(["fields_to_fields"]);
    const view = applyFilters(vm);
    const clumps = view.edges.filter((e) => e.kind === "clump");
    expect(clumps).toHaveLength(1);
    expect(clumps[0]!.occurrence_key).toBe(F2F_KEY);
    // the only parameters come from Labeler and Order methods; with just
    // the field clump left no method node may survive
    expect(view.nodes.every((n) => !n.id.includes("#"))).toBe(true);
    expect(view.nodes.some((n) => n.id.includes("Labeler"))).toBe(false);
    expect(view.nodes.some((n) => n.id === "shop.Customer")).toBe(true);
    for (const edge of view.edges) {
      const ids = new Set(view.nodes.map((n) => n.id));
      expect(ids.has(edge.source) && ids.has(edge.target)).toBe(true);
    }
  });

  it("restricts by minimum clump size", () => {
    const vm = clumpy();
    vm.filters.min_size = 4;
    expect(applyFilters(vm).visible_keys.size).toBe(0);
    expect(applyFilters(vm).nodes).toHaveLength(0);
    vm.filters.min_size = 3;
    expect(applyFilters(vm).visible_keys.size).toBe(8);
  });

  it("restricts by module on either endpoint", () => {
    const vm = loadReport(fixture("report_multimodule.json"));
    vm.filters.module = "core";
    expect(applyFilters(vm).visible_keys.size).toBe(1);
    vm.filters.module = "app";
    expect(applyFilters(vm).visible_keys.size).toBe(1);
    vm.filters.module = "lib";
    expect(applyFilters(vm).visible_keys.size).toBe(0);
  });

  it("restricts by query text over endpoint refs and variable names", () => {
    const vm = clumpy();
    vm.filters.text_query = "format";
    const expected = new Set(
      vm.report.occurrences
        .filter((o) => o.key.includes("format"))
        .map((o) => o.key),
    );
    expect(expected.size).toBeGreaterThan(0);
    expect(expected.size).toBeLessThan(8);
    expect(applyFilters(vm).visible_keys).toEqual(expected);

    vm.filters.text_query = "street";
    expect(applyFilters(vm).visible_keys.size).toBe(8);
    vm.filters.text_query = "no such text";
    expect(applyFilters(vm).visible_keys.size).toBe(0);
  });

  it("composes conjunctively and clears back to the full view", () => {
    const vm = clumpy();
    vm.filters.kinds = new Set(["parameters_to_fields"]);
    vm.filters.text_query = "format";
    const narrowed = applyFilters(vm).visible_keys;
    for (const key of narrowed) {
      expect(key.startsWith("parameters_to_fields|")).toBe(true);
      expect(key.includes("format")).toBe(true);
    }
    vm.filters = defaultFilters();
    expect(applyFilters(vm).edges).toEqual(vm.graph.edges);
  });

  it("never mutates the report or the graph", () => {
    const vm = clumpy();
    const before = JSON.stringify({ r: vm.report, g: vm.graph });
    vm.filters.kinds = new Set();
    vm.filters.text_query = "zip";
    const view = applyFilters(vm);
    expect(view.edges).toHaveLength(0);
    expect(JSON.stringify({ r: vm.report, g: vm.graph })).toBe(before);
  });
});

describe("toggleSelection", () => {
  it("is an involution", () => {
    const vm = clumpy();
    const once = toggleSelection(vm, F2F_KEY);
    expect(once.selection.has(F2F_KEY)).toBe(true);
    expect(once.selection.size).toBe(1);
    const twice = toggleSelection(once, F2F_KEY);
    expect(twice.selection.size).toBe(0);
    // the original is untouched
    expect(vm.selection.size).toBe(0);
  });

  it("ignores unknown keys with a diagnostic", () => {
    const vm = clumpy();
    const warnings: string[] = [];
    const after = toggleSelection(vm, "bogus|x|y|z:int", (m) => warnings.push(m));
    expect(after).toBe(vm);
    expect(warnings).toEqual(["unknown occurrence key: 'bogus|x|y|z:int'"]);
  });

  it("honors toggles for filtered-out keys", () => {
    const vm = clumpy();
    vm.filters.kinds = new Set(["fields_to_fields"]);
    const hidden = vm.report.occurrences.find((o) => o.kind !== "fields_to_fields")!;
    expect(applyFilters(vm).visible_keys.has(hidden.key)).toBe(false);
    const after = toggleSelection(vm, hidden.key);
    expect(after.selection.has(hidden.key)).toBe(true);
  });
});

describe("exportPlan", () => {
  it("matches `dct plan --all` byte for byte", async () => {
    const text = fixture("report.json");
    const vm = selectAll(loadReport(text));
    expect(await exportPlan(vm, text)).toBe(fixture("plan_all.json"));
    // canonical input, so the fingerprint fallback gives the same bytes
    expect(await exportPlan(vm)).toBe(fixture("plan_all.json"));
  });

  it("applies pending names like `dct plan --name`", async () => {
    const text = fixture("report.json");
    let vm = loadReport(text);
    vm = toggleSelection(vm, F2F_KEY);
    const [touched] = selectedGroups(vm);
    vm.pending_names.set(touched!.group_id, "Address");
    expect(await exportPlan(vm, text)).toBe(fixture("plan_select_named.json"));
  });

  it("treats blank pending names as accepting the suggestion", async () => {
    const text = fixture("report.json");
    const vm = selectAll(loadReport(text));
    vm.pending_names.set(F2F_KEY, "");
    expect(await exportPlan(vm, text)).toBe(fixture("plan_all.json"));
  });

  it("leaves names of untouched groups behind without failing", async () => {
    const text = fixture("report_two_groups.json");
    let vm = loadReport(text);
    const p2p = vm.report.occurrences.find((o) => o.kind === "parameters_to_parameters")!;
    vm = toggleSelection(vm, p2p.key);
    // stale UI state for the group the selection does not touch
    vm.pending_names.set("fields_to_fields|p.A|p.B|city:String,street:String,zip:String", "Spot");
    expect(await exportPlan(vm, text)).toBe(fixture("plan_two_groups_one.json"));
  });

  it("refuses an empty selection", async () => {
    await expect(exportPlan(clumpy())).rejects.toThrow(EmptySelection);
  });

  it("refuses invalid pending names with the identifier rule", async () => {
    let vm = clumpy();
    vm = toggleSelection(vm, F2F_KEY);
    vm.pending_names.set(selectedGroups(vm)[0]!.group_id, "1bad");
    await expect(exportPlan(vm)).rejects.toThrow(InvalidName);
  });
});

describe("exportFilteredReport", () => {
  it("reproduces the original document when everything is selected", () => {
    const text = fixture("report.json");
    const vm = selectAll(loadReport(text));
    expect(exportFilteredReport(vm)).toBe(text);
  });

  it("restricts to the selection and recomputes the summary", () => {
    let vm = clumpy();
    vm = toggleSelection(vm, F2F_KEY);
    const exported = exportFilteredReport(vm);
    const narrowed = parseReport(exported);
    expect(narrowed.occurrences.map((o) => o.key)).toEqual([F2F_KEY]);
    expect(summaryOf(narrowed.occurrences)).toEqual({
      total: 1,
      fields_to_fields: 1,
      parameters_to_parameters: 0,
      parameters_to_fields: 0,
    });
    // project block and config ride along unchanged
    expect(narrowed.project_name).toBe("clumpy");
    expect(narrowed.number_of_classes).toBe(3);
    expect(narrowed.config).toEqual(vm.report.config);
  });

  it("refuses an empty selection", () => {
    expect(() => exportFilteredReport(clumpy())).toThrow(EmptySelection);
  });

  it("leaves the loaded report untouched", () => {
    const text = fixture("report.json");
    let vm = loadReport(text);
    vm = toggleSelection(vm, F2F_KEY);
    exportFilteredReport(vm);
    expect(vm.report.occurrences).toHaveLength(8);
  });
});

describe("selection and grouping", () => {
  it("maps any selected key to its whole group", () => {
    const vm = toggleSelection(clumpy(), F2F_KEY);
    const groups = selectedGroups(vm);
    expect(groups).toHaveLength(1);
    expect(groups[0]!.occurrence_keys).toHaveLength(8);
  });

  it("reports no groups for an empty selection", () => {
    expect(selectedGroups(clumpy())).toEqual([]);
  });
});

describe("view parity with the committed pipeline output", () => {
  it("counts clump edges like the report summary", () => {
    for (const name of ["report.json", "report_two_groups.json", "report_multimodule.json"]) {
      const vm = loadReport(fixture(name));
      expect(clumpEdges(vm.graph)).toHaveLength(summaryOf(vm.report.occurrences).total);
    }
  });
});
