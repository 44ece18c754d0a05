/**
 * Browser shell around the view model: file loading, filter controls, an
 * SVG rendering of the visible subgraph, selection, naming, and export.
 * Everything runs locally; the page never talks to a server. Layout is
 * deliberately simple and deterministic, nothing here is load-bearing for
 * document correctness (that all lives in the modules this imports).
 */

import { Diagnostics } from "./documents";
import { DctError } from "./errors";
import { ClumpGraph, components, GraphEdge } from "./graph";
import { RefactorGroup, renderExtractedClass, suggestName } from "./planner";
import { Kind, KINDS, Occurrence, summaryOf } from "./report";
import {
  applyFilters,
  exportFilteredReport,
  exportPlan,
  loadReport,
  selectedGroups,
  toggleSelection,
  ViewModel,
} from "./viewmodel";

let vm: ViewModel | null = null;
let reportText: string | null = null;
let moduleChoices: string[] = [];

const app = document.querySelector<HTMLDivElement>("#app")!;
app.innerHTML = `
  <header>
    <h1>Data Clump Viewer</h1>
    <span class="hint">load a data-clumps report, explore it, export a refactoring plan</span>
  </header>
  <div id="banner"></div>
  <main>
    <div id="side">
      <section>
        <div id="drop">drop a report.json here, or click to pick a file</div>
        <input id="file" type="file" accept=".json,application/json" hidden />
      </section>
      <section id="summary-section" hidden>
        <h2>Summary</h2>
        <div id="summary"></div>
      </section>
      <section id="filter-section" hidden>
        <h2>Filters</h2>
        <div id="filters"></div>
      </section>
      <section id="occ-section" hidden>
        <h2>Occurrences</h2>
        <div id="occurrences"></div>
      </section>
      <section id="export-section" hidden>
        <h2>Selection &amp; export</h2>
        <div id="groups"></div>
        <p id="selection-count"></p>
        <p>
          <button id="export-plan">Export plan</button>
          <button id="export-report" class="secondary">Export filtered report</button>
        </p>
      </section>
    </div>
    <div id="viz-wrap">
      <section id="viz-section" hidden>
        <h2>Clump graph</h2>
        <div id="viz"></div>
        <p class="legend">
          circles are classes, diamonds are methods; bold red lines are clumps,
          darker when selected. Click a line to toggle selection.
        </p>
      </section>
    </div>
  </main>
`;

const banner = document.querySelector<HTMLDivElement>("#banner")!;

function showError(err: unknown): void {
  const text =
    err instanceof DctError ? `${err.name}: ${err.message}` : String(err);
  banner.className = "";
  banner.textContent = text;
  banner.style.display = "block";
}

function showInfo(text: string): void {
  banner.className = "info";
  banner.textContent = text;
  banner.style.display = "block";
}

function clearBanner(): void {
  banner.style.display = "none";
  banner.textContent = "";
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

// -- loading -----------------------------------------------------------------

const drop = document.querySelector<HTMLDivElement>("#drop")!;
const filePicker = document.querySelector<HTMLInputElement>("#file")!;

drop.addEventListener("click", () => filePicker.click());
drop.addEventListener("dragover", (event) => {
  event.preventDefault();
  drop.classList.add("over");
});
drop.addEventListener("dragleave", () => drop.classList.remove("over"));
drop.addEventListener("drop", (event) => {
  event.preventDefault();
  drop.classList.remove("over");
  const file = event.dataTransfer?.files[0];
  if (file) void loadFile(file);
});
filePicker.addEventListener("change", () => {
  const file = filePicker.files?.[0];
  if (file) void loadFile(file);
  filePicker.value = "";
});

async function loadFile(file: File): Promise<void> {
  const warnings: string[] = [];
  const diagnostics: Diagnostics = { warn: (m) => warnings.push(m) };
  let text: string;
  try {
    text = await file.text();
  } catch (err) {
    showError(err);
    return;
  }
  try {
    // a bad document must not clobber the current view
    const loaded = loadReport(text, diagnostics);
    vm = loaded;
    reportText = text;
  } catch (err) {
    showError(err);
    return;
  }
  if (warnings.length > 0) {
    showInfo(`loaded with ${warnings.length} warning(s):\n` + warnings.join("\n"));
  } else {
    clearBanner();
  }
  moduleChoices = [
    ...new Set(
      vm.report.occurrences.flatMap((o) => [o.from.module, o.to.module]),
    ),
  ].sort();
  renderFilters();
  renderAll();
  for (const id of ["summary-section", "filter-section", "occ-section", "export-section", "viz-section"]) {
    document.getElementById(id)!.hidden = false;
  }
}

// -- static-per-report controls ------------------------------------------------

function renderFilters(): void {
  if (!vm) return;
  const host = document.querySelector<HTMLDivElement>("#filters")!;
  const kindBoxes = KINDS.map(
    (kind) => `
      <label><input type="checkbox" data-kind="${kind}" checked /> ${kind}</label>`,
  ).join("");
  const moduleOptions = moduleChoices
    .map((m, i) => `<option value="${i}">${escapeHtml(m === "" ? "(no module)" : m)}</option>`)
    .join("");
  host.innerHTML = `
    ${kindBoxes}
    <label>min variables
      <input id="f-min" type="number" min="0" value="${vm.filters.min_size}" />
    </label>
    <label>module
      <select id="f-module"><option value="-1">all modules</option>${moduleOptions}</select>
    </label>
    <label>search
      <input id="f-query" type="text" placeholder="endpoint or variable text" />
    </label>
  `;
  host.querySelectorAll<HTMLInputElement>("input[data-kind]").forEach((box) => {
    box.addEventListener("change", () => {
      if (!vm) return;
      const kinds = new Set<string>();
      host
        .querySelectorAll<HTMLInputElement>("input[data-kind]")
        .forEach((b) => b.checked && kinds.add(b.dataset["kind"]!));
      vm.filters.kinds = kinds;
      renderAll();
    });
  });
  host.querySelector<HTMLInputElement>("#f-min")!.addEventListener("input", (event) => {
    if (!vm) return;
    vm.filters.min_size = Math.max(0, Number((event.target as HTMLInputElement).value) || 0);
    renderAll();
  });
  host.querySelector<HTMLSelectElement>("#f-module")!.addEventListener("change", (event) => {
    if (!vm) return;
    const index = Number((event.target as HTMLSelectElement).value);
    vm.filters.module = index < 0 ? null : moduleChoices[index]!;
    renderAll();
  });
  host.querySelector<HTMLInputElement>("#f-query")!.addEventListener("input", (event) => {
    if (!vm) return;
    vm.filters.text_query = (event.target as HTMLInputElement).value;
    renderAll();
  });
}

// -- dynamic panels --------------------------------------------------------------

function renderAll(): void {
  if (!vm) return;
  renderSummary();
  const visibleKeys = renderGraph();
  renderOccurrences(visibleKeys);
  renderExport();
}

function renderSummary(): void {
  if (!vm) return;
  const s = summaryOf(vm.report.occurrences);
  const row = (label: string, value: number | string) =>
    `<tr><td>${escapeHtml(String(label))}</td><td class="num">${escapeHtml(String(value))}</td></tr>`;
  document.querySelector<HTMLDivElement>("#summary")!.innerHTML = `
    <table>
      ${row("project", vm.report.project_name)}
      ${row("classes", vm.report.number_of_classes)}
      ${row("methods", vm.report.number_of_methods)}
      ${row("fields_to_fields", s.fields_to_fields)}
      ${row("parameters_to_parameters", s.parameters_to_parameters)}
      ${row("parameters_to_fields", s.parameters_to_fields)}
      ${row("total", s.total)}
    </table>`;
}

function kindBadge(kind: Kind): string {
  const short: Record<Kind, string> = {
    fields_to_fields: "F2F",
    parameters_to_parameters: "P2P",
    parameters_to_fields: "P2F",
  };
  return short[kind];
}

function renderOccurrences(visibleKeys: Set<string>): void {
  if (!vm) return;
  const host = document.querySelector<HTMLDivElement>("#occurrences")!;
  const rows = vm.report.occurrences
    .map((o: Occurrence) => {
      const vars = o.variables.map((v) => `${v.name}: ${v.type}`).join(", ");
      const checked = vm!.selection.has(o.key) ? "checked" : "";
      const dimmed = visibleKeys.has(o.key) ? "" : " hidden-by-filter";
      return `
        <div class="occ${dimmed}">
          <label>
            <input type="checkbox" data-key="${escapeHtml(o.key)}" ${checked} />
            <strong>${kindBadge(o.kind)}</strong>
            <span class="key">${escapeHtml(o.key)}</span>
          </label>
          <div class="vars">${escapeHtml(vars)}</div>
        </div>`;
    })
    .join("");
  host.innerHTML = rows || "<p>no occurrences in this report</p>";
  host.querySelectorAll<HTMLInputElement>("input[data-key]").forEach((box) => {
    box.addEventListener("change", () => {
      if (!vm) return;
      vm = toggleSelection(vm, box.dataset["key"]!);
      renderAll();
    });
  });
}

function renderExport(): void {
  if (!vm) return;
  const count = document.querySelector<HTMLParagraphElement>("#selection-count")!;
  count.textContent = `${vm.selection.size} of ${vm.report.occurrences.length} occurrences selected`;

  const groups = selectedGroups(vm);
  const host = document.querySelector<HTMLDivElement>("#groups")!;
  host.innerHTML = groups
    .map((g: RefactorGroup) => {
      const suggested = suggestName(g);
      const pending = vm!.pending_names.get(g.group_id) ?? "";
      return `
        <div class="group">
          <div class="gid">${escapeHtml(g.group_id)}</div>
          <label>new class name
            <input type="text" data-group="${escapeHtml(g.group_id)}"
                   placeholder="${escapeHtml(suggested)}" value="${escapeHtml(pending)}" />
          </label>
          <details>
            <summary>class stub preview</summary>
            <pre class="stub">${escapeHtml(stubPreview(g, pending || suggested))}</pre>
          </details>
        </div>`;
    })
    .join("");
  host.querySelectorAll<HTMLInputElement>("input[data-group]").forEach((input) => {
    input.addEventListener("change", () => {
      if (!vm) return;
      vm.pending_names.set(input.dataset["group"]!, input.value.trim());
      renderExport();
    });
  });

  const planButton = document.querySelector<HTMLButtonElement>("#export-plan")!;
  const reportButton = document.querySelector<HTMLButtonElement>("#export-report")!;
  planButton.disabled = vm.selection.size === 0;
  reportButton.disabled = vm.selection.size === 0;
  planButton.onclick = () => void downloadPlan();
  reportButton.onclick = () => void downloadFilteredReport();
}

function stubPreview(g: RefactorGroup, name: string): string {
  // mirrors the planner's package choice for a single group
  const packages = g.affected_endpoints
    .map((ref) => {
      const qname = ref.split("#", 1)[0]!;
      const dot = qname.lastIndexOf(".");
      return dot === -1 ? "" : qname.slice(0, dot);
    })
    .sort();
  try {
    return renderExtractedClass(g.variable_set, name, packages[0]!);
  } catch (err) {
    return err instanceof DctError
      ? `${err.message}\n(class names must match [A-Za-z][A-Za-z0-9]*)`
      : String(err);
  }
}

async function downloadPlan(): Promise<void> {
  if (!vm) return;
  try {
    const text = await exportPlan(vm, reportText ?? undefined);
    offerDownload("plan.json", text);
    clearBanner();
  } catch (err) {
    if (err instanceof DctError && err.name === "InvalidName") {
      showError(`${err.name}: ${err.message} (class names must match [A-Za-z][A-Za-z0-9]*)`);
    } else {
      showError(err);
    }
  }
}

function downloadFilteredReport(): void {
  if (!vm) return;
  try {
    offerDownload("report.filtered.json", exportFilteredReport(vm));
    clearBanner();
  } catch (err) {
    showError(err);
  }
}

function offerDownload(name: string, text: string): void {
  const url = URL.createObjectURL(new Blob([text], { type: "application/json" }));
  const link = document.createElement("a");
  link.href = url;
  link.download = name;
  link.click();
  setTimeout(() => URL.revokeObjectURL(url), 0);
}

// -- the graph drawing ------------------------------------------------------------

function renderGraph(): Set<string> {
  if (!vm) return new Set();
  const view = applyFilters(vm);
  const host = document.querySelector<HTMLDivElement>("#viz")!;

  const clumps = view.edges.filter((e) => e.kind === "clump");
  if (clumps.length === 0) {
    host.innerHTML = "<p>no clump edges match the current filters</p>";
    return view.visible_keys;
  }

  const graphForClusters: ClumpGraph = { nodes: view.nodes, edges: view.edges };
  const clusters = components(graphForClusters);
  const byId = new Map(view.nodes.map((n) => [n.id, n]));

  const width = 760;
  const positions = new Map<string, { x: number; y: number }>();
  let yOffset = 20;
  for (const cluster of clusters) {
    const radius = Math.max(80, cluster.length * 26);
    const cx = width / 2;
    const cy = yOffset + radius + 30;
    cluster.forEach((id, i) => {
      const angle = -Math.PI / 2 + (2 * Math.PI * i) / cluster.length;
      positions.set(id, {
        x: cx + radius * Math.cos(angle),
        y: cy + radius * Math.sin(angle),
      });
    });
    yOffset = cy + radius + 60;
  }

  const parts: string[] = [];
  for (const edge of clumps) {
    const a = positions.get(edge.source);
    const b = positions.get(edge.target);
    if (!a || !b) continue;
    const selected = vm.selection.has(edge.occurrence_key!);
    parts.push(
      `<line data-key="${escapeHtml(edge.occurrence_key!)}"
         x1="${a.x.toFixed(1)}" y1="${a.y.toFixed(1)}"
         x2="${b.x.toFixed(1)}" y2="${b.y.toFixed(1)}"
         stroke="${selected ? "#8e1b2f" : "#dc5a6e"}"
         stroke-width="${selected ? 4 : 2}" cursor="pointer">
         <title>${escapeHtml(edge.occurrence_key!)}</title>
       </line>`,
    );
  }
  for (const [id, p] of positions) {
    const node = byId.get(id);
    if (!node) continue;
    const isMethod = node.kind === "method";
    const label = node.label.length > 34 ? node.label.slice(0, 33) + "…" : node.label;
    const shape = isMethod
      ? `<rect x="${(p.x - 7).toFixed(1)}" y="${(p.y - 7).toFixed(1)}" width="14" height="14"
           transform="rotate(45 ${p.x.toFixed(1)} ${p.y.toFixed(1)})" fill="#3a5a8e" />`
      : `<circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="8" fill="#23233a" />`;
    parts.push(
      `<g>${shape}
        <title>${escapeHtml(id)} (${escapeHtml(node.parent ?? "top level")})</title>
        <text x="${p.x.toFixed(1)}" y="${(p.y + 22).toFixed(1)}" text-anchor="middle"
              font-size="11">${escapeHtml(label)}</text>
      </g>`,
    );
  }

  host.innerHTML = `<svg viewBox="0 0 ${width} ${yOffset}" xmlns="http://www.w3.org/2000/svg">${parts.join("")}</svg>`;
  host.querySelectorAll<SVGLineElement>("line[data-key]").forEach((line) => {
    line.addEventListener("click", () => {
      if (!vm) return;
      vm = toggleSelection(vm, line.dataset["key"]!);
      renderAll();
    });
  });
  return view.visible_keys;
}
