/**
 * Extract-class plans, grouped and rendered with the same rules as the
 * pipeline's planner so a plan exported from the browser is byte-identical
 * to what `dct plan` writes for the same report, selection, and names.
 *
 * Occurrences sharing an endpoint and an identical variable set collapse
 * into one refactoring group; each selected group carries a new-class stub
 * plus the list of sites whose fields or parameters it would replace.
 */

import {
  compareCodePoints,
  Diagnostics,
  encodeUtf8,
  fingerprint,
  Json,
  JsonObject,
  parseDocument,
  stringifyCanonical,
} from "./documents";
import {
  EmptyGroup,
  InvalidName,
  MalformedDocument,
  UnknownKey,
  UnsupportedVersion,
} from "./errors";
import { endpointRef, Occurrence, Report, schema, writeReport } from "./report";

export const PLAN_VERSION = "1.0";

export const IDENTIFIER_RE = /^[A-Za-z][A-Za-z0-9]*$/;

export const ACTIONS = ["replace_fields", "replace_parameters"] as const;

/** (name, type) pair; groups carry them sorted by name, then type. */
export type VariablePair = readonly [string, string];

export interface RefactorGroup {
  group_id: string;
  variable_set: VariablePair[];
  occurrence_keys: string[];
  affected_endpoints: string[];
}

export interface PlanSite {
  endpoint: string;
  action: string;
}

export interface PlannedGroup {
  group: RefactorGroup;
  new_class_name: string;
  new_class_package: string;
  class_stub: string;
  sites: PlanSite[];
}

export interface RefactorPlan {
  plan_version: string;
  source_report_fingerprint: string;
  groups: PlannedGroup[];
}

function comparePairs(a: VariablePair, b: VariablePair): number {
  return compareCodePoints(a[0], b[0]) || compareCodePoints(a[1], b[1]);
}

/**
 * Partition occurrences into refactoring groups. Two occurrences land in
 * one group when they are connected through a chain of occurrences that
 * share an endpoint AND carry exactly the same (name, type) variable set.
 * Output sorted by group_id (the group's first occurrence key).
 */
export function groupOccurrences(r: Report): RefactorGroup[] {
  const variableSet = (o: Occurrence): VariablePair[] =>
    o.variables
      .map((v): VariablePair => [v.name, v.type])
      .sort(comparePairs);

  const buckets = new Map<string, { vars: VariablePair[]; members: Occurrence[] }>();
  for (const occurrence of r.occurrences) {
    const vars = variableSet(occurrence);
    const bucketKey = JSON.stringify(vars);
    let bucket = buckets.get(bucketKey);
    if (!bucket) buckets.set(bucketKey, (bucket = { vars, members: [] }));
    bucket.members.push(occurrence);
  }

  const groups: RefactorGroup[] = [];
  for (const { vars, members } of buckets.values()) {
    const byEndpoint = new Map<string, number[]>();
    members.forEach((occurrence, index) => {
      for (const ref of [endpointRef(occurrence.from), endpointRef(occurrence.to)]) {
        let indices = byEndpoint.get(ref);
        if (!indices) byEndpoint.set(ref, (indices = []));
        indices.push(index);
      }
    });

    const visited = new Set<number>();
    for (let start = 0; start < members.length; start++) {
      if (visited.has(start)) continue;
      const component: Occurrence[] = [];
      const stack = [start];
      visited.add(start);
      while (stack.length > 0) {
        const index = stack.pop()!;
        const occurrence = members[index]!;
        component.push(occurrence);
        for (const ref of [endpointRef(occurrence.from), endpointRef(occurrence.to)]) {
          for (const other of byEndpoint.get(ref)!) {
            if (!visited.has(other)) {
              visited.add(other);
              stack.push(other);
            }
          }
        }
      }
      const keys = component.map((o) => o.key).sort(compareCodePoints);
      const endpoints = [
        ...new Set(component.flatMap((o) => [endpointRef(o.from), endpointRef(o.to)])),
      ].sort(compareCodePoints);
      groups.push({
        group_id: keys[0]!,
        variable_set: vars,
        occurrence_keys: keys,
        affected_endpoints: endpoints,
      });
    }
  }
  return groups.sort((a, b) => compareCodePoints(a.group_id, b.group_id));
}

function capitalizeFirst(text: string): string {
  // first code point, not first UTF-16 unit
  const first = [...text][0] ?? "";
  return first.toUpperCase() + text.slice(first.length);
}

/**
 * Default class name: sorted variable names, capitalized, + "Data".
 * Characters outside [A-Za-z0-9] are dropped; a fallback prefix keeps the
 * result a valid identifier; the final text is capped at 40 characters.
 */
export function suggestName(g: RefactorGroup): string {
  if (g.variable_set.length === 0) {
    throw new EmptyGroup("cannot name a group with no variables");
  }
  const raw = g.variable_set.map(([name]) => capitalizeFirst(name)).join("") + "Data";
  let cleaned = raw.replace(/[^A-Za-z0-9]/g, "");
  if (!IDENTIFIER_RE.test(cleaned)) cleaned = "Clump" + cleaned;
  return cleaned.slice(0, 40);
}

/**
 * Java-subset source for the extracted class: private fields in sorted
 * order, an all-args constructor, one getter per field. The text parses
 * back through the pipeline's extractor, which is how plans stay
 * checkable without an IDE.
 */
export function renderExtractedClass(
  variableSet: readonly VariablePair[],
  name: string,
  pkg: string,
): string {
  if (!IDENTIFIER_RE.test(name)) {
    throw new InvalidName(`'${name}' is not a valid class name`);
  }
  if (variableSet.length === 0) {
    throw new EmptyGroup("cannot render a class with no fields");
  }
  const ordered = [...variableSet].sort((a, b) => compareCodePoints(a[0], b[0]));

  const lines: string[] = [];
  if (pkg) {
    lines.push(`package ${pkg};`);
    lines.push("");
  }
  lines.push(`public class ${name} {`);
  for (const [varName, varType] of ordered) {
    lines.push(`    private ${varType} ${varName};`);
  }
  lines.push("");
  const args = ordered.map(([n, t]) => `${t} ${n}`).join(", ");
  lines.push(`    public ${name}(${args}) {`);
  for (const [varName] of ordered) {
    lines.push(`        this.${varName} = ${varName};`);
  }
  lines.push("    }");
  for (const [varName, varType] of ordered) {
    const getter = "get" + capitalizeFirst(varName);
    lines.push("");
    lines.push(`    public ${varType} ${getter}() {`);
    lines.push(`        return ${varName};`);
    lines.push("    }");
  }
  lines.push("}");
  return lines.join("\n") + "\n";
}

function packageOf(ref: string): string {
  const qname = ref.split("#", 1)[0]!;
  const dot = qname.lastIndexOf(".");
  return dot === -1 ? "" : qname.slice(0, dot);
}

/**
 * Plan covering every group that contains a selected occurrence key.
 * `names` overrides the suggested class name per group_id. The
 * fingerprint binds the plan to the exact report document text; when the
 * caller has no original text, the canonical serialization stands in.
 * Async only because the content hash uses WebCrypto.
 */
export async function buildPlan(
  r: Report,
  selected: readonly string[],
  names?: ReadonlyMap<string, string>,
  reportText?: string,
): Promise<RefactorPlan> {
  const nameMap = names ?? new Map<string, string>();
  const knownKeys = new Set(r.occurrences.map((o) => o.key));
  for (const key of selected) {
    if (!knownKeys.has(key)) {
      throw new UnknownKey(`occurrence key not in report: '${key}'`);
    }
  }

  const allGroups = groupOccurrences(r);
  const selectedSet = new Set(selected);
  const kept = allGroups.filter((g) => g.occurrence_keys.some((k) => selectedSet.has(k)));

  const keptIds = new Set(kept.map((g) => g.group_id));
  const overrides = [...nameMap.entries()].sort((a, b) => compareCodePoints(a[0], b[0]));
  for (const [groupId, name] of overrides) {
    if (!keptIds.has(groupId)) {
      throw new UnknownKey(`name override for unknown group: '${groupId}'`);
    }
    if (!IDENTIFIER_RE.test(name)) {
      throw new InvalidName(`'${name}' is not a valid class name`);
    }
  }

  const planned = kept.map((group): PlannedGroup => {
    const name = nameMap.get(group.group_id) ?? suggestName(group);
    const pkg = group.affected_endpoints.map(packageOf).sort(compareCodePoints)[0]!;
    return {
      group,
      new_class_name: name,
      new_class_package: pkg,
      class_stub: renderExtractedClass(group.variable_set, name, pkg),
      sites: group.affected_endpoints.map((ref) => ({
        endpoint: ref,
        action: ref.includes("#") ? "replace_parameters" : "replace_fields",
      })),
    };
  });

  const text = reportText ?? writeReport(r);
  return {
    plan_version: PLAN_VERSION,
    source_report_fingerprint: await fingerprint(encodeUtf8(text)),
    groups: planned,
  };
}

// -- plan document -------------------------------------------------------------

function groupToDoc(g: RefactorGroup): JsonObject {
  return {
    group_id: g.group_id,
    variable_set: g.variable_set.map(([n, t]) => ({ name: n, type: t })),
    occurrence_keys: [...g.occurrence_keys],
    affected_endpoints: [...g.affected_endpoints],
  };
}

export function planToDoc(plan: RefactorPlan): JsonObject {
  return {
    plan_version: plan.plan_version,
    source_report_fingerprint: plan.source_report_fingerprint,
    groups: plan.groups.map((g) => ({
      group: groupToDoc(g.group),
      new_class_name: g.new_class_name,
      new_class_package: g.new_class_package,
      class_stub: g.class_stub,
      sites: g.sites.map((s) => ({ endpoint: s.endpoint, action: s.action })),
    })),
  };
}

/** Canonical plan document (groups stay sorted by group_id). */
export function writePlan(plan: RefactorPlan): string {
  return stringifyCanonical(planToDoc(plan));
}

const PLAN_KEYS = new Set(["plan_version", "source_report_fingerprint", "groups"]);
const PLANNED_GROUP_KEYS = new Set([
  "group",
  "new_class_name",
  "new_class_package",
  "class_stub",
  "sites",
]);
const GROUP_KEYS = new Set([
  "group_id",
  "variable_set",
  "occurrence_keys",
  "affected_endpoints",
]);

function strItems(doc: JsonObject, key: string, path: string): string[] {
  const items = schema.requireList(doc, key, path);
  if (!items.every((x) => typeof x === "string")) {
    throw new MalformedDocument(`${path}.${key}: expected list of strings`);
  }
  return items as string[];
}

/** Validating reader for plan documents. */
export function parsePlan(text: string, diagnostics?: Diagnostics): RefactorPlan {
  const doc = parseDocument(text);
  if (!schema.isObject(doc)) throw new MalformedDocument("plan: expected object");
  schema.warnUnknown(doc, PLAN_KEYS, "plan", diagnostics);
  const version = schema.requireStr(doc, "plan_version", "plan");
  if (version !== PLAN_VERSION) {
    throw new UnsupportedVersion(`unsupported plan_version '${version}'`);
  }
  const fingerprintText = schema.requireStr(doc, "source_report_fingerprint", "plan");

  const groupsDoc = schema.requireList(doc, "groups", "plan");
  const groups: PlannedGroup[] = [];
  const seenIds = new Set<string>();
  groupsDoc.forEach((groupDoc: Json, i: number) => {
    const path = `plan.groups[${i}]`;
    if (!schema.isObject(groupDoc)) {
      throw new MalformedDocument(`${path}: expected object`);
    }
    schema.warnUnknown(groupDoc, PLANNED_GROUP_KEYS, path, diagnostics);
    const inner = schema.requireObj(groupDoc, "group", path);
    schema.warnUnknown(inner, GROUP_KEYS, `${path}.group`, diagnostics);
    const groupId = schema.requireStr(inner, "group_id", `${path}.group`);
    if (seenIds.has(groupId)) {
      throw new MalformedDocument(`${path}.group.group_id: duplicate '${groupId}'`);
    }
    seenIds.add(groupId);

    const variableSet: VariablePair[] = [];
    schema.requireList(inner, "variable_set", `${path}.group`).forEach((varDoc, j) => {
      const varPath = `${path}.group.variable_set[${j}]`;
      if (!schema.isObject(varDoc)) {
        throw new MalformedDocument(`${varPath}: expected object`);
      }
      schema.warnUnknown(varDoc, new Set(["name", "type"]), varPath, diagnostics);
      variableSet.push([
        schema.requireStr(varDoc, "name", varPath),
        schema.requireStr(varDoc, "type", varPath),
      ]);
    });

    const name = schema.requireStr(groupDoc, "new_class_name", path);
    if (!IDENTIFIER_RE.test(name)) {
      throw new InvalidName(`${path}.new_class_name: '${name}' is not a valid identifier`);
    }

    const sites: PlanSite[] = [];
    schema.requireList(groupDoc, "sites", path).forEach((siteDoc, j) => {
      const sitePath = `${path}.sites[${j}]`;
      if (!schema.isObject(siteDoc)) {
        throw new MalformedDocument(`${sitePath}: expected object`);
      }
      schema.warnUnknown(siteDoc, new Set(["endpoint", "action"]), sitePath, diagnostics);
      const action = schema.requireStr(siteDoc, "action", sitePath);
      if (!(ACTIONS as readonly string[]).includes(action)) {
        throw new MalformedDocument(`${sitePath}.action: unknown action '${action}'`);
      }
      sites.push({ endpoint: schema.requireStr(siteDoc, "endpoint", sitePath), action });
    });

    groups.push({
      group: {
        group_id: groupId,
        variable_set: variableSet,
        occurrence_keys: strItems(inner, "occurrence_keys", `${path}.group`),
        affected_endpoints: strItems(inner, "affected_endpoints", `${path}.group`),
      },
      new_class_name: name,
      new_class_package: schema.requireStr(groupDoc, "new_class_package", path),
      class_stub: schema.requireStr(groupDoc, "class_stub", path),
      sites,
    });
  });

  return {
    plan_version: version,
    source_report_fingerprint: fingerprintText,
    groups,
  };
}
