/**
 * Report document reader and writer.
 *
 * A line-for-line port of the pipeline's report module: same schema, same
 * validation order, same error taxonomy, and a writer whose output is
 * byte-identical to the pipeline's for equal values. The viewer never
 * invents report structure of its own; everything it shows or re-exports
 * goes through these functions.
 */

import {
  compareCodePoints,
  Diagnostics,
  Json,
  JsonObject,
  parseDocument,
  stringifyCanonical,
} from "./documents";
import {
  InvariantViolation,
  KeyMismatch,
  MalformedDocument,
  SummaryMismatch,
  UnsupportedVersion,
} from "./errors";

export const REPORT_VERSION = "1.0";

export const KINDS = [
  "fields_to_fields",
  "parameters_to_parameters",
  "parameters_to_fields",
] as const;

export type Kind = (typeof KINDS)[number];

export const SCOPES = ["project", "module"] as const;

export interface Position {
  start_line: number;
  start_column: number;
  end_line: number;
  end_column: number;
}

/** One side of an occurrence: a class (fields) or a method (parameters). */
export interface Endpoint {
  class_qualified_name: string;
  method_signature: string | null;
  file_path: string;
  module: string;
  position: Position;
}

export interface MatchedVariable {
  name: string;
  type: string;
  from_position: Position;
  to_position: Position;
}

export interface Occurrence {
  key: string;
  kind: Kind;
  from: Endpoint;
  to: Endpoint;
  variables: MatchedVariable[];
}

export interface DetectorConfig {
  min_clump_size: number;
  match_types: boolean;
  scope: string;
  include_aux_counterpart: boolean;
  include_own_class_param_field: boolean;
  include_overrides: boolean;
}

export interface Report {
  report_version: string;
  detector_name: string;
  detector_version: string;
  config: DetectorConfig;
  project_name: string;
  number_of_classes: number;
  number_of_methods: number;
  occurrences: Occurrence[];
  timestamp: string | null;
}

export interface Summary {
  total: number;
  fields_to_fields: number;
  parameters_to_parameters: number;
  parameters_to_fields: number;
}

export function endpointRef(e: Endpoint): string {
  if (e.method_signature === null) return e.class_qualified_name;
  return `${e.class_qualified_name}#${e.method_signature}`;
}

/** Stable identity: kind|fromRef|toRef|name:type,... (variables by name). */
export function occurrenceKey(o: Occurrence): string {
  const joined = o.variables.map((v) => `${v.name}:${v.type}`).join(",");
  return `${o.kind}|${endpointRef(o.from)}|${endpointRef(o.to)}|${joined}`;
}

export function summaryOf(occurrences: readonly Occurrence[]): Summary {
  const summary: Summary = {
    total: occurrences.length,
    fields_to_fields: 0,
    parameters_to_parameters: 0,
    parameters_to_fields: 0,
  };
  for (const o of occurrences) summary[o.kind] += 1;
  return summary;
}

// -- shared schema plumbing --------------------------------------------------

function isObject(value: Json | undefined): value is JsonObject {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function missing(doc: JsonObject, key: string, path: string): void {
  if (!(key in doc)) throw new MalformedDocument(`${path}.${key}: missing`);
}

function requireStr(doc: JsonObject, key: string, path: string): string {
  missing(doc, key, path);
  const value = doc[key];
  if (typeof value !== "string") {
    throw new MalformedDocument(`${path}.${key}: expected str`);
  }
  return value;
}

function requireInt(doc: JsonObject, key: string, path: string): number {
  missing(doc, key, path);
  const value = doc[key];
  if (typeof value !== "number" || !Number.isInteger(value)) {
    throw new MalformedDocument(`${path}.${key}: expected integer`);
  }
  return value;
}

function requireBool(doc: JsonObject, key: string, path: string): boolean {
  missing(doc, key, path);
  const value = doc[key];
  if (typeof value !== "boolean") {
    throw new MalformedDocument(`${path}.${key}: expected boolean`);
  }
  return value;
}

function requireObj(doc: JsonObject, key: string, path: string): JsonObject {
  missing(doc, key, path);
  const value = doc[key];
  if (!isObject(value)) {
    throw new MalformedDocument(`${path}.${key}: expected dict`);
  }
  return value;
}

function requireList(doc: JsonObject, key: string, path: string): Json[] {
  missing(doc, key, path);
  const value = doc[key];
  if (!Array.isArray(value)) {
    throw new MalformedDocument(`${path}.${key}: expected list`);
  }
  return value;
}

function warnUnknown(
  doc: JsonObject,
  known: ReadonlySet<string>,
  path: string,
  diagnostics?: Diagnostics,
): void {
  if (!diagnostics) return;
  const unknown = Object.keys(doc)
    .filter((key) => !known.has(key))
    .sort(compareCodePoints);
  for (const key of unknown) diagnostics.warn(`ignoring unknown key ${path}.${key}`);
}

export const schema = {
  isObject,
  requireStr,
  requireInt,
  requireBool,
  requireObj,
  requireList,
  warnUnknown,
};

// -- positions ---------------------------------------------------------------

const POSITION_KEYS = new Set(["start_line", "start_column", "end_line", "end_column"]);

/** Violation message for an ill-formed span, or null. Spans are 1-based. */
export function checkPosition(p: Position): string | null {
  if (p.start_line < 1 || p.start_column < 1) return "start must be 1-based";
  if (p.end_line < p.start_line) return "end_line precedes start_line";
  if (p.end_line === p.start_line && p.end_column < p.start_column) {
    return "end_column precedes start_column on one line";
  }
  return null;
}

export function parsePosition(
  doc: Json | undefined,
  path: string,
  diagnostics?: Diagnostics,
): Position {
  if (!isObject(doc)) throw new MalformedDocument(`${path}: expected object`);
  warnUnknown(doc, POSITION_KEYS, path, diagnostics);
  const pos: Position = {
    start_line: requireInt(doc, "start_line", path),
    start_column: requireInt(doc, "start_column", path),
    end_line: requireInt(doc, "end_line", path),
    end_column: requireInt(doc, "end_column", path),
  };
  const problem = checkPosition(pos);
  if (problem) throw new InvariantViolation(path, problem);
  return pos;
}

export function positionToDoc(p: Position): JsonObject {
  return {
    start_line: p.start_line,
    start_column: p.start_column,
    end_line: p.end_line,
    end_column: p.end_column,
  };
}

// -- detector config ---------------------------------------------------------

const CONFIG_KEYS = new Set([
  "min_clump_size",
  "match_types",
  "scope",
  "include_aux_counterpart",
  "include_own_class_param_field",
  "include_overrides",
]);

export function configFromDoc(
  doc: Json | undefined,
  path = "config",
  diagnostics?: Diagnostics,
): DetectorConfig {
  if (!isObject(doc)) throw new MalformedDocument(`${path}: expected object`);
  warnUnknown(doc, CONFIG_KEYS, path, diagnostics);
  const cfg: DetectorConfig = {
    min_clump_size: requireInt(doc, "min_clump_size", path),
    match_types: requireBool(doc, "match_types", path),
    scope: requireStr(doc, "scope", path),
    include_aux_counterpart: requireBool(doc, "include_aux_counterpart", path),
    include_own_class_param_field: requireBool(doc, "include_own_class_param_field", path),
    include_overrides: requireBool(doc, "include_overrides", path),
  };
  if (cfg.min_clump_size < 2) {
    throw new MalformedDocument(`${path}: min_clump_size must be at least 2`);
  }
  if (!(SCOPES as readonly string[]).includes(cfg.scope)) {
    throw new MalformedDocument(`${path}: scope must be one of ('project', 'module')`);
  }
  return cfg;
}

export function configToDoc(cfg: DetectorConfig): JsonObject {
  return {
    min_clump_size: cfg.min_clump_size,
    match_types: cfg.match_types,
    scope: cfg.scope,
    include_aux_counterpart: cfg.include_aux_counterpart,
    include_own_class_param_field: cfg.include_own_class_param_field,
    include_overrides: cfg.include_overrides,
  };
}

// -- occurrences ---------------------------------------------------------------

const ENDPOINT_KEYS = new Set([
  "class_qualified_name",
  "method_signature",
  "file_path",
  "module",
  "position",
]);
const VARIABLE_KEYS = new Set(["name", "type", "from_position", "to_position"]);
const OCCURRENCE_KEYS = new Set(["key", "kind", "from", "to", "variables"]);

export function endpointFromDoc(
  doc: Json | undefined,
  path: string,
  diagnostics?: Diagnostics,
): Endpoint {
  if (!isObject(doc)) throw new MalformedDocument(`${path}: expected object`);
  warnUnknown(doc, ENDPOINT_KEYS, path, diagnostics);
  const signature = doc["method_signature"] ?? null;
  if (signature !== null && typeof signature !== "string") {
    throw new MalformedDocument(`${path}.method_signature: expected str`);
  }
  return {
    class_qualified_name: requireStr(doc, "class_qualified_name", path),
    method_signature: signature,
    file_path: requireStr(doc, "file_path", path),
    module: requireStr(doc, "module", path),
    position: parsePosition(doc["position"], `${path}.position`, diagnostics),
  };
}

function variableFromDoc(
  doc: Json | undefined,
  path: string,
  diagnostics?: Diagnostics,
): MatchedVariable {
  if (!isObject(doc)) throw new MalformedDocument(`${path}: expected object`);
  warnUnknown(doc, VARIABLE_KEYS, path, diagnostics);
  return {
    name: requireStr(doc, "name", path),
    type: requireStr(doc, "type", path),
    from_position: parsePosition(doc["from_position"], `${path}.from_position`, diagnostics),
    to_position: parsePosition(doc["to_position"], `${path}.to_position`, diagnostics),
  };
}

export function occurrenceFromDoc(
  doc: Json | undefined,
  path: string,
  diagnostics?: Diagnostics,
): Occurrence {
  if (!isObject(doc)) throw new MalformedDocument(`${path}: expected object`);
  warnUnknown(doc, OCCURRENCE_KEYS, path, diagnostics);
  const kind = requireStr(doc, "kind", path);
  if (!(KINDS as readonly string[]).includes(kind)) {
    throw new MalformedDocument(`${path}.kind: unknown kind '${kind}'`);
  }
  const variables = requireList(doc, "variables", path).map((v, i) =>
    variableFromDoc(v, `${path}.variables[${i}]`, diagnostics),
  );
  return {
    key: requireStr(doc, "key", path),
    kind: kind as Kind,
    from: endpointFromDoc(doc["from"], `${path}.from`, diagnostics),
    to: endpointFromDoc(doc["to"], `${path}.to`, diagnostics),
    variables,
  };
}

export function endpointToDoc(e: Endpoint): JsonObject {
  const doc: JsonObject = {
    class_qualified_name: e.class_qualified_name,
    file_path: e.file_path,
    module: e.module,
    position: positionToDoc(e.position),
  };
  if (e.method_signature !== null) doc["method_signature"] = e.method_signature;
  return doc;
}

export function occurrenceToDoc(o: Occurrence): JsonObject {
  return {
    key: o.key,
    kind: o.kind,
    from: endpointToDoc(o.from),
    to: endpointToDoc(o.to),
    variables: o.variables.map((v) => ({
      name: v.name,
      type: v.type,
      from_position: positionToDoc(v.from_position),
      to_position: positionToDoc(v.to_position),
    })),
  };
}

// -- the report document -------------------------------------------------------

const REPORT_KEYS = new Set([
  "report_version",
  "detector",
  "config",
  "project",
  "summary",
  "data_clumps",
  "timestamp",
]);

const SUMMARY_KEYS = new Set([
  "total",
  "fields_to_fields",
  "parameters_to_parameters",
  "parameters_to_fields",
]);

export function parseReport(text: string, diagnostics?: Diagnostics): Report {
  const doc = parseDocument(text);
  if (!isObject(doc)) throw new MalformedDocument("report: expected object");
  warnUnknown(doc, REPORT_KEYS, "report", diagnostics);

  const version = requireStr(doc, "report_version", "report");
  if (version !== REPORT_VERSION) {
    throw new UnsupportedVersion(`unsupported report_version '${version}'`);
  }

  const detectorDoc = requireObj(doc, "detector", "report");
  warnUnknown(detectorDoc, new Set(["name", "version"]), "report.detector", diagnostics);
  const detectorName = requireStr(detectorDoc, "name", "report.detector");
  const detectorVersion = requireStr(detectorDoc, "version", "report.detector");

  const config = configFromDoc(doc["config"], "report.config", diagnostics);

  const projectDoc = requireObj(doc, "project", "report");
  warnUnknown(
    projectDoc,
    new Set(["name", "number_of_classes", "number_of_methods"]),
    "report.project",
    diagnostics,
  );
  const projectName = requireStr(projectDoc, "name", "report.project");
  const numberOfClasses = requireInt(projectDoc, "number_of_classes", "report.project");
  const numberOfMethods = requireInt(projectDoc, "number_of_methods", "report.project");

  const clumpsDoc = requireObj(doc, "data_clumps", "report");
  const occurrences: Occurrence[] = [];
  for (const key of Object.keys(clumpsDoc).sort(compareCodePoints)) {
    const occurrence = occurrenceFromDoc(
      clumpsDoc[key],
      `report.data_clumps[${key}]`,
      diagnostics,
    );
    if (occurrence.key !== key) {
      throw new KeyMismatch(
        `map key '${key}' does not match occurrence key '${occurrence.key}'`,
      );
    }
    const recomputed = occurrenceKey(occurrence);
    if (recomputed !== key) {
      throw new KeyMismatch(
        `occurrence key '${key}' does not match its contents ('${recomputed}')`,
      );
    }
    occurrences.push(occurrence);
  }

  const summaryDoc = requireObj(doc, "summary", "report");
  warnUnknown(summaryDoc, SUMMARY_KEYS, "report.summary", diagnostics);
  const expected = summaryOf(occurrences);
  for (const field of Object.keys(expected) as (keyof Summary)[]) {
    const declared = requireInt(summaryDoc, field, "report.summary");
    if (declared !== expected[field]) {
      throw new SummaryMismatch(
        `summary.${field} is ${declared} but occurrences give ${expected[field]}`,
      );
    }
  }

  const timestamp = doc["timestamp"] ?? null;
  if (timestamp !== null && typeof timestamp !== "string") {
    throw new MalformedDocument("report.timestamp: expected str");
  }

  return {
    report_version: version,
    detector_name: detectorName,
    detector_version: detectorVersion,
    config,
    project_name: projectName,
    number_of_classes: numberOfClasses,
    number_of_methods: numberOfMethods,
    occurrences,
    timestamp,
  };
}

/** Canonical document text; byte-identical for equal report values. */
export function writeReport(r: Report): string {
  const clumps: JsonObject = {};
  for (const o of r.occurrences) clumps[o.key] = occurrenceToDoc(o);
  const doc: JsonObject = {
    report_version: r.report_version,
    detector: { name: r.detector_name, version: r.detector_version },
    config: configToDoc(r.config),
    project: {
      name: r.project_name,
      number_of_classes: r.number_of_classes,
      number_of_methods: r.number_of_methods,
    },
    summary: { ...summaryOf(r.occurrences) },
    data_clumps: clumps,
  };
  if (r.timestamp !== null) doc["timestamp"] = r.timestamp;
  return stringifyCanonical(doc);
}
