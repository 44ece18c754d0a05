import { describe, expect, it } from "vitest";
import {
  InvariantViolation,
  KeyMismatch,
  MalformedDocument,
  SummaryMismatch,
  UnsupportedVersion,
} from "../src/errors";
import { occurrenceKey, parseReport, summaryOf, writeReport } from "../src/report";
import { fixture, recorder } from "./helpers";

// tampering helper: golden fixtures are canonical, but parseReport must
// accept any JSON layout, so plain JSON.stringify is fine here
function tampered(mutate: (doc: any) => void): string {
  const doc = JSON.parse(fixture("report.json"));
  mutate(doc);
  return JSON.stringify(doc);
}

describe("parseReport", () => {
  it("reads the golden report", () => {
    const r = parseReport(fixture("report.json"));
    expect(r.project_name).toBe("clumpy");
    expect(r.number_of_classes).toBe(3);
    expect(r.number_of_methods).toBe(3);
    expect(r.detector_name).toBe("dct");
    expect(r.occurrences).toHaveLength(8);
    expect(summaryOf(r.occurrences)).toEqual({
      total: 8,
      fields_to_fields: 1,
      parameters_to_parameters: 3,
      parameters_to_fields: 4,
    });
    expect(r.config.min_clump_size).toBe(3);
    expect(r.config.match_types).toBe(true);
    expect(r.config.scope).toBe("project");
    expect(r.timestamp).toBeNull();
  });

  it("keeps occurrences sorted by key with self-consistent keys", () => {
    const r = parseReport(fixture("report.json"));
    const keys = r.occurrences.map((o) => o.key);
    expect([...keys].sort()).toEqual(keys);
    for (const o of r.occurrences) expect(occurrenceKey(o)).toBe(o.key);
  });

  it("round-trips every report fixture byte for byte", () => {
    for (const name of [
      "report.json",
      "report_two_groups.json",
      "report_empty.json",
      "report_multimodule.json",
    ]) {
      const text = fixture(name);
      expect(writeReport(parseReport(text))).toBe(text);
    }
  });

  it("round-trips a timestamp when one is present", () => {
    const r = parseReport(fixture("report.json"));
    const stamped = writeReport({ ...r, timestamp: "2026-08-16T00:00:00Z" });
    expect(stamped).toContain('"timestamp": "2026-08-16T00:00:00Z"');
    expect(parseReport(stamped).timestamp).toBe("2026-08-16T00:00:00Z");
  });

  it("rejects documents that are not objects", () => {
    expect(() => parseReport("[]")).toThrow(MalformedDocument);
    expect(() => parseReport("{nope")).toThrow(/not valid JSON/);
  });

  it("rejects unsupported versions", () => {
    const text = tampered((doc) => {
      doc.report_version = "2.0";
    });
    expect(() => parseReport(text)).toThrow(UnsupportedVersion);
  });

  it("rejects summaries that disagree with the occurrence map", () => {
    const text = tampered((doc) => {
      doc.summary.total += 1;
    });
    expect(() => parseReport(text)).toThrow(SummaryMismatch);
  });

  it("rejects relocated occurrence keys", () => {
    const text = tampered((doc) => {
      const keys = Object.keys(doc.data_clumps);
      doc.data_clumps["zzz|a|b|c:int"] = doc.data_clumps[keys[0]!];
      delete doc.data_clumps[keys[0]!];
    });
    expect(() => parseReport(text)).toThrow(KeyMismatch);
  });

  it("rejects occurrences whose key disagrees with their contents", () => {
    const text = tampered((doc) => {
      const first = Object.keys(doc.data_clumps)[0]!;
      doc.data_clumps[first].variables[0].name = "renamed";
    });
    expect(() => parseReport(text)).toThrow(KeyMismatch);
  });

  it("rejects unknown occurrence kinds", () => {
    const text = tampered((doc) => {
      const first = Object.keys(doc.data_clumps)[0]!;
      doc.data_clumps[first].kind = "fields_to_nowhere";
    });
    expect(() => parseReport(text)).toThrow(MalformedDocument);
  });

  it("rejects ill-formed source spans", () => {
    const text = tampered((doc) => {
      const first = Object.keys(doc.data_clumps)[0]!;
      doc.data_clumps[first].from.position.start_line = 0;
    });
    expect(() => parseReport(text)).toThrow(InvariantViolation);
  });

  it("rejects non-string timestamps", () => {
    const text = tampered((doc) => {
      doc.timestamp = 5;
    });
    expect(() => parseReport(text)).toThrow(MalformedDocument);
  });

  it("warns about unknown keys instead of failing", () => {
    const text = tampered((doc) => {
      doc.extra = 1;
      doc.project.extra_project = 2;
    });
    const diagnostics = recorder();
    const r = parseReport(text, diagnostics);
    expect(r.occurrences).toHaveLength(8);
    expect(diagnostics.warnings).toContain("ignoring unknown key report.extra");
    expect(diagnostics.warnings).toContain("ignoring unknown key report.project.extra_project");
  });

  it("reports missing and mistyped fields by path", () => {
    expect(() =>
      parseReport(tampered((doc) => delete doc.project)),
    ).toThrow("report.project: missing");
    expect(() =>
      parseReport(tampered((doc) => (doc.project.number_of_classes = "three"))),
    ).toThrow("report.project.number_of_classes: expected integer");
    expect(() =>
      parseReport(tampered((doc) => (doc.config.scope = "galaxy"))),
    ).toThrow(MalformedDocument);
  });
});
