import { describe, expect, it } from "vitest";
import {
  compareCodePoints,
  encodeUtf8,
  fingerprint,
  parseDocument,
  stringifyCanonical,
} from "../src/documents";
import { MalformedDocument } from "../src/errors";
import { fixture } from "./helpers";

// every committed golden file was written by the pipeline's serializer, so
// parse -> stringify must reproduce it byte for byte
const GOLDEN = [
  "report.json",
  "report_two_groups.json",
  "report_empty.json",
  "report_multimodule.json",
  "graph.json",
  "graph_empty.json",
  "plan_all.json",
  "plan_select_named.json",
  "plan_two_groups_all.json",
  "plan_two_groups_one.json",
  "tricky.json",
];

describe("stringifyCanonical", () => {
  for (const name of GOLDEN) {
    it(`reproduces ${name} byte for byte`, () => {
      const text = fixture(name);
      expect(stringifyCanonical(parseDocument(text))).toBe(text);
    });
  }

  it("renders empty containers compactly", () => {
    expect(stringifyCanonical({})).toBe("{}\n");
    expect(stringifyCanonical([])).toBe("[]\n");
    expect(stringifyCanonical({ a: {}, b: [] })).toBe('{\n  "a": {},\n  "b": []\n}\n');
  });

  it("renders scalars like the pipeline does", () => {
    expect(stringifyCanonical(null)).toBe("null\n");
    expect(stringifyCanonical(true)).toBe("true\n");
    expect(stringifyCanonical(false)).toBe("false\n");
    expect(stringifyCanonical(0)).toBe("0\n");
    expect(stringifyCanonical(-42)).toBe("-42\n");
    expect(stringifyCanonical("a\\b\"c\nd")).toBe('"a\\\\b\\"c\\nd"\n');
    expect(stringifyCanonical("café")).toBe('"café"\n');
  });

  it("sorts keys by code point, not UTF-16 unit", () => {
    // U+FFFF is a single unit above the high-surrogate range, so the
    // default sort would place the emoji key first
    const text = stringifyCanonical({ "\u{1F600}": 1, "￿": 2 });
    const first = text.indexOf("￿");
    const second = text.indexOf("\u{1F600}");
    expect(first).toBeGreaterThan(-1);
    expect(first).toBeLessThan(second);
  });

  it("refuses non-integer numbers", () => {
    expect(() => stringifyCanonical(1.5)).toThrow(MalformedDocument);
    expect(() => stringifyCanonical({ x: Number.MAX_SAFE_INTEGER + 2 })).toThrow(
      MalformedDocument,
    );
  });
});

describe("compareCodePoints", () => {
  it("orders strings like the pipeline's key sort", () => {
    expect(compareCodePoints("a", "a")).toBe(0);
    expect(compareCodePoints("", "a")).toBeLessThan(0);
    expect(compareCodePoints("ab", "a")).toBeGreaterThan(0);
    expect(compareCodePoints("Z", "a")).toBeLessThan(0);
    expect(compareCodePoints("￿", "\u{1F600}")).toBeLessThan(0);
    // plain UTF-16 comparison gets that last pair backwards
    expect("￿" < "\u{1F600}").toBe(false);
  });
});

describe("parseDocument", () => {
  it("maps syntax errors to MalformedDocument", () => {
    expect(() => parseDocument("{nope")).toThrow(MalformedDocument);
    expect(() => parseDocument("{nope")).toThrow(/not valid JSON: /);
  });

  it("passes valid JSON through", () => {
    expect(parseDocument('{"a": [1, 2]}')).toEqual({ a: [1, 2] });
  });
});

describe("fingerprint", () => {
  it("hashes like sha256 with the pipeline's prefix", async () => {
    expect(await fingerprint(encodeUtf8("abc"))).toBe(
      "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad",
    );
  });

  it("matches the fingerprint a committed plan carries for its report", async () => {
    const planDoc = parseDocument(fixture("plan_all.json")) as {
      source_report_fingerprint: string;
    };
    expect(await fingerprint(encodeUtf8(fixture("report.json")))).toBe(
      planDoc.source_report_fingerprint,
    );
  });
});
