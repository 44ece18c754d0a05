/**
 * Canonical JSON, byte-compatible with the pipeline's serializer.
 *
 * Every artifact (report, graph, plan) is UTF-8 JSON with keys sorted at
 * every level, 2-space indentation, LF line endings, and one trailing
 * newline. The viewer re-emits documents in exactly this form, which is
 * what makes exported plans byte-identical to `dct plan` output and lets
 * the test suite assert parity against committed golden files.
 */

import { MalformedDocument } from "./errors";

export type Json =
  | null
  | boolean
  | number
  | string
  | Json[]
  | { [key: string]: Json };

export type JsonObject = { [key: string]: Json };

/** Sink for non-fatal reader warnings (unknown document keys). */
export interface Diagnostics {
  warn(message: string): void;
}

/**
 * Code point order. Object keys must sort the way the pipeline sorts
 * them; the default string comparison here works on UTF-16 units and
 * would misplace astral-plane keys relative to U+E000..U+FFFF.
 */
export function compareCodePoints(a: string, b: string): number {
  const ia = a[Symbol.iterator]();
  const ib = b[Symbol.iterator]();
  for (;;) {
    const ra = ia.next();
    const rb = ib.next();
    if (ra.done && rb.done) return 0;
    if (ra.done) return -1;
    if (rb.done) return 1;
    const ca = ra.value.codePointAt(0)!;
    const cb = rb.value.codePointAt(0)!;
    if (ca !== cb) return ca < cb ? -1 : 1;
  }
}

export function stringifyCanonical(value: Json): string {
  return render(value, "") + "\n";
}

function render(value: Json, indent: string): string {
  if (value === null) return "null";
  switch (typeof value) {
    case "boolean":
      return value ? "true" : "false";
    case "number":
      // no document schema carries non-integers; refusing them here keeps
      // float formatting differences from ever reaching an artifact
      if (!Number.isSafeInteger(value)) {
        throw new MalformedDocument(`non-integer number in document: ${value}`);
      }
      return String(value);
    case "string":
      return JSON.stringify(value);
    default:
      break;
  }
  const deeper = indent + "  ";
  if (Array.isArray(value)) {
    if (value.length === 0) return "[]";
    const items = value.map((item) => deeper + render(item, deeper));
    return "[\n" + items.join(",\n") + "\n" + indent + "]";
  }
  const keys = Object.keys(value).sort(compareCodePoints);
  if (keys.length === 0) return "{}";
  const entries = keys.map(
    (key) => deeper + JSON.stringify(key) + ": " + render(value[key]!, deeper),
  );
  return "{\n" + entries.join(",\n") + "\n" + indent + "}";
}

export function parseDocument(text: string): Json {
  try {
    return JSON.parse(text) as Json;
  } catch (exc) {
    throw new MalformedDocument(`not valid JSON: ${(exc as Error).message}`);
  }
}

export function encodeUtf8(text: string): Uint8Array {
  return new TextEncoder().encode(text);
}

/** Content hash of a document, as `sha256:<hex>`. WebCrypto, so async. */
export async function fingerprint(data: Uint8Array): Promise<string> {
  const digest = await crypto.subtle.digest("SHA-256", data as BufferSource);
  const hex = Array.from(new Uint8Array(digest), (byte) =>
    byte.toString(16).padStart(2, "0"),
  ).join("");
  return "sha256:" + hex;
}
