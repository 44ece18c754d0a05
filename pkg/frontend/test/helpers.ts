import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

/** Exact bytes (as UTF-8 text) of a committed golden file. */
export function fixture(name: string): string {
  const path = fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));
  return readFileSync(path, "utf-8");
}

/** Diagnostics sink that records warnings for assertions. */
export function recorder(): { warnings: string[]; warn(message: string): void } {
  const warnings: string[] = [];
  return {
    warnings,
    warn(message: string) {
      warnings.push(message);
    },
  };
}
