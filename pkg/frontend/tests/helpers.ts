import { readFileSync } from "node:fs";
import { join } from "node:path";

export interface Runtime {
  baseUrl: string;
  videoId: string;
  reportId: string;
}

/** Connection details written by the suite's service setup. */
export function runtime(): Runtime {
  // resolved against the vitest root, which is the package directory
  const path = join(process.cwd(), "tests", ".runtime.json");
  return JSON.parse(readFileSync(path, "utf8")) as Runtime;
}

/** Every number appearing anywhere in a JSON payload, as display strings. */
export function collectNumbers(value: unknown, into = new Set<string>()): Set<string> {
  if (typeof value === "number") {
    into.add(String(value));
  } else if (Array.isArray(value)) {
    for (const item of value) {
      collectNumbers(item, into);
    }
  } else if (value !== null && typeof value === "object") {
    for (const item of Object.values(value)) {
      collectNumbers(item, into);
    }
  }
  return into;
}

/** data-value attributes of every numeric display under a root. */
export function displayedNumbers(root: HTMLElement): string[] {
  return [...root.querySelectorAll<HTMLElement>("[data-value]")].map((n) => n.dataset.value ?? "");
}
