/** Small DOM builders shared by all views. */

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

/**
 * A numeric display. The machine-readable value always rides along in
 * data-value so tests can verify every number on screen came from the API.
 */
export function num(value: number, className = "num"): HTMLElement {
  const span = el("span", className, [String(value)]);
  span.dataset.value = String(value);
  return span;
}

/** Signed form for ledger weights: 1 renders as +1, 0 as +0. */
export function signedNum(value: number): HTMLElement {
  const span = el("span", "num", [`${value < 0 ? "" : "+"}${value}`]);
  span.dataset.value = String(value);
  return span;
}

/** Placeholder for a signal the pipeline could not produce. */
export function notAvailable(): HTMLElement {
  return el("span", "not-available", ["not available"]);
}

/**
 * Text with lexicon hits wrapped in <mark>. Spans index the original
 * string; overlapping or out-of-order spans degrade to plain text.
 */
export function highlight(text: string, spans: [number, number][]): HTMLElement {
  const holder = el("span", "highlighted");
  const ordered = [...spans].sort((a, b) => a[0] - b[0]);
  let cursor = 0;
  for (const [start, end] of ordered) {
    if (start < cursor || end > text.length || end <= start) {
      continue;
    }
    if (start > cursor) {
      holder.append(text.slice(cursor, start));
    }
    holder.append(el("mark", "", [text.slice(start, end)]));
    cursor = end;
  }
  if (cursor < text.length) {
    holder.append(text.slice(cursor));
  }
  return holder;
}
