/** HTML fragments for the editor page.
 *
 * Pure string builders so the contract tests can assert on exactly
 * what a response renders to, with no browser in the loop.  All
 * dynamic text goes through escapeHtml.
 */

import type { CheckResponse, FeedbackItem, PredictResponse, SentenceVerdict } from "./api";
import type { Marker } from "./session";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderBanner(response: CheckResponse | null): string {
  if (response === null) return "";
  if (response.status === "Accepted") {
    return '<div class="banner banner-ok">Accepted</div>';
  }
  const n = response.items.length;
  const noun = n === 1 ? "remark" : "remarks";
  return `<div class="banner banner-bad">Rejected, ${n} ${noun}</div>`;
}

export function renderToast(message: string): string {
  return `<div class="toast">${escapeHtml(message)}</div>`;
}

function markerClasses(marker: Marker): string {
  const classes = ["marker", `marker-${marker.status}`];
  for (const category of marker.categories) classes.push(`marker-cat-${category}`);
  return classes.join(" ");
}

export function renderMarkers(markers: Marker[]): string {
  if (markers.length === 0) {
    return '<p class="markers-empty">No markers. Run a check to see per-sentence verdicts.</p>';
  }
  const rows = markers.map((marker) => {
    const cats = marker.categories.map((c) => `(${c})`).join(" ");
    return (
      `<li class="${markerClasses(marker)}" data-index="${marker.index}">` +
      `<span class="marker-no">#${marker.index}</span> ` +
      `<span class="marker-text">${escapeHtml(marker.text)}</span>` +
      (cats ? ` <span class="marker-cats">${cats}</span>` : "") +
      `</li>`
    );
  });
  return `<ol class="markers">${rows.join("")}</ol>`;
}

function renderCountermodel(item: FeedbackItem): string {
  if (item.countermodel == null) return "";
  return `<p class="countermodel">${escapeHtml(item.countermodel.prose)}</p>`;
}

export function renderItem(item: FeedbackItem): string {
  const where =
    item["sentence-index"] === null ? "whole proof" : `sentence #${item["sentence-index"]}`;
  const head =
    `<span class="item-id">${escapeHtml(item.id)}</span> ` +
    `<span class="item-cat">(${item.category})</span> ` +
    `<span class="item-where">${where}</span>: ${escapeHtml(item.message)}`;
  const parts = [`<summary>${head}</summary>`];
  if (item["pattern-id"] !== null) {
    parts.push(`<p class="pattern">pattern: ${escapeHtml(item["pattern-id"])}</p>`);
  }
  if (item.hint != null) {
    parts.push(`<p class="hint">${escapeHtml(item.hint)}</p>`);
  }
  parts.push(renderCountermodel(item));
  return `<details class="item item-cat-${item.category} item-sev-${item.severity}" open>${parts.join("")}</details>`;
}

export function renderItems(items: FeedbackItem[]): string {
  if (items.length === 0) return "";
  return `<div class="items">${items.map(renderItem).join("")}</div>`;
}

export function renderDiff(response: PredictResponse, sentences: SentenceVerdict[]): string {
  if (response.diff.length === 0) {
    return '<div class="banner banner-ok">Every prediction was right.</div>';
  }
  const wrong = new Map(response.diff.map((d) => [d["sentence-index"], d]));
  const rows = sentences.map((sentence) => {
    const miss = wrong.get(sentence.index);
    const actual = response.actual[sentence.index] ?? "ok";
    const predicted = miss === undefined ? actual : miss.predicted;
    const cls = miss === undefined ? "diff-right" : "diff-wrong";
    return (
      `<tr class="${cls}" data-index="${sentence.index}">` +
      `<td>#${sentence.index}</td>` +
      `<td>${escapeHtml(sentence.text)}</td>` +
      `<td>${escapeHtml(predicted)}</td>` +
      `<td>${escapeHtml(actual)}</td>` +
      `</tr>`
    );
  });
  return (
    '<table class="diff"><thead><tr>' +
    "<th></th><th>sentence</th><th>predicted</th><th>actual</th>" +
    `</tr></thead><tbody>${rows.join("")}</tbody></table>`
  );
}
