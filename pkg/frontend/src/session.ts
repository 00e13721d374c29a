/** Editor session state and marker derivation.
 *
 * Markers are a pure function of (draft, last response).  They exist
 * only while the draft is byte-identical to the text that was checked;
 * the moment the student edits, every marker disappears rather than
 * pointing at spans that no longer mean anything.  Spans stay byte
 * offsets as served; they are clamped so no marker can exceed the
 * text, whatever the server sent.
 */

import type { Category, CheckResponse, FeedbackItem } from "./api";

export interface EditorSession {
  exerciseId: string | null;
  draft: string;
  /** Response of the most recent successful check, if any. */
  lastResponse: CheckResponse | null;
  /** The exact draft that response was computed for. */
  checkedText: string | null;
}

export interface Marker {
  index: number;
  span: [number, number];
  text: string;
  status: "ok" | "flagged";
  /** Categories of the feedback items pointing at this sentence. */
  categories: Category[];
}

const encoder = new TextEncoder();

export function byteLength(text: string): number {
  return encoder.encode(text).length;
}

/** Decode the UTF-8 byte range [start, end) of text. */
export function sliceBytes(text: string, start: number, end: number): string {
  return new TextDecoder().decode(encoder.encode(text).subarray(start, end));
}

export function newSession(): EditorSession {
  return { exerciseId: null, draft: "", lastResponse: null, checkedText: null };
}

export function editDraft(session: EditorSession, draft: string): EditorSession {
  return { ...session, draft };
}

export function applyCheck(
  session: EditorSession,
  checkedText: string,
  response: CheckResponse,
): EditorSession {
  return { ...session, lastResponse: response, checkedText };
}

/** True when the draft has changed since the last check (or none ran). */
export function isStale(session: EditorSession): boolean {
  return session.checkedText === null || session.draft !== session.checkedText;
}

function clamp(span: [number, number], limit: number): [number, number] {
  const start = Math.max(0, Math.min(span[0], limit));
  const end = Math.max(start, Math.min(span[1], limit));
  return [start, end];
}

export function markers(session: EditorSession): Marker[] {
  if (isStale(session) || session.lastResponse === null) return [];
  const response = session.lastResponse;
  const limit = byteLength(session.draft);
  return response["sentence-verdicts"].map((verdict) => ({
    index: verdict.index,
    span: clamp(verdict.span, limit),
    text: verdict.text,
    status: verdict.status,
    categories: response.items
      .filter((item) => item["sentence-index"] === verdict.index)
      .map((item) => item.category),
  }));
}

/** Items of the last response attached to one sentence (or, with
 * index null, to the document as a whole, e.g. a missing qed). */
export function itemsFor(session: EditorSession, index: number | null): FeedbackItem[] {
  if (session.lastResponse === null) return [];
  return session.lastResponse.items.filter((item) => item["sentence-index"] === index);
}
