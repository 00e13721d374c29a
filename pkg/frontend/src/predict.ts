/** Model for predict-feedback exercises.
 *
 * The student sees the exercise's fixed proof text sentence by
 * sentence and tags each one with the feedback category they expect
 * (or "ok").  The sentence segmentation comes from the service's own
 * verdict list for the full text; the client never splits text itself.
 */

import type { SentenceVerdict } from "./api";

export const LABELS = ["ok", "i", "ii", "iii", "iv", "v"] as const;
export type Label = (typeof LABELS)[number];

export interface PredictModel {
  sentences: SentenceVerdict[];
  tags: (Label | null)[];
}

export function initPredict(sentences: SentenceVerdict[]): PredictModel {
  return { sentences, tags: sentences.map(() => null) };
}

export function setTag(model: PredictModel, index: number, label: Label | null): PredictModel {
  const tags = model.tags.slice();
  if (index >= 0 && index < tags.length) tags[index] = label;
  return { ...model, tags };
}

export function untagged(model: PredictModel): number[] {
  const missing: number[] = [];
  model.tags.forEach((tag, index) => {
    if (tag === null) missing.push(index);
  });
  return missing;
}

/** Local validation before submitting; null means ready. */
export function validationMessage(model: PredictModel): string | null {
  const missing = untagged(model);
  if (missing.length === 0) return null;
  const word = missing.length === 1 ? "sentence" : "sentences";
  return `tag every sentence before submitting (${missing.length} ${word} left)`;
}

export function toPredictions(model: PredictModel): string[] {
  if (untagged(model).length > 0) {
    throw new Error("predictions incomplete");
  }
  return model.tags.map((tag) => tag as string);
}
