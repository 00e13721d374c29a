/** Typed client for the checker's JSON API (schema "1").
 *
 * Every payload is validated on arrival; the UI never reconstructs or
 * second-guesses verdicts, it only displays fields from these shapes.
 */

import { z } from "zod";

export const CategorySchema = z.enum(["i", "ii", "iii", "iv", "v"]);
export type Category = z.infer<typeof CategorySchema>;

export const CountermodelSchema = z.object({
  propositions: z.array(z.tuple([z.string(), z.boolean()])),
  memberships: z.array(z.tuple([z.string(), z.string(), z.boolean()])),
  prose: z.string(),
});
export type Countermodel = z.infer<typeof CountermodelSchema>;

export const FeedbackItemSchema = z.object({
  id: z.string(),
  category: CategorySchema,
  severity: z.enum(["error", "warning", "info"]),
  message: z.string(),
  "sentence-index": z.number().int().nullable(),
  span: z.tuple([z.number().int(), z.number().int()]).nullable(),
  "pattern-id": z.string().nullable(),
  refines: z.string().nullable(),
  // present under "explained" verbosity only
  hint: z.string().nullable().optional(),
  countermodel: CountermodelSchema.nullable().optional(),
});
export type FeedbackItem = z.infer<typeof FeedbackItemSchema>;

export const SentenceVerdictSchema = z.object({
  index: z.number().int(),
  span: z.tuple([z.number().int(), z.number().int()]),
  text: z.string(),
  status: z.enum(["ok", "flagged"]),
  notes: z.array(z.string()),
});
export type SentenceVerdict = z.infer<typeof SentenceVerdictSchema>;

export const CheckResponseSchema = z.object({
  schema: z.literal("1"),
  status: z.enum(["Accepted", "Rejected"]),
  items: z.array(FeedbackItemSchema),
  "sentence-verdicts": z.array(SentenceVerdictSchema),
});
export type CheckResponse = z.infer<typeof CheckResponseSchema>;

export const ExerciseSummarySchema = z.object({
  id: z.string(),
  domain: z.string(),
  mode: z.enum(["prove", "fix-the-proof", "predict-feedback"]),
  statement: z.string(),
});
export type ExerciseSummary = z.infer<typeof ExerciseSummarySchema>;

export const ExerciseListSchema = z.object({
  schema: z.literal("1"),
  exercises: z.array(ExerciseSummarySchema),
});

export const ExerciseDetailSchema = ExerciseSummarySchema.extend({
  schema: z.literal("1"),
  attachment: z.string().nullable(),
});
export type ExerciseDetail = z.infer<typeof ExerciseDetailSchema>;

export const PredictResponseSchema = z.object({
  schema: z.literal("1"),
  diff: z.array(
    z.object({
      "sentence-index": z.number().int(),
      predicted: z.string(),
      actual: z.string(),
    }),
  ),
  actual: z.array(z.string()),
});
export type PredictResponse = z.infer<typeof PredictResponseSchema>;

export const ErrorBodySchema = z.object({
  schema: z.literal("1"),
  error: z.string(),
});

/** An HTTP-level rejection carrying the service's reason string. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly reason: string,
  ) {
    super(`${status}: ${reason}`);
    this.name = "ApiError";
  }
}

async function request(base: string, path: string, init?: RequestInit): Promise<unknown> {
  const response = await fetch(base + path, init);
  const body: unknown = await response.json();
  if (!response.ok) {
    const parsed = ErrorBodySchema.safeParse(body);
    throw new ApiError(
      response.status,
      parsed.success ? parsed.data.error : response.statusText,
    );
  }
  return body;
}

function post(base: string, path: string, payload: unknown): Promise<unknown> {
  return request(base, path, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(payload),
  });
}

export interface CheckRequest {
  text: string;
  verbosity?: "terse" | "explained";
  exerciseId?: string;
}

export async function checkText(base: string, req: CheckRequest): Promise<CheckResponse> {
  const payload: Record<string, unknown> = { text: req.text };
  if (req.verbosity !== undefined) payload["verbosity"] = req.verbosity;
  if (req.exerciseId !== undefined) payload["exercise-id"] = req.exerciseId;
  return CheckResponseSchema.parse(await post(base, "/api/check", payload));
}

export async function listExercises(base: string): Promise<ExerciseSummary[]> {
  const body = ExerciseListSchema.parse(await request(base, "/api/exercises"));
  return body.exercises;
}

export async function getExercise(base: string, id: string): Promise<ExerciseDetail> {
  return ExerciseDetailSchema.parse(
    await request(base, `/api/exercises/${encodeURIComponent(id)}`),
  );
}

export async function predictCheck(
  base: string,
  id: string,
  predictions: string[],
): Promise<PredictResponse> {
  return PredictResponseSchema.parse(
    await post(base, "/api/predict-check", { "exercise-id": id, predictions }),
  );
}
