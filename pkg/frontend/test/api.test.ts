/** The client against the recorded wire format.
 *
 * fetch is stubbed per test; the bodies come from the fixtures, so
 * whatever the service actually sends is what the client must accept.
 */

import { afterEach, describe, expect, it, vi } from "vitest";
import {
  ApiError,
  CheckResponseSchema,
  ErrorBodySchema,
  ExerciseDetailSchema,
  ExerciseListSchema,
  PredictResponseSchema,
  checkText,
  getExercise,
  listExercises,
  predictCheck,
} from "../src/api";
import acceptedFixture from "./fixtures/accepted.json";
import errorsFixture from "./fixtures/errors.json";
import exercisesFixture from "./fixtures/exercises.json";
import mutationsFixture from "./fixtures/mutations.json";
import noQedFixture from "./fixtures/no-qed.json";
import predictFixture from "./fixtures/predict.json";

function respondWith(status: number, body: unknown): void {
  vi.stubGlobal(
    "fetch",
    vi.fn(async () =>
      new Response(JSON.stringify(body), {
        status,
        headers: { "content-type": "application/json" },
      }),
    ),
  );
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("payload schemas", () => {
  it("accept every recorded check response", () => {
    const bodies = [
      acceptedFixture.response,
      noQedFixture.response,
      predictFixture["sentences-response"],
      ...mutationsFixture.map((entry) => entry.response),
    ];
    for (const body of bodies) {
      expect(() => CheckResponseSchema.parse(body)).not.toThrow();
    }
  });

  it("accept the recorded bank payloads", () => {
    expect(() => ExerciseListSchema.parse(exercisesFixture.listing)).not.toThrow();
    expect(() => ExerciseDetailSchema.parse(exercisesFixture.predict)).not.toThrow();
    expect(() => ExerciseDetailSchema.parse(exercisesFixture.fix)).not.toThrow();
    expect(ExerciseDetailSchema.parse(exercisesFixture.predict).mode).toBe(
      "predict-feedback",
    );
  });

  it("accept the recorded prediction responses", () => {
    expect(() => PredictResponseSchema.parse(predictFixture.perfect.response)).not.toThrow();
    expect(() =>
      PredictResponseSchema.parse(predictFixture["one-wrong"].response),
    ).not.toThrow();
  });

  it("accept every recorded error body", () => {
    for (const sample of errorsFixture) {
      expect(() => ErrorBodySchema.parse(sample.body)).not.toThrow();
    }
  });

  it("reject a response with an unknown status", () => {
    const mangled = { ...acceptedFixture.response, status: "Maybe" };
    expect(() => CheckResponseSchema.parse(mangled)).toThrow();
  });
});

describe("client calls", () => {
  it("returns the parsed check response", async () => {
    respondWith(200, acceptedFixture.response);
    const response = await checkText("", { text: acceptedFixture.text });
    expect(response.status).toBe("Accepted");
    expect(response["sentence-verdicts"]).toHaveLength(8);
  });

  it("sends kebab-case fields on the wire", async () => {
    respondWith(200, acceptedFixture.response);
    await checkText("", {
      text: "qed.",
      verbosity: "explained",
      exerciseId: "fig1-text1",
    });
    const mock = fetch as unknown as ReturnType<typeof vi.fn>;
    const [url, init] = mock.mock.calls[0] as [string, RequestInit];
    expect(url).toBe("/api/check");
    expect(JSON.parse(init.body as string)).toEqual({
      text: "qed.",
      verbosity: "explained",
      "exercise-id": "fig1-text1",
    });
  });

  it("lists and fetches exercises", async () => {
    respondWith(200, exercisesFixture.listing);
    const exercises = await listExercises("");
    expect(exercises.map((e) => e.id)).toContain("predict-parity");
    respondWith(200, exercisesFixture.predict);
    const detail = await getExercise("", "predict-parity");
    expect(detail.attachment).not.toBeNull();
  });

  it("round-trips predictions", async () => {
    respondWith(200, predictFixture.perfect.response);
    const response = await predictCheck("", "predict-parity", predictFixture.perfect.predictions);
    expect(response.diff).toEqual([]);
  });

  it("surfaces the service's reason on an HTTP error", async () => {
    const sample = errorsFixture.find((s) => s.name === "malformed-json")!;
    respondWith(sample.status, sample.body);
    await expect(checkText("", { text: "x" })).rejects.toThrowError(ApiError);
    await expect(checkText("", { text: "x" })).rejects.toMatchObject({
      status: 400,
      reason: "malformed JSON",
    });
  });

  it("propagates network failures as-is", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => {
        throw new TypeError("fetch failed");
      }),
    );
    await expect(listExercises("")).rejects.toThrowError(TypeError);
  });

  it("rejects a body that breaks the schema", async () => {
    respondWith(200, { schema: "1", status: "Accepted" });
    await expect(checkText("", { text: "x" })).rejects.toThrow();
  });
});
