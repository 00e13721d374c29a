import { describe, expect, it } from "vitest";
import { CheckResponseSchema } from "../src/api";
import {
  initPredict,
  setTag,
  toPredictions,
  untagged,
  validationMessage,
  type Label,
} from "../src/predict";
import predictFixture from "./fixtures/predict.json";

const sentences = CheckResponseSchema.parse(predictFixture["sentences-response"])[
  "sentence-verdicts"
];
const answer = predictFixture.perfect.predictions as Label[];

describe("prediction tagging", () => {
  it("starts with every sentence untagged", () => {
    const model = initPredict(sentences);
    expect(model.tags).toHaveLength(sentences.length);
    expect(untagged(model)).toHaveLength(sentences.length);
  });

  it("refuses to submit while sentences are untagged", () => {
    let model = initPredict(sentences);
    expect(validationMessage(model)).toContain("tag every sentence");
    expect(validationMessage(model)).toContain(`${sentences.length} sentences`);
    model = setTag(model, 0, "ok");
    expect(validationMessage(model)).toContain(`${sentences.length - 1} sentences`);
    expect(() => toPredictions(model)).toThrow();
  });

  it("uses the singular for one missing tag", () => {
    let model = initPredict(sentences);
    answer.forEach((label, index) => {
      if (index > 0) model = setTag(model, index, label);
    });
    expect(validationMessage(model)).toContain("1 sentence left");
  });

  it("passes validation once every sentence is tagged", () => {
    let model = initPredict(sentences);
    answer.forEach((label, index) => {
      model = setTag(model, index, label);
    });
    expect(validationMessage(model)).toBeNull();
    expect(toPredictions(model)).toEqual(answer);
  });

  it("allows clearing a tag again", () => {
    let model = initPredict(sentences);
    model = setTag(model, 2, "iii");
    model = setTag(model, 2, null);
    expect(untagged(model)).toContain(2);
  });

  it("ignores out-of-range indexes", () => {
    const model = setTag(initPredict(sentences), sentences.length + 3, "ok");
    expect(untagged(model)).toHaveLength(sentences.length);
  });
});
