import { describe, expect, it } from "vitest";
import {
  CheckResponseSchema,
  PredictResponseSchema,
  type FeedbackItem,
} from "../src/api";
import {
  escapeHtml,
  renderBanner,
  renderDiff,
  renderItem,
  renderItems,
  renderMarkers,
} from "../src/render";
import { applyCheck, editDraft, markers, newSession } from "../src/session";
import acceptedFixture from "./fixtures/accepted.json";
import mutationsFixture from "./fixtures/mutations.json";
import predictFixture from "./fixtures/predict.json";

const accepted = CheckResponseSchema.parse(acceptedFixture.response);
const mutants = mutationsFixture.map((entry) => ({
  name: entry.name,
  text: entry.text,
  response: CheckResponseSchema.parse(entry.response),
}));

function markersOf(text: string, response: typeof accepted) {
  return markers(applyCheck(editDraft(newSession(), text), text, response));
}

describe("banner", () => {
  it("is green for an accepted proof", () => {
    expect(renderBanner(accepted)).toContain("banner-ok");
    expect(renderBanner(accepted)).toContain("Accepted");
  });

  it("counts the remarks for a rejected proof", () => {
    const mutant = mutants.find((m) => m.name === "text1-drop-goal")!;
    const html = renderBanner(mutant.response);
    expect(html).toContain("banner-bad");
    expect(html).toContain("Rejected, 1 remark");
  });

  it("renders nothing before the first check", () => {
    expect(renderBanner(null)).toBe("");
  });
});

describe("marker list", () => {
  it("renders a category class for every item of every mutant", () => {
    for (const mutant of mutants) {
      const html = renderMarkers(markersOf(mutant.text, mutant.response));
      for (const item of mutant.response.items) {
        const index = item["sentence-index"];
        if (index === null) continue;
        const row = html
          .split("<li ")
          .find((piece) => piece.includes(`data-index="${index}"`));
        expect(row, `${mutant.name}: no row for sentence ${index}`).toBeDefined();
        expect(row!).toContain(`marker-cat-${item.category}`);
        expect(row!).toContain(`(${item.category})`);
      }
    }
  });

  it("tells the student to check again when there are no markers", () => {
    expect(renderMarkers([])).toContain("Run a check");
  });
});

describe("feedback items", () => {
  const denying = mutants.find((m) => m.name === "prop-denying-antecedent")!;

  it("shows pattern and countermodel prose for a diagnosed fallacy", () => {
    const html = renderItems(denying.response.items);
    expect(html).toContain("denying-the-antecedent");
    expect(html).toContain("Consider: P false, Q true.");
    expect(html).toContain("item-cat-iii");
    expect(html).toContain("item-cat-iv");
  });

  it("names the sentence an item points at", () => {
    const item = denying.response.items[0]!;
    expect(renderItem(item)).toContain("sentence #4");
  });

  it("marks document-wide items as such", () => {
    const item: FeedbackItem = {
      ...denying.response.items[0]!,
      "sentence-index": null,
      span: null,
    };
    expect(renderItem(item)).toContain("whole proof");
  });

  it("escapes markup in messages", () => {
    const item: FeedbackItem = {
      ...denying.response.items[0]!,
      message: 'expected <b> & "quotes"',
    };
    const html = renderItem(item);
    expect(html).toContain("expected &lt;b&gt; &amp; &quot;quotes&quot;");
    expect(html).not.toContain("<b>");
  });
});

describe("prediction diff", () => {
  const sentences = CheckResponseSchema.parse(predictFixture["sentences-response"])[
    "sentence-verdicts"
  ];

  it("celebrates an empty diff", () => {
    const response = PredictResponseSchema.parse(predictFixture.perfect.response);
    const html = renderDiff(response, sentences);
    expect(html).toContain("banner-ok");
    expect(html).toContain("Every prediction was right.");
  });

  it("highlights exactly the wrong rows", () => {
    const response = PredictResponseSchema.parse(predictFixture["one-wrong"].response);
    const html = renderDiff(response, sentences);
    const wrongRows = html.split("<tr").filter((r) => r.includes("diff-wrong"));
    expect(wrongRows).toHaveLength(1);
    expect(wrongRows[0]!).toContain('data-index="4"');
    expect(wrongRows[0]!).toContain("<td>ok</td>");
    expect(wrongRows[0]!).toContain("<td>iii</td>");
  });
});

describe("escapeHtml", () => {
  it("neutralizes the four dangerous characters", () => {
    expect(escapeHtml('<a href="x">&</a>')).toBe(
      "&lt;a href=&quot;x&quot;&gt;&amp;&lt;/a&gt;",
    );
  });
});
