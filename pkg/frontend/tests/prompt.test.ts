import { describe, expect, it } from "vitest";

import { parseVocabulary, renderPreview, validatePrompt } from "../src/prompt.js";

const good = {
  template: "What digit is this? Answer with the structure: This is digit {class} {group}.",
  slots: [
    { name: "class", vocabulary: ["0", "1", "2"] },
    { name: "group", vocabulary: ["even", "odd"] },
  ],
};

describe("prompt validation", () => {
  it("accepts a well-formed two-slot prompt", () => {
    expect(validatePrompt(good)).toEqual([]);
  });

  it("flags empty vocabularies inline", () => {
    const draft = {
      template: "q {a}",
      slots: [{ name: "a", vocabulary: [] }],
    };
    const problems = validatePrompt(draft);
    expect(problems.some((p) => p.includes("at least 2"))).toBe(true);
  });

  it("flags missing placeholders and duplicate names", () => {
    expect(
      validatePrompt({ template: "no placeholder", slots: good.slots }),
    ).not.toEqual([]);
    expect(
      validatePrompt({
        template: "{a} {a}",
        slots: [
          { name: "a", vocabulary: ["x", "y"] },
          { name: "a", vocabulary: ["p", "q"] },
        ],
      }),
    ).not.toEqual([]);
  });

  it("flags case-colliding vocabulary entries", () => {
    const problems = validatePrompt({
      template: "q {a}",
      slots: [{ name: "a", vocabulary: ["Dog", "dog"] }],
    });
    expect(problems.some((p) => p.includes("case-colliding"))).toBe(true);
  });

  it("renders enumerated previews", () => {
    expect(renderPreview(good)).toBe(
      "What digit is this? Answer with the structure: This is digit <0 | 1 | 2> <even | odd>.",
    );
  });

  it("parses comma vocab text", () => {
    expect(parseVocabulary(" cat, dog ,,bird ")).toEqual(["cat", "dog", "bird"]);
  });
});
