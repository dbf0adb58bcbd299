/** Prompt editor validation, mirroring the service's rules so errors show
 * inline before a job is submitted. */

import type { SlotDoc } from "./types.js";

export interface PromptDraft {
  template: string;
  slots: SlotDoc[];
}

export function validatePrompt(draft: PromptDraft): string[] {
  const problems: string[] = [];
  if (draft.slots.length === 0) {
    problems.push("at least one slot is required");
  }
  const names = draft.slots.map((s) => s.name.trim());
  if (new Set(names).size !== names.length) {
    problems.push("slot names must be unique");
  }
  for (const slot of draft.slots) {
    if (!slot.name.trim()) {
      problems.push("every slot needs a name");
      continue;
    }
    const vocab = slot.vocabulary.map((v) => v.trim()).filter((v) => v.length > 0);
    if (vocab.length < 2) {
      problems.push(`slot "${slot.name}" needs at least 2 vocabulary entries`);
    }
    const lowered = vocab.map((v) => v.toLowerCase());
    if (new Set(lowered).size !== lowered.length) {
      problems.push(`slot "${slot.name}" has case-colliding vocabulary entries`);
    }
    const placeholder = `{${slot.name}}`;
    const occurrences = draft.template.split(placeholder).length - 1;
    if (occurrences !== 1) {
      problems.push(`template must contain ${placeholder} exactly once`);
    }
  }
  return problems;
}

/** "a, b, c" -> trimmed non-empty entries */
export function parseVocabulary(text: string): string[] {
  return text
    .split(",")
    .map((v) => v.trim())
    .filter((v) => v.length > 0);
}

export function renderPreview(draft: PromptDraft): string {
  let text = draft.template;
  for (const slot of draft.slots) {
    text = text.replace(`{${slot.name}}`, `<${slot.vocabulary.join(" | ")}>`);
  }
  return text;
}
