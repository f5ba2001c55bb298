/** Pure answer-form logic for one question: selection rules per prompt
 * kind, certainty parsing, and validation. The DOM layer renders this
 * state; all inference stays on the server.
 */

import type { AnswerPayload, QuestionInfo } from "./api.js";

/** Parse a certainty field. Blank means "100%" and is submitted as null so
 * the engine stores exactly 1.0. Accepts "0.8", "80%", and bare numbers
 * above 1 as percentages. */
export function parseCertainty(raw: string): number | null {
  const trimmed = raw.trim();
  if (trimmed === "") return null;
  const isPercent = trimmed.endsWith("%");
  const numeric = Number(isPercent ? trimmed.slice(0, -1) : trimmed);
  if (!Number.isFinite(numeric)) {
    throw new RangeError(`not a certainty: ${raw}`);
  }
  const value = isPercent || numeric > 1 ? numeric / 100 : numeric;
  if (value < 0 || value > 1) {
    throw new RangeError(`certainty out of range: ${raw}`);
  }
  return value;
}

export function formatCertainty(value: number | null): string {
  if (value === null) return "100%";
  return `${Math.round(value * 1000) / 10}%`;
}

export interface FormSelection {
  value: string;
  selected: boolean;
  /** Raw text of the certainty field; "" means blank (submit 100%). */
  certaintyText: string;
}

export class AnswerForm {
  readonly selections: FormSelection[];

  constructor(readonly question: QuestionInfo) {
    this.selections = question.options.map((value) => ({
      value,
      // allchoice always submits every option; only its certainty varies
      selected: question.kind === "allchoice",
      certaintyText: "",
    }));
  }

  private entry(value: string): FormSelection {
    const found = this.selections.find((s) => s.value === value);
    if (!found) throw new RangeError(`unknown option: ${value}`);
    return found;
  }

  /** Apply a click on an option. Single-choice kinds behave like radio
   * buttons, multichoice like checkboxes; allchoice options stay fixed. */
  toggle(value: string): void {
    const entry = this.entry(value);
    switch (this.question.kind) {
      case "choice":
      case "forcedchoice":
        for (const s of this.selections) s.selected = s === entry;
        break;
      case "multichoice":
        entry.selected = !entry.selected;
        break;
      case "allchoice":
        break;
    }
  }

  setCertaintyText(value: string, text: string): void {
    this.entry(value).certaintyText = text;
  }

  /** Everything blocking submission, as user-facing messages. */
  validationErrors(): string[] {
    const errors: string[] = [];
    const picked = this.selections.filter((s) => s.selected);
    switch (this.question.kind) {
      case "choice":
      case "forcedchoice":
        if (picked.length !== 1) errors.push("pick exactly one option");
        break;
      case "multichoice":
        if (picked.length < 1) errors.push("pick at least one option");
        break;
      case "allchoice":
        // every option is always included
        break;
    }
    for (const s of picked) {
      try {
        parseCertainty(s.certaintyText);
      } catch {
        errors.push(`certainty for ${s.value} must be 0–1 or 0%–100%`);
      }
    }
    return errors;
  }

  canSubmit(): boolean {
    return this.validationErrors().length === 0;
  }

  /** The request body for POST /sessions/{handle}/answer. */
  payload(): AnswerPayload {
    const errors = this.validationErrors();
    if (errors.length > 0) {
      throw new RangeError(errors.join("; "));
    }
    return {
      variable: this.question.variable,
      selections: this.selections
        .filter((s) => s.selected)
        .map((s) => ({
          value: s.value,
          certainty: parseCertainty(s.certaintyText),
        })),
    };
  }
}
