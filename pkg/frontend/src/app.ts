/** Browser entry point: catalog -> consultation -> report, all against the
 * HTTP service. Served from /ui when the service runs with --ui-dir.
 */

import {
  ApiError,
  InqshellClient,
  type GoalJson,
  type QuestionInfo,
  type SessionState,
} from "./api.js";
import { AnswerForm, formatCertainty } from "./viewmodel.js";

const client = new InqshellClient(
  window.location.origin === "null" ? "http://127.0.0.1:7007" : "",
);

const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");
const app = root as HTMLElement;

let handle: string | null = null;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function showError(message: string): void {
  const banner = el("div", "error-banner", message);
  app.prepend(banner);
  setTimeout(() => banner.remove(), 6000);
}

async function guard<T>(work: () => Promise<T>): Promise<T | undefined> {
  try {
    return await work();
  } catch (error) {
    if (error instanceof ApiError) {
      showError(`${error.status}: ${error.message}`);
    } else {
      showError(String(error));
    }
    return undefined;
  }
}

async function renderCatalog(): Promise<void> {
  const kbs = await guard(() => client.listKbs());
  if (!kbs) return;
  app.replaceChildren();
  app.append(el("h1", undefined, "Choose a knowledge base"));
  for (const kb of kbs) {
    const card = el("section", "kb-card");
    card.append(el("h2", undefined, `${kb.name} (v${kb.version})`));
    card.append(
      el(
        "p",
        "kb-counts",
        `${kb.variables} variables · ${kb.rules} rules · ${kb.goals} goals`,
      ),
    );
    const button = el("button", undefined, "Start consultation");
    button.addEventListener("click", () => {
      void guard(async () => {
        const state = await client.createSession(kb.name);
        handle = state.session;
        renderState(state);
      });
    });
    card.append(button);
    app.append(card);
  }
}

function renderState(state: SessionState): void {
  if (state.finished) {
    void renderReport();
  } else if (state.question) {
    renderQuestion(state.question);
  }
}

function renderQuestion(question: QuestionInfo): void {
  const form = new AnswerForm(question);
  app.replaceChildren();
  app.append(el("h1", undefined, question.text));
  if (question.help) app.append(el("p", "help", question.help));

  const list = el("div", "options");
  const errorBox = el("p", "validation");
  const submit = el("button", "submit", "Answer");

  const refresh = (): void => {
    const errors = form.validationErrors();
    errorBox.textContent = errors.join("; ");
    submit.disabled = errors.length > 0;
  };

  for (const selection of form.selections) {
    const row = el("label", "option-row");
    if (question.kind !== "allchoice") {
      const input = el("input");
      input.type = question.kind === "multichoice" ? "checkbox" : "radio";
      input.name = question.variable;
      input.addEventListener("change", () => {
        form.toggle(selection.value);
        refresh();
      });
      row.append(input);
    }
    row.append(el("span", "option-label", selection.value));
    if (question.accepts_cf) {
      const cf = el("input", "certainty");
      cf.type = "text";
      cf.placeholder = "certainty (blank = 100%)";
      cf.addEventListener("input", () => {
        form.setCertaintyText(selection.value, cf.value);
        refresh();
      });
      row.append(cf);
    }
    list.append(row);
  }

  submit.addEventListener("click", () => {
    void guard(async () => {
      if (!handle) throw new Error("no active session");
      const state = await client.postAnswer(handle, form.payload());
      renderState(state);
    });
  });

  app.append(list, errorBox, submit);
  refresh();
}

function goalLine(goal: GoalJson): string {
  if (goal.status === "concluded") {
    return `${goal.variable}: ${goal.value} (${formatCertainty(goal.certainty)})`;
  }
  return `${goal.variable}: ${goal.status}`;
}

async function renderReport(): Promise<void> {
  if (!handle) return;
  const sessionHandle = handle;
  const report = await guard(() => client.getReportJson(sessionHandle));
  if (!report) return;
  app.replaceChildren();
  app.append(el("h1", undefined, "Diagnosis report"));
  app.append(
    el(
      "p",
      "kb-counts",
      `${report.kb} v${report.version} — ${
        report.complete ? "complete" : "incomplete"
      }`,
    ),
  );
  const list = el("ul", "goals");
  for (const goal of report.goals) {
    const item = el("li", `goal goal-${goal.status}`, goalLine(goal));
    if (goal.status === "concluded") {
      const why = el("button", "why", "why?");
      why.addEventListener("click", () => {
        void guard(async () => {
          const lines = await client.explain(sessionHandle, goal.variable);
          const pre = el("pre", "proof", lines.join("\n"));
          item.append(pre);
          why.remove();
        });
      });
      item.append(why);
    }
    list.append(item);
  }
  app.append(list);

  const raw = el("details");
  raw.append(el("summary", undefined, "structured report"));
  raw.append(el("pre", undefined, report.structured));
  app.append(raw);

  const again = el("button", undefined, "New consultation");
  again.addEventListener("click", () => void renderCatalog());
  app.append(again);
}

void renderCatalog();
