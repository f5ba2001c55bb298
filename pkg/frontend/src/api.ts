/** Typed client for the inqshell consultation service.
 *
 * The browser UI talks to the service exclusively through this module; no
 * inference happens client-side.
 */

export type PromptKind = "multichoice" | "forcedchoice" | "choice" | "allchoice";

export interface CoverageCell {
  entity: string;
  level: string;
  rules: number;
}

export interface KbSummary {
  name: string;
  version: string;
  hash: string;
  variables: number;
  rules: number;
  goals: number;
  coverage: CoverageCell[];
}

export interface QuestionInfo {
  variable: string;
  kind: PromptKind;
  text: string;
  help: string | null;
  options: string[];
  accepts_cf: boolean;
}

export interface SessionState {
  session: string;
  finished: boolean;
  question: QuestionInfo | null;
}

export interface SelectionPayload {
  value: string;
  /** null means "answered with full certainty" (the service stores 1.0). */
  certainty: number | null;
}

export interface AnswerPayload {
  variable: string;
  selections: SelectionPayload[];
}

export interface GoalJson {
  variable: string;
  status: "concluded" | "no-conclusion" | "pending";
  value: string | null;
  certainty: number | null;
  tags: string[];
  rules: string[];
  suppressed: boolean;
}

export interface RuleJson {
  id: string;
  satisfied: boolean | null;
  tags: string[];
}

export interface ReportJson {
  kb: string;
  version: string;
  hash: string;
  truth_threshold: number;
  complete: boolean;
  goals: GoalJson[];
  rules: RuleJson[];
  /** Canonical structured-text rendering, byte-identical to the CLI's. */
  structured: string;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function fail(response: Response): Promise<never> {
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, detail);
}

export class InqshellClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(this.url(path));
    if (!response.ok) await fail(response);
    return (await response.json()) as T;
  }

  async listKbs(): Promise<KbSummary[]> {
    const body = await this.getJson<{ kbs: KbSummary[] }>("/kbs");
    return body.kbs;
  }

  async createSession(
    kb: string,
    truthThreshold?: number,
  ): Promise<SessionState> {
    const response = await this.fetchImpl(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        kb,
        truth_threshold: truthThreshold ?? null,
      }),
    });
    if (!response.ok) await fail(response);
    return (await response.json()) as SessionState;
  }

  getQuestion(handle: string): Promise<SessionState> {
    return this.getJson(`/sessions/${handle}/question`);
  }

  async postAnswer(
    handle: string,
    answer: AnswerPayload,
  ): Promise<SessionState> {
    const response = await this.fetchImpl(
      this.url(`/sessions/${handle}/answer`),
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(answer),
      },
    );
    if (!response.ok) await fail(response);
    return (await response.json()) as SessionState;
  }

  async getReportText(handle: string): Promise<string> {
    const response = await this.fetchImpl(
      this.url(`/sessions/${handle}/report`),
    );
    if (!response.ok) await fail(response);
    return response.text();
  }

  getReportJson(handle: string): Promise<ReportJson> {
    return this.getJson(`/sessions/${handle}/report?format=json`);
  }

  async explain(
    handle: string,
    variable: string,
  ): Promise<string[]> {
    const body = await this.getJson<{ lines: string[] }>(
      `/sessions/${handle}/explain/${encodeURIComponent(variable)}`,
    );
    return body.lines;
  }

  async getTranscript(handle: string): Promise<string> {
    const response = await this.fetchImpl(
      this.url(`/sessions/${handle}/transcript`),
    );
    if (!response.ok) await fail(response);
    return response.text();
  }
}
