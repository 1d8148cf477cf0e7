/**
 * Typed client for the planethics HTTP API. One function per endpoint;
 * every non-2xx response becomes an ApiError carrying the server's
 * {code, message, detail} body so the UI can branch on status and code.
 */

export type Principle =
  | "deontology"
  | "act_utilitarian"
  | "do_no_harm"
  | "do_no_instrumental_harm"
  | "double_effect";

export const PRINCIPLES: Principle[] = [
  "deontology",
  "act_utilitarian",
  "do_no_harm",
  "do_no_instrumental_harm",
  "double_effect",
];

export type SuggestionKind = "forbid" | "force" | "replace" | "order";

export interface ActionInfo {
  name: string;
  cost: number;
  intrinsic: "good" | "neutral" | "bad";
  display: string | null;
}

export interface SessionSummary {
  id: string;
  objective: string;
  budget: { maxDepth: number; maxExpansions: number };
  createdAt: string;
  updatedAt: string;
  plan: { steps: string[]; cost: number };
  provenance: string[];
  actions: ActionInfo[];
  init: string[];
  goal: string[];
  historyLength: number;
}

export interface PlanPayload {
  steps: string[];
  cost: number;
  goalSatisfied: boolean;
  details: ActionInfo[];
  trace: string[][];
}

export interface VerdictPayload {
  permissible: boolean;
  principle: string;
  formula: string;
  assignment: Record<string, boolean>;
  boundNote: string | null;
}

export interface ReasonPayload {
  text: string;
  literals: string[];
  sufficientAndNecessary: boolean;
}

export interface ReasonsPayload {
  sufficient: ReasonPayload[];
  necessary: ReasonPayload[];
}

export interface ExplanationSide {
  steps: string[];
  verdict: VerdictPayload;
  reasons: ReasonsPayload;
}

export interface ExplanationPayload {
  original: ExplanationSide;
  hplan: ExplanationSide;
  diff: { removed: string[]; added: string[]; common: string[] };
  nl: string;
}

export interface HistoryEntry {
  index: number;
  suggestion: string;
  principle: string;
  status: "ok" | "failed";
  committed: boolean;
  error: { code: string; message: string } | null;
  explanation: ExplanationPayload | null;
}

export interface EvaluationPayload {
  verdict: VerdictPayload;
  reasons: ReasonsPayload;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail: unknown = null,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (err) {
    throw new ApiError(0, "connection", `cannot reach the service at ${url}`);
  }
  if (response.status === 204) {
    return undefined as T;
  }
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const code = body?.code ?? "http_error";
    const message = body?.message ?? `HTTP ${response.status}`;
    throw new ApiError(response.status, code, message, body?.detail ?? null);
  }
  return body as T;
}

export class Client {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return request<T>(this.url(path), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  createSession(domain: string, problem: string, objective?: string): Promise<SessionSummary> {
    const payload: Record<string, unknown> = { domain, problem };
    if (objective) payload.objective = objective;
    return this.post("/sessions", payload);
  }

  getSession(id: string): Promise<SessionSummary> {
    return request<SessionSummary>(this.url(`/sessions/${id}`));
  }

  getPlan(id: string): Promise<PlanPayload> {
    return request<PlanPayload>(this.url(`/sessions/${id}/plan`));
  }

  evaluate(id: string, principle: Principle): Promise<EvaluationPayload> {
    return this.post(`/sessions/${id}/evaluate`, { principle });
  }

  suggest(id: string, suggestion: string, principle: Principle): Promise<ExplanationPayload> {
    return this.post(`/sessions/${id}/suggest`, { suggestion, principle });
  }

  commit(id: string, index: number): Promise<SessionSummary> {
    return this.post(`/sessions/${id}/commit`, { index });
  }

  history(id: string): Promise<{ entries: HistoryEntry[] }> {
    return request<{ entries: HistoryEntry[] }>(this.url(`/sessions/${id}/history`));
  }

  deleteSession(id: string): Promise<void> {
    return request<void>(this.url(`/sessions/${id}`), { method: "DELETE" });
  }
}

/** Assemble the suggestion grammar from the structured form. */
export function suggestionText(kind: SuggestionKind, a: string, b: string): string {
  switch (kind) {
    case "forbid":
      return `forbid ${a}`;
    case "force":
      return `force ${a}`;
    case "replace":
      return `replace ${a} with ${b}`;
    case "order":
      return `order ${a} before ${b}`;
  }
}
