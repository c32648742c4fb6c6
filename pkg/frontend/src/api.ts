// Typed client for the game service. The server is the single source of
// rule truth: this module never re-implements game rules, it only relays
// requests and surfaces rejections.

export interface SessionRules {
  min_content_words?: number;
  ban_self_reference?: boolean;
}

export interface SessionView {
  id: string;
  start_word: string;
  status: "active" | "complete";
  pending: string[];
  defined_count: number;
  defined: Record<string, string[]>;
}

export interface StructureReport {
  total_words: number;
  kernel_words: number;
  kernel_pct_of_total: number;
  satellite_words: number;
  satellite_pct_of_kernel: number;
  core_words: number;
  core_pct_of_kernel: number;
  core_is_single_scc: boolean;
  kernel_is_grounding_set: boolean;
  mgs_words?: number;
  mgs_pct_of_kernel?: number;
}

export interface AnalysisView {
  labels: Record<string, string>;
  mgs: string[];
  report: StructureReport;
}

export class RuleViolationError extends Error {
  constructor(
    public readonly rule: string,
    public readonly detail: string,
  ) {
    super(detail);
    this.name = "RuleViolationError";
  }
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

export function splitTokens(text: string): string[] {
  return text.split(/\s+/).filter((t) => t.length > 0);
}

async function reject(response: Response): Promise<never> {
  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    // non-JSON error body; fall through to the generic error
  }
  if (response.status === 409 && body && typeof body === "object" && "rule" in body) {
    const violation = body as { rule: string; detail: string };
    throw new RuleViolationError(violation.rule, violation.detail);
  }
  const detail =
    body && typeof body === "object" && "detail" in body
      ? String((body as { detail: unknown }).detail)
      : response.statusText;
  throw new ApiError(response.status, detail);
}

export class GameClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      await reject(response);
    }
    return (await response.json()) as T;
  }

  startSession(startWord: string, rules?: SessionRules): Promise<SessionView> {
    return this.request<SessionView>("POST", "/sessions", {
      start_word: startWord,
      ...(rules ? { rules } : {}),
    });
  }

  getSession(id: string): Promise<SessionView> {
    return this.request<SessionView>("GET", `/sessions/${id}`);
  }

  submitDefinition(id: string, word: string, text: string): Promise<SessionView> {
    return this.request<SessionView>("POST", `/sessions/${id}/definitions`, {
      word,
      tokens: splitTokens(text),
    });
  }

  fetchAnalysis(id: string): Promise<AnalysisView> {
    return this.request<AnalysisView>("GET", `/sessions/${id}/analysis`);
  }

  async exportSession(id: string): Promise<string> {
    const response = await this.fetchImpl(`${this.base}/sessions/${id}/export`);
    if (!response.ok) {
      await reject(response);
    }
    return response.text();
  }

  health(): Promise<{ status: string; version: string }> {
    return this.request("GET", "/health");
  }
}
