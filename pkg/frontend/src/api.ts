import type {
  MessageResponse,
  ProblemDetail,
  ProblemSummary,
  RunReport,
  SessionSummary,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(code: string, detail: string, status: number) {
    super(detail || code);
    this.code = code;
    this.status = status;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the service endpoints; fetch is injectable so
 * tests can capture traffic or fake the transport. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, init);
    const text = await resp.text();
    if (!resp.ok) {
      let code = `HTTP_${resp.status}`;
      let detail = text;
      try {
        const body = JSON.parse(text);
        if (body?.error?.code) {
          code = body.error.code;
          detail = body.error.detail ?? "";
        }
      } catch {
        // non-JSON error body: keep the raw text as detail
      }
      throw new ApiError(code, detail, resp.status);
    }
    return JSON.parse(text) as T;
  }

  private post<T>(path: string, body?: unknown, headers?: Record<string, string>): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json", ...headers },
      body: body === undefined ? "{}" : JSON.stringify(body),
    });
  }

  listProblems(): Promise<ProblemSummary[]> {
    return this.request<ProblemSummary[]>("/problems");
  }

  problemDetail(problemId: string): Promise<ProblemDetail> {
    return this.request<ProblemDetail>(`/problems/${encodeURIComponent(problemId)}`);
  }

  async createSession(studentId: string, problemId: string): Promise<string> {
    const body = await this.post<{ session_id: string }>("/sessions", {
      student_id: studentId,
      problem_id: problemId,
    });
    return body.session_id;
  }

  postMessage(sessionId: string, content: string): Promise<MessageResponse> {
    return this.post<MessageResponse>(`/sessions/${sessionId}/messages`, { content });
  }

  runCode(sessionId: string, idempotencyKey?: string): Promise<RunReport> {
    const headers = idempotencyKey ? { "Idempotency-Key": idempotencyKey } : undefined;
    return this.post<RunReport>(`/sessions/${sessionId}/run`, undefined, headers);
  }

  resetConversation(sessionId: string): Promise<{ conversation_index: number }> {
    return this.post<{ conversation_index: number }>(`/sessions/${sessionId}/reset`);
  }

  sessionSummary(sessionId: string): Promise<SessionSummary> {
    return this.request<SessionSummary>(`/sessions/${sessionId}`);
  }
}
