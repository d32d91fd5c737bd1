// Wire types for the platform API. The UI consumes exactly these endpoints
// and never sees hidden tests: the server strips them before serializing.

export interface ProblemSummary {
  id: string;
  title: string;
  tier: string;
  kind: string;
}

export interface ProblemDetail extends ProblemSummary {
  language: string;
  message_limit: number;
  specification: string;
}

export interface LimitState {
  used: number;
  max: number;
}

export interface MessageResponse {
  assistant_content: string;
  code_block_count: number;
  limit: LimitState;
}

export interface FunctionResult {
  passed: number;
  total: number;
  ok: boolean;
}

export interface RunReport {
  status: "compile_error" | "runtime_error" | "graded";
  per_function: Record<string, FunctionResult>;
  all_ok: boolean;
  diagnostics: string;
  run_index: number;
  duration_ms: number;
}

export interface SummaryMessage {
  role: "student" | "assistant";
  content: string;
  position: number;
  code_block_count: number;
}

export interface SessionSummary {
  session_id: string;
  student_id: string;
  problem_id: string;
  solved: boolean;
  run_counter: number;
  conversation_index: number;
  conversation_count: number;
  limit: LimitState;
  messages: SummaryMessage[];
}

export interface ApiErrorBody {
  error: { code: string; detail: string };
}
