// View state and its transitions. The view is a pure function of this
// object; every transition returns a fresh state so rendering can diff on
// identity. The server stays authoritative: counters and limits come from
// responses, never from client-side arithmetic.

import type {
  MessageResponse,
  ProblemDetail,
  RunReport,
  SessionSummary,
} from "./types.js";

export interface Bubble {
  role: "student" | "assistant";
  content: string;
  codeBlockCount: number;
  optimistic?: boolean;
}

export interface ViewState {
  problem: ProblemDetail | null;
  sessionId: string | null;
  messages: Bubble[];
  limit: { used: number; max: number };
  runCounter: number; // always the last server-reported run_index
  lastReport: RunReport | null;
  solved: boolean;
  pending: boolean; // one in-flight mutation at a time
  error: string | null;
}

export function initialState(): ViewState {
  return {
    problem: null,
    sessionId: null,
    messages: [],
    limit: { used: 0, max: 0 },
    runCounter: 0,
    lastReport: null,
    solved: false,
    pending: false,
    error: null,
  };
}

export function limitReached(state: ViewState): boolean {
  return state.limit.max > 0 && state.limit.used >= state.limit.max;
}

export function canSend(state: ViewState, text: string): boolean {
  return (
    state.sessionId !== null && !state.pending && !limitReached(state) && text.trim().length > 0
  );
}

export function canRun(state: ViewState): boolean {
  return (
    !state.pending &&
    state.sessionId !== null &&
    state.messages.some((m) => m.role === "assistant" && m.codeBlockCount > 0)
  );
}

export function applyProblem(state: ViewState, problem: ProblemDetail): ViewState {
  return {
    ...initialState(),
    problem,
    limit: { used: 0, max: problem.message_limit },
  };
}

export function applySessionStarted(state: ViewState, sessionId: string): ViewState {
  return { ...state, sessionId, error: null };
}

/** Optimistic student bubble while the provider round-trip is pending. */
export function applyStudentMessage(state: ViewState, content: string): ViewState {
  return {
    ...state,
    pending: true,
    error: null,
    messages: [
      ...state.messages,
      { role: "student", content, codeBlockCount: 0, optimistic: true },
    ],
  };
}

export function applyAssistantReply(state: ViewState, reply: MessageResponse): ViewState {
  const messages: Bubble[] = state.messages.map((m) => ({ ...m, optimistic: false }));
  messages.push({
    role: "assistant",
    content: reply.assistant_content,
    codeBlockCount: reply.code_block_count,
  });
  return { ...state, pending: false, messages, limit: reply.limit };
}

/** Roll the optimistic bubble back; the server rolled its copy back too. */
export function applyPostFailure(state: ViewState, code: string): ViewState {
  const messages = state.messages.filter((m) => !m.optimistic);
  return { ...state, pending: false, messages, error: code };
}

export function applyRunStarted(state: ViewState): ViewState {
  return { ...state, pending: true, error: null };
}

export function applyRunReport(state: ViewState, report: RunReport): ViewState {
  return {
    ...state,
    pending: false,
    lastReport: report,
    runCounter: report.run_index,
    solved: state.solved || report.all_ok,
  };
}

export function applyRunFailure(state: ViewState, code: string): ViewState {
  return { ...state, pending: false, error: code };
}

/** Reset clears the thread and the limit but never the run counter. */
export function applyReset(state: ViewState): ViewState {
  return {
    ...state,
    pending: false,
    messages: [],
    limit: { used: 0, max: state.limit.max },
    lastReport: null,
    error: null,
  };
}

/** Rebuild from the server summary (page reload, polling). */
export function applySummary(state: ViewState, summary: SessionSummary): ViewState {
  return {
    ...state,
    sessionId: summary.session_id,
    solved: summary.solved,
    runCounter: summary.run_counter,
    limit: summary.limit,
    messages: summary.messages.map((m) => ({
      role: m.role,
      content: m.content,
      codeBlockCount: m.code_block_count,
    })),
  };
}

/** Display invariant: bubbles must strictly alternate starting with the
 * student; violations indicate a client bug, not bad server data. */
export function rolesAlternate(state: ViewState): boolean {
  return state.messages.every((m, i) => m.role === (i % 2 === 0 ? "student" : "assistant"));
}
