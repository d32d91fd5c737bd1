import { describe, expect, it } from "vitest";

import {
  applyAssistantReply,
  applyPostFailure,
  applyProblem,
  applyReset,
  applyRunReport,
  applyRunStarted,
  applySessionStarted,
  applyStudentMessage,
  applySummary,
  canRun,
  canSend,
  initialState,
  limitReached,
  rolesAlternate,
  type ViewState,
} from "../src/state.js";
import type { ProblemDetail, RunReport } from "../src/types.js";

const PROBLEM: ProblemDetail = {
  id: "count-negatives",
  title: "Count negatives",
  tier: "L7",
  kind: "single_function",
  language: "C",
  message_limit: 5,
  specification: "## Function: int count_negatives(int *arr, int n)",
};

function reply(content: string, blocks: number, used: number): Parameters<typeof applyAssistantReply>[1] {
  return { assistant_content: content, code_block_count: blocks, limit: { used, max: 5 } };
}

function report(runIndex: number, allOk: boolean): RunReport {
  return {
    status: "graded",
    per_function: { count_negatives: { passed: allOk ? 8 : 3, total: 8, ok: allOk } },
    all_ok: allOk,
    diagnostics: "",
    run_index: runIndex,
    duration_ms: 10,
  };
}

function started(): ViewState {
  return applySessionStarted(applyProblem(initialState(), PROBLEM), "sess-1");
}

describe("message flow", () => {
  it("optimistic bubble then assistant reply keeps alternation", () => {
    let s = started();
    s = applyStudentMessage(s, "please write it");
    expect(s.pending).toBe(true);
    expect(s.messages.at(-1)?.optimistic).toBe(true);
    s = applyAssistantReply(s, reply("```c\nint x;\n```", 1, 1));
    expect(s.pending).toBe(false);
    expect(s.limit).toEqual({ used: 1, max: 5 });
    expect(rolesAlternate(s)).toBe(true);
    expect(s.messages).toHaveLength(2);
  });

  it("post failure rolls the optimistic bubble back", () => {
    let s = started();
    s = applyStudentMessage(s, "hello");
    s = applyPostFailure(s, "PROVIDER_FAILURE");
    expect(s.messages).toHaveLength(0);
    expect(s.error).toBe("PROVIDER_FAILURE");
    expect(s.pending).toBe(false);
  });

  it("empty input cannot be sent", () => {
    const s = started();
    expect(canSend(s, "   ")).toBe(false);
    expect(canSend(s, "real question")).toBe(true);
  });

  it("limit blocks sending until reset", () => {
    let s = started();
    for (let i = 1; i <= 5; i++) {
      s = applyStudentMessage(s, `m${i}`);
      s = applyAssistantReply(s, reply("ok", 0, i));
    }
    expect(limitReached(s)).toBe(true);
    expect(canSend(s, "one more")).toBe(false);
    s = applyReset(s);
    expect(limitReached(s)).toBe(false);
    expect(canSend(s, "fresh start")).toBe(true);
  });

  it("single in-flight mutation", () => {
    let s = started();
    s = applyStudentMessage(s, "first");
    expect(canSend(s, "second")).toBe(false);
    expect(canRun(s)).toBe(false);
  });
});

describe("run code", () => {
  it("requires an assistant code block", () => {
    let s = started();
    expect(canRun(s)).toBe(false);
    s = applyStudentMessage(s, "go");
    s = applyAssistantReply(s, reply("prose only", 0, 1));
    expect(canRun(s)).toBe(false);
    s = applyStudentMessage(s, "code please");
    s = applyAssistantReply(s, reply("```c\nint x;\n```", 1, 2));
    expect(canRun(s)).toBe(true);
  });

  it("counter always shows the server-reported run index", () => {
    let s = started();
    s = applyStudentMessage(s, "go");
    s = applyAssistantReply(s, reply("```c\nint x;\n```", 1, 1));
    s = applyRunStarted(s);
    s = applyRunReport(s, report(1, false));
    expect(s.runCounter).toBe(1);
    expect(s.solved).toBe(false);
    s = applyRunReport(s, report(2, true));
    expect(s.runCounter).toBe(2);
    expect(s.solved).toBe(true);
  });

  it("duplicate report (idempotent retry) does not bump the counter", () => {
    let s = started();
    s = applyRunReport(s, report(1, true));
    s = applyRunReport(s, report(1, true));
    expect(s.runCounter).toBe(1);
  });
});

describe("reset", () => {
  it("clears thread and limit but keeps the counter and solved flag", () => {
    let s = started();
    s = applyStudentMessage(s, "go");
    s = applyAssistantReply(s, reply("```c\nint x;\n```", 1, 1));
    s = applyRunReport(s, report(1, true));
    s = applyReset(s);
    expect(s.messages).toHaveLength(0);
    expect(s.limit).toEqual({ used: 0, max: 5 });
    expect(s.runCounter).toBe(1);
    expect(s.solved).toBe(true);
    expect(s.lastReport).toBeNull();
  });
});

describe("summary rebuild", () => {
  it("mirrors the server summary", () => {
    const s = applySummary(started(), {
      session_id: "sess-1",
      student_id: "stu",
      problem_id: "count-negatives",
      solved: true,
      run_counter: 3,
      conversation_index: 2,
      conversation_count: 3,
      limit: { used: 2, max: 5 },
      messages: [
        { role: "student", content: "a", position: 1, code_block_count: 0 },
        { role: "assistant", content: "b", position: 1, code_block_count: 1 },
        { role: "student", content: "c", position: 2, code_block_count: 0 },
        { role: "assistant", content: "d", position: 2, code_block_count: 0 },
      ],
    });
    expect(s.runCounter).toBe(3);
    expect(s.messages).toHaveLength(4);
    expect(rolesAlternate(s)).toBe(true);
    expect(canRun(s)).toBe(true);
  });
});
