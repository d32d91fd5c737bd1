import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, type FetchLike } from "../src/api.js";

interface Call {
  url: string;
  init?: RequestInit;
}

function fakeFetch(
  responder: (url: string, init?: RequestInit) => { status: number; body: unknown },
): { fetchFn: FetchLike; calls: Call[] } {
  const calls: Call[] = [];
  const fetchFn: FetchLike = async (url, init) => {
    calls.push({ url, init });
    const { status, body } = responder(url, init);
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { fetchFn, calls };
}

describe("ApiClient", () => {
  it("posts messages with JSON body", async () => {
    const { fetchFn, calls } = fakeFetch(() => ({
      status: 200,
      body: { assistant_content: "hi", code_block_count: 0, limit: { used: 1, max: 5 } },
    }));
    const client = new ApiClient("http://svc", fetchFn);
    const reply = await client.postMessage("sess", "hello there");
    expect(reply.limit.used).toBe(1);
    expect(calls[0].url).toBe("http://svc/sessions/sess/messages");
    expect(JSON.parse(calls[0].init!.body as string)).toEqual({ content: "hello there" });
  });

  it("surfaces structured error codes", async () => {
    const { fetchFn } = fakeFetch(() => ({
      status: 409,
      body: { error: { code: "LIMIT_REACHED", detail: "reset to continue" } },
    }));
    const client = new ApiClient("http://svc", fetchFn);
    await expect(client.postMessage("sess", "x")).rejects.toMatchObject({
      code: "LIMIT_REACHED",
      status: 409,
    });
  });

  it("falls back to HTTP status code for unstructured errors", async () => {
    const fetchFn: FetchLike = async () => new Response("boom", { status: 500 });
    const client = new ApiClient("http://svc", fetchFn);
    try {
      await client.listProblems();
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
      expect((err as ApiError).code).toBe("HTTP_500");
    }
  });

  it("sends the idempotency key header on runs", async () => {
    const { fetchFn, calls } = fakeFetch(() => ({
      status: 200,
      body: {
        status: "graded",
        per_function: {},
        all_ok: true,
        diagnostics: "",
        run_index: 1,
        duration_ms: 5,
      },
    }));
    const client = new ApiClient("http://svc", fetchFn);
    await client.runCode("sess", "key-123");
    const headers = calls[0].init!.headers as Record<string, string>;
    expect(headers["Idempotency-Key"]).toBe("key-123");
  });

  it("url-encodes problem ids", async () => {
    const { fetchFn, calls } = fakeFetch(() => ({ status: 200, body: {} }));
    const client = new ApiClient("http://svc", fetchFn);
    await client.problemDetail("weird id");
    expect(calls[0].url).toBe("http://svc/problems/weird%20id");
  });
});
