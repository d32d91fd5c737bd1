// DOM rendering: one render(state) pass rebuilds the dynamic regions.
// At desk scale (one conversation on screen) a full rebuild is simpler and
// fast enough; no virtual-dom machinery needed.

import { messageHtml } from "./markup.js";
import { canRun, canSend, limitReached, type ViewState } from "./state.js";

export interface ViewHandles {
  specification: HTMLElement;
  thread: HTMLElement;
  limitIndicator: HTMLElement;
  runCounter: HTMLElement;
  results: HTMLElement;
  banner: HTMLElement;
  input: HTMLTextAreaElement;
  sendButton: HTMLButtonElement;
  runButton: HTMLButtonElement;
  resetButton: HTMLButtonElement;
  errorToast: HTMLElement;
}

export function grabHandles(root: Document): ViewHandles {
  const get = <T extends HTMLElement>(id: string) => root.getElementById(id) as T;
  return {
    specification: get("specification"),
    thread: get("thread"),
    limitIndicator: get("limit-indicator"),
    runCounter: get("run-counter"),
    results: get("results"),
    banner: get("banner"),
    input: get<HTMLTextAreaElement>("message-input"),
    sendButton: get<HTMLButtonElement>("send-button"),
    runButton: get<HTMLButtonElement>("run-button"),
    resetButton: get<HTMLButtonElement>("reset-button"),
    errorToast: get("error-toast"),
  };
}

export function render(state: ViewState, ui: ViewHandles): void {
  ui.specification.textContent = state.problem?.specification ?? "Pick a problem to begin.";

  ui.thread.innerHTML = state.messages
    .map((m) => {
      const cls = m.role === "student" ? "bubble student" : "bubble assistant";
      const pendingCls = m.optimistic ? " pending" : "";
      return `<div class="${cls}${pendingCls}">${messageHtml(m.content)}</div>`;
    })
    .join("\n");
  for (const pre of Array.from(ui.thread.querySelectorAll("pre.code-block"))) {
    const button = ui.thread.ownerDocument.createElement("button");
    button.className = "copy";
    button.textContent = "copy";
    button.addEventListener("click", () => {
      void navigator.clipboard.writeText((pre as HTMLElement).innerText);
    });
    pre.appendChild(button);
  }

  ui.limitIndicator.textContent = `${state.limit.used}/${state.limit.max} messages`;
  ui.limitIndicator.classList.toggle("exhausted", limitReached(state));
  ui.runCounter.textContent = `runs: ${state.runCounter}`;

  ui.input.disabled = state.pending || limitReached(state) || state.sessionId === null;
  ui.input.placeholder = limitReached(state)
    ? "Message limit reached. Reset to continue."
    : "Describe what the code should do…";
  ui.sendButton.disabled = !canSend(state, ui.input.value);
  ui.runButton.disabled = !canRun(state);
  ui.resetButton.disabled = state.pending || state.sessionId === null;

  ui.banner.hidden = !state.solved;
  ui.errorToast.hidden = state.error === null;
  ui.errorToast.textContent = state.error ?? "";

  const report = state.lastReport;
  if (report === null) {
    ui.results.innerHTML = "";
  } else {
    const rows = Object.entries(report.per_function)
      .map(([fn, r]) => {
        const mark = r.ok ? "✓" : "✗";
        const cls = r.ok ? "ok" : "fail";
        return `<tr class="${cls}"><td>${mark}</td><td>${fn}</td><td>${r.passed}/${r.total}</td></tr>`;
      })
      .join("");
    const diagnostics = report.diagnostics.trim()
      ? `<details><summary>diagnostics</summary><pre>${report.diagnostics
          .replace(/&/g, "&amp;")
          .replace(/</g, "&lt;")}</pre></details>`
      : "";
    ui.results.innerHTML =
      `<div class="status status-${report.status}">${report.status}</div>` +
      `<table>${rows}</table>${diagnostics}`;
  }
}
