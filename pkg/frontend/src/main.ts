import { ApiClient, ApiError } from "./api.js";
import {
  applyAssistantReply,
  applyPostFailure,
  applyProblem,
  applyReset,
  applyRunFailure,
  applyRunReport,
  applyRunStarted,
  applySessionStarted,
  applyStudentMessage,
  canRun,
  canSend,
  initialState,
  type ViewState,
} from "./state.js";
import { grabHandles, render } from "./view.js";

const api = new ApiClient("");
let state: ViewState = initialState();
const ui = grabHandles(document);

function update(next: ViewState): void {
  state = next;
  render(state, ui);
}

function studentId(): string {
  const existing = localStorage.getItem("promptprog-student");
  if (existing) return existing;
  const fresh = `web-${Math.random().toString(36).slice(2, 10)}`;
  localStorage.setItem("promptprog-student", fresh);
  return fresh;
}

async function pickProblem(problemId: string): Promise<void> {
  const detail = await api.problemDetail(problemId);
  update(applyProblem(state, detail));
  const sessionId = await api.createSession(studentId(), problemId);
  update(applySessionStarted(state, sessionId));
}

async function send(): Promise<void> {
  const text = ui.input.value;
  if (!canSend(state, text)) return;
  ui.input.value = "";
  update(applyStudentMessage(state, text));
  try {
    const reply = await api.postMessage(state.sessionId!, text);
    update(applyAssistantReply(state, reply));
  } catch (err) {
    update(applyPostFailure(state, err instanceof ApiError ? err.code : "NETWORK"));
  }
}

async function run(): Promise<void> {
  if (!canRun(state)) return;
  update(applyRunStarted(state));
  const key = `run-${crypto.randomUUID()}`;
  try {
    const report = await api.runCode(state.sessionId!, key);
    update(applyRunReport(state, report));
  } catch (err) {
    update(applyRunFailure(state, err instanceof ApiError ? err.code : "NETWORK"));
  }
}

async function reset(): Promise<void> {
  if (state.sessionId === null) return;
  await api.resetConversation(state.sessionId);
  update(applyReset(state));
}

async function boot(): Promise<void> {
  const problems = await api.listProblems();
  const picker = document.getElementById("problem-picker") as HTMLSelectElement;
  picker.innerHTML =
    '<option value="">— choose a problem —</option>' +
    problems
      .map((p) => `<option value="${p.id}">[${p.tier}] ${p.title}</option>`)
      .join("");
  picker.addEventListener("change", () => {
    if (picker.value) void pickProblem(picker.value);
  });

  ui.sendButton.addEventListener("click", () => void send());
  ui.input.addEventListener("keydown", (e) => {
    if (e.key === "Enter" && !e.shiftKey) {
      e.preventDefault();
      void send();
    }
  });
  ui.input.addEventListener("input", () => render(state, ui));
  ui.runButton.addEventListener("click", () => void run());
  ui.resetButton.addEventListener("click", () => void reset());
  render(state, ui);
}

void boot();
