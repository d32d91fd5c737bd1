"""Grading pipeline: block selection, driver execution, report assembly.

`Grader.grade_block` is the shared pipeline behind both student-visible runs
and shadow grading; the two differ only in session side effects (run counter,
solved flag) and report visibility.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import drivers, sandbox
from .blocks import CodeBlock
from .corpus import Problem
from .dialogue import Session
from .errors import PromptProgError
from .providers import ASSISTANT

COMPILE_ERROR = "compile_error"
RUNTIME_ERROR = "runtime_error"
GRADED = "graded"


class NoCodeAvailable(PromptProgError):
    code = "NO_CODE_AVAILABLE"


@dataclass(frozen=True)
class FunctionResult:
    passed: int
    total: int
    ok: bool

    def to_payload(self) -> dict:
        return {"passed": self.passed, "total": self.total, "ok": self.ok}


@dataclass
class ExecutionReport:
    status: str
    per_function: dict[str, FunctionResult]
    diagnostics: str
    visible_to_student: bool
    duration_ms: int
    run_index: int | None = None

    @property
    def all_ok(self) -> bool:
        return self.status == GRADED and all(r.ok for r in self.per_function.values())

    def to_payload(self) -> dict:
        return {
            "status": self.status,
            "per_function": {k: v.to_payload() for k, v in sorted(self.per_function.items())},
            "all_ok": self.all_ok,
            "diagnostics": self.diagnostics,
            "visible_to_student": self.visible_to_student,
            "duration_ms": self.duration_ms,
            "run_index": self.run_index,
        }


_RESULT_RE = re.compile(r"^RESULT ([A-Za-z_]\w*) (\d+) (PASS|FAIL)\s*$")


def parse_result_lines(
    stdout: str, totals: dict[str, int]
) -> tuple[dict[str, set[int]], bool, bool]:
    """Returns (passes per function, all lines present, any malformed line).

    Lines that do not start with the RESULT prefix are ignored; a line that
    starts with it but does not parse, names an unknown function, repeats a
    test, or exceeds the test count is malformed.
    """
    passes: dict[str, set[int]] = {fn: set() for fn in totals}
    seen: dict[str, set[int]] = {fn: set() for fn in totals}
    malformed = False
    for line in stdout.splitlines():
        if not line.startswith(drivers.RESULT_PREFIX):
            continue
        m = _RESULT_RE.match(line)
        if not m:
            malformed = True
            continue
        fn, idx, verdict = m.group(1), int(m.group(2)), m.group(3)
        if fn not in totals or idx >= totals[fn] or idx in seen[fn]:
            malformed = True
            continue
        seen[fn].add(idx)
        if verdict == "PASS":
            passes[fn].add(idx)
    complete = all(len(seen[fn]) == totals[fn] for fn in totals)
    return passes, complete, malformed


def latest_runnable_block(session: Session) -> CodeBlock:
    """Last block of the last assistant message that has any blocks, within
    the active conversation only."""
    for msg in reversed(session.active.messages):
        if msg.role == ASSISTANT and msg.code_blocks:
            return msg.code_blocks[-1]
    raise NoCodeAvailable("no generated code in the active conversation")


class Grader:
    def __init__(
        self,
        toolchain: sandbox.ToolchainConfig | None = None,
        policy: sandbox.SandboxPolicy | None = None,
        mode: str = drivers.SINGLE_DRIVER,
    ):
        self.toolchain = toolchain or sandbox.ToolchainConfig()
        self.policy = policy or sandbox.SandboxPolicy()
        self.mode = mode

    def grade_block(
        self, problem: Problem, block: CodeBlock | str, visible: bool
    ) -> ExecutionReport:
        bundle = drivers.synthesize_driver(problem, block, self.mode)
        totals = {f.name: len(f.hidden_tests) for f in problem.functions}
        per_function: dict[str, FunctionResult] = {}
        statuses: list[str] = []
        diagnostics: list[str] = []
        duration = 0
        for unit in bundle.units:
            outcome = sandbox.execute(unit, self.policy, self.toolchain)
            duration += outcome.duration_ms
            unit_totals = {fn: totals[fn] for fn in unit.functions}
            status, results, diag = self._judge_unit(outcome, unit_totals)
            statuses.append(status)
            per_function.update(results)
            if diag:
                header = f"== {unit.name} ==\n" if len(bundle.units) > 1 else ""
                diagnostics.append(header + diag)
        status = self._overall_status(statuses)
        return ExecutionReport(
            status=status,
            per_function=per_function,
            diagnostics=self._cap("\n".join(diagnostics)),
            visible_to_student=visible,
            duration_ms=duration,
        )

    def run_code(self, problem: Problem, session: Session) -> tuple[CodeBlock, ExecutionReport]:
        """Student-visible run: consumes one run-counter tick; a fully green
        report marks the session solved."""
        block = latest_runnable_block(session)
        report = self.grade_block(problem, block, visible=True)
        session.run_counter += 1
        report.run_index = session.run_counter
        if report.all_ok:
            session.solved = True
        return block, report

    def shadow_grade(self, problem: Problem, block: CodeBlock) -> ExecutionReport:
        """Analytics-only grade: never touches the session."""
        return self.grade_block(problem, block, visible=False)

    def _judge_unit(
        self, outcome: sandbox.RawOutcome, totals: dict[str, int]
    ) -> tuple[str, dict[str, FunctionResult], str]:
        zeroes = {fn: FunctionResult(0, n, False) for fn, n in totals.items()}
        if not outcome.compile_ok:
            return COMPILE_ERROR, zeroes, outcome.compile_output
        if (
            outcome.exit_code == drivers.SYNTAX_ERROR_EXIT
            and drivers.SYNTAX_ERROR_MARKER in outcome.stderr
        ):
            return COMPILE_ERROR, zeroes, outcome.stderr.strip()
        passes, complete, malformed = parse_result_lines(outcome.stdout, totals)
        results = {
            fn: FunctionResult(len(passes[fn]), n, ok=len(passes[fn]) == n)
            for fn, n in totals.items()
        }
        crashed = outcome.timed_out or outcome.exit_code != 0
        if crashed or not complete or malformed:
            reason = (
                "timed out"
                if outcome.timed_out
                else f"exit code {outcome.exit_code}"
                if crashed
                else "malformed or missing RESULT lines"
            )
            # a partial run still reports whatever passed before the failure
            results = {
                fn: FunctionResult(len(passes[fn]), n, ok=False) for fn, n in totals.items()
            }
            return RUNTIME_ERROR, results, f"[{reason}]\n{outcome.stderr}".rstrip()
        return GRADED, results, outcome.stderr.strip()

    @staticmethod
    def _overall_status(statuses: list[str]) -> str:
        if any(s == GRADED for s in statuses):
            return GRADED
        if all(s == COMPILE_ERROR for s in statuses):
            return COMPILE_ERROR
        return RUNTIME_ERROR

    def _cap(self, text: str) -> str:
        cap = self.policy.max_output_bytes
        data = text.encode("utf-8", errors="replace")
        return data[:cap].decode("utf-8", errors="replace")
