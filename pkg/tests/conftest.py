"""Shared fixtures: the shipped corpus, scripted platforms, and a grader
stub that reads correctness directives out of code blocks so dialogue and
analytics tests do not pay for compilation."""

import json
import re
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from promptprog.blocks import CodeBlock
from promptprog.config import load_config
from promptprog.core import Platform
from promptprog.corpus import load_corpus
from promptprog.runner import COMPILE_ERROR, GRADED, ExecutionReport, FunctionResult, Grader

REPO = Path(__file__).resolve().parent.parent
CORPUS_DIR = REPO / "corpus"


@pytest.fixture(scope="session")
def problems():
    return {p.id: p for p in load_corpus(CORPUS_DIR)}


@pytest.fixture(scope="session")
def grader():
    return Grader()


def solution_text(problem_id: str) -> str:
    return (CORPUS_DIR / "solutions" / f"{problem_id}.c").read_text()


def fenced(code: str, lang: str = "c") -> str:
    return f"```{lang}\n{code}\n```"


class DirectiveGrader(Grader):
    """Grades by directive instead of compiling: a block containing
    `OK:f1,f2` marks exactly those functions correct, `OK:*` all of them,
    `OK:-` none. Keeps orchestration tests fast and deterministic."""

    def __init__(self):
        super().__init__()
        self.calls = 0

    def grade_block(self, problem, block, visible):
        self.calls += 1
        text = block.text if isinstance(block, CodeBlock) else block
        m = re.search(r"OK:([\w,*-]+)", text)
        spec = m.group(1) if m else "-"
        names = set(problem.function_names) if spec == "*" else set(spec.split(",")) - {"-"}
        per_function = {}
        for fn in problem.function_names:
            total = len(next(f for f in problem.functions if f.name == fn).hidden_tests)
            ok = fn in names
            per_function[fn] = FunctionResult(total if ok else 0, total, ok)
        status = GRADED if spec != "compile_error" else COMPILE_ERROR
        return ExecutionReport(
            status=status,
            per_function=per_function,
            diagnostics="",
            visible_to_student=visible,
            duration_ms=1,
        )


class QueueProvider:
    """Replies from a per-(problem, session-agnostic) queue; falls back to a
    default reply when the queue empties. Records every request."""

    def __init__(self, replies=None, default="Try studying the examples again."):
        self.replies = list(replies or [])
        self.default = default
        self.requests = []

    def chat(self, req):
        from promptprog.providers import ProviderReply

        self.requests.append(req)
        content = self.replies.pop(0) if self.replies else self.default
        if isinstance(content, Exception):
            raise content
        return ProviderReply(content=content, provider_meta="queue")


def write_platform_config(
    tmp_path: Path,
    fixture_entries=None,
    corpus_path: Path = CORPUS_DIR,
    grading_mode: str = "single_driver",
    extra: dict | None = None,
) -> Path:
    (tmp_path / "fixture.json").write_text(json.dumps(fixture_entries or []))
    cfg = {
        "corpus_path": str(corpus_path),
        "log_path": str(tmp_path / "events.jsonl"),
        "provider": {"kind": "scripted", "fixture_path": str(tmp_path / "fixture.json")},
        "grading_mode": grading_mode,
    }
    cfg.update(extra or {})
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


@pytest.fixture
def make_platform(tmp_path):
    """Factory: make_platform(fixture_entries=None, provider=None, grader=None)."""

    count = 0

    def factory(fixture_entries=None, provider=None, grader=None, grading_mode="single_driver"):
        nonlocal count
        count += 1
        subdir = tmp_path / f"platform{count}"
        subdir.mkdir()
        config_path = write_platform_config(subdir, fixture_entries, grading_mode=grading_mode)
        return Platform(load_config(config_path), provider=provider, grader=grader)

    return factory
