"""Platform core: binds corpus, dialogue, provider, grader, and event log.

All mutations follow the same discipline: mutate in memory, then append the
mutation's events as one atomic batch before acknowledging; a storage
failure rolls the in-memory state back so memory never diverges from the
log. Per-session operations are serialized with a lock; different sessions
proceed concurrently. State is rebuilt from the log at startup.
"""

from __future__ import annotations

import copy
import threading
import time
from dataclasses import dataclass
from typing import Callable

from . import dialogue, events as ev
from .blocks import CodeBlock, extract_code_blocks, with_refs
from .config import ServiceConfig, build_provider
from .corpus import Problem, UnknownProblem, load_corpus, render_specification
from .dialogue import Conversation, Message, Session, UnknownSession
from .errors import PromptProgError
from .providers import ASSISTANT, STUDENT, ChatProvider, ProviderFailure
from .runner import ExecutionReport, Grader
from .sandbox import check_toolchain


@dataclass
class PostResult:
    assistant: Message
    limit: dict
    shadow: Callable[[], ExecutionReport | None] | None  # pending shadow grade


class Platform:
    def __init__(self, config: ServiceConfig, provider: ChatProvider | None = None,
                 grader: Grader | None = None):
        self.config = config
        self.problems: dict[str, Problem] = {p.id: p for p in load_corpus(config.corpus_path)}
        check_toolchain({p.language for p in self.problems.values()}, config.toolchain)
        self.provider = provider if provider is not None else build_provider(config.provider)
        self.grader = grader if grader is not None else Grader(
            toolchain=config.toolchain, policy=config.sandbox, mode=config.grading_mode
        )
        self.log = ev.EventLog(config.log_path)
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._idempotent: dict[tuple[str, str, str], object] = {}
        self._rebuild()

    # ------------------------------------------------------------------ setup

    def _rebuild(self) -> None:
        for sid, records in ev.iter_sessions(self.log.read()):
            session = replay_session(records)
            if session is not None:
                self._sessions[sid] = session

    def _lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def _session(self, session_id: str) -> Session:
        session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSession(session_id)
        return session

    def problem_for(self, session: Session) -> Problem:
        problem = self.problems.get(session.problem_id)
        if problem is None:
            raise UnknownProblem(session.problem_id)
        return problem

    # -------------------------------------------------------------- operations

    def start_session(self, student_id: str, problem_id: str) -> Session:
        problem = self.problems.get(problem_id)
        if problem is None:
            raise UnknownProblem(problem_id)
        now = time.time()
        session = dialogue.new_session(student_id, problem_id, now=now)
        self.log.append_batch(
            [
                (
                    now,
                    session.session_id,
                    ev.SESSION_STARTED,
                    {
                        "student_id": student_id,
                        "problem_id": problem_id,
                        "tier": problem.tier,
                        "message_limit": problem.message_limit,
                        "functions": list(problem.function_names),
                    },
                )
            ]
        )
        with self._registry_lock:
            self._sessions[session.session_id] = session
            self._locks.setdefault(session.session_id, threading.Lock())
        return session

    def post_message(
        self, session_id: str, content: str, defer_shadow: bool = False
    ) -> PostResult:
        """Appends the student turn, calls the provider with the full active
        history, appends the assistant turn, and logs the whole exchange.
        A provider failure rolls the student turn back and is itself logged.

        The returned shadow callable grades the reply's last code block; it
        runs inline unless defer_shadow is set (the HTTP layer defers it so
        reply latency excludes grading)."""
        session = self._session(session_id)
        problem = self.problem_for(session)
        with self._lock(session_id):
            snapshot = copy.deepcopy(session)
            now = time.time()
            dialogue.append_student_message(session, problem, content, now)
            request = dialogue.provider_request(problem, session)
            try:
                reply = self.provider.chat(request)
            except ProviderFailure as exc:
                dialogue.rollback_student_message(session)
                self.log.append_batch(
                    [
                        (
                            time.time(),
                            session_id,
                            ev.PROVIDER_FAILURE,
                            {
                                "conversation_index": session.active.index,
                                "attempted_content": content,
                                "detail": exc.detail,
                            },
                        )
                    ]
                )
                raise
            assistant = dialogue.append_assistant_message(session, reply.content, time.time())
            conv = session.active
            batch = [
                (
                    now,
                    session_id,
                    ev.MESSAGE_POSTED,
                    {
                        "conversation_index": conv.index,
                        "position": conv.student_count,
                        "content": content,
                        "char_length": len(content),
                    },
                ),
                (
                    assistant.timestamp,
                    session_id,
                    ev.ASSISTANT_REPLIED,
                    {
                        "conversation_index": conv.index,
                        "position": assistant.position,
                        "content": assistant.content,
                        "char_length": assistant.char_length,
                        "code_block_count": len(assistant.code_blocks),
                        "provider_meta": reply.provider_meta,
                    },
                ),
            ]
            for block in assistant.code_blocks:
                batch.append(
                    (
                        assistant.timestamp,
                        session_id,
                        ev.CODE_GENERATED,
                        {
                            "message_ref": block.ref.to_payload(),
                            "language_hint": block.language_hint,
                            "char_length": len(block.text),
                        },
                    )
                )
            self._append_or_rollback(session_id, snapshot, batch)
            limit = dialogue.limit_state(session, problem)
            shadow = None
            if assistant.code_blocks:
                shadow = self._shadow_task(session_id, problem, assistant.code_blocks[-1])
        if shadow is not None and not defer_shadow:
            shadow()  # lock released above; grading re-acquires it
            shadow = None
        return PostResult(assistant, limit, shadow)

    def _shadow_task(
        self, session_id: str, problem: Problem, block: CodeBlock
    ) -> Callable[[], ExecutionReport | None]:
        """Grades every generated block behind the student's back; failures
        are recorded in the event, never surfaced."""

        def task() -> ExecutionReport | None:
            with self._lock(session_id):
                payload: dict = {"message_ref": block.ref.to_payload()}
                report = None
                try:
                    report = self.grader.shadow_grade(problem, block)
                    payload.update(
                        {
                            "status": report.status,
                            "all_ok": report.all_ok,
                            "per_function": {
                                k: v.to_payload() for k, v in sorted(report.per_function.items())
                            },
                            "duration_ms": report.duration_ms,
                        }
                    )
                except PromptProgError as exc:
                    payload["error"] = f"{exc.code}: {exc.detail}"
                self.log.append_batch([(time.time(), session_id, ev.SHADOW_GRADE, payload)])
                return report

        return task

    def run_code(self, session_id: str, idempotency_key: str | None = None) -> ExecutionReport:
        session = self._session(session_id)
        problem = self.problem_for(session)
        with self._lock(session_id):
            if idempotency_key is not None:
                cached = self._idempotent.get((session_id, "run", idempotency_key))
                if cached is not None:
                    return cached  # type: ignore[return-value]
            snapshot = copy.deepcopy(session)
            was_solved = session.solved
            block, report = self.grader.run_code(problem, session)
            now = time.time()
            batch = [
                (
                    now,
                    session_id,
                    ev.RUN_REQUESTED,
                    {"run_index": report.run_index, "message_ref": block.ref.to_payload()},
                ),
                (
                    now,
                    session_id,
                    ev.RUN_RESULT,
                    {"run_index": report.run_index, "message_ref": block.ref.to_payload(),
                     **report.to_payload()},
                ),
            ]
            if report.all_ok and not was_solved:
                batch.append(
                    (
                        now,
                        session_id,
                        ev.PROBLEM_SOLVED,
                        {
                            "run_index": report.run_index,
                            "conversation_index": session.active.index,
                        },
                    )
                )
            self._append_or_rollback(session_id, snapshot, batch)
            if idempotency_key is not None:
                self._idempotent[(session_id, "run", idempotency_key)] = report
            return report

    def reset_conversation(self, session_id: str, idempotency_key: str | None = None) -> Conversation:
        session = self._session(session_id)
        problem = self.problem_for(session)
        with self._lock(session_id):
            if idempotency_key is not None:
                cached = self._idempotent.get((session_id, "reset", idempotency_key))
                if cached is not None:
                    return cached  # type: ignore[return-value]
            snapshot = copy.deepcopy(session)
            closed = session.active
            fresh = dialogue.reset_conversation(session, problem)
            self._append_or_rollback(
                session_id,
                snapshot,
                [
                    (
                        time.time(),
                        session_id,
                        ev.CONVERSATION_RESET,
                        {
                            "closed_index": closed.index,
                            "new_index": fresh.index,
                            "closed_by": closed.closed_by,
                        },
                    )
                ],
            )
            if idempotency_key is not None:
                self._idempotent[(session_id, "reset", idempotency_key)] = fresh
            return fresh

    def _append_or_rollback(self, session_id: str, snapshot: Session, batch: list) -> None:
        try:
            self.log.append_batch(batch)
        except ev.StorageFailure:
            self._sessions[session_id] = snapshot
            raise

    # ----------------------------------------------------------------- queries

    def list_problems(self) -> list[dict]:
        return [
            {"id": p.id, "title": p.title, "tier": p.tier, "kind": p.kind}
            for p in sorted(
                self.problems.values(), key=lambda p: (("L7", "L9", "L10").index(p.tier), p.id)
            )
        ]

    def problem_detail(self, problem_id: str) -> dict:
        problem = self.problems.get(problem_id)
        if problem is None:
            raise UnknownProblem(problem_id)
        return {
            "id": problem.id,
            "title": problem.title,
            "tier": problem.tier,
            "language": problem.language,
            "kind": problem.kind,
            "message_limit": problem.message_limit,
            "specification": render_specification(problem),
        }

    def summary(self, session_id: str) -> dict:
        session = self._session(session_id)
        problem = self.problem_for(session)
        active = session.active
        return {
            "session_id": session.session_id,
            "student_id": session.student_id,
            "problem_id": session.problem_id,
            "solved": session.solved,
            "run_counter": session.run_counter,
            "conversation_index": active.index,
            "conversation_count": len(session.conversations),
            "limit": dialogue.limit_state(session, problem),
            "messages": [
                {
                    "role": m.role,
                    "content": m.content,
                    "position": m.position,
                    "code_block_count": len(m.code_blocks),
                }
                for m in active.messages
            ],
        }

    def events_snapshot(self) -> list[ev.EventRecord]:
        return self.log.read()

    def get_session(self, session_id: str) -> Session:
        return self._session(session_id)


# --------------------------------------------------------------------------
# replay: rebuilding session state from the log


def trim_incomplete_tail(records: list[ev.EventRecord]) -> list[ev.EventRecord]:
    """Drop a trailing half-written mutation (e.g. a student turn whose
    assistant reply never made it to disk) so replay lands on a state the
    platform actually acknowledged."""
    open_since: int | None = None
    solved = False
    for i, r in enumerate(records):
        kind = r.kind
        if kind == ev.MESSAGE_POSTED:
            open_since = i
        elif kind == ev.ASSISTANT_REPLIED:
            open_since = None
        elif kind == ev.RUN_REQUESTED:
            open_since = i
        elif kind == ev.RUN_RESULT:
            if not (r.payload.get("all_ok") and not solved):
                open_since = None
        elif kind == ev.PROBLEM_SOLVED:
            solved = True
            open_since = None
    return records if open_since is None else records[:open_since]


def replay_session(records: list[ev.EventRecord]) -> Session | None:
    records = trim_incomplete_tail(records)
    if not records or records[0].kind != ev.SESSION_STARTED:
        return None
    head = records[0]
    session = Session(
        session_id=head.session_id,
        student_id=head.payload["student_id"],
        problem_id=head.payload["problem_id"],
        conversations=[Conversation(index=0)],
        created_at=head.ts,
    )
    for r in records[1:]:
        payload = r.payload
        conv = session.active
        if r.kind == ev.MESSAGE_POSTED:
            conv.messages.append(
                Message(
                    role=STUDENT,
                    content=payload["content"],
                    position=payload["position"],
                    timestamp=r.ts,
                )
            )
        elif r.kind == ev.ASSISTANT_REPLIED:
            position = payload["position"]
            conv.messages.append(
                Message(
                    role=ASSISTANT,
                    content=payload["content"],
                    position=position,
                    timestamp=r.ts,
                    code_blocks=with_refs(
                        extract_code_blocks(payload["content"]), conv.index, position
                    ),
                )
            )
        elif r.kind == ev.CONVERSATION_RESET:
            conv.closed_by = payload.get("closed_by", dialogue.CLOSED_RESET)
            session.conversations.append(Conversation(index=payload["new_index"]))
        elif r.kind == ev.RUN_REQUESTED:
            session.run_counter += 1
        elif r.kind == ev.PROBLEM_SOLVED:
            session.solved = True
    return session


def session_fingerprint(session: Session) -> tuple:
    """Timestamp-free structural digest used to compare live and replayed
    states."""
    return (
        session.session_id,
        session.student_id,
        session.problem_id,
        session.run_counter,
        session.solved,
        tuple(
            (
                c.index,
                c.closed_by,
                tuple((m.role, m.position, m.content, len(m.code_blocks)) for m in c.messages),
            )
            for c in session.conversations
        ),
    )
