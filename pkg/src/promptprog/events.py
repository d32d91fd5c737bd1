"""Append-only JSONL event log: the single source of truth.

Session state is rebuilt from this log at startup and analytics consume the
same file. Every mutation's events are appended (one JSON object per line)
and flushed to disk before the triggering request is acknowledged. All
events belonging to one mutation are written in a single write call so a
crash cannot interleave them with other sessions' events.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .errors import PromptProgError

SESSION_STARTED = "session_started"
MESSAGE_POSTED = "message_posted"
ASSISTANT_REPLIED = "assistant_replied"
CODE_GENERATED = "code_generated"
SHADOW_GRADE = "shadow_grade"
RUN_REQUESTED = "run_requested"
RUN_RESULT = "run_result"
CONVERSATION_RESET = "conversation_reset"
PROBLEM_SOLVED = "problem_solved"
PROVIDER_FAILURE = "provider_failure"

EVENT_KINDS = frozenset(
    {
        SESSION_STARTED,
        MESSAGE_POSTED,
        ASSISTANT_REPLIED,
        CODE_GENERATED,
        SHADOW_GRADE,
        RUN_REQUESTED,
        RUN_RESULT,
        CONVERSATION_RESET,
        PROBLEM_SOLVED,
        PROVIDER_FAILURE,
    }
)


class StorageFailure(PromptProgError):
    code = "STORAGE_FAILURE"


class CorruptLog(PromptProgError):
    code = "CORRUPT_LOG"

    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


@dataclass(frozen=True)
class EventRecord:
    seq: int
    ts: float
    session_id: str
    kind: str
    payload: dict

    def to_line(self) -> str:
        return json.dumps(
            {
                "seq": self.seq,
                "ts": self.ts,
                "session_id": self.session_id,
                "kind": self.kind,
                "payload": self.payload,
            },
            separators=(",", ":"),
            sort_keys=True,
        )


def parse_line(line: str, line_no: int) -> EventRecord:
    try:
        raw = json.loads(line)
        rec = EventRecord(
            seq=raw["seq"],
            ts=raw["ts"],
            session_id=raw["session_id"],
            kind=raw["kind"],
            payload=raw["payload"],
        )
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise CorruptLog(line_no, str(exc)) from exc
    if rec.kind not in EVENT_KINDS:
        raise CorruptLog(line_no, f"unknown kind {rec.kind!r}")
    return rec


def read_log(path: str | Path, warnings: list[str] | None = None) -> list[EventRecord]:
    """Read all events. A malformed final line (torn write after a crash) is
    dropped with a warning; malformed interior lines raise CorruptLog."""
    path = Path(path)
    if not path.exists():
        return []
    lines = path.read_text(errors="replace").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    records: list[EventRecord] = []
    last_seq = 0
    for i, line in enumerate(lines):
        try:
            rec = parse_line(line, i + 1)
            if rec.seq <= last_seq:
                raise CorruptLog(i + 1, f"seq {rec.seq} not increasing")
        except CorruptLog:
            if i == len(lines) - 1:
                if warnings is not None:
                    warnings.append(f"ignoring malformed trailing line {i + 1}")
                break
            raise
        last_seq = rec.seq
        records.append(rec)
    return records


class EventLog:
    """Single-writer append log; appends are serialized and fsynced."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        existing = read_log(self.path, warnings=[])
        self._seq = existing[-1].seq if existing else 0

    def append_batch(
        self, items: Iterable[tuple[float, str, str, dict]]
    ) -> list[EventRecord]:
        """Append (ts, session_id, kind, payload) tuples as one atomic write."""
        with self._lock:
            records = []
            for ts, session_id, kind, payload in items:
                if kind not in EVENT_KINDS:
                    raise ValueError(f"unknown event kind {kind!r}")
                self._seq += 1
                records.append(EventRecord(self._seq, ts, session_id, kind, payload))
            if not records:
                return []
            data = "".join(r.to_line() + "\n" for r in records)
            try:
                with open(self.path, "a", encoding="utf-8") as f:
                    f.write(data)
                    f.flush()
                    os.fsync(f.fileno())
            except OSError as exc:
                self._seq -= len(records)
                raise StorageFailure(str(exc)) from exc
            return records

    def read(self, session_id: str | None = None) -> list[EventRecord]:
        records = read_log(self.path, warnings=[])
        if session_id is None:
            return records
        return [r for r in records if r.session_id == session_id]


def iter_sessions(records: list[EventRecord]) -> Iterator[tuple[str, list[EventRecord]]]:
    """Group records by session, preserving first-seen order."""
    order: list[str] = []
    grouped: dict[str, list[EventRecord]] = {}
    for r in records:
        if r.session_id not in grouped:
            grouped[r.session_id] = []
            order.append(r.session_id)
        grouped[r.session_id].append(r)
    for sid in order:
        yield sid, grouped[sid]
