"""Interaction-log analytics: trace reconstruction, progression graphs, and
conversation metrics.

Everything here is a pure function of the event log: the same log yields
byte-identical tables and graphs. Traces are grouped per (student, problem),
with conversations concatenated across sessions in log order, so the unit of
analysis is the student's full history on a problem.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from . import events as ev
from .errors import PromptProgError

SCHEMA_VERSION = 1
TIER_ORDER = ("L7", "L9", "L10")
DEFAULT_BUCKET_EDGES = (1, 2, 3, 4, 5)

State = tuple[str, ...]
Edge = tuple[State, State]


@dataclass(frozen=True)
class CodeEvent:
    ref: tuple[int, int, int]  # (conversation, assistant position, block)
    correct: bool  # shadow grade had every function ok
    correct_functions: tuple[str, ...]
    executed: bool


@dataclass
class ConversationTrace:
    student_messages: list[tuple[int, int]] = field(default_factory=list)  # (position, chars)
    code_events: list[CodeEvent] = field(default_factory=list)
    solved_at_message: int | None = None


@dataclass
class StudentProblemTrace:
    student_id: str
    problem_id: str
    tier: str
    function_set: tuple[str, ...]
    conversations: list[ConversationTrace] = field(default_factory=list)
    solved: bool = False


@dataclass
class ProgressionGraph:
    problem_id: str
    student_count: int
    nodes: set[State] = field(default_factory=set)
    edges: dict[Edge, int] = field(default_factory=dict)
    skipped: int = 0  # traces without a successful conversation

    def __eq__(self, other):
        if not isinstance(other, ProgressionGraph):
            return NotImplemented
        return (
            self.problem_id == other.problem_id
            and self.student_count == other.student_count
            and self.nodes == other.nodes
            and self.edges == other.edges
        )


# --------------------------------------------------------------------------
# trace reconstruction


class _WorkingSession:
    def __init__(self, record: ev.EventRecord):
        p = record.payload
        self.student_id = p["student_id"]
        self.problem_id = p["problem_id"]
        self.tier = p["tier"]
        self.functions = tuple(p["functions"])
        self.conversations: list[ConversationTrace] = [ConversationTrace()]
        self.shadows: list[tuple[tuple[int, int, int], bool, tuple[str, ...]]] = []
        self.executed: set[tuple[int, int, int]] = set()
        self.solved = False

    def conversation(self, index: int) -> ConversationTrace:
        while len(self.conversations) <= index:
            self.conversations.append(ConversationTrace())
        return self.conversations[index]


def _ref_tuple(raw: dict) -> tuple[int, int, int]:
    return (raw["conversation_index"], raw["message_position"], raw["block_index"])


def reconstruct_traces(
    records: Iterable[ev.EventRecord], warnings: list[str] | None = None
) -> list[StudentProblemTrace]:
    """One trace per (student, problem); orphan references become warnings."""
    sessions: dict[str, _WorkingSession] = {}
    order: list[str] = []
    for rec in records:
        kind, payload = rec.kind, rec.payload
        if kind == ev.SESSION_STARTED:
            try:
                sessions[rec.session_id] = _WorkingSession(rec)
            except KeyError as exc:
                raise ev.CorruptLog(rec.seq, f"session_started missing {exc}") from exc
            order.append(rec.session_id)
            continue
        ws = sessions.get(rec.session_id)
        if ws is None:
            if warnings is not None:
                warnings.append(f"seq {rec.seq}: event for unknown session {rec.session_id}")
            continue
        try:
            if kind == ev.MESSAGE_POSTED:
                conv = ws.conversation(payload["conversation_index"])
                conv.student_messages.append((payload["position"], payload["char_length"]))
            elif kind == ev.SHADOW_GRADE:
                ref = _ref_tuple(payload["message_ref"])
                per_fn = payload.get("per_function", {})
                correct_fns = tuple(sorted(fn for fn, r in per_fn.items() if r.get("ok")))
                ws.shadows.append((ref, bool(payload.get("all_ok")), correct_fns))
            elif kind == ev.RUN_REQUESTED:
                ws.executed.add(_ref_tuple(payload["message_ref"]))
            elif kind == ev.CONVERSATION_RESET:
                ws.conversation(payload["new_index"])
            elif kind == ev.PROBLEM_SOLVED:
                ws.solved = True
        except (KeyError, TypeError) as exc:
            raise ev.CorruptLog(rec.seq, f"{kind} payload: {exc}") from exc

    # attach shadow grades and executed flags to conversations
    for sid in order:
        ws = sessions[sid]
        matched: set[tuple[int, int, int]] = set()
        for ref, all_ok, correct_fns in ws.shadows:
            conv = ws.conversation(ref[0])
            conv.code_events.append(
                CodeEvent(ref, all_ok, correct_fns, executed=ref in ws.executed)
            )
            matched.add(ref)
        if warnings is not None:
            for ref in sorted(ws.executed - matched):
                warnings.append(f"session {sid}: run_requested for ungraded block {ref}")

    # merge sessions per (student, problem) in first-seen order
    traces: dict[tuple[str, str], StudentProblemTrace] = {}
    for sid in order:
        ws = sessions[sid]
        key = (ws.student_id, ws.problem_id)
        trace = traces.get(key)
        if trace is None:
            trace = StudentProblemTrace(
                student_id=ws.student_id,
                problem_id=ws.problem_id,
                tier=ws.tier,
                function_set=tuple(sorted(ws.functions)),
            )
            traces[key] = trace
        trace.conversations.extend(ws.conversations)
        trace.solved = trace.solved or ws.solved

    for trace in traces.values():
        full = set(trace.function_set)
        for conv in trace.conversations:
            cumulative: set[str] = set()
            for event in conv.code_events:
                cumulative |= set(event.correct_functions)
                if full and cumulative >= full:
                    conv.solved_at_message = event.ref[1]
                    break
    return [traces[k] for k in sorted(traces)]


def load_traces(path: str | Path, warnings: list[str] | None = None) -> list[StudentProblemTrace]:
    return reconstruct_traces(ev.read_log(path, warnings), warnings)


def first_successful_conversation(trace: StudentProblemTrace) -> ConversationTrace | None:
    """Lowest-index conversation whose cumulative correct set reaches the
    full function set."""
    for conv in trace.conversations:
        if conv.solved_at_message is not None:
            return conv
    return None


# --------------------------------------------------------------------------
# progression graphs


def build_progression_graph(
    traces: Iterable[StudentProblemTrace], problem_id: str
) -> ProgressionGraph:
    """Walk each student's first successful conversation, recording an edge
    whenever the cumulative correct set strictly grows. Each student counts
    at most once per distinct edge; weights therefore count students."""
    graph = ProgressionGraph(problem_id=problem_id, student_count=0)
    for trace in traces:
        if trace.problem_id != problem_id:
            continue
        conv = first_successful_conversation(trace)
        if conv is None:
            graph.skipped += 1
            continue
        graph.student_count += 1
        state: set[str] = set()
        contributed: set[Edge] = set()
        for event in conv.code_events:
            grown = state | set(event.correct_functions)
            if grown > state:
                contributed.add((tuple(sorted(state)), tuple(sorted(grown))))
                state = grown
            if state >= set(trace.function_set):
                break
        for edge in contributed:
            graph.edges[edge] = graph.edges.get(edge, 0) + 1
    for src, dst in graph.edges:
        graph.nodes.add(src)
        graph.nodes.add(dst)
    return graph


def filter_top_edges(graph: ProgressionGraph, k: int = 15) -> ProgressionGraph:
    """Keep the k heaviest edges; ties break by (weight desc, from, to)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ranked = sorted(graph.edges.items(), key=lambda item: (-item[1], item[0][0], item[0][1]))
    kept = dict(ranked[:k])
    out = ProgressionGraph(
        problem_id=graph.problem_id,
        student_count=graph.student_count,
        edges=kept,
        skipped=graph.skipped,
    )
    for src, dst in kept:
        out.nodes.add(src)
        out.nodes.add(dst)
    return out


def state_label(state: State) -> str:
    return "{" + ",".join(state) + "}"


def export_graph(graph: ProgressionGraph, format: str = "dot") -> bytes:
    if format == "structured":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "problem_id": graph.problem_id,
            "student_count": graph.student_count,
            "nodes": [list(n) for n in sorted(graph.nodes, key=lambda s: (len(s), s))],
            "edges": [
                {"from": list(src), "to": list(dst), "weight": w}
                for (src, dst), w in sorted(graph.edges.items())
            ],
        }
        return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
    if format != "dot":
        raise ValueError(f"unknown graph format {format!r}")
    weights = list(graph.edges.values())
    wmin, wmax = (min(weights), max(weights)) if weights else (0, 0)

    def penwidth(w: int) -> str:
        if wmax == wmin:
            return "2.50"
        return f"{1.0 + 3.0 * (w - wmin) / (wmax - wmin):.2f}"

    lines = [f"// schema_version={SCHEMA_VERSION}", "digraph progression {", "  rankdir=LR;"]
    lines.append(f'  label="{graph.problem_id} ({graph.student_count} students)";')
    for node in sorted(graph.nodes, key=lambda s: (len(s), s)):
        lines.append(f'  "{state_label(node)}" [shape=box];')
    for (src, dst), w in sorted(graph.edges.items()):
        lines.append(
            f'  "{state_label(src)}" -> "{state_label(dst)}" '
            f'[label="{w}", penwidth="{penwidth(w)}"];'
        )
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def import_graph(data: bytes) -> ProgressionGraph:
    doc = json.loads(data.decode("utf-8"))
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise PromptProgError(f"unsupported schema_version {doc.get('schema_version')!r}")
    graph = ProgressionGraph(problem_id=doc["problem_id"], student_count=doc["student_count"])
    graph.nodes = {tuple(n) for n in doc["nodes"]}
    for e in doc["edges"]:
        graph.edges[(tuple(e["from"]), tuple(e["to"]))] = e["weight"]
    return graph


# --------------------------------------------------------------------------
# metric tables


@dataclass
class MetricTable:
    name: str
    columns: list[str]
    rows: list[list]
    notes: list[str] = field(default_factory=list)

    def to_structured(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "columns": list(self.columns),
            "rows": [list(r) for r in self.rows],
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_structured(), indent=2) + "\n"

    def to_csv(self) -> str:
        def cell(v) -> str:
            if v is None:
                return ""
            return str(v)

        lines = [f"# schema_version={SCHEMA_VERSION}", ",".join(self.columns)]
        lines.extend(",".join(cell(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"


def _tiers_present(traces: list[StudentProblemTrace]) -> list[str]:
    present = {t.tier for t in traces}
    return [tier for tier in TIER_ORDER if tier in present]


def _bucketize(edges: tuple[int, ...]) -> list[tuple[str, int | None]]:
    """(label, upper_bound) pairs; the final pair is the overflow bucket."""
    if list(edges) != sorted(set(edges)) or not edges:
        raise ValueError("bucket edges must be strictly increasing and non-empty")
    buckets: list[tuple[str, int | None]] = []
    lo = 1
    for edge in edges:
        label = str(edge) if lo >= edge else f"{lo}-{edge}"
        buckets.append((label, edge))
        lo = edge + 1
    buckets.append((f">{edges[-1]}", None))
    return buckets


def length_distribution(
    traces: list[StudentProblemTrace], bucket_edges: tuple[int, ...] = DEFAULT_BUCKET_EDGES
) -> MetricTable:
    """Per tier: how many student messages the first successful conversation
    took, binned; fractions are over solving students in the tier."""
    buckets = _bucketize(tuple(bucket_edges))
    rows: list[list] = []
    notes: list[str] = []
    for tier in _tiers_present(traces):
        solved_at: list[int] = []
        for t in traces:
            if t.tier != tier:
                continue
            conv = first_successful_conversation(t)
            if conv is not None:
                solved_at.append(conv.solved_at_message)
        counts = [0] * len(buckets)
        for v in solved_at:
            for i, (_, upper) in enumerate(buckets):
                if upper is None or v <= upper:
                    counts[i] += 1
                    break
        total = len(solved_at)
        if total == 0:
            notes.append(f"EmptyCohort:{tier}")
        for (label, _), count in zip(buckets, counts):
            fraction = count / total if total else 0.0
            rows.append([tier, label, count, fraction])
    return MetricTable(
        name="length_distribution",
        columns=["tier", "bucket", "students", "fraction"],
        rows=rows,
        notes=notes,
    )


def median_size_by_position(traces: list[StudentProblemTrace]) -> MetricTable:
    """Median character length of the k-th student message in first
    successful conversations; even-sized samples take the mean of the two
    central values."""
    rows: list[list] = []
    for tier in _tiers_present(traces):
        by_position: dict[int, list[int]] = {}
        for t in traces:
            if t.tier != tier:
                continue
            conv = first_successful_conversation(t)
            if conv is None:
                continue
            for position, chars in conv.student_messages:
                by_position.setdefault(position, []).append(chars)
        for position in sorted(by_position):
            sample = by_position[position]
            rows.append([tier, position, statistics.median(sample), len(sample)])
    return MetricTable(
        name="median_size_by_position",
        columns=["tier", "position", "median_chars", "students"],
        rows=rows,
    )


def execution_selectivity(traces: list[StudentProblemTrace]) -> MetricTable:
    """Execution fractions over every generated block in every conversation:
    overall, conditioned on the shadow grade being fully correct, and
    conditioned on it being wrong. Empty denominators yield null cells."""
    rows: list[list] = []
    for tier in _tiers_present(traces):
        all_events = [
            e
            for t in traces
            if t.tier == tier
            for conv in t.conversations
            for e in conv.code_events
        ]
        correct = [e for e in all_events if e.correct]
        wrong = [e for e in all_events if not e.correct]

        def frac(pool: list[CodeEvent]) -> float | None:
            if not pool:
                return None
            return sum(1 for e in pool if e.executed) / len(pool)

        rows.append(
            [
                tier,
                len(all_events),
                len(correct),
                len(wrong),
                frac(all_events),
                frac(correct),
                frac(wrong),
            ]
        )
    return MetricTable(
        name="execution_selectivity",
        columns=["tier", "blocks", "correct", "wrong", "overall", "given_correct", "given_wrong"],
        rows=rows,
    )


def descriptive_stats(traces: list[StudentProblemTrace]) -> MetricTable:
    """Per tier: mean conversations and mean total student messages per
    (student, problem), plus the solve rate among participating students."""
    rows: list[list] = []
    for tier in _tiers_present(traces):
        pool = [t for t in traces if t.tier == tier]
        conversations = [len(t.conversations) for t in pool]
        messages = [sum(len(c.student_messages) for c in t.conversations) for t in pool]
        solved = sum(1 for t in pool if t.solved)
        rows.append(
            [
                tier,
                len(pool),
                statistics.mean(conversations),
                statistics.mean(messages),
                solved / len(pool),
            ]
        )
    return MetricTable(
        name="descriptive_stats",
        columns=["tier", "students", "mean_conversations", "mean_messages", "solve_rate"],
        rows=rows,
    )
