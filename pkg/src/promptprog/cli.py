"""Administrative command line: serve, validate, analyze, replay."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import analytics
from .blocks import CodeBlock
from .config import load_config
from .core import Platform
from .corpus import MalformedDefinition, problem_from_dict, validate_problem
from .errors import PromptProgError
from .events import read_log
from .runner import Grader


@click.group()
def main():
    """Prompt-programming platform administration."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(), help="Service config file")
def serve(config_path):
    """Run the HTTP service."""
    from .service import serve as run_service

    try:
        cfg = load_config(config_path)
        run_service(cfg)
    except PromptProgError as exc:
        click.echo(f"error: {exc.code}: {exc.detail}", err=True)
        raise SystemExit(1)


def _solution_path(corpus_dir: Path, problem) -> Path | None:
    ext = "c" if problem.language == "C" else "py"
    candidate = corpus_dir / "solutions" / f"{problem.id}.{ext}"
    return candidate if candidate.exists() else None


@main.command()
@click.argument("corpus_dir", type=click.Path())
@click.option("--check-solutions", is_flag=True, help="Compile and grade each reference solution")
def validate(corpus_dir, check_solutions):
    """Validate every problem file; optionally grade reference solutions."""
    root = Path(corpus_dir)
    if not root.is_dir():
        click.echo(f"error: corpus directory not found: {root}", err=True)
        raise SystemExit(1)
    grader = Grader() if check_solutions else None
    failed = False
    seen_ids: set[str] = set()
    for file in sorted(root.glob("*.json")):
        try:
            problem = problem_from_dict(json.loads(file.read_text()), source=file.name)
        except (json.JSONDecodeError, MalformedDefinition) as exc:
            click.echo(f"FAIL {file.name}: {exc}")
            failed = True
            continue
        if problem.id in seen_ids:
            click.echo(f"FAIL {file.name}: duplicate problem id {problem.id!r}")
            failed = True
            continue
        seen_ids.add(problem.id)
        issues = validate_problem(problem)
        if issues:
            click.echo(f"FAIL {problem.id}: " + "; ".join(str(i) for i in issues))
            failed = True
            continue
        if grader is not None:
            solution = _solution_path(root, problem)
            if solution is None:
                click.echo(f"FAIL {problem.id}: no reference solution in solutions/")
                failed = True
                continue
            report = grader.grade_block(problem, CodeBlock(text=solution.read_text()), visible=True)
            if not report.all_ok:
                bad = sorted(fn for fn, r in report.per_function.items() if not r.ok)
                click.echo(f"FAIL {problem.id}: reference solution failed: {', '.join(bad)}")
                failed = True
                continue
        click.echo(f"OK {problem.id}")
    raise SystemExit(1 if failed else 0)


REPORTS = ("progression", "lengths", "sizes", "selectivity", "descriptive")


@main.command()
@click.argument("log_path", type=click.Path())
@click.option("--report", type=click.Choice(REPORTS), required=True)
@click.option("--problem", "problem_id", default=None, help="Problem id (progression only)")
@click.option("--top-edges", default=15, show_default=True)
@click.option("--buckets", default="1,2,3,4,5", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["structured", "csv", "dot"]), default=None)
@click.option("--out", "out_path", type=click.Path(), default=None)
def analyze(log_path, report, problem_id, top_edges, buckets, fmt, out_path):
    """Compute a metric table or progression graph from an event log."""
    try:
        warnings: list[str] = []
        records = read_log(log_path, warnings)
        traces = analytics.reconstruct_traces(records, warnings)
        for w in warnings:
            click.echo(f"warning: {w}", err=True)
        if not traces:
            click.echo("warning: event log yields no traces", err=True)
        if report == "progression":
            if not problem_id:
                click.echo("error: --problem is required for the progression report", err=True)
                raise SystemExit(2)
            if fmt == "csv":
                click.echo("error: progression supports dot or structured output", err=True)
                raise SystemExit(2)
            graph = analytics.build_progression_graph(traces, problem_id)
            data = analytics.export_graph(
                analytics.filter_top_edges(graph, top_edges), fmt or "dot"
            )
        else:
            if fmt == "dot":
                click.echo("error: dot output only applies to progression", err=True)
                raise SystemExit(2)
            if report == "lengths":
                edges = tuple(int(b) for b in buckets.split(","))
                table = analytics.length_distribution(traces, edges)
            elif report == "sizes":
                table = analytics.median_size_by_position(traces)
            elif report == "selectivity":
                table = analytics.execution_selectivity(traces)
            else:
                table = analytics.descriptive_stats(traces)
            data = (table.to_csv() if fmt == "csv" else table.to_json()).encode("utf-8")
    except PromptProgError as exc:
        click.echo(f"error: {exc.code}: {exc.detail}", err=True)
        raise SystemExit(1)
    if out_path:
        Path(out_path).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _load_script(path: Path) -> list[dict]:
    raw = json.loads(path.read_text())
    if isinstance(raw, dict) and "students" in raw:
        entries = raw["students"]
    elif isinstance(raw, dict):
        entries = [raw]
    elif isinstance(raw, list):
        entries = raw
    else:
        raise PromptProgError("replay script must be an object or a list")
    for i, e in enumerate(entries):
        unknown = set(e) - {"student_id", "problem_id", "messages", "run_after", "reset_after"}
        if unknown:
            raise PromptProgError(f"script entry {i}: unknown keys {sorted(unknown)}")
        if "problem_id" not in e or "messages" not in e:
            raise PromptProgError(f"script entry {i}: needs problem_id and messages")
        n = len(e["messages"])
        for key in ("run_after", "reset_after"):
            for idx in e.get(key, []):
                if not isinstance(idx, int) or not 1 <= idx <= n:
                    raise PromptProgError(f"script entry {i}: {key} index {idx} out of range")
    return entries


@main.command()
@click.argument("script_path", type=click.Path())
@click.option("--config", "config_path", required=True, type=click.Path())
def replay(script_path, config_path):
    """Drive the full in-process stack from a scripted session file."""
    try:
        entries = _load_script(Path(script_path))
        platform = Platform(load_config(config_path))
    except (PromptProgError, json.JSONDecodeError) as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(1)
    for n, entry in enumerate(entries):
        student = entry.get("student_id", f"replay-{n}")
        run_after = set(entry.get("run_after", []))
        reset_after = set(entry.get("reset_after", []))
        at_message = 0
        try:
            session = platform.start_session(student, entry["problem_id"])
            for i, message in enumerate(entry["messages"], start=1):
                at_message = i
                platform.post_message(session.session_id, message)
                if i in run_after:
                    platform.run_code(session.session_id)
                if i in reset_after:
                    platform.reset_conversation(session.session_id)
        except PromptProgError as exc:
            click.echo(
                f"error: {exc.code} at message {at_message} (student={student})", err=True
            )
            raise SystemExit(1)
        summary = platform.summary(session.session_id)
        click.echo(
            json.dumps(
                {
                    "student_id": student,
                    "problem_id": entry["problem_id"],
                    "solved": summary["solved"],
                    "run_counter": summary["run_counter"],
                    "conversations": summary["conversation_count"],
                },
                sort_keys=True,
            )
        )
    raise SystemExit(0)


if __name__ == "__main__":
    main()
