#!/usr/bin/env python3
"""Desk-scale cohort demo: replay a scripted classroom and print every
analytics artifact.

Eight synthetic students attack the password-validation problem along
different paths (everything at once, helpers first, hub-through-helpers),
with varied execution habits. The script drives the real platform end to
end (scripted provider, real compilation and shadow grading), then prints
the descriptive, length, message-size, and selectivity tables plus the
progression graph in DOT form.

    python3 scripts/demo_cohort.py [--keep]
"""

import argparse
import json
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from promptprog import analytics  # noqa: E402
from promptprog.config import load_config  # noqa: E402
from promptprog.core import Platform  # noqa: E402
from promptprog.providers import content_key  # noqa: E402

SOLUTION = (ROOT / "corpus" / "solutions" / "password-validation.c").read_text()

# controlled per-function correctness, derived from the reference solution
FULL = SOLUTION
HELPERS_DU = SOLUTION.replace("if (!is_digit && !is_lower && !is_upper)", "if (0)")  # breaks has_special
HELPERS_ALL = SOLUTION.replace("length >= 8", "length >= 99")  # breaks only is_valid_password


def fence(code: str) -> str:
    return "```c\n" + code + "\n```"


# (student, [(message, reply_code, run_after?)...])
SCENARIO = [
    ("ada", [("implement every function at once", FULL, True)]),
    ("ben", [("start with digit and upper checks", HELPERS_DU, False),
             ("now add the special check and the validator", FULL, True)]),
    ("cho", [("write the three helper checks", HELPERS_ALL, False),
             ("finish with is_valid_password", FULL, True)]),
    ("dee", [("digit and upper first", HELPERS_DU, True),
             ("add has_special", HELPERS_ALL, False),
             ("and the final validator", FULL, True)]),
    ("eli", [("one shot, all functions", FULL, True)]),
    ("fay", [("helpers first please", HELPERS_ALL, False),
             ("complete the validator", FULL, True)]),
    ("gus", [("try the full thing", HELPERS_DU, False),
             ("fix the special-character check", FULL, True)]),
    ("hal", [("give me everything", FULL, False)]),  # never presses Run
]


def build_workspace(root: Path) -> Path:
    fixture = []
    for _, turns in SCENARIO:
        for message, code, _ in turns:
            fixture.append(
                {
                    "problem_id": "password-validation",
                    "content_sha256": content_key(message),
                    "reply_text": "Here you go:\n" + fence(code),
                }
            )
    (root / "fixture.json").write_text(json.dumps(fixture, indent=2))
    config = {
        "corpus_path": str(ROOT / "corpus"),
        "log_path": str(root / "events.jsonl"),
        "provider": {"kind": "scripted", "fixture_path": str(root / "fixture.json")},
    }
    path = root / "config.json"
    path.write_text(json.dumps(config, indent=2))
    return path


def run_cohort(platform: Platform) -> None:
    for student, turns in SCENARIO:
        session = platform.start_session(student, "password-validation")
        for message, _, run in turns:
            platform.post_message(session.session_id, message)
            if run:
                platform.run_code(session.session_id)
        summary = platform.summary(session.session_id)
        print(
            f"  {student}: solved={summary['solved']} runs={summary['run_counter']} "
            f"messages={summary['limit']['used']}",
            file=sys.stderr,
        )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--keep", action="store_true", help="keep the workspace directory")
    args = parser.parse_args()

    workdir = Path(tempfile.mkdtemp(prefix="promptprog-demo-"))
    try:
        config_path = build_workspace(workdir)
        platform = Platform(load_config(config_path))
        print("replaying cohort (compiles every generated block)...", file=sys.stderr)
        run_cohort(platform)

        traces = analytics.reconstruct_traces(platform.events_snapshot())
        for table in (
            analytics.descriptive_stats(traces),
            analytics.length_distribution(traces),
            analytics.median_size_by_position(traces),
            analytics.execution_selectivity(traces),
        ):
            print(f"--- {table.name} ---")
            print(table.to_csv())

        graph = analytics.build_progression_graph(traces, "password-validation")
        print("--- progression (top 15 edges) ---")
        print(analytics.export_graph(analytics.filter_top_edges(graph, 15), "dot").decode())
        if args.keep:
            print(f"workspace kept at {workdir}", file=sys.stderr)
        return 0
    finally:
        if not args.keep:
            shutil.rmtree(workdir, ignore_errors=True)


if __name__ == "__main__":
    raise SystemExit(main())
