import json

import pytest

from conftest import CORPUS_DIR
from promptprog.corpus import (
    DuplicateProblemId,
    InvariantViolation,
    MalformedDefinition,
    format_example_row,
    load_corpus,
    problem_from_dict,
    problem_to_dict,
    render_specification,
    validate_problem,
)


def minimal_problem(**overrides) -> dict:
    doc = {
        "id": "demo",
        "title": "Demo",
        "tier": "L7",
        "language": "C",
        "description": "Count things.",
        "functions": [
            {
                "name": "count",
                "signature": "int count(int *arr, int n)",
                "visible_examples": [{"inputs": [[1, 2], 2], "expected": 2}],
                "hidden_tests": [{"inputs": [[], 0], "expected": 0, "comparison": "exact"}],
            }
        ],
    }
    doc.update(overrides)
    return doc


class TestLoadCorpus:
    def test_empty_directory(self, tmp_path):
        assert load_corpus(tmp_path) == []

    def test_shipped_corpus_has_nine_problems_three_per_tier(self):
        problems = load_corpus(CORPUS_DIR)
        assert len(problems) == 9
        by_tier = {}
        for p in problems:
            by_tier.setdefault(p.tier, []).append(p.id)
        assert {t: len(ids) for t, ids in by_tier.items()} == {"L7": 3, "L9": 3, "L10": 3}
        assert sorted(by_tier["L7"]) == ["count-negatives", "last-zero-index", "sum-evens"]
        assert sorted(by_tier["L9"]) == ["binary-add", "matrix-propagate-ones", "subarray-sort"]
        assert sorted(by_tier["L10"]) == [
            "balanced-parentheses",
            "password-validation",
            "robot-navigation",
        ]

    def test_order_is_tier_then_id(self):
        problems = load_corpus(CORPUS_DIR)
        keys = [(("L7", "L9", "L10").index(p.tier), p.id) for p in problems]
        assert keys == sorted(keys)

    def test_tier_message_limits(self, problems):
        assert all(problems[p].message_limit == 5 for p in problems if problems[p].tier == "L7")
        assert all(
            problems[p].message_limit == 20
            for p in problems
            if problems[p].tier in ("L9", "L10")
        )

    def test_duplicate_function_name_rejected(self, tmp_path):
        doc = minimal_problem()
        doc["functions"].append(doc["functions"][0])
        (tmp_path / "demo.json").write_text(json.dumps(doc))
        with pytest.raises(InvariantViolation, match="DuplicateFunctionName"):
            load_corpus(tmp_path)

    def test_duplicate_problem_id_rejected(self, tmp_path):
        (tmp_path / "a.json").write_text(json.dumps(minimal_problem()))
        (tmp_path / "b.json").write_text(json.dumps(minimal_problem()))
        with pytest.raises(DuplicateProblemId):
            load_corpus(tmp_path)

    def test_unknown_field_rejected(self, tmp_path):
        (tmp_path / "a.json").write_text(json.dumps(minimal_problem(reference_solution="x")))
        with pytest.raises(MalformedDefinition, match="unknown keys"):
            load_corpus(tmp_path)

    def test_invalid_json_names_file(self, tmp_path):
        (tmp_path / "broken.json").write_text("{nope")
        with pytest.raises(MalformedDefinition, match="broken.json"):
            load_corpus(tmp_path)

    def test_message_limit_defaults_by_tier(self):
        doc = minimal_problem()
        assert problem_from_dict(doc).message_limit == 5
        doc["tier"] = "L9"
        assert problem_from_dict(doc).message_limit == 20

    def test_kind_is_derived(self, problems):
        assert problems["count-negatives"].kind == "single_function"
        assert problems["password-validation"].kind == "multi_function"
        assert problems["robot-navigation"].kind == "multi_function"


class TestValidateProblem:
    def test_shipped_problems_are_clean(self, problems):
        for p in problems.values():
            assert validate_problem(p) == []

    def test_limit_out_of_range(self):
        p = problem_from_dict(minimal_problem(message_limit=0))
        assert any(i.code == "LimitOutOfRange" for i in validate_problem(p))

    def test_self_dependency(self):
        doc = minimal_problem()
        doc["functions"][0]["depends_on"] = ["count"]
        issues = validate_problem(problem_from_dict(doc))
        assert any(i.code == "SelfDependency" for i in issues)

    def test_unknown_dependency(self):
        doc = minimal_problem()
        doc["functions"][0]["depends_on"] = ["ghost"]
        issues = validate_problem(problem_from_dict(doc))
        assert any(i.code == "UnknownDependency" for i in issues)

    def test_arity_mismatch(self):
        doc = minimal_problem()
        doc["functions"][0]["hidden_tests"][0]["inputs"] = [[1, 2]]
        issues = validate_problem(problem_from_dict(doc))
        assert any(i.code == "ArityMismatch" for i in issues)

    def test_epsilon_requires_float(self):
        doc = minimal_problem()
        doc["functions"][0]["hidden_tests"][0]["comparison"] = "epsilon"
        issues = validate_problem(problem_from_dict(doc))
        assert any(i.code == "BadComparison" for i in issues)

    def test_missing_tests_flagged(self):
        doc = minimal_problem()
        doc["functions"][0]["hidden_tests"] = []
        issues = validate_problem(problem_from_dict(doc))
        assert any(i.code == "NoHiddenTest" for i in issues)

    def test_struct_literal_field_mismatch(self):
        doc = minimal_problem()
        doc["struct_decls"] = [{"name": "Point", "fields": "int x; int y"}]
        doc["functions"] = [
            {
                "name": "shift",
                "signature": "void shift(struct Point *p, int dx)",
                "visible_examples": [
                    {"inputs": [{"x": 0, "y": 0}, 1], "expected": {"x": 1, "y": 0}}
                ],
                "hidden_tests": [
                    {"inputs": [{"x": 0}, 1], "expected": {"x": 1, "y": 0}}
                ],
            }
        ]
        issues = validate_problem(problem_from_dict(doc))
        assert any(i.code == "TypeMismatch" for i in issues)


class TestRoundTrip:
    def test_serialize_reparse_equals(self, problems):
        for p in problems.values():
            again = problem_from_dict(problem_to_dict(p))
            assert again == p

    def test_round_trip_through_disk(self, tmp_path, problems):
        for p in problems.values():
            (tmp_path / f"{p.id}.json").write_text(json.dumps(problem_to_dict(p)))
        assert load_corpus(tmp_path) == load_corpus(CORPUS_DIR)


class TestRenderSpecification:
    def test_example_row_count(self, problems):
        p = problems["count-negatives"]
        text = render_specification(p)
        assert len(p.functions[0].visible_examples) == 3
        assert text.count("->") == 3

    def test_one_section_per_function_in_order(self, problems):
        p = problems["password-validation"]
        text = render_specification(p)
        positions = [text.index(f"## Function: {f.signature}") for f in p.functions]
        assert positions == sorted(positions)
        assert len(positions) == 4

    def test_struct_section_precedes_functions(self, problems):
        p = problems["robot-navigation"]
        text = render_specification(p)
        assert text.index("## Required structures") < text.index("## Function:")

    def test_hidden_rows_never_rendered(self, problems):
        # rows appearing in some visible example may legitimately recur as
        # hidden tests; everything else must stay out of the rendered panel
        for p in problems.values():
            text = render_specification(p)
            visible_rows = {
                format_example_row(tc) for f in p.functions for tc in f.visible_examples
            }
            for f in p.functions:
                for tc in f.hidden_tests:
                    row = format_example_row(tc)
                    if row not in visible_rows:
                        assert row not in text, (p.id, f.name, row)
