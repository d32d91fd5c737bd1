#!/usr/bin/env python3
"""Regenerate the shipped corpus files from oracle implementations.

Hidden-test inputs are declared here; every expected value is computed by
the brute-force oracles in tests/oracles.py, so the corpus can never drift
from the behavioral contracts. Run after editing inputs or descriptions:

    python scripts/gen_corpus.py [corpus-dir]
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))
sys.path.insert(0, str(ROOT / "src"))

from oracles import ORACLES  # noqa: E402

from promptprog.corpus import load_corpus  # noqa: E402


def tests_for(problem_id: str, fn: str, inputs: list, comparison: str) -> list[dict]:
    oracle = ORACLES[problem_id][fn]
    rows = []
    for args in inputs:
        expected = oracle(*args)
        rows.append({"inputs": args, "expected": expected, "comparison": comparison})
    return rows


def examples_for(problem_id: str, fn: str, inputs: list) -> list[dict]:
    oracle = ORACLES[problem_id][fn]
    return [{"inputs": args, "expected": oracle(*args)} for args in inputs]


PROBLEMS = [
    {
        "id": "count-negatives",
        "title": "Count negatives in an array",
        "tier": "L7",
        "language": "C",
        "message_limit": 5,
        "description": (
            "Guide the model to write a function that counts how many elements of an "
            "integer array are strictly less than zero. The array is passed as a pointer "
            "together with its length n. Study the input-output pairs below and prompt "
            "until the generated code matches all of them."
        ),
        "functions": [
            {
                "name": "count_negatives",
                "signature": "int count_negatives(int *arr, int n)",
                "visible": [[[1, -2, 3], 3], [[-4, -5], 2], [[2, 4], 2]],
                "hidden": [
                    [[], 0],
                    [[5], 1],
                    [[-5], 1],
                    [[1, -2, 3, -4], 4],
                    [[-1, -2, -3], 3],
                    [[0, 1, 2], 3],
                    [[-100, 100, -100, 100, -1], 5],
                    [[7, 7, -7, 7, 7, 7, 7, 7], 8],
                ],
                "comparison": "exact",
            }
        ],
    },
    {
        "id": "sum-evens",
        "title": "Sum the even numbers in an array",
        "tier": "L7",
        "language": "C",
        "message_limit": 5,
        "description": (
            "The target function adds up every even element of an integer array (length "
            "n) and returns the total. Negative even values count too; an array with no "
            "even values sums to zero."
        ),
        "functions": [
            {
                "name": "sum_evens",
                "signature": "int sum_evens(int *arr, int n)",
                "visible": [[[1, 2, 3, 4], 4], [[2, 4, 6], 3], [[1, 3], 2]],
                "hidden": [
                    [[], 0],
                    [[2], 1],
                    [[1, 3, 5], 3],
                    [[1, 2, 3, 4], 4],
                    [[-2, -4], 2],
                    [[0], 1],
                    [[7, 8, 9, 10], 4],
                    [[2, 2, 2], 3],
                    [[-1, -3, 6], 3],
                ],
                "comparison": "exact",
            }
        ],
    },
    {
        "id": "last-zero-index",
        "title": "Index of the last zero",
        "tier": "L7",
        "language": "C",
        "message_limit": 5,
        "description": (
            "The function returns the highest index whose element equals zero, scanning "
            "an integer array of length n. When the array contains no zero at all it "
            "returns -1."
        ),
        "functions": [
            {
                "name": "last_zero_index",
                "signature": "int last_zero_index(int *arr, int n)",
                "visible": [[[1, 0, 2], 3], [[4, 5], 2], [[0, 3, 0, 3], 4]],
                "hidden": [
                    [[], 0],
                    [[0], 1],
                    [[1, 2, 3], 3],
                    [[0, 1, 0], 3],
                    [[5, 0, 5, 0, 5], 5],
                    [[0, 0, 0], 3],
                    [[1, 0], 2],
                    [[9, 9, 0, 9], 4],
                    [[0, 7], 2],
                ],
                "comparison": "exact",
            }
        ],
    },
    {
        "id": "subarray-sort",
        "title": "Sort a subarray in place",
        "tier": "L9",
        "language": "C",
        "message_limit": 20,
        "description": (
            "The function sorts, in ascending order and in place, the slice of an "
            "integer array between indices start and end inclusive. Elements outside "
            "that range must keep their positions. The array's total length is n; the "
            "examples show the whole array after the call."
        ),
        "functions": [
            {
                "name": "sort_subarray",
                "signature": "void sort_subarray(int *arr, int n, int start, int end)",
                "visible": [[[4, 3, 2, 1], 4, 1, 2], [[3, 2, 1], 3, 0, 2]],
                "hidden": [
                    [[5, 4, 3, 2, 1], 5, 1, 3],
                    [[3, 1, 2], 3, 0, 2],
                    [[1], 1, 0, 0],
                    [[9, 8], 2, 0, 0],
                    [[4, 4, 4, 1], 4, 0, 3],
                    [[-3, 7, -5, 2], 4, 0, 3],
                    [[10, -1, 0, 5, 5, 2], 6, 2, 5],
                    [[6, 5, 4, 3, 2, 1], 6, 0, 2],
                    [[2, 1], 2, 0, 1],
                ],
                "comparison": "array_equal",
            }
        ],
    },
    {
        "id": "matrix-propagate-ones",
        "title": "Propagate ones across rows and columns",
        "tier": "L9",
        "language": "C",
        "message_limit": 20,
        "description": (
            "A rows-by-cols matrix of zeros and ones is stored row-major in a flat "
            "array. After the call, every row and every column that contained a 1 in "
            "the original matrix must consist entirely of 1s, and nothing else may "
            "change. Dimensions stay at or below 16 in each direction. The examples "
            "show the flat array after the call."
        ),
        "functions": [
            {
                "name": "propagate_ones",
                "signature": "void propagate_ones(int *mat, int rows, int cols)",
                "visible": [[[0, 0, 0, 1], 2, 2], [[0, 1, 0, 0, 0, 0], 2, 3]],
                "hidden": [
                    [[0, 0, 0, 0], 2, 2],
                    [[1, 0, 0, 0], 2, 2],
                    [[0, 1, 1, 0], 2, 2],
                    [[1], 1, 1],
                    [[0], 1, 1],
                    [[0, 0, 0, 0, 1, 0, 0, 0, 0], 3, 3],
                    [[1, 0, 0, 0, 0, 0], 3, 2],
                    [[0, 0, 1, 0, 0, 0], 2, 3],
                    [[1, 1, 1, 1], 2, 2],
                ],
                "comparison": "array_equal",
            }
        ],
    },
    {
        "id": "binary-add",
        "title": "Add two binary numbers",
        "tier": "L9",
        "language": "C",
        "message_limit": 20,
        "description": (
            "Two unsigned binary numbers are given as arrays of n bits each, most "
            "significant bit first. The function writes their sum into a result array "
            "of n + 1 bits (also most significant first, padded with a leading zero "
            "when there is no carry) and must leave both inputs unchanged. The "
            "examples list the final contents of all three arrays."
        ),
        "functions": [
            {
                "name": "add_binary",
                "signature": "void add_binary(int *a, int *b, int *result, int n)",
                "visible": [
                    [[1, 0], [1, 0], [0, 0, 0], 2],
                    [[0, 1], [0, 1], [0, 0, 0], 2],
                ],
                "hidden": [
                    [[0], [0], [0, 0], 1],
                    [[1], [1], [0, 0], 1],
                    [[0, 1], [0, 1], [0, 0, 0], 2],
                    [[1, 1, 1], [0, 0, 1], [0, 0, 0, 0], 3],
                    [[1, 0, 1], [0, 1, 0], [0, 0, 0, 0], 3],
                    [[1, 1, 1, 1], [1, 1, 1, 1], [0, 0, 0, 0, 0], 4],
                    [[1, 0], [0, 0], [0, 0, 0], 2],
                    [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0, 0], 4],
                    [[0, 1, 1], [0, 0, 1], [0, 0, 0, 0], 3],
                ],
                "comparison": "array_equal",
            }
        ],
    },
    {
        "id": "password-validation",
        "title": "Password validation",
        "tier": "L10",
        "language": "C",
        "message_limit": 20,
        "description": (
            "Build a password checker out of four functions. has_digit, has_upper and "
            "has_special each return 1 when the string contains at least one decimal "
            "digit, one uppercase letter, or one character that is neither a letter "
            "nor a digit, and 0 otherwise. is_valid_password returns 1 only when the "
            "password is at least 8 characters long and all three helper checks pass; "
            "it should call the helpers rather than re-implement them."
        ),
        "functions": [
            {
                "name": "has_digit",
                "signature": "int has_digit(char *s)",
                "visible": [["pass1"], ["abc"]],
                "hidden": [[""], ["abc"], ["a1b"], ["x0y"]],
                "comparison": "exact",
            },
            {
                "name": "has_upper",
                "signature": "int has_upper(char *s)",
                "visible": [["Apple"], ["apple"]],
                "hidden": [[""], ["abc"], ["aBc"], ["Z"]],
                "comparison": "exact",
            },
            {
                "name": "has_special",
                "signature": "int has_special(char *s)",
                "visible": [["a-b"], ["ab1"]],
                "hidden": [[""], ["abc123"], ["a_b"], ["!x"]],
                "comparison": "exact",
            },
            {
                "name": "is_valid_password",
                "signature": "int is_valid_password(char *s)",
                "depends_on": ["has_digit", "has_upper", "has_special"],
                "visible": [["Str0ng!pass"], ["weak"]],
                "hidden": [
                    ["Ab1!"],
                    ["abcdefg1!"],
                    ["Passw0rd!"],
                    ["Password!"],
                    ["passw0rd!"],
                    ["Passw0rd"],
                    ["A1!aaaaa"],
                ],
                "comparison": "exact",
            },
        ],
    },
    {
        "id": "robot-navigation",
        "title": "Robot navigation on a grid",
        "tier": "L10",
        "language": "C",
        "message_limit": 20,
        "description": (
            "A robot lives on an integer grid and is described by struct Robot with "
            "position x, y and a facing direction dir encoded as 0 = north, 1 = east, "
            "2 = south, 3 = west. Advancing moves the robot along its facing "
            "direction: north increases y, east increases x, south decreases y, west "
            "decreases x. turn_left and turn_right rotate by 90 degrees. navigate "
            "processes a command string character by character: 'L' turns left, 'R' "
            "turns right, 'A' advances one step; it should call the other three "
            "functions. Each example shows the struct fields after the call."
        ),
        "struct_decls": [{"name": "Robot", "fields": "int x; int y; int dir"}],
        "functions": [
            {
                "name": "turn_left",
                "signature": "void turn_left(struct Robot *r)",
                "visible": [[{"x": 0, "y": 0, "dir": 0}]],
                "hidden": [
                    [{"x": 0, "y": 0, "dir": 0}],
                    [{"x": 2, "y": 3, "dir": 3}],
                    [{"x": 1, "y": 1, "dir": 1}],
                ],
                "comparison": "exact",
            },
            {
                "name": "turn_right",
                "signature": "void turn_right(struct Robot *r)",
                "visible": [[{"x": 0, "y": 0, "dir": 0}]],
                "hidden": [
                    [{"x": 0, "y": 0, "dir": 3}],
                    [{"x": 5, "y": -2, "dir": 1}],
                    [{"x": 0, "y": 0, "dir": 0}],
                ],
                "comparison": "exact",
            },
            {
                "name": "advance",
                "signature": "void advance(struct Robot *r, int steps)",
                "visible": [[{"x": 0, "y": 0, "dir": 0}, 2]],
                "hidden": [
                    [{"x": 0, "y": 0, "dir": 0}, 3],
                    [{"x": 1, "y": 1, "dir": 1}, 2],
                    [{"x": 0, "y": 5, "dir": 2}, 5],
                    [{"x": -1, "y": 0, "dir": 3}, 4],
                    [{"x": 2, "y": 2, "dir": 0}, 0],
                ],
                "comparison": "exact",
            },
            {
                "name": "navigate",
                "signature": "void navigate(struct Robot *r, char *commands)",
                "depends_on": ["turn_left", "turn_right", "advance"],
                "visible": [[{"x": 0, "y": 0, "dir": 0}, "AR"]],
                "hidden": [
                    [{"x": 0, "y": 0, "dir": 0}, "AA"],
                    [{"x": 0, "y": 0, "dir": 0}, "RA"],
                    [{"x": 0, "y": 0, "dir": 0}, "ALA"],
                    [{"x": 3, "y": 3, "dir": 2}, ""],
                    [{"x": 0, "y": 0, "dir": 0}, "RRAA"],
                    [{"x": 0, "y": 0, "dir": 1}, "LARA"],
                ],
                "comparison": "exact",
            },
        ],
    },
    {
        "id": "balanced-parentheses",
        "title": "Balanced round parentheses",
        "tier": "L10",
        "language": "C",
        "message_limit": 20,
        "description": (
            "Check whether the round parentheses in an expression are balanced, "
            "ignoring every other character. is_open_paren and is_close_paren return "
            "1 exactly for '(' and ')'. is_balanced walks the string with a stack or "
            "counter, using the two helpers, and returns 1 when every '(' is matched "
            "by a later ')' and no ')' appears before its partner."
        ),
        "functions": [
            {
                "name": "is_open_paren",
                "signature": "int is_open_paren(char c)",
                "visible": [["("]],
                "hidden": [["("], [")"], ["a"], ["["]],
                "comparison": "exact",
            },
            {
                "name": "is_close_paren",
                "signature": "int is_close_paren(char c)",
                "visible": [[")"]],
                "hidden": [[")"], ["("], ["z"], ["]"]],
                "comparison": "exact",
            },
            {
                "name": "is_balanced",
                "signature": "int is_balanced(char *expr)",
                "depends_on": ["is_open_paren", "is_close_paren"],
                "visible": [["(1+2)"], ["(("]],
                "hidden": [
                    [""],
                    ["()"],
                    ["("],
                    [")"],
                    [")("],
                    ["(a+b)*(c-d)"],
                    ["((x)"],
                    ["(())()"],
                    ["foo)bar("],
                    ["[(])"],
                ],
                "comparison": "exact",
            },
        ],
    },
]


def build(out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for spec in PROBLEMS:
        doc = {
            "id": spec["id"],
            "title": spec["title"],
            "tier": spec["tier"],
            "language": spec["language"],
            "message_limit": spec["message_limit"],
            "description": spec["description"],
        }
        if "struct_decls" in spec:
            doc["struct_decls"] = spec["struct_decls"]
        doc["functions"] = []
        for fn in spec["functions"]:
            entry = {"name": fn["name"], "signature": fn["signature"]}
            if fn.get("depends_on"):
                entry["depends_on"] = fn["depends_on"]
            entry["visible_examples"] = examples_for(spec["id"], fn["name"], fn["visible"])
            entry["hidden_tests"] = tests_for(
                spec["id"], fn["name"], fn["hidden"], fn["comparison"]
            )
            doc["functions"].append(entry)
        path = out_dir / f"{spec['id']}.json"
        path.write_text(json.dumps(doc, indent=2) + "\n")
        print(f"wrote {path}")
    problems = load_corpus(out_dir)
    print(f"validated {len(problems)} problems")


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "corpus"
    build(target)
