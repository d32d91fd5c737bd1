"""Problem corpus: definitions, loading, validation, and student-facing rendering.

A corpus is a directory of JSON files, one problem each. The file schema is
strict: unknown keys are rejected so that typos in educator-authored files
fail loudly instead of silently changing behavior. Hidden tests live only in
these files and in grading; they never reach any student-facing output.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from . import signatures
from .errors import PromptProgError
from .signatures import (
    BOOL,
    CHAR,
    DOUBLE,
    INT,
    INT_ARRAY,
    STR,
    STRUCT,
    STRUCT_PTR,
    Signature,
    UnsupportedType,
)

TIERS = ("L7", "L9", "L10")
TIER_DEFAULT_LIMITS = {"L7": 5, "L9": 20, "L10": 20}
LANGUAGES = ("C", "Python")
COMPARISONS = ("exact", "array_equal", "epsilon")

SINGLE_FUNCTION = "single_function"
MULTI_FUNCTION = "multi_function"

DEFAULT_EPSILON = 1e-6


class MalformedDefinition(PromptProgError):
    code = "MALFORMED_DEFINITION"

    def __init__(self, source: str, reason: str):
        self.source = source
        self.reason = reason
        super().__init__(f"{source}: {reason}")


class DuplicateProblemId(PromptProgError):
    code = "DUPLICATE_PROBLEM_ID"


class InvariantViolation(PromptProgError):
    code = "INVARIANT_VIOLATION"

    def __init__(self, problem_id: str, detail: str):
        self.problem_id = problem_id
        super().__init__(f"{problem_id}: {detail}")


class UnknownProblem(PromptProgError):
    code = "UNKNOWN_PROBLEM"


@dataclass(frozen=True)
class TestCase:
    inputs: tuple
    expected: Any
    comparison: str | None = None  # None: exact for scalars, array_equal for arrays
    tolerance: float | None = None


@dataclass(frozen=True)
class StructDecl:
    name: str
    fields: str  # C-style field list, e.g. "int x; int y; int dir"

    def parsed_fields(self) -> tuple[tuple[str, str], ...]:
        """(type, name) pairs; only int fields are marshalable in literals."""
        out = []
        for part in self.fields.split(";"):
            part = part.strip()
            if not part:
                continue
            bits = part.split()
            if len(bits) != 2:
                raise UnsupportedType(f"struct {self.name}: cannot parse field {part!r}")
            out.append((bits[0], bits[1]))
        return tuple(out)


@dataclass(frozen=True)
class FunctionSpec:
    name: str
    signature: str
    visible_examples: tuple[TestCase, ...]
    hidden_tests: tuple[TestCase, ...]
    depends_on: tuple[str, ...] = ()


@dataclass(frozen=True)
class Problem:
    id: str
    title: str
    tier: str
    language: str
    description: str
    functions: tuple[FunctionSpec, ...]
    message_limit: int
    struct_decls: tuple[StructDecl, ...] = ()

    @property
    def kind(self) -> str:
        if len(self.functions) > 1 or self.struct_decls:
            return MULTI_FUNCTION
        return SINGLE_FUNCTION

    @property
    def function_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.functions)


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    detail: str
    function: str | None = None

    def __str__(self) -> str:
        where = f" [{self.function}]" if self.function else ""
        return f"{self.code}{where}: {self.detail}"


# --------------------------------------------------------------------------
# parsing


def _take(raw: dict, allowed: dict[str, bool], context: str) -> None:
    """Reject unknown keys; `allowed` maps key -> required."""
    unknown = set(raw) - set(allowed)
    if unknown:
        raise MalformedDefinition(context, f"unknown keys: {sorted(unknown)}")
    missing = [k for k, required in allowed.items() if required and k not in raw]
    if missing:
        raise MalformedDefinition(context, f"missing keys: {missing}")


def _parse_testcase(raw: Any, context: str) -> TestCase:
    if not isinstance(raw, dict):
        raise MalformedDefinition(context, "test case must be an object")
    _take(
        raw,
        {"inputs": True, "expected": True, "comparison": False, "tolerance": False},
        context,
    )
    if not isinstance(raw["inputs"], list):
        raise MalformedDefinition(context, "inputs must be a list")
    comparison = raw.get("comparison")
    if comparison is not None and comparison not in COMPARISONS:
        raise MalformedDefinition(context, f"unknown comparison {comparison!r}")
    tolerance = raw.get("tolerance")
    if tolerance is not None and not isinstance(tolerance, (int, float)):
        raise MalformedDefinition(context, "tolerance must be a number")
    return TestCase(
        inputs=_freeze(raw["inputs"]),
        expected=_freeze(raw["expected"]),
        comparison=comparison,
        tolerance=float(tolerance) if tolerance is not None else None,
    )


def _freeze(value: Any) -> Any:
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    if isinstance(value, dict):
        return tuple(sorted((k, _freeze(v)) for k, v in value.items()))
    return value


def to_plain(value: Any) -> Any:
    """Inverse of _freeze, used for serialization and driver synthesis."""
    if isinstance(value, tuple):
        if value and all(
            isinstance(v, tuple) and len(v) == 2 and isinstance(v[0], str) for v in value
        ):
            return {k: to_plain(v) for k, v in value}
        return [to_plain(v) for v in value]
    return value


def is_struct_literal(value: Any) -> bool:
    return isinstance(value, tuple) and bool(value) and all(
        isinstance(v, tuple) and len(v) == 2 and isinstance(v[0], str) for v in value
    )


def _parse_function(raw: Any, context: str) -> FunctionSpec:
    if not isinstance(raw, dict):
        raise MalformedDefinition(context, "function must be an object")
    _take(
        raw,
        {
            "name": True,
            "signature": True,
            "visible_examples": True,
            "hidden_tests": True,
            "depends_on": False,
        },
        context,
    )
    name = raw["name"]
    if not isinstance(name, str) or not name.isidentifier():
        raise MalformedDefinition(context, f"bad function name {name!r}")
    for key in ("visible_examples", "hidden_tests"):
        if not isinstance(raw[key], list):
            raise MalformedDefinition(context, f"{key} must be a list")
    depends = raw.get("depends_on", [])
    if not isinstance(depends, list) or not all(isinstance(d, str) for d in depends):
        raise MalformedDefinition(context, "depends_on must be a list of names")
    fctx = f"{context}:{name}"
    return FunctionSpec(
        name=name,
        signature=raw["signature"],
        visible_examples=tuple(_parse_testcase(t, fctx) for t in raw["visible_examples"]),
        hidden_tests=tuple(_parse_testcase(t, fctx) for t in raw["hidden_tests"]),
        depends_on=tuple(depends),
    )


def problem_from_dict(raw: Any, source: str = "<memory>") -> Problem:
    if not isinstance(raw, dict):
        raise MalformedDefinition(source, "problem must be an object")
    _take(
        raw,
        {
            "id": True,
            "title": True,
            "tier": True,
            "language": True,
            "description": True,
            "functions": True,
            "message_limit": False,
            "struct_decls": False,
        },
        source,
    )
    if raw["tier"] not in TIERS:
        raise MalformedDefinition(source, f"unknown tier {raw['tier']!r}")
    if raw["language"] not in LANGUAGES:
        raise MalformedDefinition(source, f"unknown language {raw['language']!r}")
    if not isinstance(raw["functions"], list):
        raise MalformedDefinition(source, "functions must be a list")
    limit = raw.get("message_limit", TIER_DEFAULT_LIMITS[raw["tier"]])
    if not isinstance(limit, int) or isinstance(limit, bool):
        raise MalformedDefinition(source, "message_limit must be an integer")
    decls = []
    for d in raw.get("struct_decls", []):
        if not isinstance(d, dict):
            raise MalformedDefinition(source, "struct_decls entries must be objects")
        _take(d, {"name": True, "fields": True}, source)
        decls.append(StructDecl(name=d["name"], fields=d["fields"]))
    return Problem(
        id=raw["id"],
        title=raw["title"],
        tier=raw["tier"],
        language=raw["language"],
        description=raw["description"],
        functions=tuple(_parse_function(f, source) for f in raw["functions"]),
        message_limit=limit,
        struct_decls=tuple(decls),
    )


def _testcase_to_dict(tc: TestCase) -> dict:
    out: dict[str, Any] = {"inputs": to_plain(tc.inputs), "expected": to_plain(tc.expected)}
    if tc.comparison is not None:
        out["comparison"] = tc.comparison
    if tc.tolerance is not None:
        out["tolerance"] = tc.tolerance
    return out


def problem_to_dict(p: Problem) -> dict:
    out: dict[str, Any] = {
        "id": p.id,
        "title": p.title,
        "tier": p.tier,
        "language": p.language,
        "message_limit": p.message_limit,
        "description": p.description,
    }
    if p.struct_decls:
        out["struct_decls"] = [{"name": d.name, "fields": d.fields} for d in p.struct_decls]
    out["functions"] = [
        {
            "name": f.name,
            "signature": f.signature,
            **({"depends_on": list(f.depends_on)} if f.depends_on else {}),
            "visible_examples": [_testcase_to_dict(t) for t in f.visible_examples],
            "hidden_tests": [_testcase_to_dict(t) for t in f.hidden_tests],
        }
        for f in p.functions
    ]
    return out


def load_corpus(path: str | Path) -> list[Problem]:
    """Load and validate every problem file in a directory.

    Deterministic order: tier (L7, L9, L10), then id.
    """
    root = Path(path)
    if not root.is_dir():
        raise MalformedDefinition(str(root), "corpus path is not a directory")
    problems: dict[str, Problem] = {}
    for file in sorted(root.glob("*.json")):
        try:
            raw = json.loads(file.read_text())
        except json.JSONDecodeError as exc:
            raise MalformedDefinition(file.name, f"invalid JSON: {exc}") from exc
        problem = problem_from_dict(raw, source=file.name)
        if problem.id in problems:
            raise DuplicateProblemId(problem.id)
        issues = validate_problem(problem)
        if issues:
            raise InvariantViolation(problem.id, "; ".join(str(i) for i in issues))
        problems[problem.id] = problem
    return sorted(problems.values(), key=lambda p: (TIERS.index(p.tier), p.id))


# --------------------------------------------------------------------------
# validation

_SCALAR_CHECKS = {
    INT: lambda v: isinstance(v, (int, bool)) and not isinstance(v, float),
    BOOL: lambda v: isinstance(v, bool),
    CHAR: lambda v: isinstance(v, str) and len(v) == 1,
    DOUBLE: lambda v: isinstance(v, (int, float)) and not isinstance(v, bool),
    STR: lambda v: isinstance(v, str),
    INT_ARRAY: lambda v: isinstance(v, tuple)
    and all(isinstance(x, int) and not isinstance(x, bool) for x in v),
}


def _value_matches(value: Any, kind: str, struct_name: str | None, problem: Problem) -> bool:
    if kind in (STRUCT, STRUCT_PTR):
        if not (is_struct_literal(value) or value == ()):
            return False
        decl = next((d for d in problem.struct_decls if d.name == struct_name), None)
        if decl is None:
            return False
        try:
            fields = decl.parsed_fields()
        except UnsupportedType:
            return False
        names = {n for _, n in fields}
        literal = dict(value) if value else {}
        if set(literal) != names:
            return False
        return all(isinstance(v, int) and not isinstance(v, bool) for v in literal.values())
    check = _SCALAR_CHECKS.get(kind)
    return bool(check and check(value))


def _expected_values(tc: TestCase, slots: int) -> list[Any] | None:
    """Split `expected` into one value per output slot, or None on shape error."""
    if slots == 1:
        return [tc.expected]
    if isinstance(tc.expected, tuple) and not is_struct_literal(tc.expected) and len(tc.expected) == slots:
        return list(tc.expected)
    return None


def _validate_testcase(
    tc: TestCase,
    sig: Signature,
    problem: Problem,
    fn: str,
    label: str,
    issues: list[ValidationIssue],
) -> None:
    if len(tc.inputs) != len(sig.params):
        issues.append(
            ValidationIssue(
                "ArityMismatch",
                f"{label}: {len(tc.inputs)} inputs for {len(sig.params)} parameters",
                fn,
            )
        )
        return
    for value, param in zip(tc.inputs, sig.params):
        if not _value_matches(value, param.kind, param.struct_name, problem):
            issues.append(
                ValidationIssue(
                    "TypeMismatch",
                    f"{label}: input for parameter {param.name!r} does not match {param.kind}",
                    fn,
                )
            )
    try:
        slots = signatures.expected_slots(sig)
    except UnsupportedType as exc:
        issues.append(ValidationIssue("SignatureUnsupported", str(exc), fn))
        return
    values = _expected_values(tc, slots)
    if values is None:
        issues.append(
            ValidationIssue(
                "ExpectedShapeMismatch",
                f"{label}: expected must supply {slots} values",
                fn,
            )
        )
        return
    if sig.return_kind != signatures.VOID:
        targets = [(sig.return_kind, sig.return_struct)]
    else:
        targets = [(p.kind, p.struct_name) for p in signatures.output_params(sig)]
    for value, (kind, struct_name) in zip(values, targets):
        effective = INT_ARRAY if kind == INT_ARRAY else kind
        if not _value_matches(value, effective, struct_name, problem):
            issues.append(
                ValidationIssue(
                    "TypeMismatch",
                    f"{label}: expected value does not match {kind}",
                    fn,
                )
            )
    is_float = isinstance(tc.expected, float) and not isinstance(tc.expected, bool)
    if tc.comparison == "epsilon" and not is_float:
        issues.append(
            ValidationIssue(
                "BadComparison", f"{label}: epsilon requires a floating-point expected value", fn
            )
        )
    if tc.comparison == "array_equal" and not isinstance(tc.expected, tuple):
        issues.append(
            ValidationIssue("BadComparison", f"{label}: array_equal requires an array", fn)
        )
    if tc.comparison == "exact" and isinstance(tc.expected, float):
        if not math.isfinite(tc.expected):
            issues.append(
                ValidationIssue("BadComparison", f"{label}: non-finite expected value", fn)
            )


def validate_problem(p: Problem) -> list[ValidationIssue]:
    """Check every structural invariant; returns issues instead of raising."""
    issues: list[ValidationIssue] = []
    if not p.functions:
        issues.append(ValidationIssue("EmptyFunctions", "problem defines no functions"))
    if p.message_limit < 1:
        issues.append(
            ValidationIssue("LimitOutOfRange", f"message_limit {p.message_limit} must be >= 1")
        )
    seen: set[str] = set()
    for f in p.functions:
        if f.name in seen:
            issues.append(ValidationIssue("DuplicateFunctionName", f.name, f.name))
        seen.add(f.name)
    struct_names = [d.name for d in p.struct_decls]
    if len(struct_names) != len(set(struct_names)):
        issues.append(ValidationIssue("DuplicateStructName", "struct names must be unique"))
    for d in p.struct_decls:
        try:
            d.parsed_fields()
        except UnsupportedType as exc:
            issues.append(ValidationIssue("BadStructDecl", str(exc)))
    names = {f.name for f in p.functions}
    for f in p.functions:
        for dep in f.depends_on:
            if dep == f.name:
                issues.append(ValidationIssue("SelfDependency", dep, f.name))
            elif dep not in names:
                issues.append(ValidationIssue("UnknownDependency", dep, f.name))
        if not f.visible_examples:
            issues.append(ValidationIssue("NoVisibleExample", "at least one required", f.name))
        if not f.hidden_tests:
            issues.append(ValidationIssue("NoHiddenTest", "at least one required", f.name))
        try:
            sig = signatures.parse_signature(f.signature, p.language)
        except UnsupportedType as exc:
            issues.append(ValidationIssue("SignatureUnsupported", str(exc), f.name))
            continue
        if sig.name != f.name:
            issues.append(
                ValidationIssue(
                    "NameMismatch",
                    f"signature declares {sig.name!r}, function is named {f.name!r}",
                    f.name,
                )
            )
        for param in sig.params:
            if param.kind in (STRUCT, STRUCT_PTR) and param.struct_name not in struct_names:
                issues.append(
                    ValidationIssue(
                        "StructUnknown",
                        f"parameter {param.name!r} uses undeclared struct {param.struct_name!r}",
                        f.name,
                    )
                )
        for i, tc in enumerate(f.visible_examples):
            _validate_testcase(tc, sig, p, f.name, f"visible_examples[{i}]", issues)
        for i, tc in enumerate(f.hidden_tests):
            _validate_testcase(tc, sig, p, f.name, f"hidden_tests[{i}]", issues)
    return issues


# --------------------------------------------------------------------------
# rendering


def format_value(value: Any) -> str:
    return json.dumps(to_plain(value), separators=(", ", ": "), sort_keys=True)


def format_example_row(tc: TestCase) -> str:
    inputs = ", ".join(format_value(v) for v in tc.inputs)
    return f"({inputs}) -> {format_value(tc.expected)}"


def render_specification(p: Problem) -> str:
    """Student-facing panel text: description, structs, then per-function
    signature and visible examples. Hidden tests are never included."""
    lines = [f"# {p.title}", ""]
    lines.append(f"Tier {p.tier} · {p.language} · up to {p.message_limit} messages per conversation")
    lines.append("")
    lines.append(p.description.strip())
    lines.append("")
    if p.struct_decls:
        lines.append("## Required structures")
        for d in p.struct_decls:
            lines.append(f"- struct {d.name} {{ {d.fields} }}")
        lines.append("")
    for f in p.functions:
        lines.append(f"## Function: {f.signature}")
        if f.depends_on:
            lines.append(f"May call: {', '.join(f.depends_on)}")
        lines.append("Examples:")
        for tc in f.visible_examples:
            lines.append(f"  {format_example_row(tc)}")
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"
