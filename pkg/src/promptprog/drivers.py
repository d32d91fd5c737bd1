"""Test-driver synthesis: wraps a generated code block in a harness that
runs every hidden test and prints one machine-parsable line per test.

Driver output protocol: `RESULT <function> <test-index> <PASS|FAIL>`, one
line per hidden test, any other stdout ignored by the parser.

Two modes:
  * single_driver: one compilation unit holding the student code plus a
    main that validates every function together, so a missing helper fails
    the whole build;
  * modular: one unit per function, compiled independently, so partial
    solutions grade function by function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from . import signatures
from .blocks import CodeBlock
from .corpus import DEFAULT_EPSILON, FunctionSpec, Problem, TestCase
from .signatures import (
    BOOL,
    CHAR,
    DOUBLE,
    INT,
    INT_ARRAY,
    STR,
    STRUCT,
    STRUCT_PTR,
    VOID,
    Signature,
    UnsupportedType,
)

SINGLE_DRIVER = "single_driver"
MODULAR = "modular"
MODES = (SINGLE_DRIVER, MODULAR)

RESULT_PREFIX = "RESULT"

# how the Python driver reports that the student source failed to compile
SYNTAX_ERROR_MARKER = "STUDENT_SYNTAX_ERROR:"
SYNTAX_ERROR_EXIT = 21


@dataclass(frozen=True)
class SourceUnit:
    name: str
    language: str
    source: str
    functions: tuple[str, ...]


@dataclass(frozen=True)
class SourceBundle:
    problem_id: str
    language: str
    mode: str
    units: tuple[SourceUnit, ...]


def synthesize_driver(
    problem: Problem, block: CodeBlock | str, mode: str = SINGLE_DRIVER
) -> SourceBundle:
    if mode not in MODES:
        raise ValueError(f"unknown grading mode {mode!r}")
    text = block.text if isinstance(block, CodeBlock) else block
    emit = _c_unit if problem.language == "C" else _python_unit
    if mode == SINGLE_DRIVER:
        units = [emit(problem, text, problem.functions, "driver")]
    else:
        units = [emit(problem, text, (f,), f"driver_{f.name}") for f in problem.functions]
    return SourceBundle(
        problem_id=problem.id, language=problem.language, mode=mode, units=tuple(units)
    )


def expected_outputs(tc: TestCase, sig: Signature) -> list[Any]:
    slots = signatures.expected_slots(sig)
    if slots == 1:
        return [tc.expected]
    return list(tc.expected)


# --------------------------------------------------------------------------
# C code generation


def _c_escape(text: str, quote: str) -> str:
    out = []
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == quote:
            out.append("\\" + quote)
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        elif ord(ch) < 32 or ord(ch) > 126:
            raise UnsupportedType(f"non-printable character in literal: {ch!r}")
        else:
            out.append(ch)
    return "".join(out)


def _c_int(value: Any) -> str:
    return str(int(value))


def _c_scalar(value: Any, kind: str) -> str:
    if kind in (INT, BOOL):
        return _c_int(value)
    if kind == CHAR:
        return f"'{_c_escape(value, chr(39))}'"
    if kind == DOUBLE:
        return repr(float(value))
    raise UnsupportedType(f"no C literal for kind {kind}")


def _struct_init(value: Any, struct_name: str, problem: Problem) -> str:
    decl = next(d for d in problem.struct_decls if d.name == struct_name)
    literal = dict(value)
    parts = [_c_int(literal[name]) for _, name in decl.parsed_fields()]
    return "{" + ", ".join(parts) + "}"


def _struct_compare(var: str, value: Any, struct_name: str, problem: Problem) -> str:
    decl = next(d for d in problem.struct_decls if d.name == struct_name)
    literal = dict(value)
    terms = [
        f"({var}.{name} == ({_c_int(literal[name])}))" for _, name in decl.parsed_fields()
    ]
    return " && ".join(terms)


def _c_param_decl(var: str, value: Any, param: signatures.Param, problem: Problem) -> str:
    if param.kind == INT_ARRAY:
        vals = ", ".join(_c_int(v) for v in value) if value else "0"
        return f"int {var}[] = {{{vals}}};"
    if param.kind == STR:
        return f'char {var}[] = "{_c_escape(value, chr(34))}";'
    if param.kind in (STRUCT, STRUCT_PTR):
        return (
            f"struct {param.struct_name} {var} = "
            f"{_struct_init(value, param.struct_name, problem)};"
        )
    ctype = {INT: "int", BOOL: "int", CHAR: "char", DOUBLE: "double"}[param.kind]
    return f"{ctype} {var} = {_c_scalar(value, param.kind)};"


def _c_test(
    fn: FunctionSpec, sig: Signature, idx: int, tc: TestCase, problem: Problem
) -> str:
    lines = ["  {"]
    args = []
    for i, (value, param) in enumerate(zip(tc.inputs, sig.params)):
        var = f"a{i}"
        lines.append("    " + _c_param_decl(var, value, param, problem))
        args.append(f"&{var}" if param.kind == STRUCT_PTR else var)
    call = f"{fn.name}({', '.join(args)})"
    expected = expected_outputs(tc, sig)
    if sig.return_kind != VOID:
        exp = expected[0]
        if sig.return_kind == STRUCT:
            lines.append(f"    struct {sig.return_struct} got = {call};")
            lines.append(
                f"    int ok = {_struct_compare('got', exp, sig.return_struct, problem)};"
            )
        elif sig.return_kind == DOUBLE:
            tol = tc.tolerance if tc.tolerance is not None else DEFAULT_EPSILON
            lines.append(f"    double got = {call};")
            if tc.comparison == "epsilon":
                lines.append(f"    int ok = fabs(got - ({repr(float(exp))})) <= {repr(tol)};")
            else:
                lines.append(f"    int ok = got == ({repr(float(exp))});")
        else:
            ctype = "char" if sig.return_kind == CHAR else "int"
            lines.append(f"    {ctype} got = {call};")
            lines.append(f"    int ok = got == ({_c_scalar(exp, sig.return_kind)});")
    else:
        lines.append(f"    {call};")
        lines.append("    int ok = 1;")
        outs = signatures.output_params(sig)
        for exp, param in zip(expected, outs):
            var = f"a{sig.params.index(param)}"
            if param.kind == INT_ARRAY:
                if len(exp):
                    vals = ", ".join(_c_int(v) for v in exp)
                    lines.append(
                        f"    {{ int exp_{var}[] = {{{vals}}}; "
                        f"for (int i = 0; i < {len(exp)}; i++) "
                        f"if ({var}[i] != exp_{var}[i]) ok = 0; }}"
                    )
            else:
                lines.append(
                    f"    ok = ok && ({_struct_compare(var, exp, param.struct_name, problem)});"
                )
    lines.append(
        f'    printf("{RESULT_PREFIX} {fn.name} {idx} %s\\n", ok ? "PASS" : "FAIL");'
    )
    lines.append("  }")
    return "\n".join(lines)


def _c_unit(
    problem: Problem, block_text: str, functions: tuple[FunctionSpec, ...], name: str
) -> SourceUnit:
    tests = []
    for fn in functions:
        sig = signatures.parse_c_signature(fn.signature)
        for idx, tc in enumerate(fn.hidden_tests):
            tests.append(_c_test(fn, sig, idx, tc, problem))
    source = "\n".join(
        [
            "#include <stdio.h>",
            "#include <math.h>",
            "",
            "/* --- generated code under test --- */",
            block_text,
            "/* --- end generated code --- */",
            "",
            "int main(void) {",
            "  setvbuf(stdout, 0, _IONBF, 0); /* keep RESULT lines on a crash */",
            "\n".join(tests),
            "  return 0;",
            "}",
            "",
        ]
    )
    return SourceUnit(
        name=name, language="C", source=source, functions=tuple(f.name for f in functions)
    )


# --------------------------------------------------------------------------
# Python code generation


def _py_literal(value: Any) -> str:
    if isinstance(value, tuple):
        return "[" + ", ".join(_py_literal(v) for v in value) + "]"
    return repr(value)


def _py_test(fn: FunctionSpec, sig: Signature, idx: int, tc: TestCase) -> str:
    lines = ["try:"]
    args = []
    for i, value in enumerate(tc.inputs):
        var = f"_in{i}"
        lines.append(f"    {var} = {_py_literal(value)}")
        args.append(var)
    call = f"_ns[{fn.name!r}]({', '.join(args)})"
    expected = expected_outputs(tc, sig)
    if sig.return_kind != VOID:
        exp = expected[0]
        lines.append(f"    _got = {call}")
        if sig.return_kind == DOUBLE and tc.comparison == "epsilon":
            tol = tc.tolerance if tc.tolerance is not None else DEFAULT_EPSILON
            lines.append(f"    _ok = abs(_got - {repr(float(exp))}) <= {repr(tol)}")
        else:
            lines.append(f"    _ok = _got == {_py_literal(exp)}")
    else:
        lines.append(f"    {call}")
        checks = []
        for exp, param in zip(expected, signatures.output_params(sig)):
            checks.append(f"_in{sig.params.index(param)} == {_py_literal(exp)}")
        lines.append(f"    _ok = {' and '.join(checks)}")
    lines.append("except Exception:")
    lines.append("    _ok = False")
    lines.append(f"_emit({fn.name!r}, {idx}, _ok)")
    return "\n".join(lines)


def _python_unit(
    problem: Problem, block_text: str, functions: tuple[FunctionSpec, ...], name: str
) -> SourceUnit:
    import base64

    encoded = base64.b64encode(block_text.encode("utf-8")).decode("ascii")
    tests = []
    for fn in functions:
        sig = signatures.parse_python_signature(fn.signature)
        for idx, tc in enumerate(fn.hidden_tests):
            tests.append(_py_test(fn, sig, idx, tc))
    source = "\n".join(
        [
            "import base64 as _b64",
            "import sys as _sys",
            "",
            f'_SRC = _b64.b64decode("{encoded}").decode("utf-8")',
            "try:",
            '    _code = compile(_SRC, "<student>", "exec")',
            "except SyntaxError as _e:",
            f'    print("{SYNTAX_ERROR_MARKER}", _e, file=_sys.stderr)',
            f"    raise SystemExit({SYNTAX_ERROR_EXIT})",
            "_ns = {}",
            "exec(_code, _ns)",
            "",
            "def _emit(fn, idx, ok):",
            f'    print("{RESULT_PREFIX}", fn, idx, "PASS" if ok else "FAIL")',
            "",
            "\n".join(tests),
            "",
        ]
    )
    return SourceUnit(
        name=name,
        language="Python",
        source=source,
        functions=tuple(f.name for f in functions),
    )
