"""Function-signature parsing shared by corpus validation and driver synthesis.

Both the validator and the test-driver generator need the same facts about a
function: its parameter kinds, its return kind, and which parameters are
graded as outputs when the function mutates its arguments instead of
returning a value.

Supported C parameter types: int, char, double (also float), int*, char*,
struct X and struct X*; returns may additionally be void or a struct by
value. Python signatures use the annotated form
``def f(xs: list[int], n: int) -> int`` with int, float, bool, str,
list[int] and None.

Grading convention:
  * non-void return: the observable is the return value, nothing else;
  * void return: the observables are the post-call values of mutable
    pointer parameters (int* and struct*; char* is treated as an
    input-only string) in declaration order.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass

from .errors import PromptProgError

# value/parameter kinds
INT = "int"
BOOL = "bool"
CHAR = "char"
DOUBLE = "double"
STR = "str"
INT_ARRAY = "int_array"
STRUCT = "struct"
STRUCT_PTR = "struct_ptr"
VOID = "void"


class UnsupportedType(PromptProgError):
    code = "UNSUPPORTED_TYPE"


@dataclass(frozen=True)
class Param:
    name: str
    kind: str
    struct_name: str | None = None


@dataclass(frozen=True)
class Signature:
    language: str
    name: str
    params: tuple[Param, ...]
    return_kind: str
    return_struct: str | None = None


_C_SCALARS = {"int": INT, "char": CHAR, "double": DOUBLE, "float": DOUBLE, "void": VOID}

_HEAD_RE = re.compile(r"^(?P<type>.*?)(?P<name>[A-Za-z_]\w*)$", re.S)

_PARAM_RE = re.compile(
    r"^(?P<type>.*?)(?P<name>[A-Za-z_]\w*)\s*(?P<arr>\[\s*\d*\s*\])?$", re.S
)


def _normalize_c_type(text: str) -> tuple[str, str | None]:
    """Map a C type spelling to a kind, returning (kind, struct_name)."""
    t = re.sub(r"\bconst\b", " ", text)
    t = re.sub(r"\s+", " ", t).strip()
    pointer = t.endswith("*")
    if pointer:
        t = t[:-1].strip()
    m = re.fullmatch(r"struct ([A-Za-z_]\w*)", t)
    if m:
        return (STRUCT_PTR if pointer else STRUCT), m.group(1)
    if t in _C_SCALARS:
        base = _C_SCALARS[t]
        if not pointer:
            return base, None
        if base == INT:
            return INT_ARRAY, None
        if base == CHAR:
            return STR, None
    raise UnsupportedType(f"cannot marshal C type {text.strip()!r}")


def parse_c_signature(text: str) -> Signature:
    head, paren, tail = text.partition("(")
    body, closing, trailer = tail.rpartition(")")
    if not paren or not closing or trailer.strip(" ;\t\r\n"):
        raise UnsupportedType(f"unparseable C signature: {text!r}")
    m = _HEAD_RE.match(head.strip())
    if not m or not m.group("type").strip():
        raise UnsupportedType(f"unparseable C signature: {text!r}")
    ret_kind, ret_struct = _normalize_c_type(m.group("type"))
    if ret_kind in (INT_ARRAY, STR, STRUCT_PTR):
        raise UnsupportedType(f"pointer return type in {text!r}")
    params: list[Param] = []
    body = body.strip()
    if body and body != "void":
        for raw in body.split(","):
            pm = _PARAM_RE.match(raw.strip())
            if not pm or not pm.group("type").strip():
                raise UnsupportedType(f"unparseable parameter {raw.strip()!r} in {text!r}")
            spelling = pm.group("type")
            if pm.group("arr"):
                spelling += "*"
            kind, struct_name = _normalize_c_type(spelling)
            if kind == VOID:
                raise UnsupportedType(f"void parameter in {text!r}")
            params.append(Param(pm.group("name"), kind, struct_name))
    return Signature("C", m.group("name"), tuple(params), ret_kind, ret_struct)


_PY_ANNOTATIONS = {
    "int": INT,
    "float": DOUBLE,
    "bool": BOOL,
    "str": STR,
    "None": VOID,
}


def _py_kind(node: ast.expr | None, context: str) -> str:
    if node is None:
        raise UnsupportedType(f"missing annotation in {context!r}")
    if isinstance(node, ast.Constant) and node.value is None:
        return VOID
    if isinstance(node, ast.Name) and node.id in _PY_ANNOTATIONS:
        return _PY_ANNOTATIONS[node.id]
    if (
        isinstance(node, ast.Subscript)
        and isinstance(node.value, ast.Name)
        and node.value.id == "list"
        and isinstance(node.slice, ast.Name)
        and node.slice.id == "int"
    ):
        return INT_ARRAY
    raise UnsupportedType(f"unsupported annotation in {context!r}")


def parse_python_signature(text: str) -> Signature:
    src = text.strip()
    if not src.startswith("def "):
        src = "def " + src
    src = src.rstrip(":") + ": ..."
    try:
        fn = ast.parse(src).body[0]
    except SyntaxError as exc:
        raise UnsupportedType(f"unparseable Python signature: {text!r}") from exc
    if not isinstance(fn, ast.FunctionDef):
        raise UnsupportedType(f"unparseable Python signature: {text!r}")
    if fn.args.posonlyargs or fn.args.kwonlyargs or fn.args.vararg or fn.args.kwarg:
        raise UnsupportedType(f"only plain positional parameters are supported: {text!r}")
    params = tuple(Param(a.arg, _py_kind(a.annotation, text)) for a in fn.args.args)
    return Signature("Python", fn.name, params, _py_kind(fn.returns, text))


def parse_signature(text: str, language: str) -> Signature:
    if language == "C":
        return parse_c_signature(text)
    if language == "Python":
        return parse_python_signature(text)
    raise UnsupportedType(f"unknown language {language!r}")


def output_params(sig: Signature) -> tuple[Param, ...]:
    """Parameters whose post-call values are graded, for void functions."""
    if sig.return_kind != VOID:
        return ()
    return tuple(p for p in sig.params if p.kind in (INT_ARRAY, STRUCT_PTR))


def expected_slots(sig: Signature) -> int:
    """Number of values a test's `expected` must provide for this signature."""
    if sig.return_kind != VOID:
        return 1
    n = len(output_params(sig))
    if n == 0:
        raise UnsupportedType(f"void function {sig.name!r} has no gradable outputs")
    return n
