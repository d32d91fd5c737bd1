import pytest

from promptprog import signatures as sig
from promptprog.signatures import UnsupportedType, parse_c_signature, parse_python_signature


def test_c_scalar_function():
    s = parse_c_signature("int count_negatives(int *arr, int n)")
    assert s.name == "count_negatives"
    assert [p.kind for p in s.params] == [sig.INT_ARRAY, sig.INT]
    assert s.return_kind == sig.INT


def test_c_void_with_outputs():
    s = parse_c_signature("void sort_subarray(int *arr, int n, int start, int end)")
    assert s.return_kind == sig.VOID
    assert [p.name for p in sig.output_params(s)] == ["arr"]
    assert sig.expected_slots(s) == 1


def test_c_struct_pointer_and_string():
    s = parse_c_signature("void navigate(struct Robot *r, char *commands)")
    assert s.params[0].kind == sig.STRUCT_PTR
    assert s.params[0].struct_name == "Robot"
    assert s.params[1].kind == sig.STR
    # char* is input-only: only the struct is graded
    assert [p.name for p in sig.output_params(s)] == ["r"]


def test_c_char_param_and_array_syntax():
    s = parse_c_signature("int is_open_paren(char c)")
    assert s.params[0].kind == sig.CHAR
    s2 = parse_c_signature("int total(int values[], int n)")
    assert s2.params[0].kind == sig.INT_ARRAY


def test_c_const_is_stripped():
    s = parse_c_signature("int length(const char *s)")
    assert s.params[0].kind == sig.STR


@pytest.mark.parametrize(
    "bad",
    [
        "int f(unsigned long x)",
        "int *f(int n)",
        "float *f(int n)",
        "int f(void (*cb)(int))",
        "not a signature",
        "void f(int a)" + ") extra",
    ],
)
def test_c_unsupported(bad):
    with pytest.raises(UnsupportedType):
        parse_c_signature(bad)


def test_c_void_without_outputs_has_no_expected_slots():
    s = parse_c_signature("void log_message(char *msg)")
    with pytest.raises(UnsupportedType):
        sig.expected_slots(s)


def test_python_signature():
    s = parse_python_signature("def sort_subarray(arr: list[int], start: int, end: int) -> None")
    assert s.language == "Python"
    assert [p.kind for p in s.params] == [sig.INT_ARRAY, sig.INT, sig.INT]
    assert s.return_kind == sig.VOID
    assert sig.expected_slots(s) == 1


def test_python_signature_without_def_prefix():
    s = parse_python_signature("mean(xs: list[int]) -> float")
    assert s.name == "mean"
    assert s.return_kind == sig.DOUBLE


@pytest.mark.parametrize(
    "bad",
    [
        "def f(x) -> int",  # missing annotation
        "def f(x: dict) -> int",
        "def f(*args: int) -> int",
        "def f(x: int)",  # missing return annotation
    ],
)
def test_python_unsupported(bad):
    with pytest.raises(UnsupportedType):
        parse_python_signature(bad)
