"""Brute-force reference implementations for every shipped function.

These are the independent oracle side of the grading pipeline: direct Python
evaluation of each function's contract, with no knowledge of drivers,
compilers, or the C reference solutions. Each oracle takes the problem's
test inputs verbatim and returns the graded observables (the return value,
or the post-call state of mutable arguments).
"""


# ---- L7 ------------------------------------------------------------------

def count_negatives(arr, n):
    return sum(1 for x in arr[:n] if x < 0)


def sum_evens(arr, n):
    return sum(x for x in arr[:n] if x % 2 == 0)


def last_zero_index(arr, n):
    last = -1
    for i in range(n):
        if arr[i] == 0:
            last = i
    return last


# ---- L9 ------------------------------------------------------------------

def sort_subarray(arr, n, start, end):
    out = list(arr[:n])
    out[start : end + 1] = sorted(out[start : end + 1])
    return out


def propagate_ones(mat, rows, cols):
    out = list(mat)
    hot_rows = {i for i in range(rows) for j in range(cols) if mat[i * cols + j] == 1}
    hot_cols = {j for i in range(rows) for j in range(cols) if mat[i * cols + j] == 1}
    for i in range(rows):
        for j in range(cols):
            if i in hot_rows or j in hot_cols:
                out[i * cols + j] = 1
    return out


def add_binary(a, b, result, n):
    total = int("".join(map(str, a)) or "0", 2) + int("".join(map(str, b)) or "0", 2)
    bits = bin(total)[2:].zfill(n + 1)
    return [list(a), list(b), [int(ch) for ch in bits]]


# ---- L10: password validation ---------------------------------------------

def has_digit(s):
    return int(any(c.isdigit() for c in s))


def has_upper(s):
    return int(any("A" <= c <= "Z" for c in s))


def has_special(s):
    return int(any(not (c.isdigit() or "a" <= c <= "z" or "A" <= c <= "Z") for c in s))


def is_valid_password(s):
    return int(len(s) >= 8 and has_digit(s) and has_upper(s) and has_special(s))


# ---- L10: robot navigation -------------------------------------------------
# dir: 0 = north (+y), 1 = east (+x), 2 = south (-y), 3 = west (-x)

def turn_left(robot):
    out = dict(robot)
    out["dir"] = (out["dir"] + 3) % 4
    return out


def turn_right(robot):
    out = dict(robot)
    out["dir"] = (out["dir"] + 1) % 4
    return out


def advance(robot, steps):
    out = dict(robot)
    dx = {0: 0, 1: 1, 2: 0, 3: -1}[out["dir"]]
    dy = {0: 1, 1: 0, 2: -1, 3: 0}[out["dir"]]
    out["x"] += dx * steps
    out["y"] += dy * steps
    return out


def navigate(robot, commands):
    out = dict(robot)
    for c in commands:
        if c == "L":
            out = turn_left(out)
        elif c == "R":
            out = turn_right(out)
        elif c == "A":
            out = advance(out, 1)
    return out


# ---- L10: balanced parentheses ---------------------------------------------

def is_open_paren(c):
    return int(c == "(")


def is_close_paren(c):
    return int(c == ")")


def is_balanced(expr):
    depth = 0
    for c in expr:
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
            if depth < 0:
                return 0
    return int(depth == 0)


ORACLES = {
    "count-negatives": {"count_negatives": count_negatives},
    "sum-evens": {"sum_evens": sum_evens},
    "last-zero-index": {"last_zero_index": last_zero_index},
    "subarray-sort": {"sort_subarray": sort_subarray},
    "matrix-propagate-ones": {"propagate_ones": propagate_ones},
    "binary-add": {"add_binary": add_binary},
    "password-validation": {
        "has_digit": has_digit,
        "has_upper": has_upper,
        "has_special": has_special,
        "is_valid_password": is_valid_password,
    },
    "robot-navigation": {
        "turn_left": turn_left,
        "turn_right": turn_right,
        "advance": advance,
        "navigate": navigate,
    },
    "balanced-parentheses": {
        "is_open_paren": is_open_paren,
        "is_close_paren": is_close_paren,
        "is_balanced": is_balanced,
    },
}
