"""JSON encoding conventions shared by every report and file format.

Integers travel as decimal strings so arbitrary precision survives
round-trips; rationals as "num/den" strings.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .linalg import Matrix, Vector


def int_str(x: int) -> str:
    return str(int(x))


def parse_int(s) -> int:
    if isinstance(s, int):
        return s
    return int(str(s), 10)


def rat_str(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def parse_rat(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    txt = str(s)
    if "/" in txt:
        num, den = txt.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(txt))


def int_vector_json(v: Vector) -> list[str]:
    return [int_str(e) for e in v]


def rat_vector_json(v: Vector) -> list[str]:
    return [rat_str(e) for e in v]


def int_matrix_json(m: Matrix) -> list[list[str]]:
    return [[int_str(e) for e in row] for row in m.rows]


def parse_int_vector(data) -> Vector:
    return Vector(parse_int(e) for e in data)


def parse_rat_vector(data) -> Vector:
    return Vector(parse_rat(e) for e in data)


def parse_int_matrix(data) -> Matrix:
    return Matrix([parse_int(e) for e in row] for row in data)


def dumps(obj) -> str:
    """Deterministic human-readable JSON with a trailing newline."""
    return json.dumps(obj, indent=2) + "\n"


def dump_jsonl(records) -> str:
    return "".join(json.dumps(r) + "\n" for r in records)
