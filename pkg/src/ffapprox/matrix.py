"""Small helpers for matrices of Laurent series (tuples of rows)."""

from __future__ import annotations

from typing import Sequence

from .errors import PreconditionError
from .field import FieldSpec
from .laurent import Laurent
from .poly import Poly

Matrix = tuple  # tuple of rows, each a tuple of Laurent


def as_matrix(rows: Sequence[Sequence[Laurent]]) -> Matrix:
    rows = tuple(tuple(r) for r in rows)
    if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
        raise PreconditionError("matrix rows must be nonempty and of equal length")
    return rows


def shape(A: Matrix) -> tuple[int, int]:
    return len(A), len(A[0])


def field_of(A: Matrix) -> FieldSpec:
    return A[0][0].F


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def zeros(F: FieldSpec, m: int, n: int) -> Matrix:
    z = Laurent.zero(F)
    return tuple(tuple(z for _ in range(n)) for _ in range(m))


def matvec_poly(A: Matrix, y: Sequence[Poly]) -> tuple[Laurent, ...]:
    """A y for a polynomial vector y."""
    F = field_of(A)
    out = []
    for row in A:
        acc = Laurent.zero(F)
        for a, p in zip(row, y):
            if not p.is_zero() and not a.is_zero():
                acc = acc + a * p
        out.append(acc)
    return tuple(out)


def u_A_rows(A: Matrix) -> Matrix:
    """[[I_m, A], [0, I_n]]."""
    m, n = shape(A)
    F = field_of(A)
    one, zero = Laurent.const(F, 1), Laurent.zero(F)
    rows = []
    for i in range(m):
        rows.append(tuple(one if k == i else zero for k in range(m)) + tuple(A[i]))
    for j in range(n):
        rows.append(tuple(zero for _ in range(m)) + tuple(one if k == j else zero for k in range(n)))
    return tuple(rows)


def scale_rows(rows: Matrix, Zexps: Sequence[int]) -> Matrix:
    """diag(Z^e_k) @ rows."""
    return tuple(tuple(x.mul_Zpow(e) for x in r) for r, e in zip(rows, Zexps))


def polys_to_laurent(v: Sequence[Poly]) -> tuple[Laurent, ...]:
    return tuple(Laurent.from_poly(p) for p in v)
