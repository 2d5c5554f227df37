"""Dense linear algebra over F_q.

Vectors are lists of int-coded field elements.  The "lex order" on
vectors compares entries left to right with the int order on F_q; it
drives every deterministic choice of a nonzero solution.
"""

from __future__ import annotations

from .field import FieldSpec


def _axpy(F: FieldSpec, y: list[int], a: int, x: list[int]) -> list[int]:
    """y - a*x."""
    if F.e == 1:
        p = F.p
        return [(u - a * v) % p for u, v in zip(y, x)]
    sub, mul = F.sub, F.mul
    return [sub(u, mul(a, v)) if v else u for u, v in zip(y, x)]


def _scale(F: FieldSpec, x: list[int], a: int) -> list[int]:
    if F.e == 1:
        p = F.p
        return [u * a % p for u in x]
    return [F.mul(u, a) for u in x]


def dot(F: FieldSpec, x, y) -> int:
    if F.e == 1:
        return sum(u * v for u, v in zip(x, y)) % F.p
    s = 0
    for u, v in zip(x, y):
        if u and v:
            s = F.add(s, F.mul(u, v))
    return s


def rref(F: FieldSpec, rows, ncols: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    out: list[list[int]] = []
    col = 0
    for col in range(ncols):
        piv = None
        for k, r in enumerate(rows):
            if r[col]:
                piv = k
                break
        if piv is None:
            continue
        r = rows.pop(piv)
        if r[col] != 1:
            r = _scale(F, r, F.inv(r[col]))
        rows = [_axpy(F, x, x[col], r) if x[col] else x for x in rows]
        out = [_axpy(F, x, x[col], r) if x[col] else x for x in out]
        out.append(r)
        pivots.append(col)
        if not rows:
            break
    return out, pivots


def rank(F: FieldSpec, rows, ncols: int) -> int:
    return len(rref(F, rows, ncols)[1])


def nullspace(F: FieldSpec, rows, ncols: int) -> list[list[int]]:
    """Basis of {x : M x = 0}, returned in reduced echelon form."""
    R, piv = rref(F, rows, ncols)
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [0] * ncols
        v[f] = 1
        for r, pc in zip(R, piv):
            if r[f]:
                v[pc] = F.neg(r[f])
        basis.append(v)
    return rref(F, basis, ncols)[0] if basis else []


def solve(F: FieldSpec, rows, rhs, ncols: int):
    """(particular solution or None, kernel basis) for M x = rhs."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, piv = rref(F, aug, ncols + 1)
    if piv and piv[-1] == ncols:
        return None, nullspace(F, rows, ncols)
    x = [0] * ncols
    for r, pc in zip(R, piv):
        x[pc] = r[ncols]
    return x, nullspace(F, rows, ncols)


def lex_min_nonzero(F: FieldSpec, basis, ncols: int):
    """Smallest nonzero vector of span(basis) in lex order, or None."""
    R, _ = rref(F, basis, ncols)
    if not R:
        return None
    return R[-1]


def reduce_mod(F: FieldSpec, x, basis, ncols: int) -> list[int]:
    """Lex-smallest element of the coset x + span(basis)."""
    R, piv = rref(F, basis, ncols)
    x = list(x)
    for r, pc in zip(R, piv):
        if x[pc]:
            x = _axpy(F, x, x[pc], r)
    return x


def lex_min_nonzero_affine(F: FieldSpec, x0, basis, ncols: int):
    """Smallest nonzero vector of x0 + span(basis), or None."""
    x = reduce_mod(F, x0, basis, ncols)
    if any(x):
        return x
    return lex_min_nonzero(F, basis, ncols)


class KernelTracker:
    """Basis of {x : c.x = 0 for every added constraint c}, updated in place."""

    def __init__(self, F: FieldSpec, basis):
        self.F = F
        self.basis = [list(b) for b in basis]

    @classmethod
    def full(cls, F: FieldSpec, n: int) -> "KernelTracker":
        return cls(F, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def dim(self) -> int:
        return len(self.basis)

    def copy(self) -> "KernelTracker":
        return KernelTracker(self.F, self.basis)

    def add(self, c) -> None:
        F = self.F
        vals = [dot(F, c, b) for b in self.basis]
        k = next((i for i, v in enumerate(vals) if v), None)
        if k is None:
            return
        pb, pv = self.basis[k], vals[k]
        inv = F.inv(pv)
        new = []
        for i, (b, v) in enumerate(zip(self.basis, vals)):
            if i == k:
                continue
            new.append(_axpy(F, b, F.mul(v, inv), pb) if v else b)
        self.basis = new

    def add_all(self, cs) -> None:
        for c in cs:
            if not self.basis:
                return
            self.add(c)
