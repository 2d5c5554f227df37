"""F_q[Z]-lattices in K_v^d: covolume, reduction, minima, weighted systole.

A lattice is stored by a d x d basis matrix ``rows`` whose columns are
the basis vectors; lattice points are ``rows @ a`` for a in F_q[Z]^d.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import BudgetExceeded, PrecisionExhausted, PreconditionError
from ..field import FieldSpec
from ..laurent import INF, Laurent
from ..linalg import lex_min_nonzero, nullspace, rref, solve
from ..logval import NEG_INF, LogVal
from ..poly import Poly
from .constants import covolume_log_normalization
from .fracsys import PolyVecLayout
from .norms import weighted_log

DEFAULT_ENUM_CAP = 1 << 20
DEFAULT_PREC_CAP = 1 << 13


def _permutations_with_sign(d: int):
    for perm in itertools.permutations(range(d)):
        inv = sum(1 for i in range(d) for j in range(i + 1, d) if perm[i] > perm[j])
        yield perm, inv % 2


def determinant(rows: Sequence[Sequence[Laurent]]) -> Laurent:
    """Leibniz expansion (d is small), precision tracked by Laurent arithmetic."""
    d = len(rows)
    F = rows[0][0].F
    total = Laurent.zero(F)
    for perm, odd in _permutations_with_sign(d):
        term = Laurent.const(F, 1)
        for i in range(d):
            term = term * rows[i][perm[i]]
            if term.is_zero():
                break
        if term.is_zero():
            continue
        total = total - term if odd else total + term
    return total


class LatticeBasis:
    """Basis matrix of an F_q[Z]-lattice; columns are the basis vectors."""

    __slots__ = ("rows", "F", "_covol")

    def __init__(self, rows: Sequence[Sequence[Laurent]]):
        rows = tuple(tuple(r) for r in rows)
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise PreconditionError("lattice basis must be a nonempty square matrix")
        self.rows = rows
        self.F = rows[0][0].F
        self._covol = None

    @property
    def d(self) -> int:
        return len(self.rows)

    def col(self, k: int) -> tuple[Laurent, ...]:
        return tuple(r[k] for r in self.rows)

    @property
    def is_exact(self) -> bool:
        return all(x.is_exact for r in self.rows for x in r)

    def covol_log(self) -> LogVal:
        """log_q Covol = -v(det) + covolume normalization (= -d at genus 0)."""
        if self._covol is None:
            det = determinant(self.rows)
            v = det.valuation()
            if v is INF:
                raise PreconditionError("singular basis")
            self._covol = LogVal(-v + covolume_log_normalization(self.d))
        return self._covol

    def apply(self, a: Sequence[Poly]) -> tuple[Laurent, ...]:
        """The lattice point rows @ a."""
        out = []
        for r in self.rows:
            acc = Laurent.zero(self.F)
            for x, p in zip(r, a):
                if not p.is_zero():
                    acc = acc + x * p
            out.append(acc)
        return tuple(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, LatticeBasis) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"LatticeBasis({[list(r) for r in self.rows]!r})"


def identity_basis(F: FieldSpec, d: int) -> LatticeBasis:
    one, zero = Laurent.const(F, 1), Laurent.zero(F)
    return LatticeBasis([[one if i == j else zero for j in range(d)] for i in range(d)])


def diagonal_basis(F: FieldSpec, Zexps: Sequence[int]) -> LatticeBasis:
    """diag(Z^e_1, ..., Z^e_d)."""
    d = len(Zexps)
    zero = Laurent.zero(F)
    return LatticeBasis([[Laurent.monomial(F, -Zexps[i]) if i == j else zero for j in range(d)] for i in range(d)])


# -- reduction ----------------------------------------------------------------

def _col_level(col: Sequence[Laurent]):
    """(c, leading vector) with c = max_i deg(col_i); raises if undecidable."""
    best = None
    known = []
    unknown_floor = None  # max of -prec over entries with no known digit
    for x in col:
        if x.is_zero():
            known.append(None)
            continue
        try:
            v = x.valuation()
        except PrecisionExhausted:
            known.append(None)
            u = -x.prec
            unknown_floor = u if unknown_floor is None else max(unknown_floor, u)
            continue
        known.append(-v)
        if best is None or -v > best:
            best = -v
    if best is None:
        raise PrecisionExhausted("column with no decidable entry")
    if unknown_floor is not None and unknown_floor >= best:
        raise PrecisionExhausted("an undecided entry may reach the leading level")
    lv = [x.coeff(-best) if deg == best else 0 for x, deg in zip(col, known)]
    return best, lv


@dataclass
class ReducedBasis:
    """Columns cols[k] = lattice.rows @ U[k], sorted by sup-norm; leading vectors independent."""

    lattice: LatticeBasis
    cols: list
    norms: list
    U: list
    exact: bool

    @property
    def d(self) -> int:
        return len(self.cols)

    def minima(self) -> tuple[LogVal, ...]:
        return tuple(LogVal(c) for c in self.norms)


def _reduce_columns(F: FieldSpec, cols, U, budget_steps: int):
    d = len(cols)
    steps = 0
    while True:
        info = [_col_level(c) for c in cols]
        order = sorted(range(d), key=lambda k: (info[k][0], k))
        ech = []  # (pivot, vector, combo) with vector[pivot] = 1
        dep = None
        for k in order:
            v = list(info[k][1])
            combo = {k: 1}
            for pc, rv, rc in ech:
                f = v[pc]
                if f:
                    v = [F.sub(a, F.mul(f, b)) for a, b in zip(v, rv)]
                    for i, c in rc.items():
                        combo[i] = F.sub(combo.get(i, 0), F.mul(f, c))
            nz = next((i for i, a in enumerate(v) if a), None)
            if nz is None:
                dep = (k, combo)
                break
            inv = F.inv(v[nz])
            v = [F.mul(a, inv) for a in v]
            combo = {i: F.mul(c, inv) for i, c in combo.items()}
            ech.append((nz, v, combo))
        if dep is None:
            return cols, U, [info[k][0] for k in range(d)]
        steps += 1
        if steps > budget_steps:
            raise BudgetExceeded("reduction did not finish within its step budget")
        k, combo = dep
        ck = info[k][0]
        newcol = list(cols[k])
        newU = list(U[k])
        for i, c in combo.items():
            if i == k or not c:
                continue
            sh = ck - info[i][0]
            for t in range(d):
                if not cols[i][t].is_zero():
                    newcol[t] = newcol[t] + cols[i][t].mul_Zpow(sh).scale(c)
                if not U[i][t].is_zero():
                    newU[t] = newU[t] + U[i][t].shift(sh).scale(c)
        cols[k] = newcol
        U[k] = newU


def reduce_basis(L: LatticeBasis, prec_cap: int = DEFAULT_PREC_CAP) -> ReducedBasis:
    """Column reduction until the leading vectors are independent over F_q.

    For exact input the work is done on truncations and the result is
    recomputed exactly from the transformation matrix, then re-checked.
    """
    F, d = L.F, L.d
    exact = L.is_exact
    if exact:
        degs = [-x.valuation() for r in L.rows for x in r if not x.is_zero()]
        cmax = max(degs) if degs else 0
        span = cmax - min(degs) if degs else 0
        logdet = L.covol_log().value - covolume_log_normalization(d)
        N = 2 * (d * abs(cmax) + abs(int(logdet)) + span) + 8
    else:
        N = None
    steps_cap = 10_000 + 100 * d * d
    while True:
        if exact:
            cols = [[L.rows[t][k].truncate(N) for t in range(d)] for k in range(d)]
        else:
            cols = [[L.rows[t][k] for t in range(d)] for k in range(d)]
        U = [[Poly.const(F, 1) if t == k else Poly.zero(F) for t in range(d)] for k in range(d)]
        try:
            cols, U, norms = _reduce_columns(F, cols, U, steps_cap)
        except PrecisionExhausted:
            if not exact or N >= prec_cap:
                raise
            N *= 2
            continue
        break
    if exact:
        cols = [list(L.apply(U[k])) for k in range(d)]
        info = [_col_level(c) for c in cols]
        norms = [c for c, _ in info]
        lvs = [lv for _, lv in info]
        if len(rref(F, lvs, d)[1]) != d:  # pragma: no cover - certificate failure
            raise AssertionError("reduction certificate failed on exact recomputation")
    order = sorted(range(d), key=lambda k: (norms[k], k))
    return ReducedBasis(L, [tuple(cols[k]) for k in order], [norms[k] for k in order],
                        [tuple(U[k]) for k in order], exact)


def _poly_key(p: Poly):
    return (p.deg(), tuple(reversed(p.coeffs)))


def vec_key(w: Sequence[Poly]):
    """The lex order on coefficient tuples used for tie-breaking."""
    return tuple(_poly_key(p) for p in w)


def _lexmin_in_span(F: FieldSpec, vectors: list[tuple[Poly, ...]]):
    """Lex-smallest nonzero F_q-combination of polynomial vectors."""
    n = len(vectors[0])
    degs = [max(v[j].deg() for v in vectors) for j in range(n)]
    lay = PolyVecLayout(F, degs)
    enc = [lay.encode(v) for v in vectors]
    best = lex_min_nonzero(F, enc, lay.size)
    return lay.decode(best)


@dataclass
class MinimaResult:
    logs: tuple[LogVal, ...]
    vectors: list          # coefficient vectors (in the input basis) realizing each minimum
    shortest: tuple        # tie-break-minimal lambda_1 coefficient vector
    reduced: ReducedBasis


def successive_minima(L: LatticeBasis, prec_cap: int = DEFAULT_PREC_CAP) -> MinimaResult:
    red = reduce_basis(L, prec_cap)
    lam1 = red.norms[0]
    tied = [red.U[k] for k in range(red.d) if red.norms[k] == lam1]
    shortest = _lexmin_in_span(L.F, tied)
    return MinimaResult(red.minima(), list(red.U), shortest, red)


# -- box spaces ---------------------------------------------------------------

def box_system(red: ReducedBasis, bounds: Sequence[int], translation=None, enum_cap: int = DEFAULT_ENUM_CAP):
    """Linear system for {a : |(B a + t)_k| <= q^bounds[k]}.

    Returns (layout over the reduced coordinates, rows, rhs).  Degrees of
    a are bounded using the predictable-degree property of the reduced
    basis.  bounds[k] may be None, meaning coordinate k must vanish
    exactly, which is only supported without translation for exact data.
    """
    F, d = red.lattice.F, red.d
    top = max(bounds)
    if translation is not None:
        tdeg = [-t.valuation() for t in translation if not t.is_zero() and t.valuation() is not INF]
        if tdeg:
            top = max(top, max(tdeg))
    degs = [top - c for c in red.norms]
    lay = PolyVecLayout(F, degs)
    if lay.size > enum_cap:
        raise BudgetExceeded(f"box system with {lay.size} unknowns exceeds the cap")
    rows, rhs = [], []
    for k in range(d):
        for g in range(bounds[k] + 1, top + 1):
            row = [0] * lay.size
            for i in range(d):
                D = lay.degs[i]
                if D < 0:
                    continue
                x = red.cols[i][k]
                if x.is_zero():
                    continue
                w = x.window(-g, -g + D + 1)
                off = lay.offsets[i]
                for t in range(D + 1):
                    row[off + D - t] = w[t]
            rows.append(row)
            if translation is not None:
                rhs.append(F.neg(translation[k].coeff(-g)))
            else:
                rhs.append(0)
    return lay, rows, rhs


def _to_input_coords(red: ReducedBasis, a: Sequence[Poly]) -> tuple[Poly, ...]:
    F, d = red.lattice.F, red.d
    out = []
    for t in range(d):
        acc = Poly.zero(F)
        for i in range(d):
            if not a[i].is_zero():
                acc = acc + red.U[i][t] * a[i]
        out.append(acc)
    return tuple(out)


def box_nonzero_space(red: ReducedBasis, bounds: Sequence[int], enum_cap: int = DEFAULT_ENUM_CAP):
    """Basis (in input coordinates) of the lattice vectors inside the box."""
    lay, rows, _ = box_system(red, bounds, None, enum_cap)
    ker = nullspace(red.lattice.F, rows, lay.size) if rows else _identity(lay.size)
    return [_to_input_coords(red, lay.decode(v)) for v in ker]


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def weighted_norm_of(L: LatticeBasis, w: Sequence[Poly], weights) -> LogVal:
    return weighted_log(L.apply(w), weights)


def weighted_minimum(L: LatticeBasis, weights: Sequence, enum_cap: int = DEFAULT_ENUM_CAP,
                     minima: MinimaResult | None = None):
    """min over nonzero lattice vectors of max_k log|v_k| / weights[k].

    Returns (value, tie-break-minimal realizing coefficient vector).
    """
    weights = [Fraction(w) for w in weights]
    mr = minima or successive_minima(L)
    red = mr.reduced
    lam1 = red.norms[0]
    ub = weighted_norm_of(L, mr.shortest, weights).value
    lb = Fraction(lam1) / (max(weights) if lam1 >= 0 else min(weights))
    cands = set()
    for w in weights:
        for g in range(math.ceil(lb * w), math.floor(ub * w) + 1):
            cands.add(Fraction(g) / w)
    cands = sorted(c for c in cands if lb <= c <= ub)
    if not cands or cands[-1] != ub:
        cands.append(ub)

    def space(sig):
        return box_nonzero_space(red, [math.floor(sig * w) for w in weights], enum_cap)

    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if space(cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    sig = cands[lo]
    basis = space(sig)
    vec = _lexmin_in_span(L.F, basis)
    val = weighted_norm_of(L, vec, weights)
    assert val.value == sig, (val, sig)
    return LogVal(sig), vec


def rs_systole(L: LatticeBasis, ctx, enum_cap: int = DEFAULT_ENUM_CAP) -> LogVal:
    """min over nonzero (theta, xi) in L of max(||theta||_r, ||xi||_s)."""
    if L.d != ctx.d:
        raise PreconditionError("lattice dimension differs from m + n")
    return weighted_minimum(L, ctx.weights, enum_cap)[0]


def iter_box_vectors(red: ReducedBasis, bounds: Sequence[int], translation=None,
                     enum_cap: int = DEFAULT_ENUM_CAP):
    """Explicitly enumerate all points (B a + t) inside the box."""
    F = red.lattice.F
    lay, rows, rhs = box_system(red, bounds, translation, enum_cap)
    if rows:
        x0, ker = solve(F, rows, rhs, lay.size)
        if x0 is None:
            return
    else:
        x0, ker = [0] * lay.size, _identity(lay.size)
    if F.q ** len(ker) > enum_cap:
        raise BudgetExceeded(f"{F.q ** len(ker)} vectors exceed the enumeration cap")
    for coeffs in itertools.product(range(F.q), repeat=len(ker)):
        v = list(x0)
        for c, b in zip(coeffs, ker):
            if c:
                v = [F.add(x, F.mul(c, y)) for x, y in zip(v, b)]
        a = lay.decode(v)
        pt = list(red.lattice.apply(_to_input_coords(red, a)))
        if translation is not None:
            pt = [x + t for x, t in zip(pt, translation)]
        yield tuple(pt)


__all__ = [
    "LatticeBasis", "determinant", "identity_basis", "diagonal_basis", "reduce_basis",
    "ReducedBasis", "successive_minima", "MinimaResult", "rs_systole", "weighted_minimum",
    "box_system", "box_nonzero_space", "iter_box_vectors", "vec_key", "NEG_INF",
]
