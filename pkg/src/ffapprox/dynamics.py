"""Lattices and grids under the diagonal flow.

The flow at time l multiplies the first m coordinates by Z^(l r_i) and
the last n by Z^(-l s_j).  Membership questions about flowed lattices
and grids reduce to box searches over a reduced basis, which are
F_q-linear systems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PrecisionExhausted, PreconditionError
from .geometry.context import WeightedNormContext
from .geometry.fracsys import PolyVecLayout, degree_bounds, exps_nonstrict, exps_strict, frac_rows, frac_rhs
from .geometry.lattice import (
    DEFAULT_ENUM_CAP, LatticeBasis, _to_input_coords, box_system, iter_box_vectors, reduce_basis, rs_systole,
)
from .geometry.norms import rdist, snorm, weighted_log
from .laurent import Laurent
from .linalg import nullspace, reduce_mod, rref, solve
from .logval import LogVal
from .matrix import Matrix, matvec_poly, scale_rows, shape, u_A_rows
from .poly import Poly, poly_gcd


@dataclass(frozen=True)
class Grid:
    basis: LatticeBasis
    translation: tuple[Laurent, ...]

    @property
    def d(self) -> int:
        return self.basis.d

    def is_lattice(self) -> bool:
        return all(t.is_zero() for t in self.translation)


def _zero_vec(F, d: int) -> tuple[Laurent, ...]:
    return tuple(Laurent.zero(F) for _ in range(d))


def make_uA_lattice(A: Matrix, ctx: WeightedNormContext) -> Grid:
    """u_A F_q[Z]^d with u_A = [[I, A], [0, I]]."""
    m, n = shape(A)
    if (m, n) != (ctx.m, ctx.n):
        raise PreconditionError("matrix shape does not match the weights")
    L = LatticeBasis(u_A_rows(A))
    assert L.covol_log() == LogVal(-ctx.d)
    return Grid(L, _zero_vec(A[0][0].F, ctx.d))


def make_target_grid(A: Matrix, theta: Sequence[Laurent], ctx: WeightedNormContext) -> Grid:
    """u_A F_q[Z]^d - (theta, 0)."""
    if len(theta) != ctx.m:
        raise PreconditionError("theta must have length m")
    g = make_uA_lattice(A, ctx)
    F = A[0][0].F
    t = tuple(-x for x in theta) + tuple(Laurent.zero(F) for _ in range(ctx.n))
    return Grid(g.basis, t)


def flow_exponents(ctx: WeightedNormContext, ell: int) -> list[int]:
    return [ell * r for r in ctx.r] + [-ell * s for s in ctx.s]


def apply_flow(g: Grid, ell: int, ctx: WeightedNormContext) -> Grid:
    e = flow_exponents(ctx, ell)
    rows = scale_rows(g.basis.rows, e)
    t = tuple(x.mul_Zpow(k) for x, k in zip(g.translation, e))
    return Grid(LatticeBasis(rows), t)


# -- lattices ----------------------------------------------------------------

def in_X_gt_eps(g: Grid, eps_log, ctx: WeightedNormContext, enum_cap: int = DEFAULT_ENUM_CAP) -> bool:
    """The (r, s) systole of the lattice is strictly above q^eps."""
    if not g.is_lattice():
        raise PreconditionError("systole is defined for lattices (zero translation)")
    return rs_systole(g.basis, ctx, enum_cap) > LogVal(Fraction(eps_log))


def dani_arithmetic_side(A: Matrix, ctx: WeightedNormContext, eps_log, ell: int):
    """A nonzero y with <A y>_r <= q^(eps - l) and ||y||_s <= q^(eps + l), or None."""
    eps = Fraction(eps_log)
    top = eps + ell
    if top < 0:
        return None
    F = A[0][0].F
    lay = PolyVecLayout(F, degree_bounds(top, ctx.s))
    if lay.size == 0:
        return None
    E = exps_nonstrict(eps - ell, ctx.r)
    rows = [row for _, _, row in frac_rows(A, lay, E)]
    ker = nullspace(F, rows, lay.size) if rows else [[int(i == j) for j in range(lay.size)] for i in range(lay.size)]
    if not ker:
        return None
    return lay.decode(ker[-1])


@dataclass
class Trajectory:
    rows: list[tuple[int, LogVal, bool, bool]]   # (l, systole_log, in_X_gt_eps, arithmetic solution exists)
    escape_fraction: Fraction
    eps_log: Fraction
    agree: bool


def dani_trajectory(A: Matrix, ctx: WeightedNormContext, eps_log, N: int,
                    enum_cap: int = DEFAULT_ENUM_CAP) -> Trajectory:
    """Systole of the flowed u_A lattice for l = 1..N, with the arithmetic side."""
    if N < 1:
        raise PreconditionError("N must be at least 1")
    eps = Fraction(eps_log)
    if eps >= 0:
        raise PreconditionError("eps must be below 1")
    base = make_uA_lattice(A, ctx)
    rows = []
    agree = True
    for ell in range(1, N + 1):
        g = apply_flow(base, ell, ctx)
        sys_log = rs_systole(g.basis, ctx, enum_cap)
        inside = sys_log > LogVal(eps)
        arith = dani_arithmetic_side(A, ctx, eps, ell) is not None
        if arith == inside:
            agree = False
        rows.append((ell, sys_log, inside, arith))
    out = sum(1 for r in rows if not r[2])
    return Trajectory(rows, Fraction(out, N), eps, agree)


# -- grids --------------------------------------------------------------------

def ell_eps_bounds(ctx: WeightedNormContext, eps_log) -> list[int]:
    """Integer box with log|u_k| < eps * w'_k for the L_eps weights."""
    eps = Fraction(eps_log)
    return [math.ceil(eps * w) - 1 for w in ctx.ell_weights()]


def grid_point_in_box(g: Grid, bounds: Sequence[int]):
    """Some grid vector u with log|u_k| <= bounds[k] for all k, or None."""
    red = reduce_basis(g.basis)
    F = g.basis.F
    lay, rows, rhs = box_system(red, bounds, g.translation)
    if rows:
        x0, _ = solve(F, rows, rhs, lay.size)
        if x0 is None:
            return None
    else:
        x0 = [0] * lay.size
    a = _to_input_coords(red, lay.decode(x0))
    pt = tuple(x + t for x, t in zip(g.basis.apply(a), g.translation))
    return pt


def in_L_eps(g: Grid, eps_log, ctx: WeightedNormContext) -> bool:
    """Every grid vector, including a zero one, has ||u||_(r,s) >= q^eps."""
    pt = grid_point_in_box(g, ell_eps_bounds(ctx, eps_log))
    if pt is not None:
        assert weighted_log(pt, ctx.ell_weights()) < LogVal(Fraction(eps_log))
    return pt is None


def grid_vectors(g: Grid, bounds: Sequence[int], enum_cap: int = DEFAULT_ENUM_CAP) -> list[tuple[Laurent, ...]]:
    """All grid vectors with log|u_k| <= bounds[k], in a canonical order."""
    red = reduce_basis(g.basis)
    pts = list(iter_box_vectors(red, bounds, g.translation, enum_cap))
    return sorted(pts, key=_point_key)


def _point_key(pt):
    out = []
    for x in pt:
        if x.is_zero():
            out.append((1, ()))
        else:
            v = x.valuation()
            hi = v + 64 if x.is_exact else min(v + 64, x.prec)
            out.append((0, v, tuple(x.window(v, hi))))
    return tuple(out)


def integral_solution(A: Matrix, theta: Sequence[Laurent], ctx: WeightedNormContext, horizon):
    """y with ||y||_s <= q^horizon and A y - theta in F_q[Z]^m, or None.

    Needs exact data: the fractional part of A_i y - theta_i has a known
    denominator, so it vanishes once its first deg D coefficients do.
    """
    F = A[0][0].F
    rows_all = list(A)
    for row, t in zip(rows_all, theta):
        if not all(x.is_exact for x in row) or not t.is_exact:
            raise PrecisionExhausted("the integral alternative needs exact entries")
    lay = PolyVecLayout(F, degree_bounds(Fraction(horizon), ctx.s))
    E = []
    for row, t in zip(rows_all, theta):
        den = t.backing.den
        for x in row:
            den = (den * x.backing.den) // poly_gcd(den, x.backing.den)
        E.append(den.deg())
    rows = [row for _, _, row in frac_rows(A, lay, E)]
    rhs = frac_rhs(theta, E)
    if not rows:
        return tuple(Poly.zero(F) for _ in range(ctx.n))
    x0, _ = solve(F, rows, rhs, lay.size)
    return None if x0 is None else lay.decode(x0)


@dataclass
class LepsReport:
    passed: bool
    first_failure: int | None
    checked: list[int]
    integral_solution: tuple | None
    integral_checked: bool


def eventually_in_L_eps(A: Matrix, theta: Sequence[Laurent], ctx: WeightedNormContext, eps_log,
                        T: int, N: int, alt_horizon=None) -> LepsReport:
    """in_L_eps for the flowed target grid at l = T..N, plus the integral alternative."""
    if N < T:
        raise PreconditionError("need N >= T")
    base = make_target_grid(A, theta, ctx)
    alt, checked_alt = None, False
    if alt_horizon is not None:
        try:
            alt = integral_solution(A, theta, ctx, alt_horizon)
            checked_alt = True
        except PrecisionExhausted:
            pass
    checked, first = [], None
    for ell in range(T, N + 1):
        checked.append(ell)
        if not in_L_eps(apply_flow(base, ell, ctx), eps_log, ctx):
            first = ell
            break
    return LepsReport(first is None, first, checked, alt, checked_alt)


# -- eps-bad targets ----------------------------------------------------------

def _pick_top_level(F, lay: PolyVecLayout, x0, ker, t: Fraction, s: Sequence[int]):
    """An element of x0 + span(ker) with ||x||_s exactly q^t, or None.

    Those are the elements with a nonzero coefficient in some top slot
    (degree t s_j for the j with t s_j integral).  The reduced
    representative of the coset is taken when it qualifies, otherwise it
    is shifted by the last echelon row of the kernel reaching a top slot.
    """
    top = [lay.offsets[j] for j, w in enumerate(s) if (t * w).denominator == 1 and lay.degs[j] >= 0]
    x = reduce_mod(F, x0, ker, lay.size)
    if any(x[i] for i in top):
        return x
    R, _ = rref(F, ker, lay.size)
    for row in reversed(R):
        if any(row[i] for i in top):
            return [F.add(a, b) for a, b in zip(x, row)]
    return None


@dataclass
class EpsBadResult:
    witness: tuple[Poly, ...] | None
    norm_log: LogVal | None
    dist_log: LogVal | None
    product_log: LogVal | None
    horizon: Fraction
    levels_checked: int


def is_eps_bad(A: Matrix, theta: Sequence[Laurent], eps_log, horizon_s_log, ctx: WeightedNormContext,
               min_norm_log=0, strict_horizon: bool = False) -> EpsBadResult:
    """Search x != 0 with ||x||_s <= q^horizon and ||x||_s <A x - theta>_r < q^eps.

    Levels are scanned upwards; the first level with a solution yields a
    witness of exactly that norm, the tie-break-minimal one.  A clean
    pass is only a finite-horizon statement.  ``min_norm_log`` skips
    smaller norms and ``strict_horizon`` excludes the top level itself.
    """
    m, n = shape(A)
    if (m, n) != (ctx.m, ctx.n) or len(theta) != m:
        raise PreconditionError("shapes of A, theta and the weights disagree")
    F = A[0][0].F
    eps = Fraction(eps_log)
    H = Fraction(horizon_s_log)
    lo = max(Fraction(min_norm_log), Fraction(0))
    levels = {Fraction(0)} if lo == 0 else set()
    for w in ctx.s:
        for k in range(math.ceil(lo * w), math.floor(H * w) + 1):
            levels.add(Fraction(k, w))
    levels = sorted(t for t in levels if lo <= t <= H and not (strict_horizon and t == H))
    for count, t in enumerate(levels, 1):
        lay = PolyVecLayout(F, degree_bounds(t, ctx.s))
        E = exps_strict(eps - t, ctx.r)
        rows = [row for _, _, row in frac_rows(A, lay, E)]
        if rows:
            x0, ker = solve(F, rows, frac_rhs(theta, E), lay.size)
            if x0 is None:
                continue
        else:
            x0, ker = [0] * lay.size, [[int(i == j) for j in range(lay.size)] for i in range(lay.size)]
        v = _pick_top_level(F, lay, x0, ker, t, ctx.s)
        if v is None:
            continue
        x = lay.decode(v)
        nl = snorm([Laurent.from_poly(p) for p in x], ctx.s)
        assert nl == LogVal(t)
        resid = tuple(a - t_ for a, t_ in zip(matvec_poly(A, x), theta))
        dl = rdist(resid, ctx.r)
        prod = nl + dl
        assert prod < LogVal(eps)
        return EpsBadResult(x, nl, dl, prod, H, count)
    return EpsBadResult(None, None, None, None, H, len(levels))
