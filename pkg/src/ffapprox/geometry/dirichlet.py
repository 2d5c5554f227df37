"""Dirichlet-type solutions from the first minimum of a flowed lattice."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import PreconditionError
from ..logval import LogVal
from ..matrix import Matrix, matvec_poly, scale_rows, shape, u_A_rows
from ..poly import Poly
from .constants import dirichlet_min_rprime, dirichlet_prefactor_log, weighted_dirichlet_prefactor_log
from .context import WeightedNormContext
from .lattice import LatticeBasis, successive_minima
from .norms import rdist, snorm
from ..laurent import log_abs_int


def dirichlet_solve(A: Matrix, rprime: Sequence[int], sprime: Sequence[int]) -> tuple[Poly, ...]:
    """Nonzero y with |<A_i y>| <= q^-r'_i and |y_j| <= q^s'_j.

    y is read off the tie-break-minimal shortest vector of
    diag(Z^r', Z^-s') u_A F_q[Z]^d.
    """
    m, n = shape(A)
    if len(rprime) != m or len(sprime) != n:
        raise PreconditionError("exponent tuples do not match the matrix shape")
    if sum(rprime) != sum(sprime):
        raise PreconditionError("sum of r' must equal sum of s'")
    if any(x <= dirichlet_min_rprime() or x != int(x) for x in rprime) or any(x != int(x) for x in sprime):
        raise PreconditionError("r'_i must be integers >= 1 and s'_j integers")
    rows = scale_rows(u_A_rows(A), list(rprime) + [-s for s in sprime])
    mr = successive_minima(LatticeBasis(rows))
    y = tuple(mr.shortest[m:])
    if all(p.is_zero() for p in y):  # pragma: no cover - excluded by the first-minimum bound
        raise AssertionError("shortest vector has zero y-part")
    check_dirichlet(A, y, rprime, sprime)
    return y


def check_dirichlet(A: Matrix, y, rprime, sprime) -> None:
    c = dirichlet_prefactor_log()
    for i, v in enumerate(matvec_poly(A, y)):
        a = log_abs_int(v.frac())
        if a is not None and a > c - rprime[i]:
            raise AssertionError(f"Dirichlet bound fails in row {i}")
    for j, p in enumerate(y):
        if p.deg() > sprime[j]:
            raise AssertionError(f"Dirichlet height bound fails in coordinate {j}")


def dirichlet_weighted(A: Matrix, alpha: int, ctx: WeightedNormContext) -> tuple[Poly, ...]:
    """y with <A y>_r <= q^-alpha and ||y||_s <= q^alpha (genus-0 prefactors are 1)."""
    if alpha != int(alpha) or Fraction(alpha) < Fraction(1, min(ctx.r)) * dirichlet_min_rprime():
        raise PreconditionError("alpha must be a positive integer")
    alpha = int(alpha)
    if alpha < 1:
        raise PreconditionError("alpha must be a positive integer")
    y = dirichlet_solve(A, [alpha * r for r in ctx.r], [alpha * s for s in ctx.s])
    ok, _ = dirichlet_weighted_holds(A, y, alpha, ctx)
    if not ok:  # pragma: no cover
        raise AssertionError("weighted Dirichlet postcondition failed")
    return y


def dirichlet_weighted_holds(A: Matrix, y, alpha: int, ctx: WeightedNormContext):
    """Independent check; returns (ok, (rdist log, snorm log))."""
    from ..laurent import Laurent

    pre = weighted_dirichlet_prefactor_log(min(ctx.r))
    d_log = rdist(matvec_poly(A, y), ctx.r)
    h_log = snorm([Laurent.from_poly(p) for p in y], ctx.s)
    ok = any(not p.is_zero() for p in y) and d_log <= LogVal(pre - alpha) and h_log <= LogVal(pre + alpha)
    return ok, (d_log, h_log)
