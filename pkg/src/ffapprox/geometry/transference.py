"""Transference between a system and its transpose.

The construction goes through the pseudocompound of a parallelepiped:
a small solution y of the system for A gives a point z of the dual
lattice inside the pseudocompound, and a shortest vector of an
auxiliary lattice built from z yields a solution x for the transpose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import PreconditionError, YTooSmall
from ..laurent import Laurent, log_abs_int
from ..logval import LogVal
from ..matrix import Matrix, matvec_poly, shape, transpose
from ..poly import Poly
from .constants import KappaConstants, kappa_from_weights
from .context import WeightedNormContext
from .lattice import LatticeBasis, successive_minima
from .norms import rdist, rnorm, sdist, snorm


@dataclass(frozen=True)
class Parallelepiped:
    """{xi : |xi_k| <= q^alpha[k]}."""

    alpha: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.alpha)

    def contains(self, xi: Sequence[Laurent]) -> bool:
        for x, a in zip(xi, self.alpha):
            v = log_abs_int(x)
            if v is not None and v > a:
                return False
        return True


def pseudocompound(P: Parallelepiped) -> Parallelepiped:
    """Exponents alpha - alpha_k with alpha the sum."""
    a = P.total
    return Parallelepiped(tuple(a - x for x in P.alpha))


def kappa_constants(ctx: WeightedNormContext) -> KappaConstants:
    if ctx.d < 2:
        raise PreconditionError("transference needs d >= 2")
    return kappa_from_weights(ctx.r, ctx.s)


def _int_log(x: LogVal, name: str) -> int:
    if not x.is_finite or x.value.denominator != 1:
        raise PreconditionError(f"{name} must be an exact integer power of q")
    return int(x.value)


@dataclass
class TransferResult:
    x: tuple[Poly, ...]
    X_log: Fraction
    dist_log: LogVal          # log <tA x>_s
    norm_log: LogVal          # log ||x||_r
    dist_bound: Fraction      # k1 + k2 eps_log - X_log
    kappa: KappaConstants
    alpha_delta: int
    alpha_Z: int
    kappa0: int

    def holds(self) -> bool:
        return self.dist_log <= LogVal(self.dist_bound) and self.norm_log <= LogVal(self.X_log)


def transfer_parameters(ctx: WeightedNormContext, a_eps: int):
    """(alpha_delta, alpha_Z) for a given eps exponent in the transference bound."""
    S, mr, ms = ctx.weight_sum, min(ctx.r), min(ctx.s)
    denom = S * (Fraction(1, mr) + Fraction(1, ms)) - 1
    a_delta = math.floor(Fraction(a_eps - 1) / denom)
    a_Z = math.ceil((Fraction(S, ms) - 1) * a_delta)
    return a_delta, a_Z


def transfer(A: Matrix, y: Sequence[Poly], eps_log, Y_log, ctx: WeightedNormContext) -> TransferResult:
    """Nonzero x with <tA x>_s <= q^k1 eps^k2 / X and ||x||_r <= X = q^k3 eps^-k4 Y."""
    m, n = shape(A)
    if (m, n) != (ctx.m, ctx.n):
        raise PreconditionError("matrix shape does not match the weights")
    e_log = _int_log(LogVal.parse(eps_log) if not isinstance(eps_log, LogVal) else eps_log, "eps")
    y_log = _int_log(LogVal.parse(Y_log) if not isinstance(Y_log, LogVal) else Y_log, "Y")
    if e_log > -1:
        raise PreconditionError("eps must be at most q^-1")
    if y_log < 1:
        raise PreconditionError("Y must be at least q")
    y = tuple(y)
    if len(y) != n or all(p.is_zero() for p in y):
        raise PreconditionError("y must be a nonzero vector of length n")
    Ay = matvec_poly(A, y)
    if rdist(Ay, ctx.r) > LogVal(e_log - y_log):
        raise PreconditionError("y violates <Ay>_r <= eps / Y")
    if snorm([Laurent.from_poly(p) for p in y], ctx.s) > LogVal(y_log):
        raise PreconditionError("y violates ||y||_s <= Y")

    K = kappa_constants(ctx)
    beta = K.beta
    a_eps = -e_log
    a_delta, a_Z = transfer_parameters(ctx, a_eps)
    alpha = tuple(r * (a_Z + y_log) for r in ctx.r) + tuple(-s * (a_delta + a_Z + y_log) for s in ctx.s)
    Pstar = pseudocompound(Parallelepiped(alpha))

    F = A[0][0].F
    z = tuple(v.frac() for v in Ay) + tuple(Laurent.from_poly(p) for p in y)
    if not Pstar.contains(z):  # pragma: no cover - guaranteed by the parameter choice
        raise AssertionError("dual point outside the pseudocompound")
    slack = []
    for k, zk in enumerate(z):
        v = log_abs_int(zk)
        if v is not None:
            slack.append((Pstar.alpha[k] - v, k))
    kappa0, kstar = min(slack)

    # rows of F = [[I, 0], [-tA, I]]
    tA = transpose(A)
    one, zero = Laurent.const(F, 1), Laurent.zero(F)
    Frows = []
    for i in range(m):
        Frows.append(tuple(one if k == i else zero for k in range(m + n)))
    for j in range(n):
        Frows.append(tuple(-tA[j][i] for i in range(m)) + tuple(one if k == j else zero for k in range(n)))
    d = m + n
    Mrows = []
    for k in range(d):
        if k == kstar:
            row = []
            for c in range(d):
                acc = Laurent.zero(F)
                for t in range(d):
                    if not z[t].is_zero() and not Frows[t][c].is_zero():
                        acc = acc + z[t] * Frows[t][c]
                row.append(acc.shift(-1))
            Mrows.append(tuple(row))
        else:
            Mrows.append(tuple(x.shift(beta + alpha[k]) for x in Frows[k]))
    w = successive_minima(LatticeBasis(Mrows)).shortest
    x = tuple(w[:m])
    if all(p.is_zero() for p in x):
        raise YTooSmall("the constructed x vanishes: Y is too small for this eps")

    X_log = K.k3 - K.k4 * e_log + y_log
    tAx = matvec_poly(tA, x)
    res = TransferResult(
        x=x, X_log=X_log,
        dist_log=sdist(tAx, ctx.s),
        norm_log=rnorm([Laurent.from_poly(p) for p in x], ctx.r),
        dist_bound=K.k1 + K.k2 * e_log - X_log,
        kappa=K, alpha_delta=a_delta, alpha_Z=a_Z, kappa0=kappa0,
    )
    return res
