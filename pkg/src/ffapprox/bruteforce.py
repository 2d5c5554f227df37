"""Exhaustive-enumeration oracles.

These walk every coefficient vector up to a degree bound and share as
little code as possible with the linear-algebra implementations they
check: norms are read off exact rational functions directly rather than
through Laurent expansions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, PreconditionError
from .field import FieldSpec
from .logval import NEG_INF, LogVal
from .poly import Poly, RatFunc, poly_gcd

DEFAULT_CAP = 1 << 18


def _deg(f: RatFunc) -> int | None:
    """log_q |f| at infinity, None for zero."""
    if f.is_zero():
        return None
    return f.num.deg() - f.den.deg()


def _frac_deg(f: RatFunc) -> int | None:
    """log_q of the distance from f to F_q[Z]."""
    r = f.num % f.den
    if r.is_zero():
        return None
    return r.deg() - f.den.deg()


def polys_up_to(F: FieldSpec, D: int) -> list[Poly]:
    """Every polynomial of degree <= D (zero included), in int-code order."""
    if D < 0:
        return [Poly.zero(F)]
    return [Poly(F, list(reversed(cs))) for cs in product(range(F.q), repeat=D + 1)]


def vectors_up_to(F: FieldSpec, degs: Sequence[int], cap: int = DEFAULT_CAP) -> Iterator[tuple[Poly, ...]]:
    total = 1
    for D in degs:
        total *= F.q ** (D + 1) if D >= 0 else 1
    if total > cap:
        raise BudgetExceeded(f"brute force would visit {total} vectors (cap {cap})")
    pools = [polys_up_to(F, D) for D in degs]
    return product(*pools)


# -- rational linear algebra ---------------------------------------------------------

def _rf(F: FieldSpec, x) -> RatFunc:
    return x if isinstance(x, RatFunc) else RatFunc(x if isinstance(x, Poly) else Poly.const(F, x))


def ratfunc_inverse(M: Sequence[Sequence[RatFunc]]) -> list[list[RatFunc]]:
    """Gauss-Jordan inverse over F_q(Z)."""
    d = len(M)
    F = M[0][0].F
    one, zero = _rf(F, 1), _rf(F, 0)
    aug = [list(M[i]) + [one if j == i else zero for j in range(d)] for i in range(d)]
    for c in range(d):
        piv = next((i for i in range(c, d) if not aug[i][c].is_zero()), None)
        if piv is None:
            raise PreconditionError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = aug[c][c].inverse()
        aug[c] = [x * inv for x in aug[c]]
        for i in range(d):
            if i != c and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[d:] for row in aug]


class RankTracker:
    """Incremental rank of vectors over F_q(Z)."""

    def __init__(self, F: FieldSpec):
        self.F = F
        self.rows: list[tuple[int, list[RatFunc]]] = []

    def add(self, v: Sequence) -> bool:
        """Insert v; True if it was independent of what came before."""
        w = [_rf(self.F, x) for x in v]
        for piv, row in self.rows:
            if not w[piv].is_zero():
                f = w[piv]
                w = [a - f * b for a, b in zip(w, row)]
        k = next((i for i, x in enumerate(w) if not x.is_zero()), None)
        if k is None:
            return False
        inv = w[k].inverse()
        self.rows.append((k, [x * inv for x in w]))
        return True


# -- successive minima -----------------------------------------------------------------

def lattice_ratfuncs(rows) -> list[list[RatFunc]]:
    """RatFunc entries of a basis given as rows of exact Laurent elements."""
    out = []
    for row in rows:
        r = []
        for x in row:
            if not x.is_exact:
                raise PreconditionError("brute-force minima need exact entries")
            r.append(x.backing)
        out.append(r)
    return out


def brute_minima(rows, cap: int = DEFAULT_CAP) -> tuple[list[Fraction], list[tuple[Poly, ...]]]:
    """Successive minima of the lattice whose basis vectors are the columns of ``rows``.

    If |B a| <= q^c then |a| <= |B^-1| q^c, so coefficient degrees up to
    deg B^-1 + max column norm cover every vector needed for lambda_d.
    Returns the minima (log_q) and a realizing vector for each.
    """
    B = lattice_ratfuncs(rows)
    d = len(B)
    F = B[0][0].F
    Binv = ratfunc_inverse(B)
    inv_deg = max(_deg(x) for row in Binv for x in row if not x.is_zero())
    col_norm = max(max(_deg(B[i][k]) for i in range(d) if not B[i][k].is_zero()) for k in range(d))
    D = inv_deg + col_norm
    if F.e == 1:
        found = _prime_field_norms(B, D, cap)
    else:
        found = []
        for a in vectors_up_to(F, [D] * d, cap):
            if all(p.is_zero() for p in a):
                continue
            comps = [sum((B[i][k] * RatFunc(a[k]) for k in range(d)), _rf(F, 0)) for i in range(d)]
            found.append((max(_deg(c) for c in comps if not c.is_zero()), a))
        found.sort(key=lambda t: t[0])
    rt = RankTracker(F)
    logs, vecs = [], []
    for norm, a in found:
        if rt.add(a):
            logs.append(Fraction(norm))
            vecs.append(a)
            if len(logs) == d:
                break
    return logs, vecs


def _prime_field_norms(B, D: int, cap: int):
    """Norms of B a for every nonzero a of degree <= D, vectorised mod p.

    Clearing the common denominator g turns B a into (N a) / g with N
    polynomial, and N a is an F_p-linear image of the coefficient vector.
    """
    d = len(B)
    F = B[0][0].F
    p = F.p
    g = Poly.const(F, 1)
    for row in B:
        for x in row:
            g = (g * x.den) // poly_gcd(g, x.den)
    N = [[(x.num * (g // x.den)) for x in row] for row in B]
    L = max(max(len(P.coeffs) for P in row) for row in N) + D + 1
    nvars = d * (D + 1)
    total = p ** nvars
    if total > cap:
        raise BudgetExceeded(f"brute force would visit {total} vectors (cap {cap})")
    # images of the unit vectors Z^j e_k
    G = np.zeros((nvars, d, L), dtype=np.int64)
    for k in range(d):
        for j in range(D + 1):
            for i in range(d):
                cs = N[i][k].coeffs
                G[k * (D + 1) + j, i, j:j + len(cs)] = cs
    coeffs = np.array(list(product(range(p), repeat=nvars)), dtype=np.int64).reshape(total, nvars)
    img = np.tensordot(coeffs, G, axes=1) % p          # (total, d, L)
    nz = img != 0
    has = nz.any(axis=2)
    top = np.where(has, L - 1 - np.argmax(nz[:, :, ::-1], axis=2), -1)
    norms = top.max(axis=1)
    gdeg = g.deg()
    order = np.argsort(norms[1:], kind="stable") + 1
    for idx in order:
        c = coeffs[idx].tolist()
        yield int(norms[idx]) - gdeg, tuple(Poly(F, c[k * (D + 1):(k + 1) * (D + 1)]) for k in range(d))


# -- best approximations ------------------------------------------------------------------

def _weighted(degs: Sequence[int | None], w: Sequence[int]) -> LogVal:
    vals = [Fraction(e, wi) for e, wi in zip(degs, w) if e is not None]
    return LogVal(max(vals)) if vals else NEG_INF


def brute_best_approx(A_rf: Sequence[Sequence[RatFunc]], r: Sequence[int], s: Sequence[int], horizon,
                      cap: int = DEFAULT_CAP) -> list[tuple[LogVal, LogVal]]:
    """(Ylog, Mlog) of the best approximation sequence with Ylog <= horizon.

    A_rf is an exact m x n matrix of rational functions.  Every y with
    ||y||_s <= horizon is visited; M(t) is the least <A y>_r over nonzero
    y of quasinorm <= t and the sequence lists the points where it drops.
    """
    F = A_rf[0][0].F
    H = Fraction(horizon)
    degs = [math.floor(H * sj) for sj in s]
    pts = []
    for y in vectors_up_to(F, degs, cap):
        if all(p.is_zero() for p in y):
            continue
        nrm = _weighted([p.deg() for p in y], s)
        Ay = [sum((a * RatFunc(p) for a, p in zip(row, y)), _rf(F, 0)) for row in A_rf]
        dist = _weighted([_frac_deg(f) for f in Ay], r)
        pts.append((nrm, dist))
    pts.sort(key=lambda t: (t[0], t[1]))
    seq: list[tuple[LogVal, LogVal]] = []
    for nrm, dist in pts:
        if not seq:
            seq.append((nrm, dist))
        elif nrm == seq[-1][0]:
            continue
        elif dist < seq[-1][1]:
            seq.append((nrm, dist))
        if seq[-1][1].is_neg_inf:
            break
    return seq
