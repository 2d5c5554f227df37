"""F_q-linear systems describing small fractional parts.

For y in F_q[Z]^n with deg y_j <= D_j, the coefficient of pi^e (e >= 1)
in the fractional part of A_i y is linear in the coefficients of y:

    sum_j sum_k y_{j,k} * coeff(A_ij, e + k).

Bounding <A_i y> by q^c therefore means that the coefficients for
e = 1 .. E_i vanish, for an E_i read off from c and the weight.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from ..field import FieldSpec
from ..laurent import Laurent
from ..poly import Poly


class PolyVecLayout:
    """Coordinates of a vector of polynomials with given degree bounds.

    Coordinate j occupies D_j + 1 slots, highest degree first, so the
    lex order on slot vectors compares coordinate j by (degree, then
    coefficients from the top), coordinates in order.
    """

    def __init__(self, F: FieldSpec, degs: Sequence[int]):
        self.F = F
        self.degs = [max(-1, int(D)) for D in degs]
        self.offsets = []
        off = 0
        for D in self.degs:
            self.offsets.append(off)
            off += D + 1
        self.size = off

    def index(self, j: int, k: int) -> int:
        return self.offsets[j] + self.degs[j] - k

    def decode(self, vec) -> tuple[Poly, ...]:
        out = []
        for j, D in enumerate(self.degs):
            off = self.offsets[j]
            out.append(Poly._raw(self.F, [vec[off + D - k] for k in range(D + 1)]))
        return tuple(out)

    def encode(self, polys: Sequence[Poly]) -> list[int]:
        vec = [0] * self.size
        for j, p in enumerate(polys):
            if p.deg() > self.degs[j]:
                raise ValueError("polynomial exceeds the layout degree bound")
            for k, c in enumerate(p.coeffs):
                vec[self.index(j, k)] = c
        return vec


def degree_bounds(level, weights: Sequence[int]) -> list[int]:
    """deg y_j <= level * w_j; -1 (coordinate forced to 0) when negative."""
    level = Fraction(level)
    return [math.floor(level * w) if level >= 0 else -1 for w in weights]


def exps_strict(c, weights: Sequence[int]) -> list[int]:
    """E_i such that <x_i>^(1/w_i) < q^c iff coefficients 1..E_i of x_i vanish."""
    if c is None:  # bound +infinity
        return [0] * len(weights)
    c = Fraction(c)
    return [max(0, math.floor(-c * w)) for w in weights]


def exps_nonstrict(c, weights: Sequence[int]) -> list[int]:
    """E_i such that <x_i>^(1/w_i) <= q^c iff coefficients 1..E_i of x_i vanish."""
    c = Fraction(c)
    return [max(0, math.ceil(-c * w) - 1) for w in weights]


def frac_rows(A: Sequence[Sequence[Laurent]], layout: PolyVecLayout, E: Sequence[int]):
    """List of (i, e, row) for i in rows of A, e = 1..E_i."""
    out = []
    for i, Ai in enumerate(A):
        Ei = E[i]
        if Ei <= 0:
            continue
        wins = []
        for j, D in enumerate(layout.degs):
            wins.append(Ai[j].window(1, Ei + D + 1) if D >= 0 else [])
        for e in range(1, Ei + 1):
            row = [0] * layout.size
            for j, D in enumerate(layout.degs):
                w = wins[j]
                off = layout.offsets[j]
                for k in range(D + 1):
                    row[off + D - k] = w[e + k - 1]
            out.append((i, e, row))
    return out


def frac_rhs(theta: Sequence[Laurent], E: Sequence[int]) -> list[int]:
    """Right-hand sides matching frac_rows for the system A y - theta."""
    out = []
    for i, Ei in enumerate(E):
        if Ei > 0:
            out.extend(theta[i].window(1, Ei + 1))
    return out
