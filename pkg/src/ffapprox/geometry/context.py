"""Weights (r, s) and the derived constants used throughout."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from ..errors import PreconditionError
from ..field import FieldSpec


@dataclass(frozen=True)
class WeightedNormContext:
    """Weights r (m rows) and s (n columns) with |r| = |s|, over F_q."""

    field: FieldSpec
    r: tuple[int, ...]
    s: tuple[int, ...]

    def __post_init__(self):
        r = tuple(int(x) for x in self.r)
        s = tuple(int(x) for x in self.s)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)
        if not r or not s:
            raise PreconditionError("need m, n >= 1")
        if min(r) < 1 or min(s) < 1:
            raise PreconditionError("weights must be positive integers")
        if sum(r) != sum(s):
            raise PreconditionError(f"|r| = {sum(r)} differs from |s| = {sum(s)}")

    @classmethod
    def unweighted(cls, field: FieldSpec, m: int, n: int) -> "WeightedNormContext":
        """r = (n,...,n), s = (m,...,m): the only constant weights with |r| = |s|."""
        return cls(field, (n,) * m, (m,) * n)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def m(self) -> int:
        return len(self.r)

    @property
    def n(self) -> int:
        return len(self.s)

    @property
    def d(self) -> int:
        return self.m + self.n

    @property
    def weight_sum(self) -> int:
        return sum(self.r)

    @property
    def lcm_r(self) -> int:
        return lcm(*self.r)

    @property
    def lcm_s(self) -> int:
        return lcm(*self.s)

    @property
    def weights(self) -> tuple[int, ...]:
        """(r_1..r_m, s_1..s_n): the flow exponents up to sign."""
        return self.r + self.s

    def transposed(self) -> "WeightedNormContext":
        """Context for the transpose matrix: weights (s, r)."""
        return WeightedNormContext(self.field, self.s, self.r)

    def ell_weights(self) -> tuple[Fraction, ...]:
        """Per-coordinate divisors making the (r,s)-norm of the L_eps set a plain max."""
        d, m, n = self.d, self.m, self.n
        return tuple(Fraction(ri * m, d) for ri in self.r) + tuple(Fraction(sj * n, d) for sj in self.s)
