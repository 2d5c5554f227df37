"""Constants as formulas in (genus g, deg v), evaluated at g = 0, deg v = 1.

Keeping the general formulas lets the symbolic layer be tested on its
own; every public operation calls them with the rational-function-field
values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import PreconditionError

GENUS = 0
DEG_V = 1


def covolume_log_normalization(d: int, g: int = GENUS) -> int:
    """log_q Covol(R_v^d) = (g - 1) d."""
    return (g - 1) * d


def minkowski_log_bounds(d: int, covol_log, g: int = GENUS, deg_v: int = DEG_V):
    """(lower, upper) for sum of log minima: -(g-1)d + covol and d deg_v + covol."""
    return (-(g - 1) * d + covol_log, d * deg_v + covol_log)


def lambda1_log_bound(d: int, covol_log, deg_v: int = DEG_V) -> Fraction:
    """log lambda_1 <= deg v + covol_log / d."""
    return deg_v + Fraction(covol_log) / d


def dirichlet_min_rprime(g: int = GENUS, deg_v: int = DEG_V) -> Fraction:
    """r'_i must exceed 1 + (g - 1)/deg v, so at g = 0 the integer r'_i >= 1."""
    return 1 + Fraction(g - 1, deg_v)


def dirichlet_prefactor_log(g: int = GENUS, deg_v: int = DEG_V) -> int:
    """log_q of q_v q^(g-1): the constant in front of q_v^(-r'_i)."""
    return deg_v + g - 1


def weighted_dirichlet_prefactor_log(min_r: int, g: int = GENUS, deg_v: int = DEG_V) -> Fraction:
    """log_q of q^((deg v + g - 1)/min r)."""
    return Fraction(deg_v + g - 1, min_r)


def beta_d(d: int, g: int = GENUS, deg_v: int = DEG_V) -> int:
    """ceil((d + 1 + (g - 1) d / deg v) / (d - 1))."""
    if d < 2:
        raise PreconditionError("beta_d needs d >= 2")
    return math.ceil(Fraction(1, d - 1) * (d + 1 + Fraction((g - 1) * d, deg_v)))


def product_bound_exponent(min_r: int, min_s: int, g: int = GENUS, deg_v: int = DEG_V) -> Fraction:
    """Uniform bound on log(M_i Y_{i+1}) for best approximation sequences."""
    return (deg_v + g - 1) * (Fraction(1, min_r) + Fraction(1, min_s)) + 2 * deg_v


@dataclass(frozen=True)
class KappaConstants:
    beta: int
    k1: Fraction
    k2: Fraction
    k3: Fraction
    k4: Fraction

    def as_tuple(self):
        return (self.beta, self.k1, self.k2, self.k3, self.k4)


def kappa_from_weights(r, s, g: int = GENUS, deg_v: int = DEG_V) -> KappaConstants:
    d = len(r) + len(s)
    b = beta_d(d, g, deg_v)
    mr, ms, S = min(r), min(s), sum(s)
    denom = S * (Fraction(1, mr) + Fraction(1, ms)) - 1
    k3 = Fraction(b, mr) + 1
    k4 = (Fraction(S, ms) - 1) / denom
    k2 = 1 / denom
    k1 = Fraction(b, ms) + Fraction(S, ms) * (k2 + 1) + k3
    return KappaConstants(b, k1, k2, k3, k4)
