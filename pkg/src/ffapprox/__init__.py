"""Exact Diophantine approximation over F_q(Z) at the place at infinity."""

from .errors import (BudgetExceeded, FFApproxError, HorizonInsufficient, MalformedInput, PrecisionExhausted,
                     PreconditionError, YTooSmall)
from .field import FieldSpec, gf
from .laurent import Laurent, abs_val, dist_to_Rv, laurent_from_ratfunc
from .logval import NEG_INF, LogVal
from .poly import Poly, RatFunc, Zpoly, poly_gcd, poly_xgcd

__all__ = [
    "BudgetExceeded", "FFApproxError", "HorizonInsufficient", "MalformedInput", "PrecisionExhausted",
    "PreconditionError", "YTooSmall", "FieldSpec", "gf", "Laurent", "abs_val", "dist_to_Rv",
    "laurent_from_ratfunc", "NEG_INF", "LogVal", "Poly", "RatFunc", "Zpoly", "poly_gcd", "poly_xgcd",
]
