"""Weighted quasinorms in log scale."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import PreconditionError
from ..laurent import Laurent, log_abs_int
from ..logval import NEG_INF, LogVal


def weighted_log(entries: Sequence[Laurent], weights: Sequence) -> LogVal:
    """max_i log|x_i| / w_i, NEG_INF for the zero vector."""
    if len(entries) != len(weights):
        raise PreconditionError(f"vector of length {len(entries)} against {len(weights)} weights")
    best = None
    for x, w in zip(entries, weights):
        a = log_abs_int(x)
        if a is None:
            continue
        v = Fraction(a) / w
        if best is None or v > best:
            best = v
    return NEG_INF if best is None else LogVal(best)


def weighted_dist_log(entries: Sequence[Laurent], weights: Sequence) -> LogVal:
    """Same as weighted_log applied to fractional parts."""
    return weighted_log([x.frac() for x in entries], weights)


def rnorm(xi: Sequence[Laurent], r: Sequence[int]) -> LogVal:
    return weighted_log(xi, r)


def snorm(xi: Sequence[Laurent], s: Sequence[int]) -> LogVal:
    return weighted_log(xi, s)


def rdist(xi: Sequence[Laurent], r: Sequence[int]) -> LogVal:
    return weighted_dist_log(xi, r)


def sdist(xi: Sequence[Laurent], s: Sequence[int]) -> LogVal:
    return weighted_dist_log(xi, s)


def sup_norm(xi: Sequence[Laurent]) -> LogVal:
    return weighted_log(xi, [1] * len(xi))
