"""Named matrices used by the examples, the CLI and the tests."""

from __future__ import annotations

import math
import random
from typing import Iterable, Sequence

from .field import FieldSpec
from .laurent import Laurent
from .matrix import Matrix
from .poly import Poly, RatFunc, Zpoly


def convergents(partial_quotients: Iterable[Poly]):
    """Yield (P_k, Q_k) for the continued fraction [0; a_1, a_2, ...]."""
    it = iter(partial_quotients)
    first = next(it)
    F = first.F
    P_prev, Q_prev = Poly.const(F, 1), Poly.zero(F)
    P, Q = Poly.zero(F), Poly.const(F, 1)
    a = first
    while True:
        P_prev, P = P, a * P + P_prev
        Q_prev, Q = Q, a * Q + Q_prev
        yield P, Q
        try:
            a = next(it)
        except StopIteration:
            return


def continued_fraction_series(partial_quotients: Sequence[Poly], prec: int) -> Laurent:
    """[0; a_1, a_2, ...] known for exponents below ``prec``.

    The k-th convergent P/Q agrees with the limit up to exponent
    deg Q_k + deg Q_{k+1} - 1, so enough quotients must be supplied.
    """
    conv = list(convergents(partial_quotients))
    for (P, Q), (_, Q2) in zip(conv, conv[1:]):
        if Q.deg() + Q2.deg() >= prec:
            return Laurent.exact(RatFunc(P, Q)).truncate(prec)
    raise ValueError("not enough partial quotients for the requested precision")


def alpha_quad(F: FieldSpec, prec: int = 64) -> Laurent:
    """The root of x^2 + Z x - 1 with continued fraction [0; Z, Z, ...]."""
    Z = Zpoly(F)
    return continued_fraction_series([Z] * (prec // 2 + 2), prec)


def liouville(F: FieldSpec, prec: int = 200) -> Laurent:
    """sum over i >= 1 of Z^(-i!), known below pi^prec."""
    digits = [0] * prec
    i = 1
    while math.factorial(i) < prec:
        digits[math.factorial(i)] = 1
        i += 1
    return Laurent.truncated(F, 0, digits, prec)


def liouville_exact(F: FieldSpec, imax: int) -> Laurent:
    """The finite sum over 1 <= i <= imax of Z^(-i!), as an exact rational function."""
    top = math.factorial(imax)
    digits = [0] * (top + 1)
    for i in range(1, imax + 1):
        digits[math.factorial(i)] = 1
    return Laurent.truncated(F, 0, digits, None)


def random_series(F: FieldSpec, prec: int, rng: random.Random, start: int = 1) -> Laurent:
    """Random element of pi O_v (for start=1) known below pi^prec."""
    return Laurent.truncated(F, start, [rng.randrange(F.q) for _ in range(prec - start)], prec)


def random_matrix(F: FieldSpec, m: int, n: int, prec: int, rng: random.Random) -> Matrix:
    return tuple(tuple(random_series(F, prec, rng) for _ in range(n)) for _ in range(m))


def one_by_one(x: Laurent) -> Matrix:
    return ((x,),)


def named_matrix(name: str, F: FieldSpec, prec: int = 200) -> Matrix:
    """Matrices addressable by name from the CLI."""
    Z = Zpoly(F)
    one = Poly.const(F, 1)
    table = {
        "zero": lambda: Laurent.zero(F),
        "inv_z": lambda: Laurent.exact(RatFunc(one, Z)),
        "alpha_quad": lambda: alpha_quad(F, prec),
        "liouville": lambda: liouville(F, prec),
        "liouville4": lambda: liouville_exact(F, 4),
    }
    if name not in table:
        raise KeyError(name)
    return one_by_one(table[name]())


NAMED = ("zero", "inv_z", "alpha_quad", "liouville", "liouville4")
