"""Seeded random instance generators shared by selftest and the test suite."""

from __future__ import annotations

import random

from .field import FieldSpec, gf
from .geometry.context import WeightedNormContext
from .geometry.lattice import LatticeBasis, determinant
from .laurent import Laurent
from .matrix import Matrix
from .poly import Poly, RatFunc


def rng_for(seed: int, family: str, index: int) -> random.Random:
    """Independent stream per (seed, family, index), stable across processes."""
    return random.Random(f"{seed}:{family}:{index}")


def random_poly(F: FieldSpec, rng: random.Random, maxdeg: int) -> Poly:
    return Poly(F, [rng.randrange(F.q) for _ in range(rng.randint(0, maxdeg) + 1)])


def random_ratfunc(F: FieldSpec, rng: random.Random, maxdeg: int, den_prob: float = 0.5) -> RatFunc:
    num = random_poly(F, rng, maxdeg)
    if rng.random() >= den_prob:
        return RatFunc(num)
    den = random_poly(F, rng, maxdeg)
    while den.is_zero():
        den = random_poly(F, rng, maxdeg)
    return RatFunc(num, den)


def random_lattice(F: FieldSpec, rng: random.Random, d: int, maxdeg: int, den_prob: float = 0.5) -> LatticeBasis:
    """Nonsingular basis with rational-function entries of degree <= maxdeg."""
    while True:
        rows = [[Laurent.exact(random_ratfunc(F, rng, maxdeg, den_prob)) for _ in range(d)] for _ in range(d)]
        if not determinant(rows).is_zero():
            return LatticeBasis(rows)


def random_weights(rng: random.Random, m: int, n: int, top: int = 4) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Positive integer weights with |r| = |s| <= top (needs max(m, n) <= top)."""
    total = rng.randint(max(m, n), top)

    def split(k):
        cuts = sorted(rng.sample(range(1, total), k - 1))
        return tuple(b - a for a, b in zip([0] + cuts, cuts + [total]))

    return split(m), split(n)


def random_context(F: FieldSpec, rng: random.Random, m: int, n: int, top: int = 4) -> WeightedNormContext:
    r, s = random_weights(rng, m, n, top)
    return WeightedNormContext(F, r, s)


def random_series_matrix(F: FieldSpec, rng: random.Random, m: int, n: int, prec: int) -> Matrix:
    """Entries in pi O_v with random digits, known below pi^prec."""
    return tuple(tuple(Laurent.truncated(F, 1, [rng.randrange(F.q) for _ in range(prec - 1)], prec)
                       for _ in range(n)) for _ in range(m))


def random_exact_matrix(F: FieldSpec, rng: random.Random, m: int, n: int, den_deg: int) -> Matrix:
    """Proper rational functions num/den with deg den = den_deg (completely irrational-looking prefixes)."""
    rows = []
    for _ in range(m):
        row = []
        for _ in range(n):
            den = Poly(F, [rng.randrange(F.q) for _ in range(den_deg)] + [1])
            num = Poly(F, [rng.randrange(F.q) for _ in range(den_deg)])
            row.append(Laurent.exact(RatFunc(num, den)))
        rows.append(tuple(row))
    return tuple(rows)


def small_field(rng: random.Random, choices=((2, 1), (3, 1))) -> FieldSpec:
    p, e = rng.choice(choices)
    return gf(p, e)

