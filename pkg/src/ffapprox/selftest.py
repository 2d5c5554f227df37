"""The invariant suite behind ``ffapprox selftest``.

Each family draws its instances from a stream keyed by (seed, family,
index), so results do not depend on how tasks are split across workers.
The report contains no timings and is byte-identical for any worker count.
"""

from __future__ import annotations

import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

from .errors import BudgetExceeded
from .field import gf
from .instances import (random_context, random_exact_matrix, random_lattice, random_poly, random_ratfunc,
                        random_series_matrix, rng_for, small_field)
from .laurent import Laurent, abs_val
from .logval import LogVal
from .poly import RatFunc, poly_xgcd


def _field_axioms(rng):
    F = gf(*rng.choice([(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)]))
    a, b, c = (rng.randrange(F.q) for _ in range(3))
    ok = F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    ok &= F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    ok &= F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    if a:
        ok &= F.mul(a, F.inv(a)) == 1
    return ok


def _bezout(rng):
    F = small_field(rng, ((2, 1), (3, 1), (2, 2)))
    a, b = random_poly(F, rng, 6), random_poly(F, rng, 6)
    g, s, t = poly_xgcd(a, b)
    ok = s * a + t * b == g
    if not g.is_zero():
        ok &= (a % g).is_zero() and (b % g).is_zero() and g.lc() == 1
    return ok


def _ultrametric(rng):
    F = small_field(rng)
    x = Laurent.exact(random_ratfunc(F, rng, 4))
    y = Laurent.exact(random_ratfunc(F, rng, 4))
    ax, ay, axy = abs_val(x), abs_val(y), abs_val(x + y)
    ok = axy <= max(ax, ay)
    if ax != ay:
        ok &= axy == max(ax, ay)
    return ok and abs_val(x * y) == ax + ay


def _minkowski(rng):
    from .geometry import covol, successive_minima

    F = small_field(rng)
    d = rng.choice([2, 3])
    L = random_lattice(F, rng, d, 4)
    return sum(x.value for x in successive_minima(L).logs) == d + covol(L).value


def _minima_oracle(rng):
    from .bruteforce import brute_minima
    from .geometry import successive_minima

    F = small_field(rng)
    d = rng.choice([2, 3])
    L = random_lattice(F, rng, d, 2 if d == 3 else 3, 0.3)
    try:
        ref, _ = brute_minima(L.rows, cap=1 << 14)
    except BudgetExceeded:
        return None
    return [x.value for x in successive_minima(L).logs] == ref


def _dirichlet(rng):
    from .geometry import dirichlet_weighted, dirichlet_weighted_holds

    F = small_field(rng)
    m, n = rng.randint(1, 2), rng.randint(1, 2)
    ctx = random_context(F, rng, m, n)
    alpha = rng.randint(1, 4)
    A = random_series_matrix(F, rng, m, n, 60)
    return dirichlet_weighted_holds(A, dirichlet_weighted(A, alpha, ctx), alpha, ctx)[0]


def _bestapprox_laws(rng):
    from .bestapprox import enumerate_best_approx, verify_seq_bounds

    F = small_field(rng)
    m, n = rng.randint(1, 2), rng.randint(1, 2)
    ctx = random_context(F, rng, m, n, 3)
    A = random_series_matrix(F, rng, m, n, 120)
    return verify_seq_bounds(enumerate_best_approx(A, ctx, 6)).ok


def _bestapprox_oracle(rng):
    from .bestapprox import enumerate_best_approx
    from .bruteforce import brute_best_approx

    F = small_field(rng)
    m, n = rng.randint(1, 2), rng.randint(1, 2)
    ctx = random_context(F, rng, m, n, 2)
    A = random_exact_matrix(F, rng, m, n, 5)
    H = 2
    try:
        ref = brute_best_approx([[x.backing for x in row] for row in A], ctx.r, ctx.s, H, cap=1 << 12)
    except BudgetExceeded:
        return None
    seq = enumerate_best_approx(A, ctx, H)
    return [(s.Ylog, s.Mlog) for s in seq.steps] == ref


def _transference(rng):
    from .geometry import WeightedNormContext, transfer

    F = small_field(rng)
    ctx = WeightedNormContext(F, (1,), (1,))
    Ylog, eps = rng.randint(1, 4), -rng.randint(1, 3)
    y = random_poly(F, rng, Ylog)
    while y.is_zero():
        y = random_poly(F, rng, Ylog)
    num = random_poly(F, rng, y.deg() - 1) if y.deg() > 0 else y.scale(0)
    k = Ylog - eps + y.deg() + 1
    tail = Laurent.truncated(F, k, [rng.randrange(F.q) for _ in range(30)], k + 30)
    A = ((Laurent.exact(RatFunc(num, y)) + tail,),)
    return transfer(A, (y,), eps, Ylog, ctx).holds()


def _dani(rng):
    from .dynamics import apply_flow, dani_arithmetic_side, make_uA_lattice
    from .geometry import rs_systole

    F = small_field(rng)
    m, n = rng.randint(1, 2), rng.randint(1, 2)
    ctx = random_context(F, rng, m, n, 3)
    eps, ell = -rng.randint(1, 2), rng.randint(1, 8)
    A = random_series_matrix(F, rng, m, n, 80)
    inside = rs_systole(apply_flow(make_uA_lattice(A, ctx), ell, ctx).basis, ctx) > LogVal(eps)
    return inside != (dani_arithmetic_side(A, ctx, eps, ell) is not None)


@dataclass(frozen=True)
class Family:
    name: str
    count: int
    check: Callable


FAMILIES = (
    Family("field_axioms", 200, _field_axioms),
    Family("poly_bezout", 100, _bezout),
    Family("laurent_ultrametric", 100, _ultrametric),
    Family("minkowski_identity", 60, _minkowski),
    Family("minima_vs_bruteforce", 30, _minima_oracle),
    Family("dirichlet_postconditions", 40, _dirichlet),
    Family("bestapprox_laws", 20, _bestapprox_laws),
    Family("bestapprox_vs_bruteforce", 20, _bestapprox_oracle),
    Family("transference", 40, _transference),
    Family("dani_equivalence", 30, _dani),
)

_BY_NAME = {f.name: f for f in FAMILIES}


def run_task(task: tuple[str, int, int]) -> tuple[str, int, str]:
    """One instance; outcome is 'pass', 'fail', 'skip' or 'error:<type>'."""
    name, index, seed = task
    try:
        res = _BY_NAME[name].check(rng_for(seed, name, index))
    except Exception as exc:  # reported, never swallowed silently
        traceback.print_exc()
        return name, index, f"error:{type(exc).__name__}"
    if res is None:
        return name, index, "skip"
    return name, index, "pass" if res else "fail"


def run_selftest(seed: int = 0, workers: int = 1, scale: float = 1.0, families=None) -> tuple[bool, str]:
    """Run the suite; returns (all passed, report text)."""
    fams = [f for f in FAMILIES if families is None or f.name in families]
    tasks = [(f.name, i, seed) for f in fams for i in range(max(1, int(f.count * scale)))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_task, tasks, chunksize=4))
    else:
        results = [run_task(t) for t in tasks]
    lines = [f"selftest seed={seed}", f"{'family':<28}{'checked':>8}{'skipped':>8}{'failed':>8}  status"]
    all_ok = True
    for f in fams:
        mine = [r for r in results if r[0] == f.name]
        checked = sum(1 for r in mine if r[2] != "skip")
        skipped = len(mine) - checked
        bad = [r for r in mine if r[2] not in ("pass", "skip")]
        ok = not bad and checked > 0
        all_ok &= ok
        lines.append(f"{f.name:<28}{checked:>8}{skipped:>8}{len(bad):>8}  {'PASS' if ok else 'FAIL'}")
        for _, idx, outcome in bad:
            lines.append(f"  instance {idx}: {outcome}")
    lines.append("ALL PASS" if all_ok else "FAILURES")
    return all_ok, "\n".join(lines) + "\n"
