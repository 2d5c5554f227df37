"""Weighted best approximation sequences and what is built on them.

A best approximation sequence for an m x n matrix A with weights (r, s)
is the greedy sequence of nonzero y in F_q[Z]^n with strictly increasing
||y||_s and strictly decreasing <A y>_r.  Everything is computed with
F_q-linear algebra on coefficient vectors: for a fixed quasinorm level
the set of y with <A y>_r below a threshold is a linear subspace.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import HorizonInsufficient, PrecisionExhausted, PreconditionError
from .geometry.constants import product_bound_exponent
from .geometry.context import WeightedNormContext
from .geometry.fracsys import PolyVecLayout, degree_bounds, exps_strict, frac_rows
from .geometry.norms import rdist, snorm
from .laurent import INF, Laurent, dist_to_Rv
from .linalg import KernelTracker, lex_min_nonzero, nullspace
from .logval import NEG_INF, LogVal
from .matrix import Matrix, matvec_poly, shape
from .poly import Poly, poly_gcd

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BestApproxStep:
    y: tuple[Poly, ...]
    Ylog: LogVal
    Mlog: LogVal


@dataclass
class BestApproxSeq:
    steps: list[BestApproxStep]
    terminated: bool
    ctx: WeightedNormContext
    horizon: Fraction
    matrix_ref: str = ""

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def Ylogs(self) -> list[LogVal]:
        return [s.Ylog for s in self.steps]

    @property
    def Mlogs(self) -> list[LogVal]:
        return [s.Mlog for s in self.steps]

    def products(self) -> list[LogVal]:
        """M_i Y_{i+1} in log scale, for every i with a successor."""
        st = self.steps
        return [st[i].Mlog + st[i + 1].Ylog for i in range(len(st) - 1)]


# -- level sets ---------------------------------------------------------------

def _row_caps(A: Matrix, degs: Sequence[int]) -> tuple[list[int], list[bool]]:
    """Largest usable fractional exponent per row, and whether it is exact.

    For an exact row with common denominator D the fractional part of
    A_i y vanishes as soon as its first deg D coefficients do.  For a
    truncated row the cap is set by the precision of the entries.
    """
    caps, exact = [], []
    for row in A:
        den = None
        cap = INF
        row_exact = True
        for a, D in zip(row, degs):
            if D < 0 or a.is_zero():
                continue
            if a.is_exact:
                den = a.backing.den if den is None else (den * a.backing.den) // poly_gcd(den, a.backing.den)
            else:
                row_exact = False
                cap = min(cap, a.prec - 1 - D)
        if row_exact:
            caps.append(den.deg() if den is not None else 0)
        else:
            # exact entries of a truncated row still bound nothing on their own
            caps.append(max(0, int(cap)))
        exact.append(row_exact)
    return caps, exact


def _space_below(A: Matrix, layout: PolyVecLayout, Mlog: LogVal, r: Sequence[int]):
    """Kernel basis of {y in layout : <A y>_r < q^Mlog}."""
    E = exps_strict(Mlog.value, r)
    caps, exact = _row_caps(A, layout.degs)
    E = [min(e, c) if ex else e for e, c, ex in zip(E, caps, exact)]
    rows = [row for _, _, row in frac_rows(A, layout, E)]
    if not rows:
        return [[1 if i == j else 0 for j in range(layout.size)] for i in range(layout.size)]
    return nullspace(layout.F, rows, layout.size)


def _minimize_at_level(A: Matrix, layout: PolyVecLayout, r: Sequence[int]):
    """(Mlog, y) with y the tie-break-minimal minimizer of <A y>_r over nonzero y."""
    F = layout.F
    caps, exact = _row_caps(A, layout.degs)
    cons = frac_rows(A, layout, caps)
    order = sorted(cons, key=lambda c: (Fraction(c[1], r[c[0]]), c[0], c[1]))
    K = KernelTracker.full(F, layout.size)
    k = 0
    while k < len(order):
        v = Fraction(order[k][1], r[order[k][0]])
        prev = K.basis
        while k < len(order) and Fraction(order[k][1], r[order[k][0]]) == v:
            K.add(order[k][2])
            k += 1
        if K.dim() == 0:
            y = lex_min_nonzero(F, prev, layout.size)
            return LogVal(-v), layout.decode(y)
    if not all(exact):
        raise PrecisionExhausted("fractional parts vanish to the available precision")
    y = lex_min_nonzero(F, K.basis, layout.size)
    return NEG_INF, layout.decode(y)


def _levels(s: Sequence[int], lo: Fraction, hi: Fraction) -> list[Fraction]:
    """Quasinorm levels k / s_j in (lo, hi]."""
    out = set()
    for w in s:
        for k in range(math.floor(lo * w) + 1, math.floor(hi * w) + 1):
            out.add(Fraction(k, w))
    return sorted(out)


def enumerate_best_approx(A: Matrix, ctx: WeightedNormContext, horizon, matrix_ref: str = "") -> BestApproxSeq:
    """Greedy best approximation sequence up to ||y||_s <= q^horizon."""
    m, n = shape(A)
    if (m, n) != (ctx.m, ctx.n):
        raise PreconditionError("matrix shape does not match the weights")
    H = Fraction(horizon)
    if H < 0:
        raise PreconditionError("horizon must be nonnegative")
    F = A[0][0].F
    r, s = ctx.r, ctx.s

    def record(t: Fraction, y, Mlog: LogVal) -> BestApproxStep:
        Ay = matvec_poly(A, y)
        ylog = snorm([Laurent.from_poly(p) for p in y], s)
        assert ylog == LogVal(t), (ylog, t)
        got = rdist(Ay, r)
        assert got == Mlog, (got, Mlog)
        return BestApproxStep(tuple(y), LogVal(t), Mlog)

    t = Fraction(0)
    Mlog, y = _minimize_at_level(A, PolyVecLayout(F, degree_bounds(t, s)), r)
    steps = [record(t, y, Mlog)]
    while steps[-1].Mlog.is_finite:
        cur = steps[-1]
        cands = _levels(s, cur.Ylog.value, H)
        if not cands:
            break

        def feasible(level: Fraction) -> bool:
            return bool(_space_below(A, PolyVecLayout(F, degree_bounds(level, s)), cur.Mlog, r))

        if not feasible(cands[-1]):
            break
        lo, hi = 0, len(cands) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if feasible(cands[mid]):
                hi = mid
            else:
                lo = mid + 1
        t = cands[lo]
        Mlog, y = _minimize_at_level(A, PolyVecLayout(F, degree_bounds(t, s)), r)
        assert Mlog < cur.Mlog
        steps.append(record(t, y, Mlog))
        log.debug("best approximation step %d: Ylog %s Mlog %s", len(steps), t, Mlog)
    return BestApproxSeq(steps, not steps[-1].Mlog.is_finite, ctx, H, matrix_ref)


# -- sequence laws ------------------------------------------------------------

@dataclass
class SeqReport:
    ok: bool
    max_product: LogVal
    bound: Fraction
    failures: list[str] = field(default_factory=list)


def verify_seq_bounds(seq: BestApproxSeq) -> SeqReport:
    """Check monotonicity, the growth floor, lattice of values and the product bound."""
    ctx = seq.ctx
    bound = product_bound_exponent(min(ctx.r), min(ctx.s))
    fails = []
    st = seq.steps
    for i, step in enumerate(st):
        if step.Ylog.value < Fraction(i, ctx.lcm_s):
            fails.append(f"step {i + 1}: Ylog below (i-1)/lcm s")
        if (step.Ylog.value * ctx.lcm_s).denominator != 1:
            fails.append(f"step {i + 1}: Ylog not in (1/lcm s)Z")
        if step.Mlog.is_finite and (step.Mlog.value * ctx.lcm_r).denominator != 1:
            fails.append(f"step {i + 1}: Mlog not in (1/lcm r)Z")
        if not step.Mlog.is_finite and i != len(st) - 1:
            fails.append(f"step {i + 1}: Mlog vanishes before the last step")
    for i in range(len(st) - 1):
        if not st[i].Ylog < st[i + 1].Ylog:
            fails.append(f"steps {i + 1},{i + 2}: Ylog not increasing")
        if not st[i + 1].Mlog < st[i].Mlog:
            fails.append(f"steps {i + 1},{i + 2}: Mlog not decreasing")
    prods = seq.products()
    mx = max(prods) if prods else NEG_INF
    for i, p in enumerate(prods):
        if p > LogVal(bound):
            fails.append(f"step {i + 1}: M_i Y_(i+1) exceeds q^{bound}")
    return SeqReport(not fails, mx, bound, fails)


def singular_statistic(seq: BestApproxSeq, eps_prime_log) -> list[tuple[int, Fraction]]:
    """(k, Card{i <= k : M_i Y_(i+1) > eps'} / Ylog_k) for each computable k.

    Needs Y_(k+1), so k stops one short of the prefix length, except for a
    terminated sequence whose last product is zero by convention.
    """
    eps = LogVal(Fraction(eps_prime_log))
    st = seq.steps
    L = len(st)
    last = L if seq.terminated else L - 1
    out = []
    count = 0
    for k in range(1, last + 1):
        if k < L:
            count += st[k - 1].Mlog + st[k].Ylog > eps
        # at a terminal step M vanishes, so its term never counts
        if k >= 2 and st[k - 1].Ylog.value > 0:
            out.append((k, Fraction(count) / st[k - 1].Ylog.value))
    return out


SINGULAR_CERTIFIED = "SINGULAR_CERTIFIED"
TREND_SINGULAR = "TREND_SINGULAR"
TREND_NONSINGULAR = "TREND_NONSINGULAR"


@dataclass
class Classification:
    verdict: str
    statistic: list[tuple[int, Fraction]]
    terminated: bool
    length: int
    heuristic: bool


def classify_singular(A: Matrix, ctx: WeightedNormContext, horizon, eps_prime_log=-1) -> Classification:
    """Certified verdict when the sequence terminates, otherwise a labelled trend.

    The trend rule: the statistic's maximum over the second half of the
    table is below its maximum over the first half, and its last value
    is at most 1/2.
    """
    seq = enumerate_best_approx(A, ctx, horizon)
    stat = singular_statistic(seq, eps_prime_log)
    if seq.terminated:
        return Classification(SINGULAR_CERTIFIED, stat, True, len(seq), False)
    vals = [v for _, v in stat]
    verdict = TREND_NONSINGULAR
    if len(vals) >= 2:
        h = len(vals) // 2
        if max(vals[h:]) < max(vals[:h]) and vals[-1] <= Fraction(1, 2):
            verdict = TREND_SINGULAR
    return Classification(verdict, stat, False, len(seq), True)


# -- subsequences -------------------------------------------------------------

@dataclass
class SubseqPlan:
    phi: list[int]           # 1-based indices into seq.steps
    a_log: Fraction
    b_log: Fraction
    c_log: Fraction
    method: str
    seq: BestApproxSeq

    def Ylogs(self) -> list[Fraction]:
        return [self.seq.steps[j - 1].Ylog.value for j in self.phi]

    def vectors(self) -> list[tuple[Poly, ...]]:
        return [self.seq.steps[j - 1].y for j in self.phi]

    def slope(self) -> Fraction:
        """max over k of k / Ylog_phi(k), skipping Ylog = 0."""
        vals = [Fraction(k, y) for k, y in enumerate(self.Ylogs(), 1) if y > 0]
        if not vals:
            raise HorizonInsufficient("no term of the subsequence has positive Ylog")
        return max(vals)

    def tail_slope(self) -> Fraction:
        ys = self.Ylogs()
        if ys[-1] <= 0:
            raise HorizonInsufficient("last term of the subsequence has Ylog 0")
        return Fraction(len(ys), ys[-1])


def _pair_ok(seq: BestApproxSeq, i: int, j: int, b: Fraction, c: Fraction) -> bool:
    si, sj = seq.steps[i - 1], seq.steps[j - 1]
    return sj.Ylog >= si.Ylog + LogVal(b) and si.Mlog + sj.Ylog <= LogVal(b + c)


def _valid_prefix(seq, phi: list[int], b, c) -> list[int]:
    out = phi[:1]
    for j in phi[1:]:
        if j <= out[-1] or not _pair_ok(seq, out[-1], j, b, c):
            break
        out.append(j)
    return out


def _small_product_candidate(seq: BestApproxSeq, a, b, c) -> list[int]:
    L = len(seq)
    Y = [None] + [s.Ylog for s in seq.steps]
    M = [None] + [s.Mlog for s in seq.steps]
    in_J = [False] * (L + 1)
    for j in range(1, L):
        in_J[j] = M[j] + Y[j + 1] <= LogVal(b + c - 3 * a)
    if L < 2 or not in_J[L - 1]:
        return []
    jstar = L - 1
    while jstar > 1 and in_J[jstar - 1]:
        jstar -= 1
    psi = [jstar]
    while True:
        nxt = next((j for j in range(psi[-1] + 1, L + 1) if Y[j] >= Y[psi[-1]] + LogVal(a)), None)
        if nxt is None:
            break
        psi.append(nxt)
    phi = []
    for i in range(len(psi) - 1):
        p, p1 = psi[i], psi[i + 1]
        phi.append(p if M[p] + Y[p1] <= LogVal(b + c - a) else p1 - 1)
    return phi


def _stacked_candidate(seq: BestApproxSeq, b) -> list[int]:
    L = len(seq)
    Y = [None] + [s.Ylog for s in seq.steps]
    J0 = [j for j in range(1, L) if Y[j + 1] >= Y[j] + LogVal(b)]
    if not J0:
        return []
    phi = [J0[0]]
    while True:
        j0 = next((j for j in J0 if j > phi[-1]), None)
        if j0 is None:
            break
        stack = [j0]
        while True:
            cand = [j for j in range(phi[-1] + 1, L + 1) if Y[stack[-1]] >= Y[j] + LogVal(b)]
            if not cand:
                break
            stack.append(max(cand))
        phi.extend(reversed(stack))
    return phi


def _longest_chain(seq: BestApproxSeq, b, c) -> list[int]:
    L = len(seq)
    best = {}  # j -> longest valid chain starting at j
    for j in range(L, 0, -1):
        chain = [j]
        for k in range(j + 1, L + 1):
            if _pair_ok(seq, j, k, b, c) and len(best[k]) + 1 > len(chain):
                chain = [j] + best[k]
        best[j] = chain
    return max(best.values(), key=len) if best else []


def spaced_subsequence(seq: BestApproxSeq, a_log, b_log, c_log) -> SubseqPlan:
    """Increasing phi with Y_phi(i+1) >= q^b Y_phi(i) and M_phi(i) Y_phi(i+1) <= q^(b+c)."""
    a, b, c = Fraction(a_log), Fraction(b_log), Fraction(c_log)
    if not a > b > 0:
        raise PreconditionError("need a > b > 0")
    if seq.terminated:
        raise PreconditionError("the sequence is terminated; no subsequence is needed")
    prods = seq.products()
    if prods and max(prods) > LogVal(c):
        raise PreconditionError("c is below an observed product M_i Y_(i+1)")
    tries = [
        ("small_products", _small_product_candidate(seq, a, b, c)),
        ("gap_stack", _stacked_candidate(seq, b)),
        ("longest_chain", _longest_chain(seq, b, c)),
    ]
    for method, phi in tries:
        phi = _valid_prefix(seq, phi, b, c)
        if len(phi) >= 2:
            plan = SubseqPlan(phi, a, b, c, method, seq)
            for i in range(len(phi) - 1):
                assert _pair_ok(seq, phi[i], phi[i + 1], b, c)
            return plan
    raise HorizonInsufficient("no subsequence of length 2 fits within the computed prefix")


# -- inclusion check ----------------------------------------------------------

def inclusion_eps_log(ctx: WeightedNormContext, delta_log, b_log, c_log) -> Fraction:
    """log of delta^(1/min r + 1/min s) q^(-b-c)."""
    d = Fraction(delta_log)
    return d * (Fraction(1, min(ctx.r)) + Fraction(1, min(ctx.s))) - Fraction(b_log) - Fraction(c_log)


def bad_delta_margin(y: Sequence[Poly], theta: Sequence[Laurent]) -> LogVal:
    """log |<y . theta>|."""
    F = theta[0].F
    acc = Laurent.zero(F)
    for p, t in zip(y, theta):
        if not p.is_zero():
            acc = acc + t * p
    return dist_to_Rv(acc)


@dataclass
class InclusionReport:
    ok: bool
    eps_log: Fraction
    eps1_log: Fraction
    covered: tuple[Fraction, Fraction]
    horizon: Fraction
    witness: object = None


def check_bad_inclusion(A: Matrix, theta: Sequence[Laurent], delta_log, plan: SubseqPlan,
                          search_horizon, ctx: WeightedNormContext) -> InclusionReport:
    """Confirm ||x'||_s <A x' - theta>_r >= eps over the range the plan covers.

    The argument applies to x' with eps1 Y_phi(1) <= ||x'||_s < eps1 Y_phi(K),
    K the plan length, so the search horizon is clamped to that window.
    """
    from .dynamics import is_eps_bad

    d = Fraction(delta_log)
    if not (d <= 0):
        raise PreconditionError("delta must lie in (0, 1]")
    for j, y in zip(plan.phi, plan.vectors()):
        if bad_delta_margin(y, theta) < LogVal(d):
            raise PreconditionError(f"theta is not delta-bad for the plan's term {j}")
    eps = inclusion_eps_log(ctx, d, plan.b_log, plan.c_log)
    eps1 = d / min(ctx.s) - plan.b_log - plan.c_log
    ys = plan.Ylogs()
    lo, hi = eps1 + ys[0], eps1 + ys[-1]
    H = min(Fraction(search_horizon), hi)
    res = is_eps_bad(A, theta, eps, H, ctx, min_norm_log=max(lo, Fraction(0)), strict_horizon=(H == hi))
    return InclusionReport(res.witness is None, eps, eps1, (lo, hi), H, res.witness)
