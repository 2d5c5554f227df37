"""Cantor-type subsets of Bad^delta for a sequence of integer vectors.

A cell at level k is a point of (pi O_v)^m given by its first n_(k,j)
digits in each coordinate, standing for the polydisc of all points
sharing those digits.  Passing from level k to k+1 appends digits, and a
child is discarded when its corner theta has |<y_k . theta>| < delta.
For delta = q^dl this means the coefficients of y_k . theta at the
exponents 1 .. floor(-dl) all vanish.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bestapprox import (
    BestApproxSeq, SubseqPlan, bad_delta_margin, spaced_subsequence, check_bad_inclusion,
    enumerate_best_approx, inclusion_eps_log,
)
from .errors import BudgetExceeded, FFApproxError, HorizonInsufficient, PreconditionError
from .field import FieldSpec
from .geometry.context import WeightedNormContext
from .laurent import Laurent
from .linalg import solve
from .logval import LogVal
from .matrix import Matrix, transpose
from .poly import Poly

log = logging.getLogger(__name__)

DEFAULT_CELL_BUDGET = 1 << 24

Cell = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class PolyDisc:
    nvec: tuple[int, ...]

    @classmethod
    def for_level(cls, Ylog, r: Sequence[int]) -> "PolyDisc":
        return cls(tuple(math.ceil(Fraction(Ylog) * w) for w in r))


def rnorm_log(y: Sequence[Poly], r: Sequence[int]) -> Fraction:
    vals = [Fraction(p.deg(), w) for p, w in zip(y, r) if not p.is_zero()]
    if not vals:
        raise PreconditionError("zero vector in the sequence")
    return max(vals)


def digit_count(delta_log) -> int:
    """Number of leading fractional digits that must vanish for |<x>| < delta."""
    return max(0, math.floor(-Fraction(delta_log)))


def dot_digits(F: FieldSpec, y: Sequence[Poly], cell: Cell, E: int) -> list[int]:
    """Coefficients of y . theta at exponents 1..E, theta the corner of the cell."""
    out = [0] * E
    for p, digs in zip(y, cell):
        nd = len(digs)
        for t, c in enumerate(p.coeffs):
            if not c:
                continue
            # Z^t * pi^x contributes to exponent x - t
            for e in range(1, E + 1):
                x = e + t
                if x <= nd and digs[x - 1]:
                    out[e - 1] = F.add(out[e - 1], F.mul(c, digs[x - 1]))
    return out


def corner_in_Z(F: FieldSpec, y: Sequence[Poly], cell: Cell, delta_log) -> bool:
    """|<y . theta>| < delta for the corner theta of the cell."""
    E = digit_count(delta_log)
    return not any(dot_digits(F, y, cell, E))


def cell_theta(F: FieldSpec, cell: Cell) -> tuple[Laurent, ...]:
    return tuple(Laurent.truncated(F, 1, list(d), None) for d in cell)


def _children(F: FieldSpec, cell: Cell, nvec: Sequence[int]):
    extra = [n - len(d) for d, n in zip(cell, nvec)]
    total = sum(extra)
    for digits in itertools.product(range(F.q), repeat=total):
        out, k = [], 0
        for d, e in zip(cell, extra):
            out.append(d + digits[k:k + e])
            k += e
        yield tuple(out)


def count_children_linear(F: FieldSpec, y: Sequence[Poly], parent: Cell, nvec: Sequence[int], delta_log) -> int:
    """Surviving children of a parent, counted as the complement of an affine subspace.

    The vanishing of the first digits of y . theta is affine in the new
    digits of theta, so the discarded children form an affine subspace
    of the q^(#new digits) children, or the empty set.
    """
    E = digit_count(delta_log)
    assert E >= 1
    extra = [n - len(d) for d, n in zip(parent, nvec)]
    total = sum(extra)
    base = dot_digits(F, y, parent, E)
    rows = [[0] * total for _ in range(E)]
    off = 0
    for p, d, ex in zip(y, parent, extra):
        nd = len(d)
        for t, c in enumerate(p.coeffs):
            if not c:
                continue
            for e in range(1, E + 1):
                x = e + t
                if nd < x <= nd + ex:
                    rows[e - 1][off + x - nd - 1] = F.add(rows[e - 1][off + x - nd - 1], c)
        off += ex
    if total == 0:
        return 1 if any(base) else 0
    x0, ker = solve(F, rows, [F.neg(b) for b in base], total)
    if x0 is None:
        return F.q ** total
    return F.q ** total - F.q ** len(ker)


@dataclass
class LevelRecord:
    nvec: tuple[int, ...]
    parents: int
    survivors: int
    per_parent_min: int | None
    discard_vector: int | None       # 1-based index of the y used for discarding, None at the first step
    bound_ok: bool | None = None


@dataclass
class CellTree:
    F: FieldSpec
    r: tuple[int, ...]
    ys: list[tuple[Poly, ...]]
    Ylogs: list[Fraction]
    delta_log: Fraction
    levels: list[LevelRecord]
    cells: list[Cell]                # survivors at the deepest level built
    per_parent: list[list[int]]      # survivor counts per parent, one list per transition
    truncated: bool = False

    @property
    def m(self) -> int:
        return len(self.r)


def growth_parameter(delta_log, r: Sequence[int]) -> Fraction:
    """b(delta) = -log_q(delta) / min r."""
    return -Fraction(delta_log) / min(r)


def check_growth(Ylogs: Sequence[Fraction], delta_log, r: Sequence[int]) -> None:
    b = growth_parameter(delta_log, r)
    for i in range(len(Ylogs) - 1):
        if Ylogs[i + 1] < Ylogs[i] + b:
            raise PreconditionError(f"growth fails between terms {i + 1} and {i + 2}: need a factor q^{b}")


def check_delta(delta_log, m: int) -> Fraction:
    d = Fraction(delta_log)
    if d.denominator != 1:
        raise PreconditionError("delta must be an integer power of q")
    if not d < -3 * m:
        raise PreconditionError("delta must lie in (0, q^(-3m))")
    return d


def build_cantor(F: FieldSpec, ys: Sequence[Sequence[Poly]], r: Sequence[int], delta_log, levels: int,
                 budget: int = DEFAULT_CELL_BUDGET) -> CellTree:
    """Breadth-first construction down to ``levels``, or until the cell budget runs out."""
    r = tuple(r)
    m = len(r)
    d = check_delta(delta_log, m)
    ys = [tuple(y) for y in ys]
    if levels > len(ys):
        raise PreconditionError("more levels than vectors in the sequence")
    Ylogs = [rnorm_log(y, r) for y in ys]
    check_growth(Ylogs[:levels], d, r)
    cells: list[Cell] = [tuple(() for _ in range(m))]
    recs = [LevelRecord((0,) * m, 0, 1, None, None)]
    per_parent = []
    truncated = False
    for k in range(levels):
        nvec = PolyDisc.for_level(Ylogs[k], r).nvec
        delta_children = F.q ** sum(n - len(c) for n, c in zip(nvec, cells[0]))
        if len(cells) * delta_children > budget:
            truncated = True
            log.info("cell budget reached before level %d", k + 1)
            break
        nxt, counts = [], []
        for parent in cells:
            c = 0
            for child in _children(F, parent, nvec):
                if k >= 1 and corner_in_Z(F, ys[k - 1], child, d):
                    continue
                nxt.append(child)
                c += 1
            counts.append(c)
        recs.append(LevelRecord(nvec, len(cells), len(nxt), min(counts), k if k >= 1 else None))
        per_parent.append(counts)
        cells = nxt
    return CellTree(F, r, ys, Ylogs, d, recs, cells, per_parent, truncated)


def c1_value(q: int, m: int, delta_log) -> Fraction:
    """q^-m - q^(2m) delta, exact for integral delta_log."""
    d = Fraction(delta_log)
    if d.denominator != 1:
        raise PreconditionError("delta must be an integer power of q")
    return Fraction(1, q ** m) - Fraction(q) ** (2 * m + int(d))


def meets_step_bound(count: int, c1: Fraction, q: int, exponent: Fraction) -> bool:
    """count >= c1 q^exponent, compared exactly by raising to the denominator."""
    L = exponent.denominator
    return Fraction(count) ** L >= c1 ** L * Fraction(q) ** exponent.numerator


@dataclass
class BoundReport:
    ok: bool
    c1: Fraction
    per_level: list[tuple[int, int, Fraction, bool]]      # (transition k, min survivors, exponent, ok)
    total_ok: bool


def survivor_bound_check(tree: CellTree) -> BoundReport:
    """Per-parent survivor counts against c1 (Y_(k+1)/Y_k)^|r|, and the product bound."""
    q, m = tree.F.q, tree.m
    c1 = c1_value(q, m, tree.delta_log)
    rsum = sum(tree.r)
    rows = []
    ok = True
    # transition k -> k+1 with k >= 1 uses Y_k and Y_(k+1): index k of per_parent
    for k in range(1, len(tree.per_parent)):
        e = rsum * (tree.Ylogs[k] - tree.Ylogs[k - 1])
        mn = min(tree.per_parent[k])
        good = all(meets_step_bound(c, c1, q, e) for c in set(tree.per_parent[k]))
        rows.append((k, mn, e, good))
        tree.levels[k + 1].bound_ok = good
        ok &= good
    total_ok = True
    # Card J_(k+1) >= c1^k (Y_(k+1)/Y_1)^|r|
    for k in range(1, len(tree.per_parent)):
        total = tree.levels[k + 1].survivors
        e = rsum * (tree.Ylogs[k] - tree.Ylogs[0])
        total_ok &= meets_step_bound(total, c1 ** k, q, e)
    return BoundReport(ok and total_ok, c1, rows, total_ok)


@dataclass
class DimEstimate:
    C: Fraction | float
    C_exact: bool
    c1: Fraction
    slope: Fraction
    tail_slope: Fraction
    bound: Fraction | float


def dimension_constant(q: int, m: int, r: Sequence[int], delta_log):
    """C = -log_q(c1) / min r, exact when c1 is a power of q."""
    c1 = c1_value(q, m, delta_log)
    if c1 <= 0:
        raise PreconditionError("c1 must be positive")
    k = _exact_log(c1, q)
    if k is not None:
        return Fraction(-k, min(r)), True, c1
    return -math.log(c1.numerator / c1.denominator, q) / min(r), False, c1


def _exact_log(x: Fraction, q: int):
    """Integer k with x = q^k, or None."""
    num, den = x.numerator, x.denominator
    if num == 1:
        k = 0
        while den % q == 0:
            den //= q
            k -= 1
        return k if den == 1 else None
    if den == 1:
        k = 0
        while num % q == 0:
            num //= q
            k += 1
        return k if num == 1 else None
    return None


def dim_lower_bound(plan: SubseqPlan, delta_log) -> DimEstimate:
    """m - C * max_k k / Ylog_phi(k); the max over the prefix stands in for the limsup."""
    # the plan lives on the transposed system: its s-weights are r
    return dim_from_Ylogs(plan.seq.ctx.q, plan.seq.ctx.s, plan.Ylogs(), delta_log)


def dim_from_Ylogs(q: int, r: Sequence[int], Ylogs: Sequence[Fraction], delta_log) -> DimEstimate:
    """Same estimate for an explicitly supplied growth sequence."""
    m = len(r)
    C, exact, c1 = dimension_constant(q, m, r, delta_log)
    vals = [Fraction(k, y) for k, y in enumerate(Ylogs, 1) if y > 0]
    if not vals or Ylogs[-1] <= 0:
        raise HorizonInsufficient("no term of the sequence has positive Ylog")
    slope = max(vals)
    tail = Fraction(len(Ylogs), Ylogs[-1])
    return DimEstimate(C, exact, c1, slope, tail, m - C * slope)


# -- sampling -----------------------------------------------------------------

def sample_survivors(F: FieldSpec, ys: Sequence[Sequence[Poly]], r: Sequence[int], delta_log, depth: int,
                     count: int, seed: int = 0, close: bool = True, max_tries: int = 1 << 12) -> list[Cell]:
    """Random descent through the tree.

    Each step draws new digits until the child survives.  With ``close``
    a few more digits are appended so that the returned point also passes
    the test for the last vector, making it delta-bad for y_1..y_depth.
    """
    r = tuple(r)
    d = check_delta(delta_log, len(r))
    Ylogs = [rnorm_log(y, r) for y in ys]
    check_growth(Ylogs[:depth], d, r)
    rng = random.Random(seed)

    E = digit_count(d)

    def descend():
        cell: Cell = tuple(() for _ in r)
        for k in range(depth):
            nvec = PolyDisc.for_level(Ylogs[k], r).nvec
            for _try in range(64):
                child = tuple(c + tuple(rng.randrange(F.q) for _ in range(n - len(c))) for c, n in zip(cell, nvec))
                if k == 0 or not corner_in_Z(F, ys[k - 1], child, d):
                    cell = child
                    break
            else:
                return None     # this parent may have no admissible child; restart
        if close:
            # E more digits reach every coefficient of y_depth . theta that the test reads
            for _try in range(64):
                pt = tuple(c + tuple(rng.randrange(F.q) for _ in range(E)) for c in cell)
                if not corner_in_Z(F, ys[depth - 1], pt, d):
                    return pt
            return None
        return cell

    out = []
    for _ in range(count):
        for _restart in range(max_tries):
            cell = descend()
            if cell is not None:
                out.append(cell)
                break
        else:
            raise BudgetExceeded("random descent found no surviving point")
    return out


def is_delta_bad_point(F: FieldSpec, ys: Sequence[Sequence[Poly]], cell: Cell, delta_log) -> bool:
    """|<y_i . theta>| >= delta for every y_i, checked on the exact point."""
    th = cell_theta(F, cell)
    return all(bad_delta_margin(y, th) >= LogVal(Fraction(delta_log)) for y in ys)


# -- pipeline -----------------------------------------------------------------

@dataclass
class PipelineReport:
    path: str                           # "cantor" or "terminated"
    stages: dict = field(default_factory=dict)
    dim_estimate: DimEstimate | None = None
    eps_log: Fraction | None = None
    samples: int = 0
    witnesses: int = 0
    failed_stage: str | None = None
    error: str | None = None


class StageError(FFApproxError):
    def __init__(self, stage: str, err: Exception):
        super().__init__(f"stage {stage}: {err}")
        self.stage = stage
        self.err = err


def pipeline_lower_bound(A: Matrix, ctx: WeightedNormContext, delta_log, a_log, horizon,
                         c_log=2, samples: int = 100, eps_horizon=6, levels: int | None = None,
                         budget: int = 1 << 16, seed: int = 0) -> PipelineReport:
    """Best approximations of tA -> subsequence -> Cantor tree -> dimension bound -> eps-bad checks."""
    F = A[0][0].F
    m = ctx.m
    rep = PipelineReport(path="cantor")

    def stage(name, fn):
        try:
            return fn()
        except FFApproxError as e:
            raise StageError(name, e) from e

    tctx = ctx.transposed()
    seq: BestApproxSeq = stage("bestapprox", lambda: enumerate_best_approx(transpose(A), tctx, horizon))
    rep.stages["bestapprox"] = {"length": len(seq), "terminated": seq.terminated,
                                "Ylogs": [s.Ylog for s in seq.steps]}
    if seq.terminated:
        rep.path = "terminated"
        rep.stages["note"] = "the transposed sequence terminates, so no Cantor tree is built"
        return rep
    d = check_delta(delta_log, m)
    b = growth_parameter(d, ctx.r)
    plan = stage("subsequence", lambda: spaced_subsequence(seq, a_log, b, c_log))
    rep.stages["subsequence"] = {"phi": plan.phi, "method": plan.method, "Ylogs": plan.Ylogs(), "b": b}
    ys = plan.vectors()
    K = len(ys) if levels is None else min(levels, len(ys))
    tree = stage("cantor", lambda: build_cantor(F, ys, ctx.r, d, K, budget))
    bounds = survivor_bound_check(tree)
    rep.stages["cantor"] = {"levels": tree.levels, "truncated": tree.truncated, "bound_ok": bounds.ok}
    rep.dim_estimate = stage("dimension", lambda: dim_lower_bound(plan, d))
    rep.eps_log = inclusion_eps_log(ctx, d, b, c_log)
    pts = stage("sample", lambda: sample_survivors(F, ys, ctx.r, d, K, samples, seed))
    # exact per-parent counts along each sampled path, beyond the breadth-first part
    Ylogs = [rnorm_log(y, ctx.r) for y in ys]
    c1 = c1_value(F.q, m, d)
    path_ok = True
    for cell in pts:
        for k in range(1, K):
            nvec = PolyDisc.for_level(Ylogs[k], ctx.r).nvec
            parent = tuple(c[:n] for c, n in zip(cell, PolyDisc.for_level(Ylogs[k - 1], ctx.r).nvec))
            cnt = count_children_linear(F, ys[k - 1], parent, nvec, d)
            path_ok &= meets_step_bound(cnt, c1, F.q, sum(ctx.r) * (Ylogs[k] - Ylogs[k - 1]))
    rep.stages["sample"] = {"depth": K, "count": len(pts), "path_bounds_ok": path_ok}
    wit = 0
    windows = set()
    for cell in pts:
        th = cell_theta(F, cell)
        res = stage("crosscheck", lambda: check_bad_inclusion(A, th, d, plan, eps_horizon, ctx))
        windows.add((res.covered, res.horizon))
        wit += not res.ok
    rep.samples, rep.witnesses = len(pts), wit
    rep.stages["crosscheck"] = {"eps_log": rep.eps_log, "windows": sorted(windows), "witnesses": wit}
    return rep
