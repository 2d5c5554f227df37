import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffapprox import NEG_INF, HorizonInsufficient, Laurent, LogVal, Poly, PreconditionError, RatFunc, Zpoly, gf
from ffapprox.bestapprox import (SINGULAR_CERTIFIED, TREND_NONSINGULAR, TREND_SINGULAR, SubseqPlan,
                                 bad_delta_margin, check_bad_inclusion, classify_singular, enumerate_best_approx,
                                 inclusion_eps_log, singular_statistic, spaced_subsequence, verify_seq_bounds)
from ffapprox.fixtures import alpha_quad, liouville, liouville_exact
from ffapprox.geometry import WeightedNormContext, rdist, snorm
from ffapprox.geometry.constants import product_bound_exponent
from ffapprox.instances import random_context, random_exact_matrix, random_series_matrix, small_field
from ffapprox.matrix import matvec_poly, transpose
from oracles import brute_best_approx, cf_best_approx, cf_quotient_degrees

F2 = gf(2)
Z = Zpoly(F2)
CTX = WeightedNormContext(F2, (1,), (1,))


def one(x):
    return ((x,),)


def inv_z(F=F2):
    return Laurent.exact(RatFunc(Poly.const(F, 1), Zpoly(F)))


def pairs(seq):
    return [(s.Ylog, s.Mlog) for s in seq.steps]


# -- enumeration ----------------------------------------------------------------------

def test_zero_matrix_terminates_at_once():
    seq = enumerate_best_approx(one(Laurent.zero(F2)), CTX, 5)
    assert seq.terminated and len(seq) == 1
    assert seq.steps[0].y == (Poly.const(F2, 1),) and seq.steps[0].Mlog is NEG_INF


def test_inv_z_sequence():
    seq = enumerate_best_approx(one(inv_z()), CTX, 5)
    assert seq.terminated
    assert pairs(seq) == [(LogVal(0), LogVal(-1)), (LogVal(1), NEG_INF)]
    assert seq.steps[1].y == (Z,)
    ref = brute_best_approx([[inv_z().backing]], (1,), (1,), 1)
    assert ref == pairs(seq)


def test_alpha_quad_against_continued_fraction_oracle():
    seq = enumerate_best_approx(one(alpha_quad(F2, 80)), CTX, 12)
    expect = cf_best_approx([1] * 20, 13)
    assert [(y.value, m.value) for y, m in pairs(seq)] == expect
    for i, (y, m) in enumerate(pairs(seq), 1):
        assert y == LogVal(i - 1) and m == LogVal(-i)


def test_alpha_quad_against_bruteforce():
    # a convergent of alpha_quad agrees with it far beyond the brute-force horizon
    from ffapprox.fixtures import convergents
    P, Q = list(convergents([Z] * 12))[-1]
    ref = brute_best_approx([[RatFunc(P, Q)]], (1,), (1,), 5)
    seq = enumerate_best_approx(one(alpha_quad(F2, 80)), CTX, 5)
    assert pairs(seq) == ref


def test_steps_are_independently_consistent():
    seq = enumerate_best_approx(one(alpha_quad(F2, 80)), CTX, 8)
    for s in seq.steps:
        assert snorm([Laurent.from_poly(p) for p in s.y], (1,)) == s.Ylog
        assert rdist(matvec_poly(one(alpha_quad(F2, 80)), s.y), (1,)) == s.Mlog


def test_liouville_partial_sum_sequence():
    seq = enumerate_best_approx(one(liouville_exact(F2, 4)), CTX, 30)
    assert seq.terminated
    assert [y.value for y in seq.Ylogs] == [0, 1, 2, 4, 5, 6, 18, 19, 20, 22, 23, 24]
    # the sum is (Z^23 + Z^22 + Z^18 + 1) / Z^24; Euclid gives the same sequence
    num = [1] + [0] * 17 + [1, 0, 0, 0, 1, 1]
    degs = cf_quotient_degrees(num, [0] * 24 + [1], 2)
    ref = cf_best_approx(degs, len(degs))
    assert [(y.value, m.value) for y, m in pairs(seq)[:-1]] == ref
    assert seq.Ylogs[-1] == LogVal(sum(degs))


def test_liouville_partial_sum_statistic():
    # every product M_i Y_(i+1) is q^0 for a 1x1 continued fraction, so the statistic is k / Ylog_k
    seq = enumerate_best_approx(one(liouville_exact(F2, 4)), CTX, 30)
    stat = dict(singular_statistic(seq, -1))
    assert stat[8] == Fraction(8, 19)
    assert all(p == LogVal(0) for p in seq.products()[:-1])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_matches_bruteforce_on_random_exact_matrices(seed):
    rng = random.Random(seed)
    F = small_field(rng)
    m, n = rng.randint(1, 2), rng.randint(1, 2)
    ctx = random_context(F, rng, m, n, 2)
    A = random_exact_matrix(F, rng, m, n, 4)
    try:
        ref = brute_best_approx([[x.backing for x in row] for row in A], ctx.r, ctx.s, 2, cap=1 << 12)
    except Exception:
        return
    assert pairs(enumerate_best_approx(A, ctx, 2)) == ref


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_sequence_laws_on_random_series(seed):
    rng = random.Random(seed)
    F = small_field(rng)
    m, n = rng.randint(1, 2), rng.randint(1, 2)
    ctx = random_context(F, rng, m, n, 3)
    seq = enumerate_best_approx(random_series_matrix(F, rng, m, n, 120), ctx, 6)
    rep = verify_seq_bounds(seq)
    assert rep.ok, rep.failures
    assert rep.bound == 2


# -- laws and the statistic --------------------------------------------------------------

def test_product_bound_constant_is_two_for_all_weights():
    for mr in range(1, 5):
        for ms in range(1, 5):
            assert product_bound_exponent(mr, ms) == 2


def test_verify_bounds_examples():
    rep = verify_seq_bounds(enumerate_best_approx(one(alpha_quad(F2, 80)), CTX, 8))
    assert rep.ok and rep.max_product == LogVal(0)
    rep = verify_seq_bounds(enumerate_best_approx(one(inv_z()), CTX, 3))
    assert rep.ok and rep.max_product == LogVal(0)       # -1 + 1


def test_statistic_alpha_quad():
    seq = enumerate_best_approx(one(alpha_quad(F2, 80)), CTX, 10)
    stat = singular_statistic(seq, -1)
    assert stat and all(v == Fraction(k, k - 1) for k, v in stat)


def test_statistic_terminated_sequence_drops_to_zero():
    seq = enumerate_best_approx(one(liouville_exact(F2, 3)), CTX, 10)
    assert seq.terminated
    stat = singular_statistic(seq, -1)
    assert stat[-1][1] == Fraction(0) or stat[-1][1] < stat[0][1]


def test_classify_examples():
    assert classify_singular(one(inv_z()), CTX, 5).verdict == SINGULAR_CERTIFIED
    c = classify_singular(one(alpha_quad(F2, 80)), CTX, 10)
    assert c.verdict == TREND_NONSINGULAR and c.heuristic
    c = classify_singular(one(liouville(F2, 800)), CTX, 100)
    assert c.verdict == TREND_SINGULAR and c.heuristic


@pytest.mark.parametrize("name", ["inv_z", "liouville4"])
def test_certified_case_is_transpose_symmetric(name):
    from ffapprox.fixtures import named_matrix
    for F in (gf(2), gf(3)):
        A = named_matrix(name, F)
        assert classify_singular(A, CTX if F is F2 else WeightedNormContext(F, (1,), (1,)), 30).verdict == SINGULAR_CERTIFIED
        ctx_t = WeightedNormContext(F, (1,), (1,))
        assert classify_singular(transpose(A), ctx_t, 30).verdict == SINGULAR_CERTIFIED


def test_certified_case_symmetric_for_rectangular_rational_matrix():
    F = gf(3)
    rng = random.Random(11)
    A = random_exact_matrix(F, rng, 1, 2, 2)
    ctx = WeightedNormContext(F, (2,), (1, 1))
    ctx_t = WeightedNormContext(F, (1, 1), (2,))
    assert classify_singular(A, ctx, 12).verdict == SINGULAR_CERTIFIED
    assert classify_singular(transpose(A), ctx_t, 12).verdict == SINGULAR_CERTIFIED


# -- spaced subsequences --------------------------------------------------------------------

def _literal_ok(seq, phi, b, c):
    st_ = seq.steps
    for i, j in zip(phi, phi[1:]):
        if not (i < j and st_[j - 1].Ylog.value >= st_[i - 1].Ylog.value + b):
            return False
        if not st_[i - 1].Mlog + st_[j - 1].Ylog <= LogVal(b + c):
            return False
    return True


def test_alpha_quad_even_indices_are_valid():
    seq = enumerate_best_approx(one(alpha_quad(F2, 80)), CTX, 12)
    assert _literal_ok(seq, [2 * i for i in range(1, 7)], 1, 2)


def test_spaced_subsequence_alpha_quad():
    seq = enumerate_best_approx(one(alpha_quad(F2, 80)), CTX, 12)
    plan = spaced_subsequence(seq, 2, 1, 2)
    assert len(plan.phi) >= 2 and _literal_ok(seq, plan.phi, 1, 2)


def test_spaced_subsequence_liouville_slope():
    seq = enumerate_best_approx(one(liouville(F2, 800)), CTX, 100)
    plan = spaced_subsequence(seq, 6, 4, 2)
    assert _literal_ok(seq, plan.phi, 4, 2)
    assert plan.tail_slope() <= Fraction(1, 6)


def test_spaced_subsequence_preconditions():
    seq = enumerate_best_approx(one(alpha_quad(F2, 80)), CTX, 6)
    with pytest.raises(PreconditionError):
        spaced_subsequence(seq, 1, 1, 2)
    with pytest.raises(PreconditionError):
        spaced_subsequence(seq, 2, 1, -1)
    with pytest.raises(PreconditionError):
        spaced_subsequence(enumerate_best_approx(one(inv_z()), CTX, 3), 2, 1, 2)
    short = enumerate_best_approx(one(alpha_quad(F2, 80)), CTX, 1)
    with pytest.raises(HorizonInsufficient):
        spaced_subsequence(short, 5, 4, 2)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_spaced_subsequence_postcondition_random(seed, b):
    rng = random.Random(seed)
    F = small_field(rng)
    seq = enumerate_best_approx(random_series_matrix(F, rng, 1, 1, 160), WeightedNormContext(F, (1,), (1,)), 12)
    try:
        plan = spaced_subsequence(seq, b + 1, b, 2)
    except HorizonInsufficient:
        return
    assert _literal_ok(seq, plan.phi, b, 2)


# -- inclusion check ----------------------------------------------------------------------

def test_inclusion_eps_formula():
    assert inclusion_eps_log(CTX, -3, 1, 2) == 2 * -3 - 1 - 2
    ctx = WeightedNormContext(F2, (1, 2), (3,))
    assert inclusion_eps_log(ctx, -6, 1, 2) == Fraction(-6) * (1 + Fraction(1, 3)) - 3


def test_inclusion_rejects_zero_target():
    seq = enumerate_best_approx(one(alpha_quad(F2, 80)), CTX, 12)
    plan = spaced_subsequence(seq, 2, 1, 2)
    with pytest.raises(PreconditionError):
        check_bad_inclusion(one(alpha_quad(F2, 80)), (Laurent.zero(F2),), -1, plan, 8, CTX)


def test_inclusion_holds_for_inv_z_target():
    A = one(alpha_quad(F2, 80))
    seq = enumerate_best_approx(A, CTX, 12)
    theta = (inv_z(),)
    # odd-indexed convergent denominators have a nonzero constant term
    plan = SubseqPlan([1, 3, 5, 7, 9, 11], Fraction(2), Fraction(1), Fraction(2), "manual", seq)
    assert _literal_ok(seq, plan.phi, 1, 2)
    assert all(bad_delta_margin(y, theta) == LogVal(-1) for y in plan.vectors())
    rep = check_bad_inclusion(A, theta, -1, plan, 10, CTX)
    assert rep.ok and rep.eps_log == -5
