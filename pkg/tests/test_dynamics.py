import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffapprox import NEG_INF, Laurent, LogVal, Poly, PreconditionError, RatFunc, Zpoly, gf
from ffapprox.bruteforce import vectors_up_to
from ffapprox.dynamics import (apply_flow, dani_arithmetic_side, dani_trajectory, eventually_in_L_eps,
                               Grid, grid_vectors, in_L_eps, in_X_gt_eps, is_eps_bad, make_target_grid,
                               make_uA_lattice)
from ffapprox.fixtures import alpha_quad, convergents, liouville
from ffapprox.geometry import WeightedNormContext, covol, diagonal_basis, identity_basis, rdist, rs_systole, snorm
from ffapprox.instances import random_context, random_series_matrix, small_field
from ffapprox.matrix import matvec_poly

F2 = gf(2)
Z = Zpoly(F2)
CTX = WeightedNormContext(F2, (1,), (1,))


def one(x):
    return ((x,),)


def inv_z(F=F2):
    return Laurent.exact(RatFunc(Poly.const(F, 1), Zpoly(F)))


def const(c, F=F2):
    return Laurent.const(F, c)


def lattice_grid(L):
    return Grid(L, tuple(Laurent.zero(L.F) for _ in range(L.d)))


def same_rows(a, b):
    return all(x == y for ra, rb in zip(a.rows, b.rows) for x, y in zip(ra, rb))


# -- lattices and the flow ------------------------------------------------------------

def test_uA_lattice_examples():
    g = make_uA_lattice(one(Laurent.zero(F2)), CTX)
    assert same_rows(g.basis, identity_basis(F2, 2)) and g.is_lattice()
    g = make_uA_lattice(one(inv_z()), CTX)
    assert g.basis.rows[0][1] == inv_z() and g.basis.rows[1][0].is_zero()
    assert covol(g.basis) == LogVal(-2)


def test_flow_examples():
    g = lattice_grid(identity_basis(F2, 2))
    assert same_rows(apply_flow(g, 0, CTX).basis, g.basis)
    assert same_rows(apply_flow(g, 1, CTX).basis, diagonal_basis(F2, [1, -1]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-3, 3), st.integers(-3, 3))
def test_flow_group_law_and_unimodularity(seed, l1, l2):
    rng = random.Random(seed)
    F = small_field(rng)
    ctx = random_context(F, rng, rng.randint(1, 2), rng.randint(1, 2))
    A = random_series_matrix(F, rng, ctx.m, ctx.n, 30)
    g = make_uA_lattice(A, ctx)
    a = apply_flow(apply_flow(g, l1, ctx), l2, ctx)
    b = apply_flow(g, l1 + l2, ctx)
    assert same_rows(a.basis, b.basis)
    assert covol(a.basis) == LogVal(-ctx.d)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 3))
def test_systole_flow_equivariance(seed, ell):
    """Systole of the flowed lattice equals a direct minimum over weight-shifted norms."""
    rng = random.Random(seed)
    F = gf(2)
    ctx = WeightedNormContext(F, (1,), (1,))
    A = random_series_matrix(F, rng, 1, 1, 30)
    direct = rs_systole(apply_flow(make_uA_lattice(A, ctx), ell, ctx).basis, ctx)
    best = None
    for (y,) in vectors_up_to(F, [ell + 1]):
        if y.is_zero():
            continue
        Ay = matvec_poly(A, (y,))[0]
        # the integer x nearest A y gives the smallest first coordinate
        v = max(rdist((Ay,), (1,)) + ell, snorm((Laurent.from_poly(y),), (1,)) - ell)
        best = v if best is None or v < best else best
    # y = 0 contributes vectors (x, 0) with |x| >= 1, of norm q^ell
    best = min(best, LogVal(ell))
    assert direct == best


def test_in_X_gt_eps_examples():
    assert in_X_gt_eps(lattice_grid(identity_basis(F2, 2)), -1, CTX)
    assert not in_X_gt_eps(lattice_grid(diagonal_basis(F2, [1, -1])), -1, CTX)
    assert not in_X_gt_eps(lattice_grid(identity_basis(F2, 2)), 0, CTX)
    with pytest.raises(PreconditionError):
        in_X_gt_eps(make_target_grid(one(inv_z()), (inv_z(),), CTX), -1, CTX)


# -- Dani correspondence ------------------------------------------------------------------

def _brute_arith(A, eps, ell):
    """Exhaustive search for y != 0 with <Ay> <= q^(eps-l) and |y| <= q^(eps+l)."""
    top = eps + ell
    if top < 0:
        return False
    for (y,) in vectors_up_to(A[0][0].F, [top]):
        if not y.is_zero() and rdist(matvec_poly(A, (y,)), (1,)) <= LogVal(eps - ell):
            return True
    return False


def test_dani_inv_z_example():
    A = one(inv_z())
    assert dani_arithmetic_side(A, CTX, -1, 1) is None
    assert not _brute_arith(A, -1, 1)
    assert in_X_gt_eps(apply_flow(make_uA_lattice(A, CTX), 1, CTX), -1, CTX)


def test_dani_alpha_quad_bounded_orbit():
    tr = dani_trajectory(one(alpha_quad(F2, 80)), CTX, -1, 20)
    assert tr.agree and tr.escape_fraction == 0


def test_dani_liouville_escapes():
    A = one(liouville(F2, 800))
    fr = [dani_trajectory(A, CTX, -1, N).escape_fraction for N in (10, 40, 100)]
    assert fr[0] < fr[1] < fr[2] and fr[2] > Fraction(1, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 2), st.integers(1, 6))
def test_dani_sides_agree_with_bruteforce(seed, neg_eps, ell):
    rng = random.Random(seed)
    F = small_field(rng)
    A = random_series_matrix(F, rng, 1, 1, 60)
    ctx = WeightedNormContext(F, (1,), (1,))
    lattice = in_X_gt_eps(apply_flow(make_uA_lattice(A, ctx), ell, ctx), -neg_eps, ctx)
    arith = dani_arithmetic_side(A, ctx, -neg_eps, ell)
    assert (arith is not None) == _brute_arith(A, -neg_eps, ell)
    assert lattice != (arith is not None)


# -- grids ----------------------------------------------------------------------------------

def test_target_grid_examples():
    A = one(Laurent.zero(F2))
    assert make_target_grid(A, (Laurent.zero(F2),), CTX).is_lattice()
    g = make_target_grid(A, (inv_z(),), CTX)
    pts = grid_vectors(g, [-1, 0])
    assert pts and all(snorm((p[0],), (1,)) >= LogVal(-1) for p in pts)
    assert any(snorm((p[0],), (1,)) == LogVal(-1) for p in pts)


def test_target_grid_translation_invariance():
    A = one(alpha_quad(F2, 60))
    th = inv_z() + Laurent.monomial(F2, 3)
    a = grid_vectors(make_target_grid(A, (th,), CTX), [1, 2])
    b = grid_vectors(make_target_grid(A, (th + const(1) + Laurent.from_poly(Z),), CTX), [1, 2])
    assert a == b and a


def test_in_L_eps_examples():
    zero = one(Laurent.zero(F2))
    assert not in_L_eps(make_target_grid(zero, (Laurent.zero(F2),), CTX), -5, CTX)
    assert in_L_eps(make_target_grid(zero, (inv_z(),), CTX), -2, CTX)
    assert not in_L_eps(make_target_grid(zero, (inv_z(),), CTX), 3, CTX)


def test_eventually_in_L_eps_alternative_one():
    A = one(inv_z())
    y = Z * Z + Poly.const(F2, 1)
    theta = matvec_poly(A, (y,))
    rep = eventually_in_L_eps(A, theta, CTX, -2, 1, 3, alt_horizon=3)
    assert rep.integral_checked and rep.integral_solution is not None
    resid = matvec_poly(A, rep.integral_solution)[0] - theta[0]
    assert rdist((resid,), (1,)) is NEG_INF


def test_eventually_in_L_eps_alpha_quad():
    A = one(alpha_quad(F2, 80))
    rep = eventually_in_L_eps(A, (inv_z(),), CTX, -2, 1, 12)
    assert rep.passed and rep.checked == list(range(1, 13))
    rep = eventually_in_L_eps(A, (inv_z(),), CTX, 0, 3, 12)
    assert not rep.passed and rep.first_failure == 3


def test_eventually_in_L_eps_zero_target_fails():
    # the zero vector lies in a grid through the origin
    rep = eventually_in_L_eps(one(alpha_quad(F2, 80)), (Laurent.zero(F2),), CTX, -2, 1, 5)
    assert not rep.passed and rep.first_failure == 1


# -- eps-bad search --------------------------------------------------------------------

def _brute_eps_bad(A, theta, eps, H):
    for (x,) in vectors_up_to(A[0][0].F, [H]):
        if x.is_zero():
            continue
        r = matvec_poly(A, (x,))[0] - theta[0]
        if snorm((Laurent.from_poly(x),), (1,)) + rdist((r,), (1,)) < LogVal(eps):
            return x
    return None


def test_eps_bad_zero_matrix():
    res = is_eps_bad(one(Laurent.zero(F2)), (inv_z(),), -1, 6, CTX)
    assert res.witness is None


def test_eps_bad_alpha_quad():
    A = one(alpha_quad(F2, 80))
    zero = (Laurent.zero(F2),)
    assert is_eps_bad(A, zero, -1, 8, CTX).witness is None
    assert _brute_eps_bad(A, zero, -1, 8) is None
    res = is_eps_bad(A, zero, 0, 8, CTX)
    assert res.product_log == LogVal(-1)
    Qs = [q for _, q in convergents([Z] * 10)]
    assert res.witness[0] in Qs or res.witness == (Poly.const(F2, 1),)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-3, 0))
def test_eps_bad_matches_bruteforce(seed, eps):
    rng = random.Random(seed)
    F = gf(2)
    A = random_series_matrix(F, rng, 1, 1, 40)
    theta = (Laurent.truncated(F, 1, [rng.randrange(2) for _ in range(39)], 40),)
    res = is_eps_bad(A, theta, eps, 6, CTX)
    ref = _brute_eps_bad(A, theta, eps, 6)
    assert (res.witness is None) == (ref is None)
    if ref is not None:
        assert res.norm_log == snorm((Laurent.from_poly(ref),), (1,))
