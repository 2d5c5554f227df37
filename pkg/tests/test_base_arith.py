from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffapprox import (NEG_INF, FieldSpec, Laurent, LogVal, MalformedInput, PrecisionExhausted, PreconditionError,
                      Poly, RatFunc, Zpoly, abs_val, dist_to_Rv, gf, laurent_from_ratfunc, poly_gcd, poly_xgcd)
from ffapprox.field import default_modulus
from oracles import euclid_gcd, long_division_digits

F2 = gf(2)
F3 = gf(3)
FIELDS = [gf(2), gf(3), gf(5), gf(2, 2), gf(3, 2), gf(2, 3)]


def P(F, *cs):
    return Poly(F, cs)


def ex(F, num, den=(1,)):
    return Laurent.exact(RatFunc(Poly(F, num), Poly(F, den)))


# -- field -----------------------------------------------------------------------

def test_prime_field_tables():
    F = gf(5)
    assert F.mul(3, 4) == 2
    assert F.inv(2) == 3
    assert F.sub(1, 3) == 3


def test_extension_field_inverse_table():
    F = gf(2, 2)
    assert F.modulus == (1, 1, 1)
    for a in F.nonzero():
        assert F.mul(a, F.inv(a)) == 1


def test_default_modulus_is_irreducible_and_monic():
    assert default_modulus(3, 2)[-1] == 1
    assert gf(3, 2).q == 9


def test_field_rejects_bad_input():
    with pytest.raises(PreconditionError):
        FieldSpec(4)
    with pytest.raises(PreconditionError):
        FieldSpec(2, 2, (1, 0, 1))      # Z^2 + 1 = (Z + 1)^2 over F_2
    with pytest.raises(MalformedInput):
        F2.check(2)


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: f"q{F.q}")
def test_field_axioms_exhaustive(F):
    els = list(F.elements())
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        for b in els:
            assert F.mul(a, b) == F.mul(b, a)
            assert F.add(a, b) == F.add(b, a)
            if b:
                assert F.mul(F.div(a, b), b) == a


def test_digit_round_trip():
    F = gf(3, 2)
    for a in F.elements():
        assert F.from_digits(F.digits(a)) == a


# -- polynomials ---------------------------------------------------------------------

def test_poly_examples():
    Z = Zpoly(F2)
    assert (Z + 1) * (Z + 1) == Z * Z + 1
    q, r = divmod(P(F2, 0, 1, 0, 1), P(F2, 0, 0, 1))
    assert (q, r) == (Z, Z)
    assert poly_gcd(Z * Z + 1, Z + 1) == Z + 1


def test_gcd_matches_euclid_oracle():
    a, b = [1, 0, 2, 1, 1], [2, 1, 1]
    g = poly_gcd(P(F3, *a), P(F3, *b))
    assert list(g.coeffs) == euclid_gcd(a, b, 3)


def test_division_by_zero_polynomial():
    with pytest.raises(ZeroDivisionError):
        divmod(P(F2, 1), Poly.zero(F2))


def test_ratfunc_normalised():
    f = RatFunc(P(F3, 2, 2), P(F3, 2, 2, 0, 0))
    assert f.den.lc() == 1
    assert poly_gcd(f.num, f.den).deg() == 0


poly_coeffs = st.lists(st.integers(0, 2), max_size=7)


@settings(max_examples=80, deadline=None)
@given(poly_coeffs, poly_coeffs)
def test_xgcd_bezout(a, b):
    A, B = P(F3, *a), P(F3, *b)
    g, s, t = poly_xgcd(A, B)
    assert s * A + t * B == g
    assert list(g.coeffs) == euclid_gcd(a, b, 3)


@settings(max_examples=80, deadline=None)
@given(poly_coeffs, poly_coeffs.filter(lambda c: any(c)))
def test_divmod_identity(a, b):
    A, B = P(F3, *a), P(F3, *b)
    q, r = divmod(A, B)
    assert q * B + r == A
    assert r.is_zero() or r.deg() < B.deg()


# -- logval --------------------------------------------------------------------------

def test_logval_order_and_parse():
    assert NEG_INF < LogVal(-10 ** 9)
    assert LogVal.parse("3/2") == LogVal(Fraction(3, 2))
    assert LogVal.parse({"log_q": "neg_inf"}) is NEG_INF
    assert str(LogVal(Fraction(-1, 3))) == "-1/3"
    assert NEG_INF + LogVal(5) == NEG_INF
    with pytest.raises(MalformedInput):
        LogVal.parse("one")


# -- Laurent -------------------------------------------------------------------------

def test_expansion_of_polynomial():
    x = laurent_from_ratfunc(RatFunc(P(F2, 1, 0, 0, 1)), 4)
    assert x.valuation() == -3
    assert x.window(-3, 1) == [1, 0, 0, 1]


def test_expansion_matches_long_division():
    x = laurent_from_ratfunc(RatFunc(P(F2, 1), P(F2, 1, 1)), 20)
    assert x.window(1, 21) == long_division_digits([1], [1, 1], 2, 20)
    num, den = [2, 0, 1], [1, 1, 2, 1]
    y = laurent_from_ratfunc(RatFunc(P(F3, *num), P(F3, *den)), 30)
    assert y.window(1, 31) == long_division_digits(num, den, 3, 30)


def test_zero_expansion():
    x = laurent_from_ratfunc(RatFunc(Poly.zero(F2)), 5)
    assert x.is_zero() and abs_val(x) is NEG_INF


def test_abs_val_examples():
    Z = Zpoly(F2)
    assert abs_val(Laurent.exact(Z * Z * Z + 1)) == LogVal(3)
    assert abs_val(Laurent.monomial(F2, 2) + Laurent.monomial(F2, 5)) == LogVal(-2)


def test_dist_examples():
    Z = Zpoly(F2)
    assert dist_to_Rv(Laurent.exact(Z * Z + 1) + Laurent.monomial(F2, 3)) == LogVal(-3)
    assert dist_to_Rv(Laurent.monomial(F2, 1)) == LogVal(-1)
    assert dist_to_Rv(Laurent.exact(Poly.monomial(F2, 5))) is NEG_INF


def test_truncated_valuation_undecidable():
    x = Laurent.truncated(F2, 0, [0, 0, 0], 3)
    with pytest.raises(PrecisionExhausted):
        abs_val(x)


def test_truncated_product_loses_precision():
    x = Laurent.truncated(F2, 1, [1, 0, 1], 4)
    y = x * Laurent.exact(Poly.monomial(F2, 2))
    assert y.prec == 2
    assert dist_to_Rv(y) == LogVal(-1)
    z = x * Laurent.exact(Poly.monomial(F2, 3))
    with pytest.raises(PrecisionExhausted):
        dist_to_Rv(z)


ratfuncs = st.tuples(st.lists(st.integers(0, 2), max_size=5),
                     st.lists(st.integers(0, 2), min_size=1, max_size=4).filter(lambda c: any(c)))


@settings(max_examples=100, deadline=None)
@given(ratfuncs, ratfuncs)
def test_ultrametric_and_multiplicative(f, g):
    x, y = ex(F3, *f), ex(F3, *g)
    ax, ay = abs_val(x), abs_val(y)
    s = abs_val(x + y)
    assert s <= max(ax, ay)
    if ax != ay:
        assert s == max(ax, ay)
    assert abs_val(x * y) == ax + ay


@settings(max_examples=60, deadline=None)
@given(ratfuncs, st.integers(1, 40))
def test_refining_precision_keeps_coefficients(f, n):
    x = ex(F3, *f)
    if x.is_zero():
        return
    v = x.valuation()
    first = x.window(v, v + n)
    x._expand_to(v + 3 * n)
    assert x.window(v, v + n) == first


def test_integral_and_small_means_constant():
    """dist 0 together with |x| <= 1 forces x in F_q: checked over a small pool."""
    for num in range(27):
        cs = [(num // 3 ** k) % 3 for k in range(3)]
        for den in ([1], [0, 1], [1, 1], [0, 0, 1]):
            x = ex(F3, cs, den)
            if dist_to_Rv(x) is NEG_INF and abs_val(x) <= LogVal(0):
                assert x.is_zero() or (x.is_exact and x.backing.num.deg() == 0 and x.backing.den.deg() == 0)
