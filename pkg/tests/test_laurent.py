import cmath
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from owdvv.coefring import ONE_ELT, ZERO_ELT, const, exp_linear, var
from owdvv.laurent import (
    AFFINE,
    LaurentPoly,
    RatFunc,
    SeriesError,
    d_dp,
    derive_t,
    primitive_in_p,
    ratfunc_arith,
    series_at,
)

from .conftest import Z_1, Z_I, coef, expr, lpoly


def test_d_dp_affine():
    assert d_dp(lpoly("p^3 + t2*p + t1")) == lpoly("3*p^2 + t2")


def test_d_dp_exp_charts():
    assert d_dp(lpoly("z + z^(-1)", chart=Z_I)) == lpoly("I*z - I*z^(-1)", chart=Z_I)
    lam = lpoly("z^2 + sqrt2*t2*z + t1 + exp(t3)*z^(-1)/sqrt2", chart=Z_1)
    assert d_dp(lam) == lpoly("2*z^2 + sqrt2*t2*z - exp(t3)*z^(-1)/sqrt2", chart=Z_1)


def test_derive_t():
    lam = lpoly("t1 - exp(t2/2)*(z + z^(-1))", chart=Z_I)
    assert derive_t(lam, 2) == lpoly("-exp(t2/2)*(z + z^(-1))/2", chart=Z_I)
    assert derive_t(lpoly("p^3 + t2*p + t1"), 1) == LaurentPoly.one(AFFINE)
    lam = lpoly("z^2 + sqrt2*t2*z + t1 + exp(t3)*z^(-1)/sqrt2", chart=Z_1)
    assert derive_t(lam, 3) == lpoly("exp(t3)*z^(-1)/sqrt2", chart=Z_1)


def test_primitive_affine():
    prim = primitive_in_p(lpoly("p^2 + t1"))
    assert prim.laurent_part == lpoly("p^3/3 + t1*p")
    assert prim.log_coefficient.is_zero()


def test_primitive_trig():
    prim = primitive_in_p(lpoly("t1 - exp(t2/2)*(z + z^(-1))", chart=Z_I))
    assert prim.log_coefficient == coef("t1")
    assert prim.laurent_part == lpoly("I*exp(t2/2)*(z - z^(-1))", chart=Z_I)
    assert "sin(p)" in prim.render_p(("t1", "t2"))


def test_primitive_of_zero():
    prim = primitive_in_p(LaurentPoly.zero(AFFINE))
    assert prim.laurent_part.is_zero() and prim.log_coefficient.is_zero()


def test_series_geometric():
    f = RatFunc(LaurentPoly.one(AFFINE), lpoly("p - t1"))
    s = series_at(f, "infinity", 3)
    assert [s.coeff(-k) for k in (1, 2, 3)] == [coef("1"), coef("t1"), coef("t1^2")]
    with pytest.raises(SeriesError):
        s.coeff(-4)


def test_series_no_residue_term():
    f = RatFunc(lpoly("p^2"), lpoly("3*p^2 + t2"))
    s = series_at(f, "infinity", 3)
    assert s.coeff(0) == const(Fraction(1, 3))
    assert s.coeff(-1).is_zero()
    assert s.coeff(-2) == coef("-t2/9")


def test_series_at_zero_in_z():
    f = RatFunc(LaurentPoly.one(Z_1), lpoly("z", chart=Z_1))
    assert series_at(f, 0, 2).coeff(-1) == ONE_ELT


def test_series_common_zero_rejected():
    f = RatFunc(lpoly("p - 1"), lpoly("p^2 - 1"), reduce=False)
    with pytest.raises(SeriesError):
        series_at(f, const(1), 2)


def test_ratfunc_examples():
    lp = lpoly("3*p^2 + t2")
    assert ratfunc_arith("*", ratfunc_arith("/", LaurentPoly.one(AFFINE), lp), lp) == RatFunc.from_laurent(LaurentPoly.one(AFFINE))
    a = RatFunc(lpoly("p"), lp)
    assert ratfunc_arith("+", a, ratfunc_arith("*", a, LaurentPoly.constant(AFFINE, -1))).is_zero()
    with pytest.raises(ZeroDivisionError):
        ratfunc_arith("/", a, LaurentPoly.zero(AFFINE))


def test_render_trig_back():
    omega = expr("t1*p - 2*exp(t2/2)*sin(p)", 2, Z_I)
    assert omega.render_p(("t1", "t2")).replace(" ", "") in ("t1*p-2*exp(t2/2)*sin(p)", "-2*exp(t2/2)*sin(p)+t1*p")


# -- property tests --------------------------------------------------------------

small = st.fractions(-3, 3, max_denominator=4)
charts = st.sampled_from([AFFINE, Z_1, Z_I])


@st.composite
def coefficients(draw, exp_ok=True):
    c = const(draw(small))
    if draw(st.booleans()):
        c = c + const(draw(small)) * var(draw(st.integers(1, 2)))
    if exp_ok and draw(st.booleans()):
        c = c * exp_linear({2: draw(st.sampled_from([Fraction(1, 2), 1, -1]))})
    return c


@st.composite
def laurents(draw, chart=None, lo=-3, hi=4, exp_ok=True, nonzero=False):
    chart = chart or draw(charts)
    coeffs = {k: draw(coefficients(exp_ok)) for k in draw(st.sets(st.integers(lo, hi), max_size=4))}
    f = LaurentPoly(chart, coeffs)
    if nonzero and f.is_zero():
        f = LaurentPoly.monomial(chart, draw(st.integers(lo, hi)), const(draw(st.integers(1, 3))))
    return f


@given(laurents())
def test_primitive_round_trip(f):
    prim = primitive_in_p(f)
    assert prim.derivative() == f


@given(laurents(), st.integers(1, 2))
def test_d_dp_commutes_with_derive_t(f, j):
    assert d_dp(derive_t(f, j)) == derive_t(d_dp(f), j)


T = {1: 0.3 - 0.2j, 2: 0.7 + 0.1j}


@given(laurents(chart=AFFINE, lo=0, hi=3), st.integers(1, 3), st.data())
def test_series_at_infinity_matches_evaluation(num, degree, data):
    den = LaurentPoly.monomial(AFFINE, degree) + data.draw(laurents(chart=AFFINE, lo=0, hi=degree - 1))
    f = RatFunc(num, den)
    order = 8
    s = series_at(f, "infinity", order)
    x = 1e3
    approx = sum(c.evaluate(T) * x**k for k, c in s.coeffs.items() if k >= -order)
    exact = f.evaluate_p(x, T)
    assert cmath.isclose(approx, exact, rel_tol=1e-9, abs_tol=1e-12)


@given(
    laurents(chart=AFFINE, lo=0, hi=2),
    laurents(chart=AFFINE, lo=0, hi=2, nonzero=True),
    laurents(chart=AFFINE, lo=0, hi=2, exp_ok=False, nonzero=True),
)
def test_ratfunc_equality_matches_evaluation(a, b, c):
    f = RatFunc(a * c, b * c)
    g = RatFunc(a, b)
    assert f == g
    for x in (0.31 + 0.2j, -1.7 + 0.4j, 2.2 - 0.9j, 0.05j, 1.1):
        try:
            fv, gv = f.evaluate_p(x, T), g.evaluate_p(x, T)
        except ZeroDivisionError:
            continue
        assert cmath.isclose(fv, gv, rel_tol=1e-8, abs_tol=1e-10)
    h = RatFunc(a + b, b)
    if not a.is_zero():
        assert h != g or a == b
