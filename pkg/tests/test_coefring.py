import cmath
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from owdvv.coefring import (
    I,
    ONE_ELT,
    SQRT2,
    ZERO_ELT,
    MissingAssignment,
    NotAntidifferentiable,
    add,
    antiderive_t,
    const,
    derive_t,
    eval_numeric,
    exp_linear,
    mul,
    var,
)

from .conftest import coef


def test_rational_addition():
    assert add(const(Fraction(1, 2)), const(Fraction(1, 3))) == const(Fraction(5, 6))


def test_exp_cancellation():
    e = exp_linear({2: 1})
    assert add(e, e.scale(-1)).is_zero()


def test_like_terms_merge():
    t = SQRT2 * exp_linear({3: 1})
    assert add(t, t) == t.scale(2)


def test_algebraic_relations():
    assert mul(SQRT2, SQRT2) == const(2)
    assert mul(I, I) == const(-1)
    half = exp_linear({2: Fraction(1, 2)})
    assert mul(half, half) == exp_linear({2: 1})


def test_derivatives():
    assert derive_t(coef("exp(t2/2)"), 2) == coef("exp(t2/2)/2")
    assert derive_t(coef("t2^4/72"), 2) == coef("t2^3/18")
    assert derive_t(coef("t2*exp(t3)"), 1).is_zero()


def test_antiderivatives():
    assert antiderive_t(var(2), 2) == coef("t2^2/2")
    assert antiderive_t(exp_linear({3: 1}), 3) == exp_linear({3: 1})
    assert antiderive_t(coef("t2*exp(t2)"), 2) == coef("(t2 - 1)*exp(t2)")


def test_antiderive_constant_is_zero():
    # t-free-in-j integration constant fixed to zero
    assert antiderive_t(coef("t1*t2"), 2) == coef("t1*t2^2/2")


def test_eval_numeric():
    assert eval_numeric(coef("t1 + 1/2"), {1: 0}) == pytest.approx(0.5)
    assert eval_numeric(exp_linear({2: 1}), {2: 0}) == pytest.approx(1.0)
    assert eval_numeric(mul(SQRT2, SQRT2), {}) == pytest.approx(2.0)


def test_missing_assignment():
    with pytest.raises(MissingAssignment):
        eval_numeric(var(1), {})


def test_render_is_deterministic():
    a = coef("exp(t3) + t1^2*t2 + sqrt2*t2 + I")
    assert a.render() == coef("I + sqrt2*t2 + t1^2*t2 + exp(t3)").render()


# -- property tests -------------------------------------------------------------

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)
alg = st.sampled_from([ONE_ELT, SQRT2, I, SQRT2 * I])


@st.composite
def terms(draw):
    c = const(draw(fractions))
    for j in (1, 2, 3):
        c = c * var(j, draw(st.integers(0, 3))) if draw(st.booleans()) else c
    if draw(st.booleans()):
        arg = {j: draw(st.fractions(-2, 2, max_denominator=3)) for j in draw(st.sets(st.integers(1, 3), max_size=2))}
        c = c * exp_linear(arg)
    return c * draw(alg)


@st.composite
def elements(draw):
    out = ZERO_ELT
    for t in draw(st.lists(terms(), max_size=4)):
        out = out + t
    return out


points = st.fixed_dictionaries({j: st.complex_numbers(max_magnitude=1.5, allow_nan=False, allow_infinity=False) for j in (1, 2, 3)})


@given(elements(), elements(), st.integers(1, 3))
def test_leibniz(a, b, j):
    assert derive_t(a * b, j) == derive_t(a, j) * b + a * derive_t(b, j)


@given(elements(), st.integers(1, 3), st.integers(1, 3))
def test_mixed_partials_commute(a, j, k):
    assert derive_t(derive_t(a, j), k) == derive_t(derive_t(a, k), j)


@given(elements(), st.integers(1, 3))
def test_antiderivative_round_trip(a, j):
    try:
        b = antiderive_t(a, j)
    except NotAntidifferentiable:
        return
    assert derive_t(b, j) == a


@given(elements())
def test_additive_inverse(a):
    assert add(a, -a).is_zero()


@given(elements(), elements(), points)
def test_evaluation_is_a_homomorphism(a, b, pt):
    va, vb = eval_numeric(a, pt), eval_numeric(b, pt)
    for got, want in ((eval_numeric(a + b, pt), va + vb), (eval_numeric(a * b, pt), va * vb)):
        assert cmath.isclose(got, want, rel_tol=1e-12, abs_tol=1e-12 * (1 + abs(va) * (1 + abs(vb))))
