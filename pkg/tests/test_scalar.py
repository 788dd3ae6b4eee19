from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from qkbench.scalar import (
    EQ,
    GT,
    I,
    INV_SQRT2,
    LT,
    ONE,
    SQRT2,
    ZERO,
    ExtScalar,
    ScalarError,
    cmp_to_rational,
    ext_arith,
    format_scalar,
    parse_rational,
    parse_scalar,
)

mpmath.mp.dps = 100

small_q = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.builds(ExtScalar, small_q, small_q, small_q, small_q)
reals = st.builds(ExtScalar, small_q, small_q)


def to_sympy(x: ExtScalar):
    r2 = sympy.sqrt(2)
    q = lambda f: sympy.Rational(f.numerator, f.denominator)  # noqa: E731
    return q(x.a) + q(x.b) * r2 + sympy.I * (q(x.c) + q(x.d) * r2)


def to_mp(x: ExtScalar):
    r2 = mpmath.sqrt(2)
    q = lambda f: mpmath.mpf(f.numerator) / f.denominator  # noqa: E731
    return mpmath.mpc(q(x.a) + q(x.b) * r2, q(x.c) + q(x.d) * r2)


def same(x: ExtScalar, value) -> bool:
    # 100-digit evaluation; exact results differ from it only by rounding
    return abs(to_mp(x) - value) <= mpmath.mpf(10) ** -80 * (1 + abs(value))


@pytest.mark.parametrize(
    "x, y",
    [(ONE + SQRT2, ONE - SQRT2), (INV_SQRT2 + I, SQRT2 - I * INV_SQRT2), (ExtScalar(1, 2, 3, 4), ExtScalar(-5, 1, 0, 2))],
)
def test_products_match_symbolic_oracle(x, y):
    assert sympy.expand(to_sympy(x * y) - to_sympy(x) * to_sympy(y)) == 0


def test_difference_of_squares():
    assert ext_arith(ONE + SQRT2, ONE - SQRT2, "mul") == ExtScalar(-1)


def test_conj_negates_imaginary():
    assert ext_arith(I * SQRT2, None, "conj") == ExtScalar(0, 0, 0, -1)


def test_inverse_of_one_plus_root_two():
    # oracle: (1 + r2)(-1 + r2) = 2 - 1 = 1
    assert sympy.expand((1 + sympy.sqrt(2)) * (-1 + sympy.sqrt(2))) == 1
    assert ext_arith(ONE, ONE + SQRT2, "div") == ExtScalar(-1, 1)


def test_division_by_zero_is_explicit():
    with pytest.raises(ZeroDivisionError):
        ext_arith(ONE, ZERO, "div")
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_cmp_examples():
    # (5 r2)^2 = 50 > 49 = 7^2
    assert 50 > 49
    assert cmp_to_rational(INV_SQRT2, Fraction(7, 10)) == GT
    assert cmp_to_rational(ExtScalar(Fraction(1, 2)), Fraction(1, 2)) == EQ
    assert cmp_to_rational(ZERO, Fraction(1, 4)) == LT


def test_cmp_rejects_complex():
    with pytest.raises(ScalarError):
        cmp_to_rational(I, 0)


@settings(max_examples=300)
@given(scalars, scalars)
def test_ring_ops_match_high_precision(x, y):
    assert same(x * y, to_mp(x) * to_mp(y))
    assert same(x + y, to_mp(x) + to_mp(y))
    assert same(x - y, to_mp(x) - to_mp(y))


@settings(max_examples=150)
@given(scalars, scalars)
def test_division_matches_high_precision(x, y):
    if y.is_zero():
        return
    assert same(x / y, to_mp(x) / to_mp(y))


@given(scalars)
def test_conj_involution_and_norm(x):
    assert x.conj().conj() == x
    n = x * x.conj()
    assert n.is_real()
    assert cmp_to_rational(n, 0) in (EQ, GT)
    assert (cmp_to_rational(n, 0) == EQ) == x.is_zero()


@settings(max_examples=400)
@given(reals, small_q)
def test_cmp_agrees_with_high_precision(x, q):
    val = mpmath.mpf(x.a.numerator) / x.a.denominator + mpmath.mpf(x.b.numerator) / x.b.denominator * mpmath.sqrt(2)
    ref = mpmath.mpf(q.numerator) / q.denominator
    expected = (val > ref) - (val < ref)
    assert cmp_to_rational(x, q) == expected


@given(scalars)
def test_format_parse_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(scalars)
def test_rational_values_hash_like_fractions(x):
    if x.is_rational():
        assert hash(x) == hash(x.a)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("0", ZERO),
        ("1/2*r2", INV_SQRT2),
        (" 1 + r2 ", ONE + SQRT2),
        ("-3/4*i", ExtScalar(0, 0, Fraction(-3, 4))),
        ("1/2 + 1/3*r2 + 1/4*i + 1/5*i*r2", ExtScalar(Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 5))),
        ("i*r2", I * SQRT2),
        ("r2*i", I * SQRT2),
        ("1/2-1/2*r2", ExtScalar(Fraction(1, 2), Fraction(-1, 2))),
    ],
)
def test_parse_examples(text, expected):
    assert parse_scalar(text) == expected


@pytest.mark.parametrize("text", ["", "1/0", "x", "1 +", "r3", "1//2"])
def test_parse_rejects(text):
    with pytest.raises(ScalarError):
        parse_scalar(text)


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("2") == 2
    with pytest.raises(ScalarError):
        parse_rational("r2")


def test_canonical_equality_is_structural():
    assert ExtScalar(Fraction(2, 4)) == ExtScalar(Fraction(1, 2))
    assert INV_SQRT2 * INV_SQRT2 == ExtScalar(Fraction(1, 2))
    assert SQRT2 / 2 == INV_SQRT2
