import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from exactstar.scalars import (
    ENN_INF,
    ENN_ZERO,
    ExtendedNonNeg,
    GR_I,
    GR_ONE,
    GR_ZERO,
    GaussianRational,
    MultiIndex,
    RootSum,
    binomial,
    factorial,
    format_rational,
    is_allowed_hbar,
    multi_binomial,
    multi_indices_of_degree,
    multi_indices_up_to_degree,
    multi_range,
    parse_rational,
    pochhammer,
    sqrt_bracket,
    square_free_split,
)

fractions = st.fractions(min_value=-1000, max_value=1000, max_denominator=100)


def gr(a, b=0):
    return GaussianRational.of(Fraction(a), Fraction(b))


def test_gaussian_field_ops():
    x = gr(Fraction(1, 2), Fraction(3, 4))
    y = gr(-2, Fraction(1, 3))
    assert (x + y) - y == x
    assert (x * y) / y == x
    assert x * y == y * x
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()
    assert x.abs_squared() == Fraction(1, 4) + Fraction(9, 16)
    assert GR_I * GR_I == -GR_ONE


def test_gaussian_pow_and_json():
    x = gr(Fraction(3, 5), Fraction(4, 5))
    assert x**4 == x * x * x * x
    assert x**-2 == GR_ONE / (x * x)
    assert x**0 == GR_ONE
    assert GaussianRational.from_json(x.to_json()) == x
    assert GR_ZERO.is_zero() and not x.is_zero()


@given(fractions, fractions, fractions, fractions)
def test_gaussian_mul_matches_complex(a, b, c, d):
    x, y = gr(a, b), gr(c, d)
    z = x * y
    assert z.re == a * c - b * d
    assert z.im == a * d + b * c


def test_multiindex_basics():
    a = MultiIndex((2, 0, 1))
    b = MultiIndex((1, 1, 0))
    assert a + b == MultiIndex((3, 1, 1))
    assert a.minus(MultiIndex((1, 0, 0))) == MultiIndex((1, 0, 1))
    assert a.minus(b) is None
    assert a.meet(b) == MultiIndex((1, 0, 0))
    assert MultiIndex((1, 0, 1)) <= a
    assert not (b <= a)
    assert a.degree() == 3
    assert a.factorial() == 2
    assert MultiIndex.zero(3) == MultiIndex((0, 0, 0))
    assert MultiIndex.unit(3, 1) == MultiIndex((0, 1, 0))


def test_combinatorial_helpers():
    assert binomial(5, 2) == 10
    assert binomial(3, 5) == 0 and binomial(3, -1) == 0
    assert factorial(6) == 720
    assert pochhammer(Fraction(1, 2), 3) == Fraction(1, 2) * Fraction(3, 2) * Fraction(5, 2)
    assert pochhammer(Fraction(7), 0) == 1
    assert multi_binomial(MultiIndex((3, 2)), MultiIndex((1, 2))) == 3
    assert multi_binomial(MultiIndex((1, 0)), MultiIndex((2, 0))) == 0


def test_index_enumerations():
    assert len(list(multi_range(MultiIndex((2, 1))))) == 6
    assert len(list(multi_indices_of_degree(2, 3))) == 4
    ups = list(multi_indices_up_to_degree(2, 3))
    assert len(ups) == 10
    assert len(set(ups)) == 10


def test_allowed_hbar():
    for good in (Fraction(1, 2), Fraction(2), Fraction(-1, 3), Fraction(1, 8)):
        assert is_allowed_hbar(good)
    for bad in (Fraction(0), Fraction(-1, 2), Fraction(-1, 4), Fraction(-1, 6)):
        assert not is_allowed_hbar(bad)


def test_rational_strings():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-2") == Fraction(-2)
    assert format_rational(Fraction(5, 3)) == "5/3"
    assert parse_rational(format_rational(Fraction(-7, 11))) == Fraction(-7, 11)
    with pytest.raises(ValueError):
        parse_rational("one half")


@given(st.fractions(min_value=0, max_value=10**6, max_denominator=10**3))
def test_sqrt_bracket_encloses(q):
    lo, hi = sqrt_bracket(q, Fraction(1, 10**9))
    assert lo * lo <= q <= hi * hi
    assert hi - lo <= Fraction(1, 10**8)


def test_extended_nonneg():
    two = ExtendedNonNeg.of(Fraction(2))
    assert (two + ENN_INF).infinite
    assert (ENN_ZERO * ENN_INF) == ENN_ZERO
    assert (two * ENN_INF).infinite
    assert two.squared() == ExtendedNonNeg.of(Fraction(4))
    assert ENN_ZERO.compare(two) < 0 < ENN_INF.compare(two)
    assert math.isinf(ENN_INF.to_float())


def test_rootsum_arithmetic():
    r = RootSum.sqrt_rational(Fraction(2))
    s = RootSum.sqrt_rational(Fraction(8))
    # sqrt 8 = 2 sqrt 2, so r + s = 3 sqrt 2 = sqrt 18 and r * s = 4
    assert r + s == RootSum.sqrt_rational(Fraction(18))
    prod = r * s
    assert prod.is_rational() and prod.rational_value() == 4
    total = r + s
    lo, hi = total.bracket(Fraction(1, 10**9))
    assert lo <= hi and hi - lo < Fraction(1, 10**6)
    mid = (lo + hi) / 2
    assert abs(float(mid) - 3 * math.sqrt(2)) < 1e-6
    assert (r - r).is_rational() and (r - r).rational_value() == 0


def test_square_free_split():
    assert square_free_split(1) == (1, 1)
    assert square_free_split(16) == (4, 1)
    assert square_free_split(12) == (2, 3)
    assert square_free_split(45) == (3, 5)
    f15 = factorial(15)
    assert square_free_split(f15 * f15) == (f15, 1)
    s, r = square_free_split(f15)
    assert s * s * r == f15
    for k in range(1, 60):
        s, r = square_free_split(k)
        assert s * s * r == k
