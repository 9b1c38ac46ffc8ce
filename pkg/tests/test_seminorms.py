from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from exactstar.algebra import DomainError, from_pairs
from exactstar.models import get_model
from exactstar.scalars import ExtendedNonNeg, GaussianRational, RootSum
from exactstar.seminorms import (
    Bracket,
    HTable,
    HVal,
    OmegaWeights,
    check_omega_product_inequality,
    check_product_inequality,
    check_triangle_inequality,
    comparison_constant,
    growth_classify,
    h,
    hval_product,
    omega_h,
    rootsum_bracket,
    rootsum_sign,
    seminorm,
    seminorm_max_ell,
)

from oracles import e_minus_one_decimal, random_gr, seeded

fracs = st.fractions(min_value=-4, max_value=4, max_denominator=6)
nonneg_fracs = st.fractions(min_value=0, max_value=4, max_denominator=6)


def test_bracket_constructors_and_tags():
    b = Bracket.exact(Fraction(3, 2))
    assert b.is_exact() and b.finite_certified() and not b.is_divergent()
    assert b.lo == b.hi.value == Fraction(3, 2)
    assert b.width().value == 0

    d = Bracket.divergent(Fraction(7), depth=3)
    assert d.is_divergent() and not d.finite_certified()
    assert d.lo == 7 and d.midpoint_float() == float("inf")

    t = Bracket.truncated(Fraction(1), depth=5)
    assert not t.is_divergent() and not t.finite_certified()
    assert t.midpoint_float() == 1.0

    e = Bracket.enclosure(Fraction(2), Fraction(2))
    assert e.is_exact()

    with pytest.raises(ValueError):
        Bracket.exact(Fraction(-1))
    with pytest.raises(ValueError):
        Bracket(Fraction(2), ExtendedNonNeg.of(Fraction(1)))


def test_bracket_contains_and_zero():
    b = Bracket.enclosure(Fraction(1, 3), Fraction(1, 2))
    assert b.contains(Fraction(2, 5))
    assert not b.contains(Fraction(1, 4))
    assert not b.contains(Fraction(3, 5))
    assert Bracket.truncated(Fraction(1), 1).contains(Fraction(10**9))
    assert Bracket.exact(0).is_zero()
    assert not Bracket.enclosure(Fraction(0), Fraction(1)).is_zero()


@given(
    lo1=nonneg_fracs, w1=nonneg_fracs, lo2=nonneg_fracs, w2=nonneg_fracs,
    t1=st.fractions(min_value=0, max_value=1, max_denominator=7),
    t2=st.fractions(min_value=0, max_value=1, max_denominator=7),
    s=nonneg_fracs,
)
def test_bracket_arithmetic_encloses(lo1, w1, lo2, w2, t1, t2, s):
    b1 = Bracket.enclosure(lo1, lo1 + w1)
    b2 = Bracket.enclosure(lo2, lo2 + w2)
    x = lo1 + t1 * w1
    y = lo2 + t2 * w2
    assert (b1 + b2).contains(x + y)
    assert (b1 * b2).contains(x * y)
    assert b1.scale(s).contains(x * s)


def test_bracket_root_interval():
    lo, hi = Bracket.exact(16).root_interval(1)
    assert lo == 4 and hi.value == 4
    lo, hi = Bracket.exact(16).root_interval(2)
    assert lo == 2 and hi.value == 2
    lo, hi = Bracket.exact(2).root_interval(1)
    assert lo * lo <= 2 <= hi.value * hi.value
    assert hi.value - lo < Fraction(1, 10**10)
    lo, hi = Bracket.truncated(Fraction(9), 1).root_interval(1)
    assert lo == 3 and hi.infinite


def test_hval_kinds_and_exact_rational():
    assert HVal.exact(Fraction(5, 3)).exact_rational() == Fraction(5, 3)
    assert HVal.modulus_sq(Fraction(9, 4)).exact_rational() == Fraction(3, 2)
    assert HVal.modulus_sq(Fraction(2)).exact_rational() is None
    assert HVal.root(RootSum.rational(Fraction(4))).kind == "exact"
    rs = RootSum.sqrt_rational(Fraction(2))
    assert HVal.root(rs).exact_rational() is None
    assert HVal.zero().is_zero() and HVal.infinite().is_infinite()
    assert HVal.exact(2).exact_string() == "2"
    assert HVal.infinite().exact_string() == "inf"
    assert HVal.root(rs).exact_string() == ""


def test_hval_squared_times_plus():
    s = HVal.modulus_sq(Fraction(2))          # sqrt 2
    assert s.squared().exact_rational() == 2
    assert s.times(Fraction(3)).squared().exact_rational() == 18
    assert s.plus(s).squared().exact_rational() == 8
    mix = HVal.exact(Fraction(1)).plus(s)     # 1 + sqrt 2, a root sum
    assert mix.kind == "root"
    assert mix.exact_rational() is None
    br = mix.to_bracket()
    assert br.contains(Fraction(24142, 10**4)) is False  # just above
    assert br.lo < Fraction(24143, 10**4)
    # infinity absorbs, except against zero weight
    assert HVal.infinite().plus(HVal.exact(1)).is_infinite()
    assert HVal.infinite().times(Fraction(0)).is_zero()
    assert HVal.zero().times(ExtendedNonNeg.infinity()).is_zero()
    assert HVal.exact(1).times(ExtendedNonNeg.infinity()).is_infinite()


def test_hval_product():
    s2 = HVal.modulus_sq(Fraction(2))
    s8 = HVal.modulus_sq(Fraction(8))
    assert hval_product(s2, s8).exact_rational() == 4
    assert hval_product(HVal.zero(), HVal.infinite()).is_zero()
    assert hval_product(HVal.infinite(), HVal.exact(3)).is_infinite()
    b = HVal.bracket(Bracket.enclosure(Fraction(1), Fraction(2)))
    out = hval_product(b, HVal.exact(3))
    assert out.kind == "bracket"
    assert out.to_bracket().contains(Fraction(4))


def test_rootsum_sign_and_bracket():
    rs = RootSum.sqrt_rational(Fraction(2)) + RootSum.rational(Fraction(-3, 2))
    assert rootsum_sign(rs) == -1
    assert rootsum_sign(RootSum.sqrt_rational(Fraction(2)) + RootSum.rational(Fraction(-1))) == 1
    assert rootsum_sign(RootSum.rational(Fraction(0))) == 0
    assert rootsum_bracket(RootSum.rational(Fraction(7, 2))).is_exact()
    with pytest.raises(ValueError):
        rootsum_bracket(RootSum.rational(Fraction(-1)))


def test_h_poly_pinned_values():
    m = get_model("poly:monomial")
    a = from_pairs([(0, 1), (1, 2)])  # 1 + 2z
    assert h(m, a, 0, 0, 1).value == 2
    assert [h(m, a, 1, 0, g).value for g in range(4)] == [1, 5, 5, 5]
    assert h(m, a, 2, 0, 1).value == 26
    assert h(m, a, 2, 1, 1).value == 26
    b = from_pairs([(0, 1), (1, 1)])  # 1 + z
    assert [h(m, b, 1, 0, g).value for g in range(3)] == [1, 2, 2]
    mf = get_model("poly:factorial")
    assert [h(mf, a, 1, 0, g).value for g in range(4)] == [1, 5, 9, 13]


def test_h_table_input_validation():
    m = get_model("poly:monomial")
    t = HTable(m, from_pairs([(0, 1)]))
    with pytest.raises(ValueError):
        t.h(-1, 0, 0)
    with pytest.raises(ValueError):
        t.h(1, 2, 0)  # branch word must sit below 2^m


@given(data=st.data())
@settings(max_examples=40, deadline=None)
def test_homogeneity_exact(data):
    rng = seeded(data.draw(st.integers(0, 10**6)))
    model = get_model("poly:monomial")
    pairs = [(k, random_gr(rng)) for k in rng.sample(range(6), 3)]
    a = from_pairs(pairs)
    c = random_gr(rng)
    q = c.abs_squared()
    ca = a.scale(c)
    for m in (1, 2):
        for g in range(4):
            lhs = h(model, ca, m, 0, g).value
            rhs = q ** (2 ** (m - 1)) * h(model, a, m, 0, g).value
            assert lhs == rhs


def test_homogeneity_unit_modulus():
    # (3+4i)/5 lies on the unit circle, so every h value is untouched
    model = get_model("poly:monomial")
    a = from_pairs([(0, Fraction(1, 3)), (2, GaussianRational.of(1, 1))])
    c = GaussianRational.of(Fraction(3, 5), Fraction(4, 5))
    assert c.abs_squared() == 1
    ca = a.scale(c)
    for m in (0, 1, 2):
        for g in range(4):
            assert h(model, ca, m, 0, g) == h(model, a, m, 0, g)


def test_branch_word_independence_commutative():
    cases = [
        ("poly:monomial", from_pairs([(0, 1), (1, GaussianRational.of(0, 2)), (3, -1)])),
        ("poly:factorial", from_pairs([(0, 1), (2, Fraction(1, 2))])),
        ("laurent:factorial", from_pairs([(-2, 1), (1, GaussianRational.of(1, 1))])),
    ]
    for name, a in cases:
        model = get_model(name)
        assert model.commutative
        table = HTable(model, a)
        for m in (1, 2):
            for g in (-1, 0, 2) if name.startswith("laurent") else (0, 2):
                vals = [table.h(m, ell, g) for ell in range(1 << m)]
                base = vals[0].to_bracket()
                for v in vals[1:]:
                    vb = v.to_bracket()
                    assert vb.lo == base.lo and vb.is_divergent() == base.is_divergent()


@given(data=st.data())
@settings(max_examples=30, deadline=None)
def test_monotone_in_added_terms(data):
    # appending a fresh monomial can only push h values up
    rng = seeded(data.draw(st.integers(0, 10**6)))
    model = get_model("poly:monomial")
    a = from_pairs([(k, random_gr(rng)) for k in (0, 2)])
    extra = from_pairs([(5, random_gr(rng))])
    both = a + extra
    for m in (1, 2):
        for g in range(4):
            assert h(model, both, m, 0, g).value >= h(model, a, m, 0, g).value


@given(data=st.data())
@settings(max_examples=25, deadline=None)
def test_triangle_inequality_poly(data):
    rng = seeded(data.draw(st.integers(0, 10**6)))
    model = get_model("poly:monomial")
    a = from_pairs([(k, random_gr(rng)) for k in rng.sample(range(5), 2)])
    b = from_pairs([(k, random_gr(rng)) for k in rng.sample(range(5), 2)])
    for m in (0, 1, 2):
        assert check_triangle_inequality(model, a, b, m, 0, 1)
        assert check_triangle_inequality(model, a, b, m, 0, 3)


def test_triangle_inequality_root_weights():
    model = get_model("group:Z", epsilon=Fraction(1, 2))
    a = from_pairs([(0, 1), (2, GaussianRational.of(0, 1))])
    b = from_pairs([(-1, Fraction(1, 2)), (2, 1)])
    for m in (0, 1, 2):
        assert check_triangle_inequality(model, a, b, m, 0, 1)


@given(data=st.data())
@settings(max_examples=25, deadline=None)
def test_product_inequality_poly_exact(data):
    rng = seeded(data.draw(st.integers(0, 10**6)))
    model = get_model("poly:monomial")
    a = from_pairs([(k, random_gr(rng)) for k in rng.sample(range(4), 2)])
    b = from_pairs([(k, random_gr(rng)) for k in rng.sample(range(4), 2)])
    for m in (0, 1):
        for g in range(5):
            out = check_product_inequality(model, a, b, m, 0, g)
            assert out["holds"] is True
            assert out["mode"] in ("exact", "root-sum-exact", "right-side-infinite")


def test_product_inequality_divergent_right_side():
    model = get_model("laurent:plain")
    a = from_pairs([(0, 1), (1, 1)])
    out = check_product_inequality(model, a, a, 1, 0, 0)
    assert out["holds"] is True
    assert out["mode"] == "right-side-infinite"


def test_product_inequality_group_weights():
    model = get_model("group:Z", epsilon=Fraction(1))
    a = from_pairs([(0, 1), (1, 1)])
    b = from_pairs([(1, 1), (-2, GaussianRational.of(1, 1))])
    for g in (-1, 0, 1, 3):
        out = check_product_inequality(model, a, b, 1, 0, g)
        assert out["holds"] is True


def test_triangle_equality_proportional():
    # b = 2a makes both sides equal at every level; must resolve, not loop
    model = get_model("poly:monomial")
    a = from_pairs([(0, 1), (3, GaussianRational.of(1, 1))])
    b = a.scale(2)
    for m in (0, 1, 2):
        assert check_triangle_inequality(model, a, b, m, 0, 3)


def test_seminorm_presentation():
    model = get_model("poly:monomial")
    a = from_pairs([(0, 1), (1, 2)])
    r = seminorm(model, a, 1, 0, 1)
    assert r.h_bracket.is_exact() and r.h_bracket.lo == 5
    assert r.root_lo**2 <= 5 <= r.root_hi.value**2
    assert abs(r.value_float - 5**0.5) < 1e-9
    assert not r.divergent

    div = seminorm(get_model("laurent:plain"), from_pairs([(0, 1), (2, 1)]), 2, 0, 0)
    assert div.divergent and div.value_float == float("inf")


def test_seminorm_max_ell_picks_largest():
    model = get_model("matrix:hat")
    a = from_pairs([((0, 1), 1), ((1, 0), 2)])
    best = seminorm_max_ell(model, a, 2, (0, 0))
    table = HTable(model, a)
    for ell in range(4):
        br = table.h(2, ell, (0, 0)).to_bracket()
        if br.finite_certified() and best.h_bracket.finite_certified():
            assert br.lo <= best.h_bracket.hi.value


def test_omega_coefficient_functional():
    model = get_model("poly:monomial")
    a = from_pairs([(0, 1), (1, 2)])
    br = omega_h(model, a, 0, 0, OmegaWeights.coefficient(1), 0)
    assert br.is_exact() and br.lo == 2
    br = omega_h(model, a, 1, 0, OmegaWeights.coefficient(1), 0)
    assert br.is_exact() and br.lo == 5


def test_omega_point_certified_tail():
    # geometric weights under the eventually constant h row: the certified
    # value is 1 + 5 * sum_{g>=1} 2^-g = 6
    model = get_model("poly:monomial")
    a = from_pairs([(0, 1), (1, 2)])
    br = omega_h(model, a, 1, 0, OmegaWeights.point(Fraction(1, 2)), 4)
    assert br.finite_certified() and not br.is_divergent()
    assert br.contains(Fraction(6))
    assert br.hi.value - br.lo < Fraction(1, 10**6)

    brf = omega_h(get_model("poly:factorial"), a, 1, 0, OmegaWeights.point(Fraction(1, 2)), 4)
    assert brf.finite_certified()
    assert brf.contains(Fraction(10))


def test_omega_point_divergence_witness():
    model = get_model("poly:monomial")
    a = from_pairs([(0, 1), (1, 2)])
    for radius in (Fraction(1), Fraction(3, 2)):
        br = omega_h(model, a, 1, 0, OmegaWeights.point(radius), 4)
        assert br.is_divergent()
        assert br.lo > 0


def test_omega_point_factorial_tames_radius():
    # factorial basis weights beat any fixed radius
    model = get_model("poly:monomial")
    a = from_pairs([(0, 1), (1, 2)])
    br = omega_h(model, a, 1, 0, OmegaWeights.point_factorial(Fraction(3)), 4)
    assert br.finite_certified()
    # 1 + 5(e^3 - 1), checked against a decimal window for e^3
    import decimal

    decimal.getcontext().prec = 40
    e3 = decimal.Decimal(3).exp()
    lo = Fraction(str(e3 - decimal.Decimal(10) ** -30)) * 5 - 4
    hi = Fraction(str(e3 + decimal.Decimal(10) ** -30)) * 5 - 4
    assert br.lo <= hi and lo <= br.hi.value


def test_omega_m_zero_is_weighted_modulus_sum():
    model = get_model("poly:monomial")
    a = from_pairs([(0, 3), (2, 4)])
    br = omega_h(model, a, 0, 0, OmegaWeights.point(Fraction(1, 2)), 0)
    assert br.is_exact()
    assert br.lo == 3 + Fraction(4, 4)


def test_omega_table_weights_validate():
    with pytest.raises(ValueError):
        OmegaWeights.from_table({0: Fraction(-1)})
    w = OmegaWeights.from_table({0: Fraction(1), 3: Fraction(2)})
    assert w.weight(0, 0) == 1
    assert w.weight(3, 3) == 2
    assert w.weight(1, 1) == 0


def test_omega_product_inequality():
    model = get_model("poly:monomial")
    a = from_pairs([(0, 1), (1, 2)])
    b = from_pairs([(0, 1), (2, -1)])
    assert check_omega_product_inequality(model, a, b, 1, 0, OmegaWeights.point(Fraction(1, 3)), 6)
    w = OmegaWeights.from_table({0: Fraction(1), 1: Fraction(1, 2)})
    assert check_omega_product_inequality(get_model("laurent:factorial"), a, b, 1, 0, w, 4)


def test_comparison_constant_brackets_e_minus_one():
    br = comparison_constant(Fraction(1), 20)
    lo, hi = e_minus_one_decimal(45)
    assert br.lo <= hi and lo <= br.hi.value
    assert br.width().value < Fraction(1, 10**10)


def test_comparison_constant_half_integer():
    br = comparison_constant(Fraction(1, 2), 12)
    assert br.finite_certified()
    assert Fraction(246, 100) < br.lo < br.hi.value < Fraction(248, 100)


def test_comparison_constant_rejects_bad_epsilon():
    with pytest.raises(DomainError):
        comparison_constant(Fraction(0), 5)
    with pytest.raises(DomainError):
        comparison_constant(Fraction(1, 3), 5)
    with pytest.raises(ValueError):
        comparison_constant(Fraction(1), 0)


def test_growth_classify_exponential():
    seq = {k: Fraction(2) ** k for k in range(7)}
    out = growth_classify(seq, lambda k: k, [Fraction(1, 2), Fraction(1)],
                          bound={"kind": "exponential", "base": 2})
    for entry in out["entries"]:
        assert entry["subfactorial"] is True
        cert = entry["certified_sup"]
        samp = entry["sample_sup"]
        assert cert.finite_certified()
        # sample sup cannot exceed the certified one
        assert samp.lo <= cert.hi.value
    assert "1" in out["comparison_constants"]


def test_growth_classify_factorial():
    from exactstar.scalars import factorial

    seq = {k: Fraction(factorial(k)) for k in range(6)}
    out = growth_classify(seq, lambda k: k, [Fraction(1, 2), Fraction(1), Fraction(3, 2)],
                          bound={"kind": "factorial"})
    half, one, three_half = out["entries"]
    assert half["subfactorial"] is False
    assert half["witness_rank"] >= 1
    assert one["subfactorial"] is True
    assert one["certified_sup"].lo == 1
    assert three_half["subfactorial"] is True
