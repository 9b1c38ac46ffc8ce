from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from exactstar.algebra import DomainError, Element, InfiniteFanError, multiply
from exactstar.cone import (
    ConeModel,
    DiskModel,
    cone_rowsum,
    cone_rowsum_gamma_total,
    cone_y,
    disk_coefficient_extraction,
    disk_lift,
    disk_multiply,
    disk_reduce,
    eval_disk,
    eval_pair,
    eval_upstairs,
    h_combined,
    ideal_level_dimension,
    occupancy_count,
    oracle_structure_constants,
    reduce_class,
    seminorm_R,
    tilde_structure_constants,
    vanishing_ideal_witness,
    y_minus_one,
)
from exactstar.models import get_model
from exactstar.scalars import GaussianRational, MultiIndex, pochhammer, factorial
from exactstar.seminorms import HTable

from oracles import random_cone_element, random_disk_element, random_gr, seeded

H = Fraction(1, 2)
Z1 = MultiIndex((0,))
E1 = MultiIndex((1,))

# five rational points of the cone surface y = 1 with their quotient images
SURFACE_POINTS = [
    ((GaussianRational.of(1), GaussianRational.of(0)), GaussianRational.of(0)),
    (
        (GaussianRational.of(Fraction(5, 4)), GaussianRational.of(Fraction(3, 4))),
        GaussianRational.of(Fraction(3, 5)),
    ),
    (
        (GaussianRational.of(Fraction(13, 12)), GaussianRational.of(Fraction(5, 12))),
        GaussianRational.of(Fraction(5, 13)),
    ),
    (
        (GaussianRational.of(Fraction(5, 3)), GaussianRational.of(Fraction(4, 3))),
        GaussianRational.of(Fraction(4, 5)),
    ),
    (
        (GaussianRational.of(Fraction(5, 4)), GaussianRational.of(0, Fraction(3, 4))),
        GaussianRational.of(0, Fraction(3, 5)),
    ),
]

# interior points with y != 1 exercise the pointwise law away from the surface
INTERIOR_POINTS = [
    (GaussianRational.of(2), GaussianRational.of(0)),
    (GaussianRational.of(2), GaussianRational.of(1)),
    (GaussianRational.of(Fraction(3, 2)), GaussianRational.of(Fraction(1, 2))),
    (GaussianRational.of(1), GaussianRational.of(0, Fraction(1, 2))),
    (GaussianRational.of(Fraction(5, 4), Fraction(1, 4)), GaussianRational.of(Fraction(1, 2))),
]


def _triples(n, level):
    return list(ConeModel(n, H).indices_up_to(level))


def test_two_routes_agree_n1():
    for t1 in _triples(1, 2):
        for t2 in _triples(1, 2):
            ref = tilde_structure_constants(t1, t2)
            for hb in (H, Fraction(3, 7)):
                assert oracle_structure_constants(t1, t2, hb) == ref


def test_two_routes_agree_n2():
    for t1 in _triples(2, 1):
        for t2 in _triples(2, 1):
            assert oracle_structure_constants(t1, t2, Fraction(1)) == tilde_structure_constants(
                t1, t2
            )


def test_constant_support_window_and_occupancy():
    for t1 in _triples(1, 2):
        for t2 in _triples(1, 2):
            alpha, beta = t1[2], t2[2]
            for (I, J, g), c in tilde_structure_constants(t1, t2).items():
                assert isinstance(c, Fraction) and c != 0
                assert max(alpha, beta) <= g <= alpha + beta
                assert occupancy_count(t1, t2, (I, J, g)) in (0, 1)


def test_constant_transpose_mirror():
    for t1 in _triples(1, 2):
        for t2 in _triples(1, 2):
            fwd = tilde_structure_constants(t1, t2)
            back = tilde_structure_constants((t2[1], t2[0], t2[2]), (t1[1], t1[0], t1[2]))
            assert back == {(J, I, g): c for (I, J, g), c in fwd.items()}


def test_rowsum_zero_above_level_and_at_least_one():
    t = (Z1, Z1, 2)
    assert cone_rowsum(t, (Z1, Z1, 1)) == 0
    for alpha in range(3):
        for gamma in range(alpha, 4):
            assert cone_rowsum((Z1, Z1, alpha), (Z1, Z1, gamma)) >= 1
    assert cone_rowsum((E1, Z1, 1), (E1, Z1, 1)) >= 1


def test_rowsum_matches_brute_force():
    from exactstar.scalars import multi_indices_up_to_degree

    targets = [(I, J, g) for g in range(3) for I in (Z1, E1) for J in (Z1, E1)
               if I.degree() <= g and J.degree() <= g]
    for t in [(Z1, Z1, 1), (E1, Z1, 1), (E1, E1, 2)]:
        for out in targets:
            brute = Fraction(0)
            for beta in range(out[2] + 1):
                for R in multi_indices_up_to_degree(1, beta):
                    for S in multi_indices_up_to_degree(1, beta):
                        c = tilde_structure_constants(t, (R, S, beta)).get(out)
                        if c is not None:
                            brute += abs(c)
            assert cone_rowsum(t, out) == brute


def test_rowsum_gamma_total_bound():
    for t in _triples(1, 2):
        for gamma in range(5):
            total = cone_rowsum_gamma_total(t, gamma)
            assert total <= Fraction(gamma + 1) ** 5 * Fraction(4) ** gamma


def test_cone_associativity_on_basis():
    model = ConeModel(1, H)
    basis = [Element.basis(t) for t in _triples(1, 1)]
    for a in basis:
        for b in basis:
            ab = multiply(model, a, b)
            for c in basis:
                assert multiply(model, ab, c) == multiply(model, a, multiply(model, b, c))


def test_cone_unit_and_involution():
    model = ConeModel(1, H)
    rng = seeded(3)
    a = random_cone_element(rng, 1, 2)
    b = random_cone_element(rng, 1, 2)
    u = model.unit()
    assert multiply(model, u, a) == a
    assert multiply(model, a, u) == a
    lhs = model.involution(multiply(model, a, b))
    rhs = multiply(model, model.involution(b), model.involution(a))
    assert lhs == rhs
    assert model.involution(Element.basis((E1, Z1, 1))) == Element.basis((Z1, E1, 1))


def test_h_combined_pins():
    model = ConeModel(1, H)
    u = model.unit()
    assert [h_combined(model, u, 0, 0, g).exact_rational() for g in range(3)] == [1, 0, 0]
    assert [h_combined(model, u, 1, 0, g).exact_rational() for g in range(3)] == [1, 4, 9]
    a = Element.basis((Z1, Z1, 1))
    assert [h_combined(model, a, 1, 0, g).exact_rational() for g in range(4)] == [0, 3, 18, 60]
    assert h_combined(model, a, 2, 1, 2).exact_rational() == 538
    # single-term elements reduce the combined value to a row-sum total
    for g in range(4):
        assert h_combined(model, a, 1, 0, g).exact_rational() == cone_rowsum_gamma_total(
            (Z1, Z1, 1), g
        )


def test_h_combined_vanishes_below_filtration():
    model = ConeModel(1, H)
    table = HTable(model, Element.basis((Z1, Z1, 2)))
    for m in (1, 2):
        for idx in model.indices_up_to(1):
            assert table.h(m, 0, idx).is_zero()


def test_combined_square_inequality():
    model = ConeModel(1, H)
    rng = seeded(9)
    for _ in range(3):
        a = random_cone_element(rng, 1, 2, nterms=3)
        table = HTable(model, a)
        for m in (0, 1):
            for ell in range(1 << m):
                for g in range(3):
                    lhs = sum(
                        (h_combined(model, a, m, ell, al, table).exact_rational() or Fraction(0))
                        ** 2
                        for al in range(g + 1)
                    )
                    rhs = (g + 1) ** 2 * h_combined(model, a, m + 1, 2 * ell, g, table).exact_rational()
                    assert lhs <= rhs


def test_growth_certificate_dominates():
    from exactstar.cone import _growth_certificate

    model = ConeModel(1, H)
    rng = seeded(21)
    a = random_cone_element(rng, 1, 2, nterms=3)
    table = HTable(model, a)
    for m in (0, 1, 2):
        K, B, p = _growth_certificate(model, a, m)
        for g in range(5):
            br = h_combined(model, a, m, 0, g, table).to_bracket()
            assert not br.hi.infinite
            assert br.hi.value <= K * B**g * Fraction(g + 1) ** p


def test_seminorm_R_brackets_nest_and_shrink():
    model = ConeModel(1, H)
    a = Element.basis((Z1, Z1, 1))
    prev = None
    for depth in (2, 4, 6, 8):
        br = seminorm_R(model, a, 1, 0, Fraction(1, 3), depth)
        assert br.finite_certified()
        if prev is not None:
            assert br.lo >= prev.lo
            assert br.hi.value <= prev.hi.value
        prev = br
    assert seminorm_R(model, Element.zero(), 1, 0, Fraction(1, 3), 2).is_zero()
    with pytest.raises(DomainError):
        seminorm_R(model, a, 1, 0, Fraction(0), 2)


def test_eval_upstairs_pins():
    for g in range(4):
        v = eval_upstairs(Element.basis((Z1, Z1, g)), (1, 0), H)
        assert v == GaussianRational.of(Fraction(1, factorial(g)))
    for hb in (Fraction(1, 3), Fraction(2)):
        v = eval_upstairs(Element.basis((Z1, Z1, 2)), (1, 0), hb)
        assert v == GaussianRational.of(pochhammer(Fraction(1, 2 * hb), 2) / 4)
    v = eval_upstairs(Element.basis((E1, E1, 1)), (Fraction(5, 4), Fraction(3, 4)), H)
    assert v == GaussianRational.of(Fraction(9, 16))


def test_eval_upstairs_rejects_outside_points():
    a = Element.basis((Z1, Z1, 0))
    with pytest.raises(DomainError):
        eval_upstairs(a, (Fraction(1, 2), 1), H)
    with pytest.raises(DomainError):
        eval_upstairs(a, (0, 0), H)
    with pytest.raises(DomainError):
        eval_upstairs(a, (1, 0), Fraction(0))


def test_quotient_eval_consistency():
    rng = seeded(17)
    for _ in range(4):
        a = random_cone_element(rng, 1, 2)
        d = disk_reduce(a, H)
        for w, v in SURFACE_POINTS:
            assert eval_upstairs(a, w, H) == eval_disk(d, (v,), H)


def test_reduce_class_pins():
    got = reduce_class((Z1, Z1, 1), H)
    assert got == Element(
        {(Z1, Z1): GaussianRational.of(1), (E1, E1): GaussianRational.of(1)}
    )
    got = reduce_class((Z1, Z1, 1), Fraction(1))
    assert got == Element(
        {(Z1, Z1): GaussianRational.of(Fraction(1, 2)), (E1, E1): GaussianRational.of(1)}
    )
    # level-zero classes drop the level marker and stay put
    assert reduce_class((E1, Z1, 1), H).coeff((E1, Z1)) != GaussianRational.of(0)


def test_ideal_dimension_pins():
    assert ideal_level_dimension(1, H, 2) == 5
    assert ideal_level_dimension(1, H, 3) == 14
    assert ideal_level_dimension(1, Fraction(1), 2) == 5
    assert ideal_level_dimension(1, Fraction(1), 3) == 14


def test_quotient_kills_ideal():
    rng = seeded(29)
    for _ in range(5):
        a = random_cone_element(rng, 1, 2)
        b = random_cone_element(rng, 1, 2)
        w = vanishing_ideal_witness(b, H, 1)
        assert disk_reduce(a + w, H) == disk_reduce(a, H)
        for pt, _v in SURFACE_POINTS:
            assert eval_upstairs(w, pt, H).is_zero()


def test_radial_pointwise_law():
    rng = seeded(31)
    for _ in range(4):
        b = random_cone_element(rng, 1, 2)
        w = vanishing_ideal_witness(b, H, 1)
        for pt in INTERIOR_POINTS:
            y = cone_y(pt)
            lhs = eval_upstairs(w, pt, H)
            rhs = GaussianRational.of(y - 1) * eval_upstairs(b, pt, H)
            assert lhs == rhs


def test_y_minus_one_values():
    ym1 = y_minus_one(1, H)
    for pt in INTERIOR_POINTS + [w for w, _ in SURFACE_POINTS]:
        assert eval_upstairs(ym1, pt, H) == GaussianRational.of(cone_y(pt) - 1)


def test_disk_product_well_defined():
    rng = seeded(41)
    model = ConeModel(1, H)
    for _ in range(3):
        d1 = random_disk_element(rng, 1, 2)
        d2 = random_disk_element(rng, 1, 2)
        direct = disk_multiply(d1, d2, H)
        via_lift = disk_reduce(multiply(model, disk_lift(d1), disk_lift(d2)), H)
        assert direct == via_lift
        # perturbing the lift by the ideal cannot change the class
        pert = disk_lift(d1) + vanishing_ideal_witness(random_cone_element(rng, 1, 1), H, 1)
        assert disk_reduce(multiply(model, pert, disk_lift(d2)), H) == direct


def test_disk_associativity_and_unit():
    rng = seeded(43)
    dm = DiskModel(1, H)
    a, b, c = (random_disk_element(rng, 1, 1, nterms=3) for _ in range(3))
    lhs = disk_multiply(disk_multiply(a, b, H), c, H)
    rhs = disk_multiply(a, disk_multiply(b, c, H), H)
    assert lhs == rhs
    assert disk_multiply(dm.unit(), a, H) == a
    assert disk_multiply(a, dm.unit(), H) == a


def test_disk_involution_is_antihomomorphism():
    rng = seeded(47)
    dm = DiskModel(1, H)
    a = random_disk_element(rng, 1, 2)
    b = random_disk_element(rng, 1, 2)
    lhs = dm.involution(disk_multiply(a, b, H))
    rhs = disk_multiply(dm.involution(b), dm.involution(a), H)
    assert lhs == rhs


def test_disk_coefficient_extraction_matches_reduce():
    rng = seeded(53)
    for _ in range(3):
        a = random_cone_element(rng, 1, 2)
        d = disk_reduce(a, H)
        for R, S in [(Z1, Z1), (E1, Z1), (E1, E1), (MultiIndex((2,)), E1)]:
            assert disk_coefficient_extraction(a, R, S, H) == d.coeff((R, S))


def test_disk_has_no_finite_fans():
    dm = DiskModel(1, H)
    a = Element.basis((Z1, Z1))
    with pytest.raises(InfiniteFanError):
        HTable(dm, a).h(1, 0, (Z1, Z1))
    with pytest.raises(InfiniteFanError):
        dm.row_parents((Z1, Z1))


def test_pair_evaluation_diagonal_and_symmetry():
    model = ConeModel(1, H)
    rng = seeded(59)
    a = random_cone_element(rng, 1, 2)
    for w, _v in SURFACE_POINTS:
        assert eval_pair(a, w, w, H) == eval_upstairs(a, w, H)
    u = INTERIOR_POINTS[0]
    v = INTERIOR_POINTS[2]
    lhs = eval_pair(model.involution(a), u, v, H)
    rhs = eval_pair(a, v, u, H).conjugate()
    assert lhs == rhs


def test_pair_evaluation_rejects_degenerate():
    a = Element.basis((Z1, Z1, 0))
    u = (GaussianRational.of(1), GaussianRational.of(1))
    with pytest.raises(DomainError):
        eval_pair(a, u, (GaussianRational.of(1), GaussianRational.of(1)), H)


def test_cone_point_classifier():
    assert cone_y((1, 0)) == 1
    assert cone_y((Fraction(5, 4), Fraction(3, 4))) == 1
    assert cone_y((2, 1)) == 3
    assert cone_y((Fraction(1, 2), 1)) < 0


def test_get_model_cone_disk():
    c = get_model("cone", hbar=H, n=1)
    assert isinstance(c, ConeModel) and c.name == "cone"
    d = get_model("disk", hbar=H, n=1)
    assert isinstance(d, DiskModel)
    with pytest.raises(DomainError):
        get_model("cone", hbar=Fraction(0), n=1)
