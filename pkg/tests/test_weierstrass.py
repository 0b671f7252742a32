"""Vanishing profiles, point weights, and the degree audit."""

import pytest

from reecurve.orders import OrderSequence, order_sequence
from reecurve.params import ree_params
from reecurve.series import origin_point, random_point, rational_point
from reecurve.support import order_values
from reecurve.weierstrass import (
    VanishingProfile,
    divisor_degree_audit,
    expected_rational_profile,
    is_weierstrass,
    rational_weight,
    vanishing_orders,
    weierstrass_weight,
)

# Profiles at the origin for s = 1, frozen from the first run and
# matching expected_rational_profile evaluated by hand.
D_PROFILE_S1 = (0, 1, 4, 7, 10, 34, 37, 64, 115, 118, 145, 226, 307, 1036)
E_PROFILE_S1 = (0, 1, 10, 37, 64, 307, 1036)

D_WEIGHT_S1 = 567
E_WEIGHT_S1 = 392


def test_origin_profile_d():
    prof = vanishing_orders("D", origin_point(1))
    assert prof.jorders == D_PROFILE_S1
    assert prof.weight == D_WEIGHT_S1
    assert prof.series == "D" and prof.s == 1 and prof.extension == 1
    assert prof.epsilons == tuple(order_values(ree_params(1), "D"))


def test_origin_profile_e():
    prof = vanishing_orders("E", origin_point(1))
    assert prof.jorders == E_PROFILE_S1
    assert prof.weight == E_WEIGHT_S1


@pytest.mark.parametrize("fam,frozen", [("D", D_PROFILE_S1), ("E", E_PROFILE_S1)])
def test_expected_rational_profile_formula(fam, frozen):
    assert tuple(expected_rational_profile(ree_params(1), fam)) == frozen


def test_expected_rational_profile_unknown():
    with pytest.raises(ValueError):
        expected_rational_profile(ree_params(1), "F")


@pytest.mark.parametrize("seed", [7, 11])
def test_rational_points_share_the_profile(seed):
    # the automorphism group is transitive on rational points, so every
    # one of them must repeat the origin profile
    pt = rational_point(1, seed=seed)
    assert pt.is_rational()
    for fam, frozen in (("D", D_PROFILE_S1), ("E", E_PROFILE_S1)):
        prof = vanishing_orders(fam, pt)
        assert prof.jorders == frozen
        assert is_weierstrass(fam, pt)


def test_generic_point_matches_order_sequence():
    pt = random_point(1, seed=3, extension=6)
    p = ree_params(1)
    for fam in ("D", "E"):
        prof = vanishing_orders(fam, pt)
        assert list(prof.jorders) == order_values(p, fam)
        assert prof.weight == 0
        assert not is_weierstrass(fam, pt)


def test_profile_dominates_orders_everywhere():
    # j_i >= eps_i at every point, term by term
    for pt in (origin_point(1), rational_point(1, seed=2), random_point(1, seed=5, extension=6)):
        for fam in ("D", "E"):
            prof = vanishing_orders(fam, pt)
            assert all(j >= e for j, e in zip(prof.jorders, prof.epsilons))


def test_subfamily_profile_is_contained():
    # E spans a subspace of D, so every E vanishing order is a D one
    for pt in (origin_point(1), random_point(1, seed=9, extension=6)):
        jd = set(vanishing_orders("D", pt).jorders)
        je = set(vanishing_orders("E", pt).jorders)
        assert je <= jd


def test_weight_helper_agrees():
    assert weierstrass_weight("D", origin_point(1)) == D_WEIGHT_S1


def test_precision_preconditions():
    pt = origin_point(1)
    with pytest.raises(ValueError, match="prec"):
        vanishing_orders("D", pt, prec=ree_params(1).m_value)
    with pytest.raises(ValueError, match="point"):
        vanishing_orders("D", None)


def test_precision_shortfall_reported():
    # a repeated member makes the matrix singular at any precision, and
    # the scan must say so rather than return a short profile
    with pytest.raises(ArithmeticError, match="precision shortfall"):
        vanishing_orders(("x", "x"), origin_point(1))


def test_profile_must_increase():
    with pytest.raises(ValueError):
        VanishingProfile("D", 1, 1, (0, 0, 1), (0, 1, 3), 0)


def test_audit_s1_exact():
    aud = divisor_degree_audit(1, "D")
    assert aud["degree"] == 11160828
    assert aud["degree"] == 567 * 19684
    assert aud["weight_per_rational_point"] == D_WEIGHT_S1
    assert aud["sum_orders"] == 1537 and aud["r_plus_1"] == 14
    aud = divisor_degree_audit(1, "E")
    assert aud["degree"] == 7716128 == 392 * 19684
    assert aud["weight_per_rational_point"] == E_WEIGHT_S1


@pytest.mark.parametrize("s", [1, 2, 3])
def test_audit_splits_exactly(s):
    p = ree_params(s)
    q0, q = p.q0, p.q
    d = divisor_degree_audit(p, "D")
    assert d["weight_per_rational_point"] == 3 * q * q0 + 9 * q + 23 * q0 + 12
    e = divisor_degree_audit(p, "E")
    assert e["weight_per_rational_point"] == 3 * q * q0 + 4 * q + 12 * q0 + 5
    assert rational_weight(p, "D") == d["weight_per_rational_point"]


def test_audit_accepts_computed_sequence():
    seq = order_sequence("D", s=1, backend="symbolic")
    assert divisor_degree_audit(1, seq) == divisor_degree_audit(1, "D")


def test_audit_rejects_tampered_sequence():
    fake = OrderSequence("D", 1, tuple(range(14)), (), "synthetic", 0, ())
    with pytest.raises(ArithmeticError, match="split"):
        divisor_degree_audit(1, fake)
    short = OrderSequence("D", 1, (0, 1), (), "synthetic", 0, ())
    with pytest.raises(ArithmeticError, match="incomplete"):
        divisor_degree_audit(1, short)


def test_s2_rational_profile():
    p2 = ree_params(2)
    prof = vanishing_orders("D", rational_point(2, seed=0))
    assert prof.jorders == tuple(expected_rational_profile(p2, "D"))
    assert prof.weight == rational_weight(p2, "D") == 8967
    eprof = vanishing_orders("E", rational_point(2, seed=1))
    assert eprof.jorders == tuple(expected_rational_profile(p2, "E"))
    assert eprof.weight == rational_weight(p2, "E")
