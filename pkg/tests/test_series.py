"""Point sampling and local expansions, cross-checked against the ring."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reecurve.gf import field_context, frobenius_power
from reecurve.hasse import binom_mod3, hasse_calculus
from reecurve.params import ree_params
from reecurve.ring import FAMILY_NAMES, function_family
from reecurve.series import (
    CurvePoint,
    PointExpansion,
    origin_point,
    random_point,
    rational_point,
    ser_add,
    ser_mul,
    ser_pow3k,
)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 3**9 - 1))
def test_every_rational_triple_is_on_the_curve(code):
    ctx = field_context(3)
    coords = [ctx.from_code((code // 27**i) % 27) for i in range(3)]
    CurvePoint(1, 1, *coords)  # constructor validates both equations


def test_point_sampling_is_deterministic():
    a = rational_point(1, seed=42)
    b = rational_point(1, seed=42)
    assert a.coords() == b.coords()
    c = random_point(1, seed=9, extension=6)
    d = random_point(1, seed=9, extension=6)
    assert c.coords() == d.coords()
    assert not c.is_rational()


def test_small_extensions_carry_no_points():
    for k in (2, 3, 4, 5):
        with pytest.raises(ValueError):
            random_point(1, seed=0, extension=k)


def test_low_order_derivatives_at_a_rational_point():
    # first-column entries of the small-derivative table, taken as values
    p = ree_params(1)
    P = rational_point(1, seed=5)
    exp = PointExpansion(P)
    xq0 = frobenius_power(P.x, 1)
    one = P.ctx.one()
    assert exp.coefficient("y", 1) == xq0
    assert exp.coefficient("z", 1) == xq0 * xq0
    assert exp.coefficient("y", p.q0 + 1) == one
    assert exp.coefficient("z", p.q0 + 1) == -xq0
    assert exp.coefficient("z", 2 * p.q0 + 1) == one
    assert exp.coefficient("y", p.q + p.q0) == -one
    assert exp.coefficient("w4", 2 * p.q0 + 1) == -frobenius_power(P.x, 3)
    # ell vanishes at rational points, so the ell-weighted entries go to 0
    assert exp.coefficient("w4", p.q + 1).is_zero()
    assert exp.coefficient("w4", 2 * p.q).is_zero()


def test_origin_expansion_starts_at_the_gap_ladder():
    p = ree_params(1)
    exp = PointExpansion(origin_point(1))
    ser = exp.series("y", p.q0 + 2)
    assert min(ser) == p.q0 + 1
    ser = exp.series("z", 2 * p.q0 + 2)
    assert min(ser) == 2 * p.q0 + 1


@pytest.mark.parametrize("s", [1, 2])
def test_defining_equations_hold_as_series(s):
    p = ree_params(s)
    P = rational_point(s, seed=3)
    exp = PointExpansion(P)
    e = 2 * s + 1
    prec = p.q**2 // 3 + 17
    xq0 = ser_pow3k(exp.x_series(), s, prec)
    ell = exp.ell_series()
    for name, rhs in (
        ("y", ser_mul(xq0, ell, prec)),
        ("z", ser_mul(ser_mul(xq0, xq0, prec), ell, prec)),
    ):
        f = exp.series(name, prec)
        lhs = ser_add(ser_pow3k(f, e, prec), f, -1)
        assert ser_add(lhs, rhs, -1) == {}, name


@pytest.mark.parametrize("s", [1, 2])
def test_qpower_rules_hold_as_series(s):
    # the recipes and the declared q-power rules are independent routes
    fam = function_family(s)
    p = ree_params(s)
    e = 2 * s + 1
    for seed in (0, 1):
        P = rational_point(s, seed=seed) if seed else random_point(
            s, seed=1, extension=6 if s == 1 else 1
        )
        exp = PointExpansion(P)
        prec = p.q + 3 * p.q0 + 29
        for name, rule in fam.rules.items():
            f = exp.series(name, prec)
            lhs = ser_add(ser_pow3k(f, e, prec), f, -1)
            rhs = {}
            for sign, cof, twist, base in rule.terms:
                b = exp.series(base, prec)
                shift = ser_add(ser_pow3k(b, e, prec), b, -1)
                cofq = ser_pow3k(exp.series(cof, prec), twist, prec)
                rhs = ser_add(rhs, ser_mul(cofq, shift, prec), sign)
            assert ser_add(lhs, rhs, -1) == {}, (name, seed)


def test_cross_backend_agreement_on_seeded_triples():
    # one hundred (member, index, point) triples, symbolic versus series
    p = ree_params(1)
    calc = hasse_calculus(1)
    points = [rational_point(1, seed=k) for k in range(3)]
    points.append(origin_point(1))
    points.append(random_point(1, seed=2, extension=6))
    expansions = [PointExpansion(P) for P in points]
    rng = random.Random("cross-backend:1")
    names = [n for n in FAMILY_NAMES if n != "one"]
    special = [0, 1, p.q0, p.q0 + 1, 3 * p.q0 + 1, p.q, p.q + 1, p.q * p.q0, p.q**2]
    for _ in range(100):
        name = rng.choice(names)
        i = rng.choice(special) if rng.random() < 0.4 else rng.randrange(p.q**2 + 1)
        k = rng.randrange(len(points))
        sym = calc.derivative_of(name, i).evaluate(*points[k].coords())
        assert expansions[k].coefficient(name, i) == sym, (name, i, k)


def test_derivative_series_window_matches_coefficients():
    exp = PointExpansion(rational_point(1, seed=8))
    p = ree_params(1)
    for name in ("y", "w4", "w10"):
        for i in (1, p.q0 + 1, p.q):
            win = exp.derivative_series(name, i, 40)
            for j in range(40):
                want = exp.coefficient(name, i + j)
                got = win.get(j, exp.point.ctx.zero())
                bc = binom_mod3(i + j, i)
                if bc == 0:
                    assert got.is_zero()
                else:
                    assert got == (want if bc == 1 else -want)


def test_power_helper_matches_repeated_multiplication():
    exp = PointExpansion(rational_point(1, seed=2))
    prec = 260
    ell = exp.ell_series()
    acc = {0: exp.point.ctx.one()}
    for n in range(1, 8):
        acc = ser_mul(acc, ell, prec)
        assert exp.power(ell, n, prec) == acc
        assert exp.ell_power(n, prec) == acc
