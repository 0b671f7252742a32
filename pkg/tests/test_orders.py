"""Order scans, Frobenius orders, proof matrices, and closure bookkeeping.

The base-level expectations are frozen integers; the points backend must
reproduce them at extension-6 sample points for several seeds, and at s=2
the scans must land on the instantiated symbolic lists.
"""

import pytest

from reecurve.hasse import hasse_calculus
from reecurve.orders import (
    D_PROOF_COLS,
    D_PROOF_ROWS,
    E_PROOF_ROWS,
    frobenius_orders,
    morphism_orders_below_q,
    order_sequence,
    padic_closure_check,
    rejection_report,
    rejection_witnesses,
    symbolic_label,
    proof_matrix,
    triangular_check,
)
from reecurve.params import index_value, ree_params
from reecurve.support import leq3, minimal_non_orders, order_values

D_ORDERS_S1 = (0, 1, 3, 6, 9, 27, 30, 54, 81, 84, 108, 162, 243, 729)
E_ORDERS_S1 = (0, 1, 9, 27, 54, 243, 729)
D_LABELS = (
    "0", "1", "q0", "2q0", "3q0", "q", "q+q0", "2q",
    "qq0", "qq0+q0", "qq0+q", "2qq0", "3qq0", "q2",
)
E_LABELS = ("0", "1", "3q0", "q", "2q", "3qq0", "q2")


# -- base level, symbolic backend (the headline results)


def test_d_orders_symbolic_exact():
    seq = order_sequence("D", s=1, backend="symbolic")
    assert seq.orders == D_ORDERS_S1
    assert seq.labels == D_LABELS
    assert seq.backend == "symbolic" and seq.points == 0
    assert len(seq.witness) == 14


def test_e_orders_symbolic_exact():
    seq = order_sequence("E", s=1, backend="symbolic")
    assert seq.orders == E_ORDERS_S1
    assert seq.labels == E_LABELS


def test_sequence_invariants():
    p = ree_params(1)
    for series, expect in (("D", D_ORDERS_S1), ("E", E_ORDERS_S1)):
        seq = order_sequence(series, s=1, backend="symbolic")
        assert seq.orders[0] == 0 and seq.orders[1] == 1
        assert seq.orders[-1] <= p.m_value
        assert set(E_ORDERS_S1) <= set(D_ORDERS_S1)


def test_two_member_family_trivial():
    seq = order_sequence(("one", "x"), s=1, backend="symbolic")
    assert seq.orders == (0, 1)


def test_rank_deficiency_reported():
    with pytest.raises(ArithmeticError, match="rank deficiency"):
        order_sequence("D", s=1, backend="symbolic", candidates=range(4))


def test_symbolic_backend_policy():
    with pytest.raises(ValueError, match="resource policy"):
        order_sequence("D", s=2, backend="symbolic")
    with pytest.raises(ValueError, match="unknown backend"):
        order_sequence("D", s=1, backend="magic")
    with pytest.raises(ValueError, match="unknown series"):
        order_sequence("F", s=1, backend="symbolic")


# -- Frobenius orders


def test_frobenius_d_symbolic():
    fr = frobenius_orders("D", s=1, backend="symbolic")
    assert fr.nus == (0, 3, 6, 9, 27, 30, 54, 81, 84, 108, 162, 243, 729)
    assert fr.nus[0] == 0
    assert fr.omitted_order == 1 and fr.omitted_index == 1
    assert set(fr.nus) | {fr.omitted_order} == set(D_ORDERS_S1)
    assert fr.below_q == (0, 3, 6, 9)


def test_frobenius_e_symbolic():
    fr = frobenius_orders("E", s=1, backend="symbolic")
    assert fr.nus == (0, 9, 27, 54, 243, 729)
    assert fr.omitted_order == 1 and fr.omitted_index == 1
    # the morphism shortcut agrees with the seeded scan below q
    assert fr.below_q == tuple(v for v in fr.nus if v < 27)


def test_morphism_shortcut_routes_agree():
    direct = morphism_orders_below_q("D", s=1, backend="symbolic")
    assert direct == (0, 3, 6, 9)
    via_points = morphism_orders_below_q("D", s=1, backend="points", trials=2, seed=4)
    assert via_points == direct


# -- points backend, base level: must reproduce the symbolic answers


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_points_backend_stability_s1(seed):
    seq = order_sequence("D", s=1, backend="points", trials=2, seed=seed)
    assert seq.orders == D_ORDERS_S1
    assert seq.points == 2


def test_points_backend_e_and_frobenius_s1():
    assert order_sequence("E", s=1, backend="points", trials=2, seed=5).orders == E_ORDERS_S1
    fr = frobenius_orders("D", s=1, backend="points", trials=2, seed=3)
    assert fr.nus == (0, 3, 6, 9, 27, 30, 54, 81, 84, 108, 162, 243, 729)
    assert fr.below_q == (0, 3, 6, 9)


# -- level two, points backend (shared sample points via the row cache)


def test_points_backend_s2_matches_theory():
    p = ree_params(2)
    seq = order_sequence("D", s=2, backend="points", trials=2, seed=0)
    assert list(seq.orders) == order_values(p, "D")
    assert seq.labels == D_LABELS
    sub = order_sequence("E", s=2, backend="points", trials=2, seed=0)
    assert list(sub.orders) == order_values(p, "E")


def test_frobenius_s2_points():
    p = ree_params(2)
    fr = frobenius_orders("D", s=2, backend="points", trials=2, seed=0)
    assert fr.omitted_order == 1 and fr.omitted_index == 1
    assert set(fr.nus) == set(order_values(p, "D")) - {1}
    assert fr.below_q == (0, p.q0, 2 * p.q0, 3 * p.q0)


# -- triangular proof matrices


def test_triangular_proof_matrix_d_s1():
    p = ree_params(1)
    rows, cols = proof_matrix("D", p)
    assert rows == [0, 1, 4, 7, 10, 37, 64, 138, 115, 144, 171, 172]
    diag = triangular_check(rows, cols, s=1, backend="symbolic")
    calc = hasse_calculus(1)
    one = calc.ring.one()
    assert all(d == one for d in diag[:11])
    # the last entry is ell^2q; its bottom monomial is x^2q
    assert diag[11] == calc.ring.ell() ** (2 * p.q)
    assert diag[11].to_sorted_list()[0] == (2 * p.q, 0, 0, 1)


def test_triangular_proof_matrix_e_s1():
    p = ree_params(1)
    rows, cols = proof_matrix("E", p)
    diag = triangular_check(rows, cols, s=1, backend="symbolic")
    one = hasse_calculus(1).ring.one()
    assert len(diag) == 5 and all(d == one for d in diag)


def test_triangular_trivial_and_failure():
    diag = triangular_check([0], ["one"], s=1, backend="symbolic")
    assert diag[0] == hasse_calculus(1).ring.one()
    with pytest.raises(ArithmeticError, match="not triangular"):
        triangular_check([0, 1], ["x", "one"], s=1, backend="symbolic")
    with pytest.raises(ValueError, match="equal length"):
        triangular_check([0], ["one", "x"], s=1, backend="symbolic")


def test_triangular_s2_points():
    p = ree_params(2)
    rows, cols = proof_matrix("D", p)
    diags = triangular_check(rows, cols, s=2, backend="points", trials=2, seed=0)
    for diag in diags:
        assert all(not d.is_zero() for d in diag)
        one = diag[0].ctx.one()
        assert all(d == one for d in diag[:11])
    rows2, cols2 = proof_matrix("E", p)
    for diag in triangular_check(rows2, cols2, s=2, backend="points", trials=2, seed=0):
        one = diag[0].ctx.one()
        assert all(d == one for d in diag)


def test_proof_matrix_row_indices_symbolic():
    p2 = ree_params(2)
    rows, _ = proof_matrix("D", p2)
    assert rows == [index_value(ix, p2) for ix in D_PROOF_ROWS]
    assert len(D_PROOF_ROWS) == len(D_PROOF_COLS) == 12
    assert len(E_PROOF_ROWS) == 5


# -- p-adic closure


def test_padic_closure_theory_sets():
    for s in (1, 2, 3):
        p = ree_params(s)
        assert padic_closure_check(order_values(p, "D")) == []
        assert padic_closure_check(order_values(p, "E")) == []


def test_padic_closure_examples():
    assert padic_closure_check({0, 1, 3}) == []
    assert padic_closure_check({0, 4}) == [(1, 4), (3, 4)]


# -- rejection bookkeeping


def test_rejection_witnesses_cover_minimal_non_orders():
    for series in ("D", "E"):
        wit = rejection_witnesses(series)
        assert set(wit) == set(minimal_non_orders(series))
    d = rejection_witnesses("D")
    counting = {symbolic_label(ix) for ix, key in d.items() if key == "counting"}
    assert counting == {"2qq0+q0"}
    e = rejection_witnesses("E")
    assert sorted(key for key in e.values() if key != "counting") == [
        "kq0-3", "t1sum-3q", "t1sum-q+1", "t1sum-q+3q0",
    ]


def test_counting_rejections_dominate_an_order():
    # each counting-tagged index lies digitwise above a certified order,
    # so closure plus the order count below the window rejects it
    p = ree_params(2)
    for series in ("D", "E"):
        orders = set(order_values(p, series))
        for ix, key in rejection_witnesses(series).items():
            if key != "counting":
                continue
            v = index_value(ix, p)
            assert any(leq3(o, v) for o in orders if 0 < o < v)


def test_rejection_report_s1_symbolic():
    report = rejection_report("D", s=1, backend="symbolic")
    assert len(report) == 13
    for row in report:
        assert row["scan_rejected"] or row["base_collision"]
        if row["witness"] != "counting":
            assert row["identity_ok"] is True
    collided = [row["label"] for row in report if row["base_collision"]]
    assert collided == ["3q"]


def test_rejection_report_e_s1():
    report = rejection_report("E", s=1, backend="symbolic")
    assert len(report) == 8
    assert all(row["scan_rejected"] for row in report)
    assert all(row["identity_ok"] for row in report if row["witness"] != "counting")


def test_symbolic_label_format():
    from reecurve.params import SymbolicIndex

    assert symbolic_label(SymbolicIndex(0, 0, 0, 0)) == "0"
    assert symbolic_label(SymbolicIndex(1, 2, 0, 1)) == "qq0+2q+1"
    assert symbolic_label(SymbolicIndex(0, 0, 0, 0, True)) == "q2"
