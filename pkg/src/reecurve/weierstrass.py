"""Vanishing profiles at points and the ramification-degree bookkeeping.

The profile of a family at a point P lists the orders of vanishing
achievable by linear combinations of the family members at P; it equals
the pivot exponents of the row-reduced coefficient matrix of the member
expansions.  Away from finitely many points the profile is the order
sequence; the excess weight sum(j_i - eps_i) is positive exactly at the
special points, and the rational points carry all of it: the degree of
the ramification divisor, (2g-2)*sum(eps) + (r+1)*m, equals the shared
rational-point weight times the number of rational points, with nothing
left over.
"""

from __future__ import annotations

from dataclasses import dataclass

from .orders import _family_names
from .params import ReeParams, ree_params
from .series import CurvePoint, PointExpansion
from .support import order_values

__all__ = [
    "VanishingProfile",
    "vanishing_orders",
    "weierstrass_weight",
    "is_weierstrass",
    "divisor_degree_audit",
    "expected_rational_profile",
    "rational_weight",
]


@dataclass(frozen=True)
class VanishingProfile:
    series: str
    s: int
    extension: int
    jorders: tuple[int, ...]
    epsilons: tuple[int, ...]
    weight: int

    def __post_init__(self) -> None:
        if list(self.jorders) != sorted(set(self.jorders)):
            raise ValueError("profile must be strictly increasing")


def expected_rational_profile(p: ReeParams, series: str = "D") -> list[int]:
    """The profile shared by every rational point (automorphism-uniform)."""
    q0, q, qq0 = p.q0, p.q, p.q * p.q0
    if series == "D":
        return [
            0,
            1,
            1 + q0,
            1 + 2 * q0,
            1 + 3 * q0,
            1 + q + 2 * q0,
            1 + q + 3 * q0,
            1 + 2 * q + 3 * q0,
            1 + q + 2 * q0 + qq0,
            1 + q + 3 * q0 + qq0,
            1 + 2 * q + 3 * q0 + qq0,
            1 + 2 * q + 3 * q0 + 2 * qq0,
            1 + 2 * q + 3 * q0 + 3 * qq0,
            p.m_value,
        ]
    if series == "E":
        return [
            0,
            1,
            1 + 3 * q0,
            1 + q + 3 * q0,
            1 + 2 * q + 3 * q0,
            1 + 2 * q + 3 * q0 + 3 * qq0,
            p.m_value,
        ]
    raise ValueError(f"unknown series {series!r}")


def vanishing_orders(
    series="D",
    point: CurvePoint | None = None,
    prec: int | None = None,
) -> VanishingProfile:
    """Profile of the family at one point by sparse pivot reduction."""
    if point is None:
        raise ValueError("a point is required")
    names = _family_names(series)
    p = point.params
    if prec is None:
        prec = p.m_value + 1
    if prec <= p.m_value:
        raise ValueError("prec must exceed the family degree m")
    exp = PointExpansion(point)
    pool = []
    for f in names:
        ser = exp.series(f, prec)
        pool.append({e: c for e, c in ser.items() if e < prec and not c.is_zero()})
    js: list[int] = []
    while len(js) < len(names):
        live = [(min(r), i) for i, r in enumerate(pool) if r]
        if not live:
            raise ArithmeticError(
                f"precision shortfall: only {len(js)} of {len(names)} pivots "
                f"below precision {prec}"
            )
        v, idx = min(live)
        r0 = pool.pop(idx)
        js.append(v)
        inv = r0[v].inverse()
        for r in pool:
            c = r.get(v)
            if c is None:
                continue
            f = c * inv
            for e, ce in r0.items():
                cur = r.get(e)
                nxt = (cur - f * ce) if cur is not None else -(f * ce)
                if nxt.is_zero():
                    r.pop(e, None)
                else:
                    r[e] = nxt
    if isinstance(series, str):
        eps = order_values(p, series)
    else:
        eps = list(order_sequence_like(series, p))
    return VanishingProfile(
        series=series if isinstance(series, str) else "+".join(series),
        s=p.s,
        extension=point.extension,
        jorders=tuple(js),
        epsilons=tuple(eps),
        weight=sum(j - e for j, e in zip(js, eps)),
    )


def order_sequence_like(names, p: ReeParams) -> tuple[int, ...]:
    """Generic orders of an ad hoc subfamily, via the symbolic scan."""
    from .orders import order_sequence

    return order_sequence(tuple(names), s=p.s, backend="symbolic").orders


def weierstrass_weight(series, point: CurvePoint, prec: int | None = None) -> int:
    return vanishing_orders(series, point, prec).weight


def is_weierstrass(series, point: CurvePoint, prec: int | None = None) -> bool:
    return weierstrass_weight(series, point, prec) > 0


def divisor_degree_audit(p, eps="D") -> dict:
    """Cross-check the ramification degree against the per-point weights.

    Accepts a ReeParams or a level s, and either a series tag or a
    computed order sequence.  Raises when the degree fails to split into
    an integer weight shared by the rational points: the two routes to
    deg R must agree exactly.
    """
    if isinstance(p, int):
        p = ree_params(p)
    if isinstance(eps, str):
        series = eps
        orders = order_values(p, series)
    else:
        series = eps.series
        orders = list(eps.orders)
        if len(orders) != len(_family_names(series)):
            raise ArithmeticError("order sequence is incomplete")
    r_plus_1 = len(orders)
    two_g_minus_2 = 2 * p.genus - 2
    degree = two_g_minus_2 * sum(orders) + r_plus_1 * p.m_value
    weight, rem = divmod(degree, p.n_rational)
    if rem:
        raise ArithmeticError(
            f"degree {degree} does not split over {p.n_rational} rational points"
        )
    return {
        "s": p.s,
        "series": series,
        "r_plus_1": r_plus_1,
        "sum_orders": sum(orders),
        "two_g_minus_2": two_g_minus_2,
        "m": p.m_value,
        "degree": degree,
        "n_rational": p.n_rational,
        "weight_per_rational_point": weight,
    }


def rational_weight(p: ReeParams, series: str = "D") -> int:
    """Weight shared by the rational points, from the degree split."""
    return divisor_degree_audit(p, series)["weight_per_rational_point"]
