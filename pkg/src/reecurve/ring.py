"""Affine coordinate ring of the Ree curve in normal form.

The curve over GF(q), q = 3^(2s+1), q0 = 3^s, is cut out by

    y^q - y = x^q0 (x^q - x)
    z^q - z = x^q0 (y^q - y)

so every regular function has a unique normal form with y- and z-degrees
below q.  Reduction uses

    y^q = y + x^(q+q0) - x^(q0+1)
    z^q = z + x^(q+2q0) - x^(2q0+1)

and elements are sparse dicts mapping (a, b, c) to nonzero GF(3) scalars,
standing for x^a y^b z^c.

The module also builds the fourteen-function linear system spanning the
canonical very ample series, each function tagged with its q-power
recurrence (w^q - w expressed through smaller members), and computes exact
pole orders at the point at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass

from reecurve.params import ReeParams, ree_params

Monomial = tuple[int, int, int]


class CurveElement:
    """Normal-form regular function; immutable once built."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: "CoordinateRing", terms: dict[Monomial, int]):
        self.ring = ring
        self.terms = terms

    # -- predicates

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(k == (0, 0, 0) for k in self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CurveElement)
            and self.ring is other.ring
            and self.terms == other.terms
        )

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- arithmetic

    def __add__(self, other: "CurveElement") -> "CurveElement":
        out = dict(self.terms)
        for k, v in other.terms.items():
            nv = (out.get(k, 0) + v) % 3
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return CurveElement(self.ring, out)

    def __sub__(self, other: "CurveElement") -> "CurveElement":
        out = dict(self.terms)
        for k, v in other.terms.items():
            nv = (out.get(k, 0) - v) % 3
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return CurveElement(self.ring, out)

    def __neg__(self) -> "CurveElement":
        return CurveElement(self.ring, {k: (-v) % 3 for k, v in self.terms.items()})

    def scale(self, c: int) -> "CurveElement":
        c %= 3
        if c == 0:
            return self.ring.zero()
        if c == 1:
            return self
        return -self

    def __mul__(self, other: "CurveElement") -> "CurveElement":
        if not isinstance(other, CurveElement):
            return NotImplemented
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        raw: dict[Monomial, int] = {}
        for (a1, b1, c1), v1 in a.items():
            for (a2, b2, c2), v2 in b.items():
                k = (a1 + a2, b1 + b2, c1 + c2)
                nv = (raw.get(k, 0) + v1 * v2) % 3
                if nv:
                    raw[k] = nv
                else:
                    raw.pop(k, None)
        return CurveElement(self.ring, self.ring.reduce(raw))

    def __pow__(self, n: int) -> "CurveElement":
        if n < 0:
            raise ValueError("negative powers are not ring elements")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def pow3(self) -> "CurveElement":
        # Frobenius cube; GF(3) coefficients are fixed by it.
        raw = {(3 * a, 3 * b, 3 * c): v for (a, b, c), v in self.terms.items()}
        return CurveElement(self.ring, self.ring.reduce(raw))

    def pow3k(self, k: int) -> "CurveElement":
        out = self
        for _ in range(k):
            out = out.pow3()
        return out

    def q0pow(self) -> "CurveElement":
        return self.pow3k(self.ring.p.s)

    def qpow(self) -> "CurveElement":
        return self.pow3k(2 * self.ring.p.s + 1)

    # -- structure

    def monomial_mins(self) -> Monomial:
        """Componentwise minimum exponent over all terms."""
        if not self.terms:
            raise ValueError("zero element has no monomial content")
        ma = min(k[0] for k in self.terms)
        mb = min(k[1] for k in self.terms)
        mc = min(k[2] for k in self.terms)
        return (ma, mb, mc)

    def divide_monomial(self, mono: Monomial) -> "CurveElement":
        ga, gb, gc = mono
        out = {}
        for (a, b, c), v in self.terms.items():
            if a < ga or b < gb or c < gc:
                raise ValueError("monomial does not divide every term")
            out[(a - ga, b - gb, c - gc)] = v
        return CurveElement(self.ring, out)

    def to_sorted_list(self) -> list[tuple[int, int, int, int]]:
        return [(a, b, c, v) for (a, b, c), v in sorted(self.terms.items())]

    def evaluate(self, vx, vy, vz):
        """Value at a point with coordinates in some GF(3^m) context."""
        ctx = vx.ctx
        pw: dict[tuple[int, int], object] = {}

        def power(base_tag, base, e):
            key = (base_tag, e)
            if key not in pw:
                pw[key] = ctx.pow(base, e)
            return pw[key]

        total = ctx.zero()
        for (a, b, c), v in self.terms.items():
            term = ctx.scalar(v)
            if a:
                term = term * power(0, vx, a)
            if b:
                term = term * power(1, vy, b)
            if c:
                term = term * power(2, vz, c)
            total = total + term
        return total

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        if not self.terms:
            return "0"
        bits = []
        for (a, b, c), v in sorted(self.terms.items())[:8]:
            bits.append(f"{v}*x^{a}y^{b}z^{c}")
        more = "" if len(self.terms) <= 8 else f" (+{len(self.terms) - 8} terms)"
        return " + ".join(bits) + more


class CoordinateRing:
    """Reduction tables and element constructors for one parameter level."""

    def __init__(self, params: ReeParams):
        self.p = params
        self.q = params.q
        self.q0 = params.q0
        self._red_y_memo: dict[int, dict[tuple[int, int], int]] = {}
        self._red_z_memo: dict[int, dict[tuple[int, int], int]] = {}
        # y^q and z^q as (x-shift, new-degree) -> coeff
        q, q0 = self.q, self.q0
        self._yq = {(0, 1): 1, (q + q0, 0): 1, (q0 + 1, 0): 2}
        self._zq = {(0, 1): 1, (q + 2 * q0, 0): 1, (2 * q0 + 1, 0): 2}

    # -- constructors

    def zero(self) -> CurveElement:
        return CurveElement(self, {})

    def one(self) -> CurveElement:
        return CurveElement(self, {(0, 0, 0): 1})

    def const(self, c: int) -> CurveElement:
        c %= 3
        return CurveElement(self, {(0, 0, 0): c} if c else {})

    def monomial(self, a: int, b: int, c: int, coeff: int = 1) -> CurveElement:
        coeff %= 3
        if not coeff:
            return self.zero()
        if b >= self.q or c >= self.q:
            return CurveElement(self, self.reduce({(a, b, c): coeff}))
        return CurveElement(self, {(a, b, c): coeff})

    def x(self) -> CurveElement:
        return self.monomial(1, 0, 0)

    def y(self) -> CurveElement:
        return self.monomial(0, 1, 0)

    def z(self) -> CurveElement:
        return self.monomial(0, 0, 1)

    def ell(self) -> CurveElement:
        """x^q - x, the separating element of the calculus."""
        return CurveElement(self, {(self.q, 0, 0): 1, (1, 0, 0): 2})

    # -- reduction

    def _red_y(self, b: int) -> dict[tuple[int, int], int]:
        if b < self.q:
            return {(0, b): 1}
        memo = self._red_y_memo
        if b not in memo:
            base = self._red_y(b - self.q)
            out: dict[tuple[int, int], int] = {}
            for (da1, b1), c1 in base.items():
                for (da2, db2), c2 in self._yq.items():
                    nb = b1 + db2
                    co = (c1 * c2) % 3
                    if nb >= self.q:
                        for (da3, b3), c3 in self._red_y(nb).items():
                            k = (da1 + da2 + da3, b3)
                            nv = (out.get(k, 0) + co * c3) % 3
                            if nv:
                                out[k] = nv
                            else:
                                out.pop(k, None)
                    else:
                        k = (da1 + da2, nb)
                        nv = (out.get(k, 0) + co) % 3
                        if nv:
                            out[k] = nv
                        else:
                            out.pop(k, None)
            memo[b] = out
        return memo[b]

    def _red_z(self, c: int) -> dict[tuple[int, int], int]:
        if c < self.q:
            return {(0, c): 1}
        memo = self._red_z_memo
        if c not in memo:
            base = self._red_z(c - self.q)
            out: dict[tuple[int, int], int] = {}
            for (da1, c1), v1 in base.items():
                for (da2, dc2), v2 in self._zq.items():
                    nc = c1 + dc2
                    co = (v1 * v2) % 3
                    if nc >= self.q:
                        for (da3, c3), v3 in self._red_z(nc).items():
                            k = (da1 + da2 + da3, c3)
                            nv = (out.get(k, 0) + co * v3) % 3
                            if nv:
                                out[k] = nv
                            else:
                                out.pop(k, None)
                    else:
                        k = (da1 + da2, nc)
                        nv = (out.get(k, 0) + co) % 3
                        if nv:
                            out[k] = nv
                        else:
                            out.pop(k, None)
            memo[c] = out
        return memo[c]

    def reduce(self, raw: dict[Monomial, int]) -> dict[Monomial, int]:
        q = self.q
        out: dict[Monomial, int] = {}
        for (a, b, c), v in raw.items():
            v %= 3
            if not v:
                continue
            if b < q and c < q:
                k = (a, b, c)
                nv = (out.get(k, 0) + v) % 3
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
                continue
            for (day, b2), cy in self._red_y(b).items():
                for (daz, c2), cz in self._red_z(c).items():
                    k = (a + day + daz, b2, c2)
                    nv = (out.get(k, 0) + v * cy * cz) % 3
                    if nv:
                        out[k] = nv
                    else:
                        out.pop(k, None)
        return out


# ---------------------------------------------------------------------------
# the fourteen-function system


@dataclass(frozen=True)
class QPowerRule:
    """w^q - w as a signed sum of cofactor^(3^twist) * (base^q - base).

    Each term is (sign, cofactor, twist, base) with sign in {+1, -1}; for
    base "x" the factor base^q - base is the separating element itself.
    Members built from a single term with twist s+1 are the 'plain' kind,
    the rest are 'mixed'; the distinction drives the two derivative-support
    table shapes.
    """

    kind: str  # "plain" | "mixed"
    terms: tuple[tuple[int, str, int, str], ...]


# member -> definition order; each definition only uses earlier names
FAMILY_NAMES = (
    "one",
    "x",
    "y",
    "z",
    "w1",
    "w2",
    "w3",
    "w4",
    "w5",
    "w6",
    "w7",
    "w8",
    "w9",
    "w10",
)

SUBFAMILY_NAMES = ("one", "x", "w1", "w2", "w3", "w6", "w8")

# Construction DAG shared by every backend.  Each member is a signed sum of
# terms  left * (right ^ 3^twist)  with twist given as "s" (exponent q0),
# "s1" (exponent 3*q0) or 0, and each term referring only to earlier names.
RECIPES: dict[str, tuple[tuple[int, str, str, str | int], ...]] = {
    "w1": ((1, "x", "x", "s1"), (-1, "one", "y", "s1")),
    "w2": ((1, "x", "y", "s1"), (-1, "one", "z", "s1")),
    "w3": ((1, "x", "z", "s1"), (-1, "one", "w1", "s1")),
    "w4": ((1, "x", "w2", "s"), (-1, "y", "w1", "s")),
    "v": ((1, "x", "w3", "s"), (-1, "z", "w1", "s")),
    "w5": ((1, "y", "w3", "s"), (-1, "z", "w2", "s")),
    "w6": ((1, "one", "v", "s1"), (-1, "one", "w2", "s1"), (1, "x", "w4", "s1")),
    "w7": ((1, "one", "w2", 0), (1, "one", "v", 0)),
    "w8": ((1, "one", "w5", "s1"), (1, "x", "w7", "s1")),
    "w9": ((1, "w4", "w2", "s"), (-1, "y", "w6", "s")),
    "w10": ((1, "z", "w6", "s"), (-1, "w4", "w3", "s")),
}

RECIPE_ORDER = ("w1", "w2", "w3", "w4", "v", "w5", "w6", "w7", "w8", "w9", "w10")


def recipe_twist(tag: str | int, s: int) -> int:
    """Cube count for a recipe twist tag at parameter level s."""
    if tag == "s":
        return s
    if tag == "s1":
        return s + 1
    return int(tag)


class FunctionFamily:
    """The 14 spanning functions, the auxiliary v, and their q-power rules.

    Normal forms are built lazily along RECIPES, so small-index members stay
    cheap at higher parameter levels.
    """

    def __init__(self, ring: CoordinateRing):
        self.ring = ring
        s = ring.p.s
        self._elems: dict[str, CurveElement] = {
            "one": ring.one(),
            "x": ring.x(),
            "y": ring.y(),
            "z": ring.z(),
        }

        t1 = s + 1  # exponent 3*q0 as a cube count
        t0 = s  # exponent q0
        self.rules: dict[str, QPowerRule] = {
            "y": QPowerRule("mixed", ((1, "x", t0, "x"),)),
            "z": QPowerRule("mixed", ((1, "x", t0, "y"),)),
            "w1": QPowerRule("plain", ((1, "x", t1, "x"),)),
            "w2": QPowerRule("plain", ((1, "y", t1, "x"),)),
            "w3": QPowerRule("plain", ((1, "z", t1, "x"),)),
            "w4": QPowerRule("mixed", ((1, "w2", t0, "x"), (-1, "w1", t0, "y"))),
            "w5": QPowerRule("mixed", ((1, "w3", t0, "y"), (-1, "w2", t0, "z"))),
            "w6": QPowerRule("plain", ((1, "w4", t1, "x"),)),
            "w7": QPowerRule("mixed", ((1, "w2", t0, "y"), (-1, "w3", t0, "x"))),
            "w8": QPowerRule("plain", ((1, "w7", t1, "x"),)),
            "w9": QPowerRule("mixed", ((1, "w2", t0, "w4"), (-1, "w6", t0, "y"))),
            "w10": QPowerRule("mixed", ((1, "w6", t0, "z"), (-1, "w3", t0, "w4"))),
            "v": QPowerRule("mixed", ((1, "w3", t0, "x"), (-1, "w1", t0, "z"))),
        }

    def element(self, name: str) -> CurveElement:
        if name not in self._elems:
            s = self.ring.p.s
            for nm in RECIPE_ORDER:
                if nm in self._elems:
                    continue
                total = self.ring.zero()
                for sign, left, right, tag in RECIPES[nm]:
                    piece = self._elems[left] * self._elems[right].pow3k(
                        recipe_twist(tag, s)
                    )
                    total = total + (piece if sign == 1 else -piece)
                self._elems[nm] = total
                if nm == name:
                    break
        return self._elems[name]

    def names(self) -> tuple[str, ...]:
        return FAMILY_NAMES

    def sub_names(self) -> tuple[str, ...]:
        return SUBFAMILY_NAMES

    def q_shift(self, name: str) -> CurveElement:
        """w^q - w assembled from the rule (not by direct q-th powering)."""
        if name == "x":
            return self.ring.ell()
        rule = self.rules[name]
        total = self.ring.zero()
        for sign, cof, twist, base in rule.terms:
            piece = self.element(cof).pow3k(twist) * self.q_shift(base)
            total = total + (piece if sign == 1 else -piece)
        return total

    def rule_residual(self, name: str) -> CurveElement:
        """Exact check of the q-power rule: (w^q - w) - rule expansion."""
        w = self.element(name)
        return (w.qpow() - w) - self.q_shift(name)


# ---------------------------------------------------------------------------
# pole orders at the common pole


def _term_pole(p: ReeParams, mono: Monomial) -> int:
    a, b, c = mono
    q, q0 = p.q, p.q0
    return a * q * q + b * (q * q + q * q0) + c * (q * q + 2 * q * q0)


def pole_order(f: CurveElement, depth: int = 8) -> int:
    """Exact pole order at the point at infinity (0 for nonzero constants).

    For a normal form whose largest monomial bound is attained once, the
    bound is exact.  Ties are resolved through f^q - f, whose pole order is
    q times larger and generically untied; the recursion is depth-capped.
    """
    if f.is_zero():
        raise ValueError("zero element has no pole order")
    p = f.ring.p
    best = -1
    count = 0
    for mono in f.terms:
        t = _term_pole(p, mono)
        if t > best:
            best, count = t, 1
        elif t == best:
            count += 1
    if best == 0:
        return 0
    if count == 1:
        return best
    if depth == 0:
        raise ArithmeticError("pole order tie not resolved within depth cap")
    g = f.qpow() - f
    if g.is_zero():
        # f is fixed by Frobenius, hence a constant of GF(q); but best > 0
        # means a nonconstant normal form, which cannot happen
        raise ArithmeticError("nonconstant element fixed by q-power map")
    sub = pole_order(g, depth - 1)
    if sub % p.q:
        raise ArithmeticError("recursive pole order not divisible by q")
    return sub // p.q


def expected_pole_orders(p: ReeParams) -> dict[str, int]:
    """Closed forms for the family's pole orders at infinity."""
    q, q0 = p.q, p.q0
    qq = q * q
    return {
        "one": 0,
        "x": qq,
        "y": qq + q * q0,
        "z": qq + 2 * q * q0,
        "w1": qq + 3 * q * q0,
        "w2": qq + 3 * q * q0 + q,
        "w3": qq + 3 * q * q0 + 2 * q,
        "w4": qq + 2 * q * q0 + q,
        "w5": qq + 3 * q * q0 + q + q0,
        "w6": qq + 3 * q * q0 + 2 * q + 3 * q0,
        "w7": qq + 2 * q * q0 + q + q0,
        "w8": p.m_value,
        "w9": qq + 3 * q * q0 + 2 * q + q0,
        "w10": qq + 3 * q * q0 + 2 * q + 2 * q0,
    }


_RING_CACHE: dict[int, CoordinateRing] = {}
_FAMILY_CACHE: dict[int, FunctionFamily] = {}


def coordinate_ring(s: int) -> CoordinateRing:
    if s not in _RING_CACHE:
        _RING_CACHE[s] = CoordinateRing(ree_params(s))
    return _RING_CACHE[s]


def function_family(s: int) -> FunctionFamily:
    if s not in _FAMILY_CACHE:
        _FAMILY_CACHE[s] = FunctionFamily(coordinate_ring(s))
    return _FAMILY_CACHE[s]
