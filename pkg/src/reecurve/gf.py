"""Arithmetic in GF(3^m) with deterministic moduli.

Elements are coefficient tuples over GF(3) in the polynomial basis
1, t, ..., t^(m-1).  The modulus for each degree is pinned so that any two
runs (and any two machines) agree on element encodings: it is the monic
irreducible whose non-leading coefficient vector, read as a base-3 integer
with the constant term least significant, is smallest.

Beyond the ring operations the module provides the three maps the curve
machinery needs: iterated cube (Frobenius powers), traces onto subfields,
and a deterministic solver for Artin-Schreier equations u^q - u = c.
"""

from __future__ import annotations

from typing import Optional, Sequence

__all__ = [
    "FieldContext",
    "FieldElement",
    "field_context",
    "ff_add",
    "ff_sub",
    "ff_mul",
    "ff_inv",
    "frobenius_power",
    "trace_to_subfield",
    "solve_artin_schreier",
]


# ---------------------------------------------------------------------------
# dense GF(3)[t] helpers, little-endian coefficient lists


def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = (out[i + j] + ai * bj) % 3
    return _ptrim(out)


def _pmod(a: Sequence[int], f: Sequence[int]) -> list[int]:
    r = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, 3)
    while len(r) - 1 >= df and r:
        lead = r[-1]
        if lead:
            coef = (lead * inv_lead) % 3
            shift = len(r) - 1 - df
            for i, fi in enumerate(f):
                r[i + shift] = (r[i + shift] - coef * fi) % 3
        _ptrim(r)
    return r


def _ppowmod(a: Sequence[int], n: int, f: Sequence[int]) -> list[int]:
    result = [1]
    base = _pmod(a, f)
    while n:
        if n & 1:
            result = _pmod(_pmul(result, base), f)
        base = _pmod(_pmul(base, base), f)
        n >>= 1
    return result


def _pgcd(a: Sequence[int], b: Sequence[int]) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(a, b)
    if a:
        inv = pow(a[-1], -1, 3)
        a = [(c * inv) % 3 for c in a]
    return a


def _is_irreducible(f: list[int]) -> bool:
    m = len(f) - 1
    if m < 1:
        return False
    # t^(3^m) == t mod f, and gcd(t^(3^(m/p)) - t, f) == 1 for prime p | m.
    tp = _ppowmod([0, 1], 3**m, f)
    t_red = _pmod([0, 1], f)
    width = max(len(tp), len(t_red))
    tp = list(tp) + [0] * (width - len(tp))
    t_red = list(t_red) + [0] * (width - len(t_red))
    if _ptrim([(a - b) % 3 for a, b in zip(tp, t_red)]):
        return False
    for p in _prime_factors(m):
        tp = _ppowmod([0, 1], 3 ** (m // p), f)
        diff = list(tp) + [0, 0]
        diff[1] = (diff[1] - 1) % 3
        g = _pgcd(_ptrim(diff), f)
        if len(g) != 1:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _smallest_modulus(m: int) -> tuple[int, ...]:
    """Monic irreducible of degree m whose low-coefficient code is minimal."""
    for n in range(3**m):
        coeffs = []
        k = n
        for _ in range(m):
            coeffs.append(k % 3)
            k //= 3
        f = coeffs + [1]
        if _is_irreducible(list(f)):
            return tuple(f)
    raise ArithmeticError(f"no irreducible of degree {m} found")


# ---------------------------------------------------------------------------


class FieldElement:
    """Immutable element of a FieldContext, coefficients in the power basis."""

    __slots__ = ("ctx", "coeffs", "_hash")

    def __init__(self, ctx: "FieldContext", coeffs: tuple[int, ...]):
        self.ctx = ctx
        self.coeffs = coeffs
        self._hash = None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def code(self) -> int:
        """Base-3 packed integer encoding, constant term least significant."""
        out = 0
        for c in reversed(self.coeffs):
            out = out * 3 + c
        return out

    def _check(self, other: "FieldElement") -> None:
        if self.ctx is not other.ctx:
            raise ValueError("elements belong to different field contexts")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(
            self.ctx,
            tuple((a + b) % 3 for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(
            self.ctx,
            tuple((a - b) % 3 for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.ctx, tuple((-a) % 3 for a in self.coeffs))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self.ctx._mul(self, other)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return self * other.inverse()

    def __pow__(self, n: int) -> "FieldElement":
        return self.ctx.pow(self, n)

    def inverse(self) -> "FieldElement":
        return self.ctx.inv(self)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldElement)
            and self.ctx is other.ctx
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((id(self.ctx), self.coeffs))
        return self._hash

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"GF(3^{self.ctx.m}):{self.code()}"


class FieldContext:
    """GF(3^m) with the deterministic degree-m modulus."""

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("m must be >= 1")
        self.m = m
        self.modulus = _smallest_modulus(m)
        self.order = 3**m
        self._cube_cols: Optional[list[tuple[int, ...]]] = None
        self._as_cache: dict[int, tuple] = {}

    # -- constructors

    def zero(self) -> FieldElement:
        return FieldElement(self, (0,) * self.m)

    def one(self) -> FieldElement:
        return FieldElement(self, (1,) + (0,) * (self.m - 1))

    def scalar(self, n: int) -> FieldElement:
        return FieldElement(self, (n % 3,) + (0,) * (self.m - 1))

    def gen(self) -> FieldElement:
        if self.m == 1:
            # modulus is t itself, so the generator image is 0
            return self.zero()
        return FieldElement(self, (0, 1) + (0,) * (self.m - 2))

    def from_coeffs(self, coeffs: Sequence[int]) -> FieldElement:
        c = [x % 3 for x in coeffs]
        if len(c) > self.m:
            c = _pmod(c, list(self.modulus)) or [0]
        c = c + [0] * (self.m - len(c))
        return FieldElement(self, tuple(c[: self.m]))

    def from_code(self, code: int) -> FieldElement:
        if not 0 <= code < self.order:
            raise ValueError("code out of range")
        coeffs = []
        for _ in range(self.m):
            coeffs.append(code % 3)
            code //= 3
        return FieldElement(self, tuple(coeffs))

    def random_element(self, rng) -> FieldElement:
        return self.from_code(rng.randrange(self.order))

    # -- core ops

    def _mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        prod = _pmod(_pmul(a.coeffs, b.coeffs), list(self.modulus))
        prod = prod + [0] * (self.m - len(prod))
        return FieldElement(self, tuple(prod))

    def inv(self, a: FieldElement) -> FieldElement:
        if a.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid in GF(3)[t]
        r0, r1 = list(self.modulus), _ptrim(list(a.coeffs))
        s0, s1 = [], [1]
        while r1:
            # divide r0 by r1
            q = []
            r = list(r0)
            df = len(r1) - 1
            inv_lead = pow(r1[-1], -1, 3)
            while len(r) - 1 >= df and r:
                shift = len(r) - 1 - df
                coef = (r[-1] * inv_lead) % 3
                while len(q) <= shift:
                    q.append(0)
                q[shift] = coef
                for i, fi in enumerate(r1):
                    r[i + shift] = (r[i + shift] - coef * fi) % 3
                _ptrim(r)
            r0, r1 = r1, r
            s0, s1 = s1, _ptrim(
                [
                    (x - y) % 3
                    for x, y in zip(
                        s0 + [0] * max(0, len(_pmul(q, s1)) - len(s0)),
                        _pmul(q, s1) + [0] * max(0, len(s0) - len(_pmul(q, s1))),
                    )
                ]
            )
        lead_inv = pow(r0[-1], -1, 3)
        s0 = [(c * lead_inv) % 3 for c in s0]
        s0 = _pmod(s0, list(self.modulus))
        return self.from_coeffs(s0)

    def pow(self, a: FieldElement, n: int) -> FieldElement:
        if n < 0:
            return self.pow(a.inverse(), -n)
        result = self.one()
        base = a
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- Frobenius

    def _cube_columns(self) -> list[tuple[int, ...]]:
        if self._cube_cols is None:
            cols = []
            t3 = _pmod([0, 0, 0, 1], list(self.modulus))
            col = [1]
            for _ in range(self.m):
                padded = col + [0] * (self.m - len(col))
                cols.append(tuple(padded[: self.m]))
                col = _pmod(_pmul(col, t3), list(self.modulus))
            self._cube_cols = cols
        return self._cube_cols

    def cube(self, a: FieldElement) -> FieldElement:
        # x -> x^3 is GF(3)-linear; apply the precomputed matrix.
        cols = self._cube_columns()
        acc = [0] * self.m
        for i, ai in enumerate(a.coeffs):
            if ai:
                col = cols[i]
                for j in range(self.m):
                    acc[j] = (acc[j] + ai * col[j]) % 3
        return FieldElement(self, tuple(acc))

    def _frob_columns(self, k: int) -> list[tuple[int, ...]]:
        """Columns of x -> x^(3^k), built by composing the cube matrix."""
        if not hasattr(self, "_frob_cols"):
            self._frob_cols = {1: self._cube_columns()}
        cache = self._frob_cols
        if k not in cache:
            prev = self._frob_columns(k - 1)
            cube_cols = self._cube_columns()
            cols = []
            for col in prev:
                acc = [0] * self.m
                for i, ci in enumerate(col):
                    if ci:
                        cc = cube_cols[i]
                        for j in range(self.m):
                            acc[j] = (acc[j] + ci * cc[j]) % 3
                cols.append(tuple(acc))
            cache[k] = cols
        return cache[k]

    def frobenius(self, a: FieldElement, k: int) -> FieldElement:
        k %= self.m
        if k == 0:
            return a
        cols = self._frob_columns(k)
        acc = [0] * self.m
        for i, ai in enumerate(a.coeffs):
            if ai:
                col = cols[i]
                for j in range(self.m):
                    acc[j] = (acc[j] + ai * col[j]) % 3
        return FieldElement(self, tuple(acc))

    def __repr__(self) -> str:  # pragma: no cover
        return f"FieldContext(GF(3^{self.m}))"


_CTX_CACHE: dict[int, FieldContext] = {}


def field_context(m: int) -> FieldContext:
    """Shared context per degree, so element contexts compare by identity."""
    if m not in _CTX_CACHE:
        _CTX_CACHE[m] = FieldContext(m)
    return _CTX_CACHE[m]


# ---------------------------------------------------------------------------
# module-level operation surface


def ff_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def ff_sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def ff_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def ff_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def frobenius_power(a: FieldElement, k: int) -> FieldElement:
    """a^(3^k)."""
    return a.ctx.frobenius(a, k)


def _subfield_basis(ctx: FieldContext, d: int) -> list[FieldElement]:
    """GF(3)-basis of the fixed field of x -> x^(3^d) inside ctx."""
    m = ctx.m
    # columns of (Frob^d - I) acting on the power basis
    cols = []
    for i in range(m):
        e = ctx.from_coeffs([0] * i + [1])
        img = ctx.frobenius(e, d) - e
        cols.append(img.coeffs)
    # kernel via row-reduction of the transpose system
    rows = [[cols[j][i] for j in range(m)] for i in range(m)]
    pivots = {}
    for col in range(m):
        pr = None
        for r in range(m):
            if r in pivots.values():
                continue
            if rows[r][col]:
                pr = r
                break
        if pr is None:
            continue
        inv = pow(rows[pr][col], -1, 3)
        rows[pr] = [(v * inv) % 3 for v in rows[pr]]
        for r in range(m):
            if r != pr and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(v - f * p) % 3 for v, p in zip(rows[r], rows[pr])]
        pivots[col] = pr
    basis = []
    free_cols = [c for c in range(m) if c not in pivots]
    for fc in free_cols:
        vec = [0] * m
        vec[fc] = 1
        for col, r in pivots.items():
            vec[col] = (-rows[r][fc]) % 3
        basis.append(ctx.from_coeffs(vec))
    return basis


_EMBED_CACHE: dict[tuple[int, int], FieldElement] = {}


def _subfield_generator_image(ctx: FieldContext, d: int) -> FieldElement:
    """Image in ctx of the canonical GF(3^d) generator (deterministic root)."""
    key = (ctx.m, d)
    if key in _EMBED_CACHE:
        return _EMBED_CACHE[key]
    sub = field_context(d)
    basis = _subfield_basis(ctx, d)
    if len(basis) != d:
        raise ArithmeticError("subfield dimension mismatch")
    # enumerate subfield elements in ascending coordinate code, pick the
    # first root of the canonical degree-d modulus
    best = None
    for code in range(3**d):
        coords = []
        k = code
        for _ in range(d):
            coords.append(k % 3)
            k //= 3
        elem = ctx.zero()
        for c, b in zip(coords, basis):
            if c:
                elem = elem + (b if c == 1 else b + b)
        val = ctx.zero()
        for coeff in reversed(sub.modulus):
            val = val * elem + ctx.scalar(coeff)
        if val.is_zero():
            best = elem
            break
    if best is None:
        raise ArithmeticError("canonical subfield modulus has no root")
    _EMBED_CACHE[key] = best
    return best


def trace_to_subfield(a: FieldElement, d: int) -> FieldElement:
    """Trace of a onto GF(3^d), returned as an element of that context."""
    ctx = a.ctx
    if ctx.m % d:
        raise ValueError("subfield degree must divide m")
    total = ctx.zero()
    cur = a
    for _ in range(ctx.m // d):
        total = total + cur
        cur = ctx.frobenius(cur, d)
    if ctx.frobenius(total, d) != total:
        raise ArithmeticError("trace not fixed by subfield Frobenius")
    sub = field_context(d)
    if d == 1:
        if any(total.coeffs[1:]):
            raise ArithmeticError("prime-field trace has nonconstant part")
        return sub.scalar(total.coeffs[0])
    if d == ctx.m:
        return total if sub is ctx else sub.from_coeffs(total.coeffs)
    root = _subfield_generator_image(ctx, d)
    # solve for coordinates of total in the power basis of the root
    powers = [ctx.one()]
    for _ in range(d - 1):
        powers.append(powers[-1] * root)
    rows = [[powers[j].coeffs[i] for j in range(d)] for i in range(ctx.m)]
    rhs = list(total.coeffs)
    sol = _solve_gf3(rows, rhs)
    if sol is None:
        raise ArithmeticError("trace not in subfield span")
    return sub.from_coeffs(sol)


def _solve_gf3(rows: list[list[int]], rhs: list[int]) -> Optional[list[int]]:
    """Solve a GF(3) linear system; deterministic representative, or None."""
    nr, nc = len(rows), len(rows[0]) if rows else 0
    aug = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    pivots = []
    r = 0
    for c in range(nc):
        pr = None
        for rr in range(r, nr):
            if aug[rr][c]:
                pr = rr
                break
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = pow(aug[r][c], -1, 3)
        aug[r] = [(v * inv) % 3 for v in aug[r]]
        for rr in range(nr):
            if rr != r and aug[rr][c]:
                f = aug[rr][c]
                aug[rr] = [(v - f * p) % 3 for v, p in zip(aug[rr], aug[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    for rr in range(r, nr):
        if aug[rr][nc]:
            return None
    sol = [0] * nc
    for i, c in enumerate(pivots):
        sol[c] = aug[i][nc]
    return sol


def solve_artin_schreier(c: FieldElement, q: int) -> Optional[FieldElement]:
    """Deterministic solution u of u^q - u = c in the context of c, or None.

    q must be a power of 3 whose exponent divides m.  The solution returned
    is the echelon representative with all free coordinates zero, so equal
    inputs always produce equal outputs.
    """
    ctx = c.ctx
    e = 0
    qq = q
    while qq > 1 and qq % 3 == 0:
        qq //= 3
        e += 1
    if qq != 1 or e == 0:
        raise ValueError("q must be a power of 3 greater than 1")
    if ctx.m % e:
        raise ValueError("exponent of q must divide field degree")
    if e not in ctx._as_cache:
        # factor the elimination once: row-reduce [A | I] so each solve is
        # one transform application (the pivot order matches _solve_gf3, so
        # the echelon representative is unchanged)
        m = ctx.m
        cols = []
        for i in range(m):
            b = ctx.from_coeffs([0] * i + [1])
            img = ctx.frobenius(b, e) - b
            cols.append(img.coeffs)
        aug = [[cols[j][i] for j in range(m)] + [int(k == i) for k in range(m)] for i in range(m)]
        pivots = []
        r = 0
        for col in range(m):
            pr = next((rr for rr in range(r, m) if aug[rr][col]), None)
            if pr is None:
                continue
            aug[r], aug[pr] = aug[pr], aug[r]
            inv = pow(aug[r][col], -1, 3)
            aug[r] = [(v * inv) % 3 for v in aug[r]]
            for rr in range(m):
                if rr != r and aug[rr][col]:
                    f = aug[rr][col]
                    aug[rr] = [(v - f * p) % 3 for v, p in zip(aug[rr], aug[r])]
            pivots.append(col)
            r += 1
        transform = [tuple(row[m:]) for row in aug]
        ctx._as_cache[e] = (pivots, transform)
    pivots, transform = ctx._as_cache[e]
    m = ctx.m
    b = c.coeffs
    for r in range(len(pivots), m):
        row = transform[r]
        if sum(row[i] * b[i] for i in range(m) if b[i]) % 3:
            return None
    sol = [0] * m
    for r, col in enumerate(pivots):
        row = transform[r]
        sol[col] = sum(row[i] * b[i] for i in range(m) if b[i]) % 3
    u = ctx.from_coeffs(sol)
    if ctx.frobenius(u, e) - u != c:
        raise ArithmeticError("Artin-Schreier solver produced a non-solution")
    return u
