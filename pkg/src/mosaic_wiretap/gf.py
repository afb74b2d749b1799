"""Arithmetic in GF(q^t) for prime q, with F_q-linear subspace machinery.

Elements are coefficient vectors of length t over Z_q, written with the
least-significant coordinate first, relative to the power basis of a
monic irreducible modulus polynomial.  The modulus is chosen
deterministically (smallest irreducible in counting order), so two
contexts built from the same (q, t) are interchangeable and element
enumeration is stable across runs.

Element i of the canonical enumeration has coefficients equal to the
base-q digits of i, i.e. coeffs[0] = i % q.  The size cap q^t <= 4096
keeps exhaustive verification (irreducibility by trial division,
subspace enumeration) cheap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

FIELD_SIZE_CAP = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ----------------------------------------------------------------------
# Dense polynomial helpers over F_q.  Coefficients are little-endian
# tuples/lists of ints in [0, q); the zero polynomial is ().
# ----------------------------------------------------------------------

def _trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_add(a, b, q):
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        out[i] = ((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % q
    return _trim(out)


def _poly_mul(a, b, q):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % q
    return _trim(out)


def _poly_mod(a, m, q):
    """Remainder of a modulo the monic polynomial m."""
    r = list(a)
    dm = len(m) - 1
    while len(r) - 1 >= dm and r:
        lead = r[-1]
        shift = len(r) - 1 - dm
        if lead:
            for i, mi in enumerate(m):
                r[shift + i] = (r[shift + i] - lead * mi) % q
        # leading coefficient is now zero by construction
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return tuple(r)


def _poly_ext_gcd(a, b, q):
    """Extended Euclid: returns (g, s) with s*a = g (mod b), g the gcd."""
    r0, r1 = tuple(a), tuple(b)
    s0, s1 = (1,), ()
    while r1:
        # divide r0 by r1
        quot = [0] * max(len(r0) - len(r1) + 1, 1)
        rem = list(r0)
        inv_lead = pow(r1[-1], -1, q)
        while len(rem) >= len(r1) and rem:
            c = (rem[-1] * inv_lead) % q
            d = len(rem) - len(r1)
            if c:
                quot[d] = c
                for i, bi in enumerate(r1):
                    rem[d + i] = (rem[d + i] - c * bi) % q
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        r0, r1 = r1, _trim(rem)
        qs = _poly_mul(_trim(quot), s1, q)
        s0, s1 = s1, _trim([(x - y) % q for x, y in
                            itertools.zip_longest(s0, qs, fillvalue=0)])
    return r0, s0


def _irreducible(poly, q) -> bool:
    """Trial division by every monic polynomial of degree 1..deg//2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(q), repeat=d):
            divisor = low + (1,)
            if not _poly_mod(poly, divisor, q):
                return False
    return True


@lru_cache(maxsize=None)
def _find_modulus(q: int, t: int) -> tuple[int, ...]:
    """Smallest (counting order on the low coefficients) monic irreducible
    of degree t over F_q.  Returns the t low coefficients; the leading
    coefficient 1 is implicit."""
    for value in range(q ** t):
        low = tuple((value // q ** i) % q for i in range(t))
        if _irreducible(low + (1,), q):
            return low
    raise AssertionError(f"no irreducible polynomial of degree {t} over F_{q}")


# ----------------------------------------------------------------------
# Field context and elements
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FieldCtx:
    """The field GF(q^t) with its canonical modulus polynomial.

    modulus holds the t low coefficients of the monic modulus; the full
    polynomial is x^t + sum(modulus[i] * x^i).
    """

    q: int
    t: int
    modulus: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.q ** self.t

    @property
    def modulus_poly(self) -> tuple[int, ...]:
        return self.modulus + (1,)

    def element(self, coeffs) -> "FieldElement":
        cs = tuple(int(c) % self.q for c in coeffs)
        if len(cs) != self.t:
            raise ValueError(f"expected {self.t} coordinates, got {len(cs)}")
        return FieldElement(self, cs)

    def from_index(self, i: int) -> "FieldElement":
        if not 0 <= i < self.order:
            raise ValueError(f"index {i} out of range for field of order {self.order}")
        return FieldElement(self, tuple((i // self.q ** k) % self.q
                                        for k in range(self.t)))

    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.t)

    def one(self) -> "FieldElement":
        return self.from_index(1)

    def elements(self) -> tuple["FieldElement", ...]:
        return tuple(self.from_index(i) for i in range(self.order))


def field_ctx(q: int, t: int) -> FieldCtx:
    """Build GF(q^t).  q must be prime, t >= 1, q^t <= FIELD_SIZE_CAP."""
    if not is_prime(q):
        raise ValueError(f"q = {q} is not prime")
    if t < 1:
        raise ValueError("extension degree t must be >= 1")
    if q ** t > FIELD_SIZE_CAP:
        raise ValueError(f"field size {q ** t} exceeds cap {FIELD_SIZE_CAP}")
    return FieldCtx(q, t, _find_modulus(q, t))


@dataclass(frozen=True)
class FieldElement:
    """Element of GF(q^t) as a coefficient vector in the power basis."""

    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def _check(self, other: "FieldElement") -> None:
        if self.ctx != other.ctx:
            raise ValueError("elements belong to different field contexts")

    @property
    def index(self) -> int:
        q = self.ctx.q
        return sum(c * q ** i for i, c in enumerate(self.coeffs))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        q = self.ctx.q
        return FieldElement(self.ctx, tuple((a + b) % q for a, b in
                                            zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        q = self.ctx.q
        return FieldElement(self.ctx, tuple((a - b) % q for a, b in
                                            zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FieldElement":
        q = self.ctx.q
        return FieldElement(self.ctx, tuple((-a) % q for a in self.coeffs))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        q, t = self.ctx.q, self.ctx.t
        prod = _poly_mul(_trim(list(self.coeffs)), _trim(list(other.coeffs)), q)
        red = _poly_mod(prod, self.ctx.modulus_poly, q)
        return FieldElement(self.ctx, red + (0,) * (t - len(red)))

    def scale(self, c: int) -> "FieldElement":
        q = self.ctx.q
        c %= q
        return FieldElement(self.ctx, tuple((a * c) % q for a in self.coeffs))

    def inv(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        q, t = self.ctx.q, self.ctx.t
        g, s = _poly_ext_gcd(_trim(list(self.coeffs)), self.ctx.modulus_poly, q)
        # g is a nonzero constant since the modulus is irreducible
        s = _poly_mul(s, (pow(g[0], -1, q),), q)
        s = _poly_mod(s, self.ctx.modulus_poly, q)
        return FieldElement(self.ctx, s + (0,) * (t - len(s)))

    def label(self) -> str:
        return str(self.index)

    def __repr__(self) -> str:
        return f"GF({self.ctx.q}^{self.ctx.t})[{self.index}]"


def enumerate_field(ctx: FieldCtx) -> tuple[FieldElement, ...]:
    """All q^t elements in canonical (counting) order; element 0 first."""
    return ctx.elements()


# ----------------------------------------------------------------------
# F_q-linear subspaces
# ----------------------------------------------------------------------

def _rref(rows: list[list[int]], q: int) -> list[list[int]]:
    """Reduced row echelon form over F_q; zero rows dropped."""
    rows = [list(r) for r in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    pivot_row = 0
    for col in range(ncols):
        pr = next((r for r in range(pivot_row, len(rows)) if rows[r][col] % q), None)
        if pr is None:
            continue
        rows[pivot_row], rows[pr] = rows[pr], rows[pivot_row]
        inv = pow(rows[pivot_row][col] % q, -1, q)
        rows[pivot_row] = [(v * inv) % q for v in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] % q:
                c = rows[r][col] % q
                rows[r] = [(a - c * b) % q for a, b in zip(rows[r], rows[pivot_row])]
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return [r for r in rows[:pivot_row]]


@dataclass(frozen=True)
class Subspace:
    """F_q-linear subspace of GF(q^t), basis stored in canonical RREF.

    Two Subspace values describing the same point set compare equal
    because the reduced echelon basis of a row space is unique.
    """

    ctx: FieldCtx
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_vectors(cls, ctx: FieldCtx, vectors) -> "Subspace":
        rows = []
        for v in vectors:
            coeffs = v.coeffs if isinstance(v, FieldElement) else tuple(v)
            if len(coeffs) != ctx.t:
                raise ValueError("vector length does not match the field degree")
            rows.append([int(c) % ctx.q for c in coeffs])
        return cls(ctx, tuple(tuple(r) for r in _rref(rows, ctx.q)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.ctx.q ** self.dim

    def contains(self, x: FieldElement) -> bool:
        if x.ctx != self.ctx:
            raise ValueError("element belongs to a different field context")
        q = self.ctx.q
        v = list(x.coeffs)
        for row in self.basis:
            piv = next(i for i, c in enumerate(row) if c)
            if v[piv]:
                c = v[piv]
                v = [(a - c * b) % q for a, b in zip(v, row)]
        return not any(v)

    def element(self, digits) -> FieldElement:
        """Combination sum(digits[i] * basis[i]); digits in [0, q)."""
        q, t = self.ctx.q, self.ctx.t
        out = [0] * t
        for d, row in zip(digits, self.basis):
            for i, c in enumerate(row):
                out[i] = (out[i] + d * c) % q
        return FieldElement(self.ctx, tuple(out))

    def elements(self) -> list[FieldElement]:
        q = self.ctx.q
        return [self.element(tuple((i // q ** k) % q for k in range(self.dim)))
                for i in range(len(self))]


def coset_elements(sub: Subspace, shift: FieldElement) -> list[FieldElement]:
    """The coset shift + sub, exactly q^dim distinct elements, in the
    canonical digit order of the subspace basis."""
    if shift.ctx != sub.ctx:
        raise ValueError("shift belongs to a different field context")
    return [shift + w for w in sub.elements()]


def complementary_subspaces(ctx: FieldCtx, ell: int) -> tuple[Subspace, Subspace]:
    """Coordinate subspaces (A, V) with dim A = t-ell, dim V = ell and
    A ∩ V = {0}.  A spans the first t-ell power-basis vectors, V the last
    ell, so every x splits uniquely by truncating coordinates."""
    t = ctx.t
    if not 1 <= ell < t:
        raise ValueError(f"need 1 <= ell < t, got ell={ell}, t={t}")

    def unit(i):
        return tuple(1 if j == i else 0 for j in range(t))

    a = Subspace(ctx, tuple(unit(i) for i in range(t - ell)))
    v = Subspace(ctx, tuple(unit(i) for i in range(t - ell, t)))
    return a, v
