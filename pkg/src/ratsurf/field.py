"""Arithmetic in finite fields F_{p^k}.

Elements are stored as integers: the polynomial-basis coordinates
``(a_0, ..., a_{k-1})`` of an element encode as ``sum(a_i * p**i)``.  That
integer is also the text/file encoding used everywhere else in the package.

Scalar operations go through log/exp tables when the field is small enough,
and through plain polynomial arithmetic otherwise.  Vectorised variants
(``vadd``, ``vmul``...) operate on numpy integer arrays of encodings.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from itertools import product

import numpy as np

SIZE_CAP = 2**32
TABLE_CAP = 2**20


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# polynomials over F_p, coefficient lists from the constant term up


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    a = _trim(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _trim(a)
    return a


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def is_irreducible(poly, p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= deg/2."""
    poly = _trim(poly)
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if poly[0] == 0:
        return False
    for dd in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=dd):
            if _poly_mod(poly, list(low) + [1], p) == []:
                return False
    return True


def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k over F_p.

    Coefficient vectors are compared from the constant term up.
    """
    if k == 1:
        return (0, 1)
    for low in product(range(p), repeat=k):
        # product() varies the first slot slowest: constant term is most significant
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")


# ---------------------------------------------------------------------------


class GF:
    """The field F_{p^k} with its deterministic defining polynomial.

    Instances are cached: ``field_make(p, k)`` always returns the same object,
    and two independent constructions agree element for element.
    """

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if k < 1:
            raise FieldError("degree must be positive")
        if p**k > SIZE_CAP:
            raise FieldError(f"field size {p}^{k} exceeds the cap {SIZE_CAP}")
        self.p = p
        self.k = k
        self.order = p**k
        self.modulus = least_irreducible(p, k)
        self._pows = [p**i for i in range(k)]
        self._tables = self.order <= TABLE_CAP
        self._small_add = None
        if self._tables:
            self._build_tables()

    # -- construction ------------------------------------------------------

    def _build_tables(self):
        q = self.order
        digits = np.zeros((q, self.k), dtype=np.int64)
        x = np.arange(q, dtype=np.int64)
        for i in range(self.k):
            digits[:, i] = x % self.p
            x //= self.p
        self.digits = digits
        self._dig = [tuple(int(v) for v in row) for row in digits]
        self._small_add = None
        if self.p != 2 and self.k > 1 and q <= 256:
            self._small_add = [
                [sum((x + y) % self.p * w for x, y, w in zip(self._dig[a], self._dig[b], self._pows)) for b in range(q)]
                for a in range(q)
            ]
        self.powvec = np.array(self._pows, dtype=np.int64)
        # smallest primitive element
        g = 1
        for g in range(1, q):
            powers = [1]
            cur = g
            while cur != 1:
                powers.append(cur)
                cur = self._poly_mul_enc(cur, g)
            if len(powers) == q - 1:
                break
        exp = np.array(powers + powers, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        log[exp[: q - 1]] = np.arange(q - 1)
        self.exp = exp
        self.log = log
        self.generator = g

    def _poly_mul_enc(self, a: int, b: int) -> int:
        pa = self.to_coeffs(a)
        pb = self.to_coeffs(b)
        return self.from_coeffs(_poly_mod(_poly_mul(pa, pb, self.p), list(self.modulus), self.p))

    # -- encoding ----------------------------------------------------------

    def to_coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.k:
            coeffs = _poly_mod(coeffs, list(self.modulus), self.p)
        return sum((c % self.p) * pw for c, pw in zip(coeffs, self._pows))

    def header(self) -> str:
        return f"p={self.p} k={self.k} modulus={','.join(map(str, self.modulus))}"

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    def __contains__(self, a) -> bool:
        return isinstance(a, (int, np.integer)) and 0 <= a < self.order

    def elements(self):
        return range(self.order)

    # -- scalar arithmetic on encodings --------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        if self._small_add is not None:
            return self._small_add[a][b]
        if self._tables:
            p = self.p
            return sum((x + y) % p * w for x, y, w in zip(self._dig[a], self._dig[b], self._pows))
        return self.from_coeffs(x + y for x, y in zip(self.to_coeffs(a), self.to_coeffs(b)))

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.k == 1:
            return (-a) % self.p
        return self.from_coeffs(-c for c in self.to_coeffs(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return a * b % self.p
        if self._tables:
            return int(self.exp[self.log[a] + self.log[b]])
        return self._poly_mul_enc(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        if self._tables:
            return int(self.exp[(self.order - 1 - self.log[a]) % (self.order - 1)])
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self._tables:
            return int(self.exp[(self.log[a] * e) % (self.order - 1)])
        out = 1
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def frobenius(self, a: int, q: int | None = None) -> int:
        """x -> x^q, with q = p by default."""
        return self.pow(a, self.p if q is None else q)

    def sum(self, values) -> int:
        out = 0
        for v in values:
            out = self.add(out, v)
        return out

    # -- vectorised arithmetic (numpy arrays of encodings) -------------------

    def vadd(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.k == 1:
            s = a.astype(np.int64) + b
            return (s % self.p).astype(np.result_type(a, b))
        s = (self.digits[a] + self.digits[b]) % self.p
        return (s @ self.powvec).astype(np.result_type(a, b))

    def vneg(self, a):
        a = np.asarray(a)
        if self.p == 2:
            return a
        if self.k == 1:
            return ((-a.astype(np.int64)) % self.p).astype(a.dtype)
        return (((-self.digits[a]) % self.p) @ self.powvec).astype(a.dtype)

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        if self.k == 1:
            return ((a.astype(np.int64) * b) % self.p).astype(np.result_type(a, b))
        la = self.log[a]
        lb = self.log[b]
        out = self.exp[np.where((la < 0) | (lb < 0), 0, la + lb)]
        return np.where((la < 0) | (lb < 0), 0, out).astype(np.result_type(a, b))

    def vpow(self, a, e: int):
        a = np.asarray(a)
        la = self.log[a]
        out = self.exp[np.where(la < 0, 0, (la * e) % (self.order - 1))]
        if e == 0:
            return np.ones_like(a)
        return np.where(la < 0, 0, out).astype(a.dtype)

    # -- tables for small base fields ----------------------------------------

    @functools.cached_property
    def add_table(self) -> np.ndarray:
        q = self.order
        x = np.arange(q)
        return self.vadd(x[:, None], x[None, :]).astype(np.uint8 if q <= 256 else np.int64)

    @functools.cached_property
    def mul_table(self) -> np.ndarray:
        q = self.order
        x = np.arange(q)
        return self.vmul(x[:, None], x[None, :]).astype(np.uint8 if q <= 256 else np.int64)

    @functools.cached_property
    def neg_table(self) -> np.ndarray:
        return self.vneg(np.arange(self.order))

    @functools.cached_property
    def inv_table(self) -> np.ndarray:
        out = np.zeros(self.order, dtype=np.int64)
        for a in range(1, self.order):
            out[a] = self.inv(a)
        return out

    def elem(self, value: int) -> "FieldElement":
        return FieldElement(self, int(value))


@functools.lru_cache(maxsize=None)
def field_make(p: int, k: int = 1) -> GF:
    return GF(p, k)


def field_of_order(q: int) -> GF:
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                raise FieldError(f"{q} is not a prime power")
            return field_make(p, k)
    raise FieldError(f"{q} is not a prime power")


def extension(base: GF, d: int) -> GF:
    return field_make(base.p, base.k * d)


def relative_degree(ext: GF, base: GF) -> int:
    if ext.p != base.p or ext.k % base.k:
        raise FieldError(f"{base!r} is not a subfield of {ext!r}")
    return ext.k // base.k


# ---------------------------------------------------------------------------
# subfield embedding and coordinates


def _solve_mod_p(rows, rhs, p):
    """Solve M x = rhs over F_p for square invertible M given as row lists."""
    n = len(rows)
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c] % p)
        a[c], a[piv] = a[piv], a[c]
        inv = pow(a[c][c], p - 2, p)
        a[c] = [x * inv % p for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[c])]
    return [a[r][n] for r in range(n)]


class _Embedding:
    def __init__(self, base: GF, ext: GF):
        self.base = base
        self.ext = ext
        self.d = relative_degree(ext, base)
        p = ext.p
        # image of the base generator t: least root of base.modulus in ext
        if base.k == 1:
            beta = p if ext.k > 1 else None
            self.image = list(range(p))
        else:
            beta = None
            for cand in range(ext.order):
                acc = 0
                for c in reversed(base.modulus):
                    acc = ext.add(ext.mul(acc, cand), c)
                if acc == 0:
                    beta = cand
                    break
            self.image = [self._embed_coeffs(base.to_coeffs(a), beta) for a in range(base.order)]
        self.beta = beta
        self._back = {v: i for i, v in enumerate(self.image)}
        # F_p basis {beta^i theta^j} of ext, theta = t
        theta = p if ext.k > 1 else 1
        basis = []
        for j in range(self.d):
            tj = ext.pow(theta, j)
            for i in range(base.k):
                bi = ext.pow(beta, i) if base.k > 1 else 1
                basis.append(ext.mul(bi, tj))
        self.theta = theta
        self._basis_digits = [ext.to_coeffs(b) for b in basis]
        # columns of M are basis vectors; M x = digits(x)
        self._rows = [[self._basis_digits[c][r] for c in range(len(basis))] for r in range(ext.k)]

    def _embed_coeffs(self, coeffs, beta):
        ext = self.ext
        out = 0
        for i, c in enumerate(coeffs):
            if c:
                out = ext.add(out, ext.mul(c, ext.pow(beta, i)))
        return out

    def embed(self, a: int) -> int:
        return self.image[a]

    def restrict(self, x: int) -> int:
        try:
            return self._back[x]
        except KeyError:
            raise FieldError(f"{x} does not lie in the subfield {self.base!r}") from None

    @functools.cached_property
    def _coord_table(self):
        # every element's base-field coordinates; only built for small fields
        ext = self.ext
        out = np.zeros((ext.order, self.d), dtype=np.int64)
        for x in range(ext.order):
            out[x] = self.expand(x, _use_table=False)
        return out

    def expand(self, x: int, _use_table=True) -> tuple[int, ...]:
        if _use_table and self.ext.order <= 1 << 14:
            return tuple(int(v) for v in self._coord_table[x])
        sol = _solve_mod_p(self._rows, self.ext.to_coeffs(x), self.ext.p)
        kb = self.base.k
        return tuple(self.base.from_coeffs(sol[j * kb:(j + 1) * kb]) for j in range(self.d))

    def combine(self, coords) -> int:
        ext = self.ext
        out = 0
        for j, c in enumerate(coords):
            out = ext.add(out, ext.mul(self.image[c], ext.pow(self.theta, j)))
        return out


@functools.lru_cache(maxsize=None)
def embedding(base: GF, ext: GF) -> _Embedding:
    return _Embedding(base, ext)


def embed(a: int, base: GF, ext: GF) -> int:
    return embedding(base, ext).embed(a)


def frobenius_rel(x: int, ext: GF, base: GF) -> int:
    """x -> x^|base| in ext; applying it relative_degree times is the identity."""
    relative_degree(ext, base)
    return ext.pow(x, base.order)


def expand_to_base(x: int, ext: GF, base: GF) -> tuple[int, ...]:
    """Coordinates of x over base in the power basis 1, t, ..., t^(d-1) of ext."""
    return embedding(base, ext).expand(x)


def combine_from_base(coords, ext: GF, base: GF) -> int:
    return embedding(base, ext).combine(coords)


def in_subfield(x: int, ext: GF, base: GF) -> bool:
    return frobenius_rel(x, ext, base) == x


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldElement:
    """Element of a finite field with operator overloads."""

    owner: GF
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.owner.order:
            raise FieldError(f"{self.value} is not an element of {self.owner!r}")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.owner.to_coeffs(self.value))

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.owner is not self.owner:
                raise FieldError(f"owner mismatch: {self.owner!r} vs {other.owner!r}")
            return other.value
        if isinstance(other, int):
            return self.owner.from_coeffs([other % self.owner.p])
        return NotImplemented

    def __add__(self, other):
        return arith(self, other, "add")

    __radd__ = __add__

    def __sub__(self, other):
        return arith(self, other, "sub")

    def __rsub__(self, other):
        return FieldElement(self.owner, self._other(other)) - self

    def __mul__(self, other):
        return arith(self, other, "mul")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return arith(self, other, "div")

    def __neg__(self):
        return FieldElement(self.owner, self.owner.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.owner, self.owner.pow(self.value, e))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __str__(self):
        return str(self.value)


def arith(a: FieldElement, b, op: str) -> FieldElement:
    f = a.owner
    bv = a._other(b)
    if bv is NotImplemented:
        raise TypeError(f"cannot combine FieldElement with {type(b).__name__}")
    if op == "add":
        return FieldElement(f, f.add(a.value, bv))
    if op == "sub":
        return FieldElement(f, f.sub(a.value, bv))
    if op == "mul":
        return FieldElement(f, f.mul(a.value, bv))
    if op == "div":
        return FieldElement(f, f.div(a.value, bv))
    raise ValueError(f"unknown operation {op!r}")
