"""Points of P^2 / P^3, closed points, homogeneous forms and point counting."""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from itertools import product
from math import comb

import numpy as np

from .field import GF, FieldError, embed, embedding, frobenius_rel, relative_degree

VARS = {3: "xyz", 4: "xyzt"}


# ---------------------------------------------------------------------------
# monomials


@functools.lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of degree ``degree`` in graded-lex (descending) order."""
    if degree < 0:
        return ()
    out = [e for e in product(range(degree + 1), repeat=nvars) if sum(e) == degree]
    return tuple(sorted(out, reverse=True))


@functools.lru_cache(maxsize=None)
def monomial_index(nvars: int, degree: int) -> dict:
    return {m: i for i, m in enumerate(monomials(nvars, degree))}


def num_monomials(nvars: int, degree: int) -> int:
    return comb(degree + nvars - 1, nvars - 1)


# ---------------------------------------------------------------------------
# forms


@dataclass(frozen=True)
class HomogeneousForm:
    field: GF
    nvars: int
    degree: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.nvars not in (3, 4):
            raise ValueError("forms have 3 or 4 variables")
        if len(self.coeffs) != num_monomials(self.nvars, self.degree):
            raise ValueError(
                f"expected {num_monomials(self.nvars, self.degree)} coefficients, got {len(self.coeffs)}"
            )
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def from_terms(cls, field: GF, nvars: int, degree: int, terms: dict) -> "HomogeneousForm":
        idx = monomial_index(nvars, degree)
        coeffs = [0] * len(idx)
        for mono, c in terms.items():
            coeffs[idx[tuple(mono)]] = field.add(coeffs[idx[tuple(mono)]], int(c))
        return cls(field, nvars, degree, tuple(coeffs))

    @classmethod
    def parse(cls, text: str, field: GF, nvars: int = 3) -> "HomogeneousForm":
        """Parse a sum of terms such as ``x^4 + 2*x^2*y*z - y z^3``.

        Integer coefficients are reduced into the prime subfield; products of
        forms can be written with parentheses at the top level only, e.g.
        ``x*(x^2 + y z)``.
        """
        return _parse_form(text, field, nvars)

    def terms(self) -> dict:
        return {m: c for m, c in zip(monomials(self.nvars, self.degree), self.coeffs) if c}

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __mul__(self, other: "HomogeneousForm") -> "HomogeneousForm":
        if other.field is not self.field or other.nvars != self.nvars:
            raise ValueError("incompatible forms")
        F = self.field
        out: dict = {}
        for m1, c1 in self.terms().items():
            for m2, c2 in other.terms().items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = F.add(out.get(m, 0), F.mul(c1, c2))
        return HomogeneousForm.from_terms(F, self.nvars, self.degree + other.degree, out)

    def scale(self, c: int) -> "HomogeneousForm":
        F = self.field
        return HomogeneousForm(F, self.nvars, self.degree, tuple(F.mul(c, a) for a in self.coeffs))

    def __add__(self, other: "HomogeneousForm") -> "HomogeneousForm":
        if other.degree != self.degree or other.nvars != self.nvars:
            raise ValueError("incompatible forms")
        F = self.field
        return HomogeneousForm(F, self.nvars, self.degree, tuple(F.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __str__(self):
        names = VARS[self.nvars]
        parts = []
        for m, c in self.terms().items():
            mono = "*".join(
                names[i] + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts) if parts else "0"


class PlaneCurve(HomogeneousForm):
    """A nonzero ternary form, viewed as the curve it cuts out."""

    def __post_init__(self):
        super().__post_init__()
        if self.nvars != 3:
            raise ValueError("plane curves have 3 variables")
        if self.is_zero():
            raise ValueError("the zero polynomial does not define a curve")

    @classmethod
    def of(cls, form: HomogeneousForm) -> "PlaneCurve":
        return cls(form.field, form.nvars, form.degree, form.coeffs)


_TERM = re.compile(r"^(\d*)\*?((?:[a-z](?:\^\d+)?\*?)*)$")


def _parse_sum(text: str, field: GF, names: str) -> dict:
    text = text.replace(" ", "")
    if not text:
        raise ValueError("empty form")
    text = re.sub(r"(?<=[\w)])-", "+-", text)
    out: dict = {}
    for raw in text.split("+"):
        if not raw:
            continue
        sign = 1
        while raw.startswith("-"):
            sign = -sign
            raw = raw[1:]
        m = _TERM.match(raw)
        if not m:
            raise ValueError(f"cannot parse term {raw!r}")
        coef = int(m.group(1)) if m.group(1) else 1
        exps = [0] * len(names)
        for var, e in re.findall(r"([a-z])(?:\^(\d+))?", m.group(2)):
            if var not in names:
                raise ValueError(f"unknown variable {var!r}")
            exps[names.index(var)] += int(e) if e else 1
        c = field.from_coeffs([(sign * coef) % field.p])
        key = tuple(exps)
        out[key] = field.add(out.get(key, 0), c)
    return out


def _dict_to_form(d: dict, field: GF, nvars: int) -> HomogeneousForm:
    d = {m: c for m, c in d.items() if c}
    degs = {sum(m) for m in d}
    if len(degs) > 1:
        raise ValueError("form is not homogeneous")
    degree = degs.pop() if degs else 0
    return HomogeneousForm.from_terms(field, nvars, degree, d)


def _parse_form(text: str, field: GF, nvars: int) -> HomogeneousForm:
    names = VARS[nvars]
    text = text.strip()
    factors = []
    depth = 0
    start = 0
    # split top-level products "a*(b)*(c)"
    chunks = []
    for i, ch in enumerate(text):
        if ch == "(":
            if depth == 0:
                head = text[start:i].rstrip("*").strip()
                if head:
                    chunks.append(head)
                start = i + 1
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                chunks.append(text[start:i])
                start = i + 1
    tail = text[start:].strip().lstrip("*")
    if tail:
        chunks.append(tail)
    for ch in chunks:
        factors.append(_dict_to_form(_parse_sum(ch, field, names), field, nvars))
    out = factors[0]
    for f in factors[1:]:
        out = out * f
    return out


# ---------------------------------------------------------------------------
# points


def normalize(coords, field: GF) -> tuple[int, ...]:
    coords = tuple(int(c) for c in coords)
    for c in coords:
        if c:
            inv = field.inv(c)
            return tuple(field.mul(inv, x) for x in coords)
    raise ValueError("the zero vector is not a projective point")


@dataclass(frozen=True)
class ProjectivePoint:
    """A point with canonical coordinates: first nonzero coordinate equal to 1."""

    field: GF
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", normalize(self.coords, self.field))

    def frobenius(self, base: GF) -> "ProjectivePoint":
        return ProjectivePoint(self.field, tuple(frobenius_rel(c, self.field, base) for c in self.coords))

    def is_defined_over(self, base: GF) -> bool:
        return self.frobenius(base) == self

    def __len__(self):
        return len(self.coords)


def iter_points(field: GF, nvars: int):
    """Canonical coordinate tuples of P^{nvars-1}(field) in lex order."""
    q = field.order
    for lead in reversed(range(nvars)):
        for rest in product(range(q), repeat=nvars - 1 - lead):
            yield (0,) * lead + (1,) + rest


def enumerate_points(field: GF, ambient: str | int = "P2") -> list[ProjectivePoint]:
    nvars = _nvars(ambient)
    return [ProjectivePoint(field, c) for c in iter_points(field, nvars)]


def points_array(field: GF, ambient: str | int = "P2") -> np.ndarray:
    return np.array(list(iter_points(field, _nvars(ambient))), dtype=np.int64)


def _nvars(ambient) -> int:
    if ambient in ("P2", 3, 2):
        return 3
    if ambient in ("P3", 4):
        return 4
    raise ValueError(f"unknown ambient space {ambient!r}")


@dataclass(frozen=True)
class ClosedPoint:
    """A Frobenius orbit of geometric points, defined over ``base``."""

    base: GF
    orbit: tuple[ProjectivePoint, ...]

    def __post_init__(self):
        seed = self.orbit[0]
        members = set(self.orbit)
        if len(members) != len(self.orbit):
            raise ValueError("orbit has repeated members")
        for pt in self.orbit:
            if pt.frobenius(self.base) not in members:
                raise ValueError("orbit is not closed under Frobenius")
        if seed.field.k % self.base.k:
            raise FieldError("point field is not an extension of the base field")

    @property
    def degree(self) -> int:
        return len(self.orbit)

    @property
    def field(self) -> GF:
        return self.orbit[0].field


def frobenius_orbit(seed: ProjectivePoint, base: GF) -> tuple[ProjectivePoint, ...]:
    orbit = [seed]
    cur = seed.frobenius(base)
    while cur != seed:
        orbit.append(cur)
        cur = cur.frobenius(base)
    return tuple(orbit)


def closed_point(seed: ProjectivePoint, base: GF) -> ClosedPoint:
    relative_degree(seed.field, base)
    return ClosedPoint(base, frobenius_orbit(seed, base))


def collinear(pts) -> bool:
    """Three points of P^2 over a common field lie on a line."""
    a, b, c = (p.coords for p in pts)
    F = pts[0].field
    m, s = F.mul, F.sub
    det = F.add(
        F.sub(m(a[0], s(m(b[1], c[2]), m(b[2], c[1]))), m(a[1], s(m(b[0], c[2]), m(b[2], c[0])))),
        m(a[2], s(m(b[0], c[1]), m(b[1], c[0]))),
    )
    return det == 0


def _orbit_constraint_ok(cp: ClosedPoint, constraint, curve) -> bool:
    if constraint in (None, "none"):
        return True
    if constraint == "noncollinear":
        return cp.degree == 3 and not collinear(cp.orbit)
    if constraint == "on_curve":
        return all(evaluate(curve, pt) == 0 for pt in cp.orbit)
    raise ValueError(f"unknown constraint {constraint!r}")


def find_closed_point(base: GF, d: int, constraint=None, curve: HomogeneousForm | None = None) -> ClosedPoint:
    """First closed point of exact degree d over ``base`` meeting the constraint.

    Points of P^2(F_{q^d}) are scanned in canonical lex order.  ``constraint``
    is ``None``, ``"noncollinear"`` (orbit spans the plane, d = 3) or
    ``"on_curve"`` (orbit lies on ``curve``, a form over ``base``).
    """
    ext = base if d == 1 else _ext(base, d)
    if constraint == "on_curve":
        if curve is None:
            raise ValueError("on_curve needs a curve")
        source = _curve_points_scan(curve, ext)
    else:
        source = iter_points(ext, 3)
    for coords in source:
        pt = ProjectivePoint(ext, coords)
        orbit = frobenius_orbit(pt, base)
        if len(orbit) != d:
            continue
        cp = ClosedPoint(base, orbit)
        if _orbit_constraint_ok(cp, constraint, curve):
            return cp
    raise LookupError(f"no closed point of degree {d} over {base!r} satisfies {constraint!r}")


def _ext(base: GF, d: int) -> GF:
    from .field import extension

    return extension(base, d)


def _curve_points_scan(curve: HomogeneousForm, ext: GF):
    """Canonical points of the curve over ext, lex order, vectorised over z."""
    base = curve.field
    coeffs = {m: embed(c, base, ext) for m, c in curve.terms().items()}
    zs = np.arange(ext.order, dtype=np.int64)
    zpow = {}

    def zp(e):
        if e not in zpow:
            zpow[e] = ext.vpow(zs, e) if e else np.ones_like(zs)
        return zpow[e]

    if _eval_coords(coeffs, (0, 0, 1), ext) == 0:
        yield (0, 0, 1)
    prefixes = [(0, 1)] + [(1, y) for y in range(ext.order)]
    for x, y in prefixes:
        # collapse to a univariate polynomial in z first
        g: dict = {}
        for (a, b, c), coef in coeffs.items():
            s = ext.mul(coef, ext.mul(ext.pow(x, a), ext.pow(y, b)))
            if s:
                g[c] = ext.add(g.get(c, 0), s)
        g = {c: v for c, v in g.items() if v}
        if not any(c > 0 for c in g):
            if not g:
                for z in range(ext.order):
                    yield (x, y, z)
            continue
        vals = np.zeros_like(zs)
        for c, s in g.items():
            vals = ext.vadd(vals, ext.vmul(zp(c), s))
        for z in np.nonzero(vals == 0)[0]:
            yield (x, y, int(z))


def _eval_coords(coeffs: dict, coords, F: GF) -> int:
    out = 0
    for m, c in coeffs.items():
        term = c
        for x, e in zip(coords, m):
            if e:
                term = F.mul(term, F.pow(x, e))
        out = F.add(out, term)
    return out


# ---------------------------------------------------------------------------
# evaluation and counting


def evaluate(f: HomogeneousForm, pt: ProjectivePoint) -> int:
    """Value of f at the canonical representative of pt (in pt's field)."""
    if len(pt.coords) != f.nvars:
        raise ValueError("variable count mismatch")
    F = pt.field
    if F is f.field:
        coeffs = f.terms()
    else:
        coeffs = {m: embed(c, f.field, F) for m, c in f.terms().items()}
    return _eval_coords(coeffs, pt.coords, F)


def monomial_values(pts: np.ndarray, nvars: int, degree: int, F: GF) -> np.ndarray:
    """Matrix (num_monomials x npoints) of monomial values at the given points."""
    pts = np.asarray(pts, dtype=np.int64)
    powers = [[F.vpow(pts[:, i], e) if e else np.ones(len(pts), dtype=np.int64) for e in range(degree + 1)] for i in range(nvars)]
    out = np.zeros((num_monomials(nvars, degree), len(pts)), dtype=np.int64)
    for r, m in enumerate(monomials(nvars, degree)):
        v = np.ones(len(pts), dtype=np.int64)
        for i, e in enumerate(m):
            if e:
                v = F.vmul(v, powers[i][e])
        out[r] = v
    return out


def evaluate_many(coeff_rows, monomial_vals: np.ndarray, F: GF) -> np.ndarray:
    """Evaluate forms given as coefficient rows at points, via monomial values."""
    C = np.atleast_2d(np.asarray(coeff_rows, dtype=np.int64))
    out = np.zeros((C.shape[0], monomial_vals.shape[1]), dtype=np.int64)
    for j in range(C.shape[1]):
        col = C[:, j]
        if col.any():
            out = F.vadd(out, F.vmul(col[:, None], monomial_vals[j][None, :]))
    return out


def count_curve_points(C: HomogeneousForm, field: GF | None = None) -> int:
    """Rational points of C over ``field`` (default: its field of definition,
    otherwise an extension of it)."""
    field = C.field if field is None else field
    if field is not C.field:
        from .field import embedding, relative_degree

        relative_degree(field, C.field)
        emb = embedding(C.field, field)
        C = HomogeneousForm(field, C.nvars, C.degree, tuple(emb.embed(c) for c in C.coeffs))
    pts = points_array(field, C.nvars)
    vals = evaluate_many(C.coeffs, monomial_values(pts, C.nvars, C.degree, field), field)[0]
    return int(np.count_nonzero(vals == 0))


# ---------------------------------------------------------------------------
# rational linear factors


def rational_lines(field: GF, nvars: int = 3) -> list[HomogeneousForm]:
    """All F_q-rational linear forms up to scaling (hyperplanes)."""
    return [HomogeneousForm(field, nvars, 1, c) for c in iter_points(field, nvars)]


def divide_linear(f: HomogeneousForm, ell: HomogeneousForm) -> HomogeneousForm | None:
    """Exact quotient f / ell, or None when ell does not divide f."""
    F = f.field
    lcoef = ell.coeffs  # linear monomials come out in variable order
    v = next(i for i, c in enumerate(lcoef) if c)
    inv = F.inv(lcoef[v])
    ell_n = [F.mul(inv, c) for c in lcoef]
    rem = dict(f.terms())
    quot: dict = {}
    while True:
        lead = [m for m in rem if m[v] > 0]
        if not lead:
            break
        m = max(lead, key=lambda t: (t[v], t))
        c = rem[m]
        qm = tuple(e - (1 if i == v else 0) for i, e in enumerate(m))
        quot[qm] = F.add(quot.get(qm, 0), c)
        for i, li in enumerate(ell_n):
            if li:
                mm = tuple(e + (1 if j == i else 0) for j, e in enumerate(qm))
                rem[mm] = F.sub(rem.get(mm, 0), F.mul(c, li))
                if rem[mm] == 0:
                    del rem[mm]
    if rem:
        return None
    q = HomogeneousForm.from_terms(F, f.nvars, f.degree - 1, quot)
    return q.scale(inv)


def rational_linear_factors(C: HomogeneousForm) -> tuple[list[HomogeneousForm], HomogeneousForm]:
    """Split off every rational linear factor by trial division."""
    lines = rational_lines(C.field, C.nvars)
    factors = []
    rest = C
    changed = True
    while changed and rest.degree > 0:
        changed = False
        for ell in lines:
            qt = divide_linear(rest, ell)
            if qt is not None:
                factors.append(ell)
                rest = qt
                changed = True
                break
    return factors, rest


def is_union_of_rational_lines(C: HomogeneousForm) -> bool:
    if C.degree > 6:
        raise ValueError("trial division is limited to degree <= 6")
    _, rest = rational_linear_factors(C)
    return rest.degree == 0


# ---------------------------------------------------------------------------
# curve files


def format_form(f: HomogeneousForm) -> str:
    return f"q={f.field.order} nvars={f.nvars} deg={f.degree}\n" + " ".join(map(str, f.coeffs)) + "\n"


def parse_form_file(text: str) -> HomogeneousForm:
    from .field import field_of_order

    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ValueError("curve file needs a header line and a coefficient line")
    hdr = dict(tok.split("=", 1) for tok in lines[0].split())
    try:
        q, nvars, deg = int(hdr["q"]), int(hdr["nvars"]), int(hdr["deg"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad curve header {lines[0]!r}") from exc
    F = field_of_order(q)
    coeffs = tuple(int(c) for c in lines[1].split())
    if any(not 0 <= c < q for c in coeffs):
        raise ValueError("coefficient outside the field")
    return HomogeneousForm(F, nvars, deg, coeffs)


__all__ = [
    "ClosedPoint",
    "HomogeneousForm",
    "PlaneCurve",
    "ProjectivePoint",
    "closed_point",
    "collinear",
    "count_curve_points",
    "divide_linear",
    "embedding",
    "enumerate_points",
    "evaluate",
    "evaluate_many",
    "find_closed_point",
    "format_form",
    "is_union_of_rational_lines",
    "iter_points",
    "monomial_values",
    "monomials",
    "parse_form_file",
    "points_array",
    "rational_lines",
    "rational_linear_factors",
]
