"""Linear systems of plane curves with base conditions, sections of O_X(m)
on an elliptic quadric, and the three surface models."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import linalg
from .field import GF, embedding, expand_to_base, extension
from .geometry import (
    ClosedPoint,
    HomogeneousForm,
    ProjectivePoint,
    closed_point,
    collinear,
    evaluate,
    find_closed_point,
    frobenius_orbit,
    iter_points,
    monomials,
    num_monomials,
    points_array,
    monomial_values,
)


@dataclass(frozen=True)
class BaseCondition:
    point: ClosedPoint
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity not in (1, 2):
            raise ValueError("only multiplicities 1 and 2 are supported")


# ---------------------------------------------------------------------------
# surface models


@dataclass(frozen=True)
class EllipticQuadric:
    field: GF
    equation: HomogeneousForm  # quaternary quadratic form

    kind = "quadric"


@dataclass(frozen=True)
class BlowupY:
    """P^2 blown up at a rational point P and a degree-4 point R on a conic D.

    D is the union of two conjugate lines through P.
    """

    field: GF
    P: ClosedPoint
    D: HomogeneousForm
    R: ClosedPoint

    kind = "Y"


@dataclass(frozen=True)
class BlowupZ:
    """P^2 blown up at a degree-3 point P whose conjugates are not collinear."""

    field: GF
    P: ClosedPoint

    kind = "Z"


SurfaceModel = EllipticQuadric | BlowupY | BlowupZ


def _restrict_form(form_terms: dict, ext: GF, base: GF, nvars: int, degree: int) -> HomogeneousForm:
    emb = embedding(base, ext)
    return HomogeneousForm.from_terms(base, nvars, degree, {m: emb.restrict(c) for m, c in form_terms.items()})


def _cross(a, b, F: GF):
    m, s = F.mul, F.sub
    return (
        s(m(a[1], b[2]), m(a[2], b[1])),
        s(m(a[2], b[0]), m(a[0], b[2])),
        s(m(a[0], b[1]), m(a[1], b[0])),
    )


def _det3(a, b, c, F: GF) -> int:
    x = _cross(b, c, F)
    return F.sum(F.mul(u, v) for u, v in zip(a, x))


def elliptic_quadric(F: GF) -> EllipticQuadric:
    """x0*x1 - n(x2, x3), n the norm form of F_{q^2} over F_q in the basis 1, t."""
    E = extension(F, 2)
    theta = E.p  # the class of t
    emb = embedding(F, E)
    tr = emb.restrict(E.add(theta, E.pow(theta, F.order)))
    nm = emb.restrict(E.pow(theta, F.order + 1))
    terms = {
        (1, 1, 0, 0): 1,
        (0, 0, 2, 0): F.neg(1),
        (0, 0, 1, 1): tr,
        (0, 0, 0, 2): F.neg(nm),
    }
    eq = HomogeneousForm.from_terms(F, 4, 2, terms)
    X = EllipticQuadric(F, eq)
    n = len(quadric_points(X))
    if n != F.order**2 + 1:
        raise ValueError(f"quadric has {n} rational points, expected {F.order ** 2 + 1}")
    return X


def blowup_y(F: GF) -> BlowupY:
    P0 = next(iter_points(F, 3))
    P = ClosedPoint(F, (ProjectivePoint(F, P0),))
    E = extension(F, 2)
    emb = embedding(F, E)
    Pe = tuple(emb.embed(c) for c in P0)
    # least quadratic point A such that the line PA is not rational
    for coords in iter_points(E, 3):
        A = ProjectivePoint(E, coords)
        orb = frobenius_orbit(A, F)
        if len(orb) != 2:
            continue
        if _det3(Pe, orb[0].coords, orb[1].coords, E) != 0:
            break
    ell = _cross(Pe, orb[0].coords, E)
    ell_c = tuple(E.pow(c, F.order) for c in ell)
    terms: dict = {}
    for i in range(3):
        for j in range(3):
            mono = tuple((i == v) + (j == v) for v in range(3))
            terms[mono] = E.add(terms.get(mono, 0), E.mul(ell[i], ell_c[j]))
    D = _restrict_form(terms, E, F, 3, 2)
    R = find_closed_point(F, 4, "on_curve", D)
    return BlowupY(F, P, D, R)


def blowup_z(F: GF, P: ClosedPoint | None = None) -> BlowupZ:
    if P is None:
        P = find_closed_point(F, 3, "noncollinear")
    if P.degree != 3 or collinear(P.orbit):
        raise ValueError("Z needs a degree-3 point with non-collinear conjugates")
    return BlowupZ(F, P)


def closed_point_from_equations(F: GF, forms, d: int) -> ClosedPoint:
    """The first degree-d closed point lying on all the given plane forms."""
    head, *rest = forms
    ext = extension(F, d)
    from .geometry import _curve_points_scan  # lex scan of the first curve

    for coords in _curve_points_scan(head, ext):
        pt = ProjectivePoint(ext, coords)
        if any(evaluate(g, pt) for g in rest):
            continue
        orb = frobenius_orbit(pt, F)
        if len(orb) == d:
            return ClosedPoint(F, orb)
    raise LookupError("no closed point of that degree on the given forms")


def make_surface(F: GF, variant: str, **kwargs) -> SurfaceModel:
    variant = variant.upper() if variant in ("y", "z") else variant
    if variant in ("quadric", "X"):
        return elliptic_quadric(F)
    if variant == "Y":
        return blowup_y(F)
    if variant == "Z":
        return blowup_z(F, kwargs.get("P"))
    raise ValueError(f"unknown surface variant {variant!r}")


# ---------------------------------------------------------------------------
# constraint rows


def _hasse_coeff(mono, coords, chart: int, beta: dict, F: GF) -> int:
    """Coefficient of prod u_i^beta_i in the Taylor expansion of the monomial
    at ``coords`` (with coords[chart] == 1), local coordinates u_i = x_i - coords_i."""
    out = 1
    for i, e in enumerate(mono):
        if i == chart:
            continue
        b = beta.get(i, 0)
        if b > e:
            return 0
        c = comb(e, b) % F.p
        if c == 0:
            return 0
        out = F.mul(out, F.mul(c, F.pow(coords[i], e - b)))
    return out


def _chart(pt: ProjectivePoint) -> int:
    return next(i for i, c in enumerate(pt.coords) if c)


def point_functionals(pt: ProjectivePoint, multiplicity: int, nvars: int, degree: int) -> np.ndarray:
    """Rows over pt's field: value (and first Hasse derivatives when mult = 2)."""
    F = pt.field
    chart = _chart(pt)
    others = [i for i in range(nvars) if i != chart]
    betas = [{}]
    if multiplicity == 2:
        betas += [{i: 1} for i in others]
    monos = monomials(nvars, degree)
    return np.array([[_hasse_coeff(m, pt.coords, chart, b, F) for m in monos] for b in betas], dtype=np.int64)


def multiplicity_rows(point: ClosedPoint, multiplicity: int, degree: int, nvars: int = 3) -> np.ndarray:
    """F_q-linear conditions on degree-``degree`` coefficient vectors.

    A form satisfies the condition iff its coefficient vector is in the kernel.
    """
    if multiplicity not in (1, 2):
        raise ValueError("multiplicity must be 1 or 2")
    if degree < multiplicity:
        raise ValueError("degree must be at least the multiplicity")
    base = point.base
    ext = point.field
    rows = []
    for pt in point.orbit:
        for fun in point_functionals(pt, multiplicity, nvars, degree):
            if ext is base:
                rows.append(fun)
                continue
            coords = np.array([expand_to_base(int(v), ext, base) for v in fun], dtype=np.int64)
            rows.extend(coords.T)
    return linalg.dedupe_rows(np.array(rows, dtype=np.int64), base)


# ---------------------------------------------------------------------------
# linear systems


@dataclass
class LinearSystem:
    field: GF
    ambient: str  # "plane" or "quadric"
    degree: int
    basis: np.ndarray  # rows are coefficient vectors over monomials(nvars, degree)
    conditions: tuple = ()
    constraints: np.ndarray | None = None
    quadric: HomogeneousForm | None = None
    tag: str = ""
    _fmult: tuple | None = field(default=None, repr=False)

    @property
    def nvars(self) -> int:
        return 4 if self.ambient == "quadric" else 3

    @property
    def dimension(self) -> int:
        return int(self.basis.shape[0])

    @property
    def constraint_rank(self) -> int:
        return 0 if self.constraints is None else int(self.constraints.shape[0])

    def forms(self) -> list[HomogeneousForm]:
        return [HomogeneousForm(self.field, self.nvars, self.degree, tuple(r)) for r in self.basis]

    def contains(self, f: HomogeneousForm) -> bool:
        """Whether f satisfies every base condition (plane systems)."""
        if self.constraints is None or self.constraints.size == 0:
            return True
        v = np.array(f.coeffs, dtype=np.int64)
        return not linalg.matmul(self.constraints, v[:, None], self.field).any()

    def reduce(self, f: HomogeneousForm) -> np.ndarray:
        """Coordinates of f modulo the quadric equation (quadric systems)."""
        if self.ambient != "quadric":
            raise ValueError("reduce() applies to quadric section spaces")
        R, pivots, comp = self._fmult
        F = self.field
        v = np.array(f.coeffs, dtype=np.int64)
        for r, pc in enumerate(pivots):
            if v[pc]:
                v = F.vsub(v, F.vmul(R[r], int(v[pc])))
        return v[comp]


def plane_system(F: GF, degree: int, conditions, tag: str = "") -> LinearSystem:
    n = num_monomials(3, degree)
    blocks = [multiplicity_rows(c.point, c.multiplicity, degree) for c in conditions]
    A = np.vstack(blocks) if blocks else np.zeros((0, n), dtype=np.int64)
    A = linalg.dedupe_rows(A, F) if A.size else A
    K = linalg.kernel(A, F, n) if A.size else np.eye(n, dtype=np.int64)
    return LinearSystem(F, "plane", degree, K, tuple(conditions), A, tag=tag)


def build_gamma(Z: BlowupZ, i: int) -> LinearSystem:
    """Degree-i plane forms through the degree-3 point of Z."""
    if not isinstance(Z, BlowupZ):
        raise TypeError("build_gamma needs a BlowupZ model")
    if i < 1:
        raise ValueError("degree must be positive")
    return plane_system(Z.field, i, [BaseCondition(Z.P, 1)], tag=f"Gamma_{i}")


def build_lambda(Y: BlowupY, i: int) -> LinearSystem:
    """Degree-i plane forms singular at P and through R."""
    if not isinstance(Y, BlowupY):
        raise TypeError("build_lambda needs a BlowupY model")
    if i < 2:
        raise ValueError("degree must be at least 2")
    return plane_system(Y.field, i, [BaseCondition(Y.P, 2), BaseCondition(Y.R, 1)], tag=f"Lambda_{i}")


def build_quadric_sections(X: EllipticQuadric, m: int) -> LinearSystem:
    """A monomial basis of degree-m forms modulo multiples of the quadric."""
    if m < 0:
        raise ValueError("degree must be nonnegative")
    F = X.field
    monos = monomials(4, m)
    idx = {mm: j for j, mm in enumerate(monos)}
    rows = []
    for g in monomials(4, m - 2) if m >= 2 else ():
        row = np.zeros(len(monos), dtype=np.int64)
        for mq, c in X.equation.terms().items():
            row[idx[tuple(a + b for a, b in zip(g, mq))]] = c
        rows.append(row)
    if rows:
        R, pivots, _ = linalg.rref(np.array(rows), F)
        R = R[: len(pivots)]
    else:
        R, pivots = np.zeros((0, len(monos)), dtype=np.int64), []
    comp = [j for j in range(len(monos)) if j not in set(pivots)]
    basis = np.zeros((len(comp), len(monos)), dtype=np.int64)
    basis[np.arange(len(comp)), comp] = 1
    return LinearSystem(F, "quadric", m, basis, quadric=X.equation, tag=f"O_X({m})", _fmult=(R, pivots, comp))


# ---------------------------------------------------------------------------
# rational points of the surfaces and the evaluation functionals


def quadric_points(X: EllipticQuadric) -> np.ndarray:
    pts = points_array(X.field, 4)
    vals = monomial_values(pts, 4, 2, X.field)
    from .geometry import evaluate_many

    v = evaluate_many(X.equation.coeffs, vals, X.field)[0]
    return pts[v == 0]


def exceptional_directions(F: GF) -> list[tuple[int, int]]:
    """Rational points of the exceptional line over a rational point: P^1(F_q)."""
    return [tuple(c) for c in iter_points(F, 2)]


def evaluation_setup(model: SurfaceModel, system: LinearSystem):
    """Point labels and the (num_monomials x n) matrix of evaluation functionals."""
    F = model.field
    if isinstance(model, EllipticQuadric):
        if system.ambient != "quadric":
            raise ValueError("quadric model needs a quadric section space")
        pts = quadric_points(model)
        return [tuple(map(int, p)) for p in pts], monomial_values(pts, 4, system.degree, F)
    if system.ambient != "plane":
        raise ValueError("plane models need a plane linear system")
    pts = points_array(F, 3)
    if isinstance(model, BlowupZ):
        return [tuple(map(int, p)) for p in pts], monomial_values(pts, 3, system.degree, F)
    if isinstance(model, BlowupY):
        P = model.P.orbit[0].coords
        keep = [j for j, p in enumerate(pts) if tuple(p) != P]
        labels = [tuple(map(int, pts[j])) for j in keep]
        vals = monomial_values(pts[keep], 3, system.degree, F)
        # points of the exceptional curve over P: the degree-2 Taylor part
        # evaluated at each rational tangent direction
        chart = next(i for i, c in enumerate(P) if c)
        a, b = [i for i in range(3) if i != chart]
        monos = monomials(3, system.degree)
        quad = {
            (2, 0): [_hasse_coeff(m, P, chart, {a: 2}, F) for m in monos],
            (1, 1): [_hasse_coeff(m, P, chart, {a: 1, b: 1}, F) for m in monos],
            (0, 2): [_hasse_coeff(m, P, chart, {b: 2}, F) for m in monos],
        }
        cols = []
        for u, v in exceptional_directions(F):
            col = np.zeros(len(monos), dtype=np.int64)
            for (i, j), coeffs in quad.items():
                w = F.mul(F.pow(u, i), F.pow(v, j))
                if w:
                    col = F.vadd(col, F.vmul(np.array(coeffs, dtype=np.int64), w))
            cols.append(col)
            labels.append(("E",) + (u, v))
        return labels, np.hstack([vals, np.array(cols, dtype=np.int64).T])
    raise TypeError(f"unknown model {type(model).__name__}")
