"""Evaluation codes on the surface models: construction, distance, witnesses,
parameter reports and the matrix / report file formats."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import combinations, product

import numpy as np

from . import bounds, linalg
from .distance import (
    CapExceeded,
    DEFAULT_EXHAUSTIVE_CAP,
    DEFAULT_ISD_CAP,
    min_distance_exhaustive,
    min_distance_isd,
    random_codeword_weights,
    isd_cost,
    weight,
)
from .field import GF, field_of_order
from .geometry import HomogeneousForm, evaluate_many, iter_points, monomial_values, points_array
from .linsys import (
    BaseCondition,
    BlowupY,
    BlowupZ,
    EllipticQuadric,
    LinearSystem,
    build_gamma,
    build_lambda,
    build_quadric_sections,
    evaluation_setup,
    make_surface,
    plane_system,
)

WITNESS_EXHAUSTIVE_CAP = 10**7


# ---------------------------------------------------------------------------
# the code object


@dataclass
class EvaluationCode:
    field: GF
    points: list
    gen: np.ndarray  # k x n, row-reduced
    sections: np.ndarray  # k rows of monomial coefficients; row i evaluates to gen[i]
    system: LinearSystem
    model: object
    construction: str | None = None
    d_lower: int = 1
    d_upper: int | None = None  # weight of the lightest witnessed codeword; None = none yet
    d_exact: int | None = None
    deficiency: int = 0  # sections vanishing at every evaluation point
    lower_source: str = "trivial"
    upper_codeword: np.ndarray | None = field(default=None, repr=False)

    @property
    def q(self) -> int:
        return self.field.order

    @property
    def n(self) -> int:
        return int(self.gen.shape[1])

    @property
    def k(self) -> int:
        return int(self.gen.shape[0])

    @property
    def evaluation_matrix(self) -> np.ndarray:
        return evaluation_setup(self.model, self.system)[1]

    def encode(self, message) -> np.ndarray:
        return linalg.matmul(np.asarray(message, dtype=np.int64)[None, :], self.gen, self.field)[0]

    def section(self, message) -> HomogeneousForm:
        """The section whose evaluation vector is ``message @ gen``."""
        coeffs = linalg.matmul(np.asarray(message, dtype=np.int64)[None, :], self.sections, self.field)[0]
        return HomogeneousForm(self.field, self.system.nvars, self.system.degree, tuple(int(c) for c in coeffs))

    def offer_upper(self, codeword) -> bool:
        """Record a nonzero codeword if it is lighter than the current best."""
        cw = np.asarray(codeword, dtype=np.int64)
        w = weight(cw)
        if w == 0:
            raise ValueError("the zero word says nothing about the distance")
        if self.d_upper is None or w < self.d_upper:
            self.d_upper, self.upper_codeword = w, cw
            self._close()
            return True
        return False

    def raise_lower(self, value: int, source: str) -> None:
        if value > self.d_lower:
            self.d_lower, self.lower_source = int(value), source
        self._close()

    def _close(self):
        if self.d_upper is not None:
            if self.d_lower > self.d_upper:
                raise AssertionError(f"certified bound {self.d_lower} exceeds a codeword of weight {self.d_upper}")
            if self.d_lower == self.d_upper:
                self.d_exact = self.d_upper


def build_code(model, system: LinearSystem, construction: str | None = None) -> EvaluationCode:
    """Evaluate a basis of the system at the rational points of the model.

    The dimension is the rank of the evaluation matrix; sections lost to the
    kernel are reported as ``deficiency`` instead of being dropped silently.
    """
    F = model.field
    if system.field.order != F.order:
        raise ValueError("system and model live over different fields")
    labels, E = evaluation_setup(model, system)
    raw = linalg.matmul(system.basis, E, F)
    R, piv, sections = linalg.rref(raw, F, aug=system.basis)
    k = len(piv)
    code = EvaluationCode(
        field=F,
        points=labels,
        gen=R[:k],
        sections=sections[:k],
        system=system,
        model=model,
        construction=construction,
        deficiency=system.dimension - k,
    )
    if construction is not None:
        try:
            b = bounds.construction_lower_bound(construction, F.order)
        except (bounds.OutOfRangeError, ValueError):
            b = None
        if b is not None:
            code.raise_lower(code.n - b.value, b.source)
    for row in code.gen:
        if weight(row) < code.d_lower:
            raise AssertionError("a generator row is lighter than the certified distance")
        code.offer_upper(row)
    return code


# ---------------------------------------------------------------------------
# named constructions

# tag -> (surface variant, system builder, smallest q accepted by build)
CONSTRUCTIONS = {
    "quadric-m2": ("quadric", lambda S: build_quadric_sections(S, 2), 2),
    "quadric-m3": ("quadric", lambda S: build_quadric_sections(S, 3), 5),
    "Y-F4": ("Y", lambda S: build_lambda(S, 4), 2),
    "Z-L3": ("Z", lambda S: build_gamma(S, 3), 2),
    "Z-L4": ("Z", lambda S: build_gamma(S, 4), 2),
    "Z-L5": ("Z", lambda S: build_gamma(S, 5), 5),
}

_CUSTOM_BUILDERS = {"quadric": build_quadric_sections, "Y": build_lambda, "Z": build_gamma}


def check_range(construction: str, q: int) -> None:
    if construction not in CONSTRUCTIONS:
        raise ValueError(f"unknown construction {construction!r}; choose from {sorted(CONSTRUCTIONS)}")
    qmin = CONSTRUCTIONS[construction][2]
    if q < qmin:
        raise bounds.OutOfRangeError(f"{construction} is defined for q >= {qmin}")


def construct(construction: str, q: int, **surface_kw) -> EvaluationCode:
    """Build a named construction over F_q (keywords go to make_surface)."""
    check_range(construction, q)
    variant, builder, _ = CONSTRUCTIONS[construction]
    F = field_of_order(q)
    S = make_surface(F, variant, **surface_kw)
    return build_code(S, builder(S), construction)


def construct_custom(model: str, q: int, degree: int) -> EvaluationCode:
    """Degree-``degree`` system on a model: O_X(m), Lambda_i on Y or Gamma_i on Z."""
    if model not in _CUSTOM_BUILDERS:
        raise ValueError(f"model must be one of {sorted(_CUSTOM_BUILDERS)}")
    F = field_of_order(q)
    S = make_surface(F, model)
    return build_code(S, _CUSTOM_BUILDERS[model](S, degree), None)


# ---------------------------------------------------------------------------
# distance


@dataclass
class DistanceOutcome:
    method: str  # "exhaustive", "information sets", "bound+witness" or "bracket"
    complete: bool  # the distance is known exactly
    enumerated: int = 0
    independent: bool = False  # a search alone certified the lower bound


def exhaustive_distance(code: EvaluationCode, cap: int = DEFAULT_EXHAUSTIVE_CAP, workers=None):
    """Exact distance by projective enumeration; updates and returns the code's bracket."""
    res = min_distance_exhaustive(code.gen, code.field, cap=cap, workers=workers)
    code.offer_upper(res.codeword)
    code.raise_lower(res.d, "exhaustive")
    if code.lower_source != "exhaustive":
        code.lower_source += " (confirmed by exhaustive search)"
    return res


def isd_distance(code: EvaluationCode, target=None, cap: int = DEFAULT_ISD_CAP, workers=None, progress=None):
    """Information-set search seeded with the code's best codeword.

    The search's own certified bound never uses ``code.d_lower``.
    """
    upper = None
    if code.upper_codeword is not None:
        upper = (code.d_upper, code.upper_codeword)
    res = min_distance_isd(code.gen, code.field, target=target, cap=cap, upper=upper, workers=workers, progress=progress)
    if res.codeword is not None:
        code.offer_upper(res.codeword)
    # the search bound covers unseen codewords; seen ones are above d_upper
    found = min(res.d_lower, code.d_upper)
    code.raise_lower(found, "information sets")
    if found >= code.d_lower and code.lower_source != "information sets":
        code.lower_source += " (confirmed by information sets)"
    return res


def determine_distance(
    code: EvaluationCode,
    *,
    target: int | None = None,
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP,
    isd_cap: int = DEFAULT_ISD_CAP,
    use_witness: bool = True,
    workers=None,
) -> DistanceOutcome:
    """Close the distance bracket, by an independent search when affordable.

    A constructed witness first sets the upper end.  Then whichever of
    exhaustive enumeration and information-set search is cheaper (and within
    its cap) certifies the lower end on its own.  When neither fits, the
    bracket is [certified bound, best witness].
    """
    if use_witness:
        w = witness_max_curve(code, exhaustive_cap=0)
        code.offer_upper(w.codeword)
    q, k = code.q, code.k
    classes = (q**k - 1) // (q - 1)
    isd_need = None
    if k <= 24 and code.d_upper is not None:
        isd_need = isd_cost(code.gen, code.field, target if target is not None else code.d_upper)
        if isd_need is not None and isd_need > isd_cap:
            isd_need = None
    if classes <= exhaustive_cap and (isd_need is None or classes <= isd_need):
        exhaustive_distance(code, cap=exhaustive_cap, workers=workers)
        return DistanceOutcome("exhaustive", True, classes, True)
    if isd_need is not None:
        res = isd_distance(code, target=target, cap=isd_cap, workers=workers)
        if code.d_exact is None and target is not None and code.d_upper <= target <= res.d_lower:
            code.d_exact = target
        return DistanceOutcome("information sets", code.d_exact is not None, res.enumerated, res.complete)
    if code.d_exact is not None:
        return DistanceOutcome("bound+witness", True)
    return DistanceOutcome("bracket", False)


# ---------------------------------------------------------------------------
# witnesses: sections with many rational zeros


@dataclass
class Witness:
    form: HomogeneousForm
    count: int  # evaluation points where the section vanishes
    codeword: np.ndarray
    message: np.ndarray
    bound: int | None
    method: str

    @property
    def weight(self) -> int:
        return int(self.codeword.size - self.count)

    @property
    def reached(self) -> bool | None:
        return None if self.bound is None else self.count == self.bound


def _construction_bound(code: EvaluationCode):
    if code.construction is None:
        return None
    try:
        return bounds.construction_lower_bound(code.construction, code.q).value
    except (bounds.OutOfRangeError, ValueError):
        return None


def _projective_messages(dim: int, q: int):
    """One representative per projective class, first nonzero entry 1, lex order."""
    for lead in range(dim):
        for tail in product(range(q), repeat=dim - lead - 1):
            yield (0,) * lead + (1,) + tail


def _form_from_vector(F, nvars, degree, vec) -> HomogeneousForm:
    return HomogeneousForm(F, nvars, degree, tuple(int(c) for c in vec))


def _product(forms) -> HomogeneousForm:
    out = forms[0]
    for f in forms[1:]:
        out = out * f
    return out


def _certify(code: EvaluationCode, f: HomogeneousForm, E, method: str, bound) -> Witness:
    """Evaluate a candidate, check it lies in the system, and express it in the code."""
    F = code.field
    if code.system.ambient == "plane" and not code.system.contains(f):
        raise AssertionError("candidate section violates the base conditions")
    cw = evaluate_many(f.coeffs, E, F)[0]
    msg = linalg.solve_left(code.gen, cw, F)
    if msg is None:
        raise AssertionError("candidate evaluation is not a codeword")
    return Witness(f, int(np.count_nonzero(cw == 0)), cw, msg, bound, method)


def _conics_with_most_points(F, conditions, pts, mvals2):
    """Conics of the system cut out by ``conditions``, with the most rational points first."""
    S2 = plane_system(F, 2, conditions)
    out = []
    best = -1
    for m in _projective_messages(S2.dimension, F.order):
        vec = linalg.matmul(np.array(m, dtype=np.int64)[None, :], S2.basis, F)[0]
        zero = evaluate_many(vec, mvals2, F)[0] == 0
        c = int(zero.sum())
        if c > best:
            best, out = c, [(vec, zero)]
        elif c == best:
            out.append((vec, zero))
    return out


def _lines(F, pts):
    """Rational lines (coefficient vectors, lex order) and their point masks."""
    coeffs = np.array(list(iter_points(F, 3)), dtype=np.int64)
    vals = F.vadd(F.vadd(F.vmul(coeffs[:, None, 0], pts[None, :, 0]), F.vmul(coeffs[:, None, 1], pts[None, :, 1])),
                  F.vmul(coeffs[:, None, 2], pts[None, :, 2]))
    return coeffs, vals == 0


def _witness_Z(code: EvaluationCode, E, bound):
    """Smooth conic through the base point times concurrent lines missing it."""
    F, i = code.field, code.system.degree
    if i < 2:
        return None
    pts = points_array(F, 3)
    lines, lmask = _lines(F, pts)
    conics = _conics_with_most_points(F, code.system.conditions, pts, monomial_values(pts, 3, 2, F))
    best = None
    need = i - 2
    for cvec, cmask in conics[:8]:
        for r in range(len(pts)) if need else [None]:
            if r is not None and cmask[r]:
                continue
            if need:
                through = np.nonzero(lmask[:, r])[0]
                chosen = [j for j in through if not (lmask[j] & cmask).any()][:need]
                if len(chosen) < need:
                    # fall back to lines through r hitting the conic least
                    rest = sorted(through, key=lambda j: int((lmask[j] & cmask).sum()))
                    chosen = (chosen + [j for j in rest if j not in chosen])[:need]
                union = cmask | lmask[chosen].any(axis=0)
            else:
                chosen, union = [], cmask
            c = int(union.sum())
            if best is None or c > best[0]:
                best = (c, cvec, chosen)
            if bound is not None and c >= bound:
                break
        if bound is not None and best[0] >= bound:
            break
    _, cvec, chosen = best
    factors = [_form_from_vector(F, 3, 2, cvec)] + [_form_from_vector(F, 3, 1, lines[j]) for j in chosen]
    return _certify(code, _product(factors), E, "conic x concurrent lines", bound)


def _witness_Y(code: EvaluationCode, E, bound):
    """Conic through the degree-4 point times lines through the blown-up rational point."""
    F, i = code.field, code.system.degree
    Y = code.model
    if i < 4:
        return None
    pts = points_array(F, 3)
    conds = [c for c in code.system.conditions if c.point.degree > 1]
    S2 = plane_system(F, 2, conds)
    P = np.array(Y.P.orbit[0].coords, dtype=np.int64)
    lines, lmask = _lines(F, pts)
    p_idx = next(j for j, p in enumerate(pts) if tuple(p) == tuple(P))
    through = [int(j) for j in np.nonzero(lmask[:, p_idx])[0]]
    best = None
    for m in _projective_messages(S2.dimension, F.order):
        cvec = linalg.matmul(np.array(m, dtype=np.int64)[None, :], S2.basis, F)[0]
        conic = _form_from_vector(F, 3, 2, cvec)
        for chosen in combinations(through, i - 2):
            f = _product([conic] + [_form_from_vector(F, 3, 1, lines[j]) for j in chosen])
            cw = evaluate_many(f.coeffs, E, F)[0]
            c = int(np.count_nonzero(cw == 0))
            if best is None or c > best[0]:
                best = (c, f)
            if bound is not None and c >= bound:
                break
        if bound is not None and best[0] >= bound:
            break
    return _certify(code, best[1], E, "conic x lines through P", bound)


def _witness_quadric(code: EvaluationCode, E, bound):
    """Union of m plane sections chosen greedily to avoid each other's points."""
    F, m = code.field, code.system.degree
    if m < 1:
        return None
    qpts = np.array([p for p in code.points], dtype=np.int64)
    planes = np.array(list(iter_points(F, 4)), dtype=np.int64)
    vals = evaluate_many(planes, monomial_values(qpts, 4, 1, F), F)
    masks = vals == 0
    union = np.zeros(len(qpts), dtype=bool)
    chosen = []
    for _ in range(m):
        gain = (masks & ~union).sum(axis=1)
        j = int(np.argmax(gain))
        chosen.append(j)
        union |= masks[j]
    f = _product([_form_from_vector(F, 4, 1, planes[j]) for j in chosen])
    return _certify(code, f, E, "union of plane sections", bound)


def witness_max_curve(
    code: EvaluationCode,
    exhaustive_cap: int = WITNESS_EXHAUSTIVE_CAP,
    samples: int = 0,
    seed: int = 0,
    workers=None,
) -> Witness:
    """A section of the system with as many rational zeros as can be found.

    Exhaustive over projective classes when there are at most
    ``exhaustive_cap`` of them (then the count is the true maximum);
    otherwise the best of a targeted product construction and ``samples``
    random sections.  Ties keep the first section found.
    """
    F = code.field
    bound = _construction_bound(code)
    E = code.evaluation_matrix
    classes = (code.q**code.k - 1) // (code.q - 1)
    if classes <= exhaustive_cap:
        res = min_distance_exhaustive(code.gen, F, cap=exhaustive_cap, workers=workers)
        f = code.section(res.message)
        return Witness(f, code.n - res.d, res.codeword, res.message, bound, "exhaustive")
    model = code.model
    if isinstance(model, BlowupZ):
        best = _witness_Z(code, E, bound)
    elif isinstance(model, BlowupY):
        best = _witness_Y(code, E, bound)
    else:
        best = _witness_quadric(code, E, bound)
    if samples:
        weights, (w, msg) = random_codeword_weights(code.gen, F, samples, seed=seed)
        if best is None or code.n - w > best.count:
            cw = code.encode(msg)
            best = Witness(code.section(msg), code.n - w, cw, msg, bound, "random sampling")
    if best is None:
        raise ValueError("no witness strategy applies to this system")
    return best


# ---------------------------------------------------------------------------
# parameter reports


@lru_cache(maxsize=None)
def reference_tables() -> dict:
    """Publication-time snapshot of expected parameters (see the file's note)."""
    text = resources.files("ratsurf").joinpath("data/reference_tables.json").read_text()
    return json.loads(text)


def expected_parameters(construction: str, q: int) -> dict | None:
    return reference_tables().get(construction, {}).get(str(q))


@dataclass
class ParamReport:
    construction: str | None
    q: int
    n: int
    k: int
    d_lower: int
    d_upper: int | None
    d_exact: int | None
    deficiency: int
    lower_source: str
    paper_expected: dict | None
    best_known_d: int | None
    n_match: bool | None
    k_match: bool | None
    d_match: bool | None
    status: str  # "match", "mismatch", "inconclusive" or "no expectation"

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        d = self.d_exact if self.d_exact is not None else f"[{self.d_lower}, {self.d_upper}]"
        line = f"{self.construction} q={self.q}: [{self.n},{self.k},{d}]"
        if self.paper_expected:
            e = self.paper_expected
            rel = ">=" if e["d_is_lower_bound"] else ""
            line += f" expected [{e['n']},{e['k']},{rel}{e['d']}]"
            if self.best_known_d is not None:
                line += f" best-known {self.best_known_d}"
        return line + f" -> {self.status}"


def _d_status(code: EvaluationCode, exp: dict) -> bool | None:
    d = exp["d"]
    if exp["d_is_lower_bound"]:
        if code.d_lower >= d:
            return True
        if code.d_upper is not None and code.d_upper < d:
            return False
        return None
    if code.d_exact is not None:
        return code.d_exact == d
    if code.d_lower > d or (code.d_upper is not None and code.d_upper < d):
        return False
    return None


def report(code: EvaluationCode, construction: str | None = None) -> ParamReport:
    tag = construction or code.construction
    exp = expected_parameters(tag, code.q) if tag else None
    if exp is None:
        n_m = k_m = d_m = None
        status = "no expectation"
    else:
        n_m, k_m = code.n == exp["n"], code.k == exp["k"]
        d_m = _d_status(code, exp)
        if not (n_m and k_m) or d_m is False:
            status = "mismatch"
        elif d_m is None:
            status = "inconclusive"
        else:
            status = "match"
    return ParamReport(
        construction=tag,
        q=code.q,
        n=code.n,
        k=code.k,
        d_lower=code.d_lower,
        d_upper=code.d_upper,
        d_exact=code.d_exact,
        deficiency=code.deficiency,
        lower_source=code.lower_source,
        paper_expected=None if exp is None else {key: exp[key] for key in ("n", "k", "d", "d_is_lower_bound")},
        best_known_d=None if exp is None else exp["best_known_d"],
        n_match=n_m,
        k_match=k_m,
        d_match=d_m,
        status=status,
    )


# ---------------------------------------------------------------------------
# file formats


def format_generator(gen, q: int) -> str:
    gen = np.asarray(gen, dtype=np.int64)
    k, n = gen.shape
    lines = [f"q={q} n={n} k={k}"] + [" ".join(str(int(x)) for x in row) for row in gen]
    return "\n".join(lines) + "\n"


def parse_generator(text: str) -> tuple[GF, np.ndarray]:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty generator file")
    try:
        hdr = dict(tok.split("=", 1) for tok in lines[0].split())
        q, n, k = int(hdr["q"]), int(hdr["n"]), int(hdr["k"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad generator header {lines[0]!r}") from exc
    rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
    if len(rows) != k or any(len(r) != n for r in rows):
        raise ValueError(f"expected {k} rows of {n} entries")
    G = np.array(rows, dtype=np.int64).reshape(k, n)
    if G.size and (G.min() < 0 or G.max() >= q):
        raise ValueError("entries must be field encodings in [0, q)")
    return field_of_order(q), G


def format_system(system: LinearSystem) -> str:
    """Header line, then one curve-format line per basis form."""
    F = system.field
    out = [f"ambient={system.ambient} q={F.order} deg={system.degree}"]
    for row in system.basis:
        out.append(f"q={F.order} nvars={system.nvars} deg={system.degree}")
        out.append(" ".join(str(int(c)) for c in row))
    return "\n".join(out) + "\n"


__all__ = [
    "CONSTRUCTIONS",
    "DistanceOutcome",
    "EvaluationCode",
    "ParamReport",
    "Witness",
    "build_code",
    "check_range",
    "construct",
    "construct_custom",
    "determine_distance",
    "exhaustive_distance",
    "expected_parameters",
    "format_generator",
    "format_system",
    "isd_distance",
    "reference_tables",
    "parse_generator",
    "report",
    "witness_max_curve",
]
