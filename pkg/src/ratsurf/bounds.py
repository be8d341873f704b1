"""Upper bounds on rational points of curves and the distance bounds they give.

Each function evaluates a closed formula.  Hypotheses such as "geometrically
irreducible" or "no rational linear component" are not checked here; they are
recorded in ``BoundResult.assumptions`` for the caller to discharge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt


class OutOfRangeError(ValueError):
    """The theorem behind a bound does not cover the requested parameters."""


@dataclass(frozen=True)
class BoundResult:
    value: int
    source: str
    assumptions: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("a point-count bound is nonnegative")

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class GenusDatum:
    model: str  # "plane" or "quadric"
    parameter: int
    arithmetic_genus: int


def floor_2sqrt(q: int) -> int:
    """floor(2*sqrt(q)), exactly."""
    return isqrt(4 * q)


def aubry_perret(q: int, p_a: int) -> BoundResult:
    if p_a < 0:
        raise ValueError("arithmetic genus is nonnegative")
    return BoundResult(q + 1 + p_a * floor_2sqrt(q), "aubry-perret", ("geometrically irreducible",))


def homma_kim(q: int, d: int) -> BoundResult:
    if d < 1:
        raise ValueError("degree must be positive")
    if (q, d) == (4, 4):
        return BoundResult(14, "homma-kim (exceptional quartic)", ("no F_q-linear component",))
    return BoundResult((d - 1) * q + 1, "homma-kim", ("no F_q-linear component",))


def cor_major(q: int, d: int) -> BoundResult:
    if d < 1:
        raise ValueError("degree must be positive")
    return BoundResult((d - 1) * q + 2, "not-union-of-lines", ("not a union of d rational lines",))


def quadric_irreducible(q: int, s: int) -> BoundResult:
    if s < 2:
        raise OutOfRangeError("the quadric bound needs s >= 2")
    return BoundResult(q * (2 * s - 2), "quadric-irreducible", ("F_q-irreducible", "divisor ~ sH"))


def tot_singular(q: int, s: int) -> BoundResult:
    if s < 1:
        raise OutOfRangeError("s must be positive")
    value = 1 if s == 1 else s * (q + 1) - 2 * q
    return BoundResult(value, "totally-singular", ("F_q-irreducible", "all rational points singular"))


def cube_bound(q: int) -> BoundResult:
    if q < 5:
        raise OutOfRangeError("the cubic-section bound is stated for q >= 5")
    value = max(3 * q + 3, min(4 * q, q + 1 + 4 * floor_2sqrt(q)))
    return BoundResult(value, "cubic-sections", ("effective divisor ~ 3H",))


def quadric_cubic_delta_branches(q: int) -> int:
    """The piecewise presentation of q^2 + 1 - cube_bound(q)."""
    if q < 5:
        raise OutOfRangeError("stated for q >= 5")
    if q <= 7:
        return q * q + 1 - 4 * q
    if q <= 13:
        return q * q - q - 4 * floor_2sqrt(q)
    return q * q - 2 - 3 * q


def quadric_cubic_params(q: int) -> tuple[int, int, int]:
    n = q * q + 1
    return n, 16, n - cube_bound(q).value


def genus(model: str, parameter: int) -> GenusDatum:
    if parameter < 1:
        raise ValueError("degree / multiple must be positive")
    if model == "plane":
        d = parameter
        return GenusDatum(model, d, (d - 1) * (d - 2) // 2)
    if model == "quadric":
        a = parameter
        return GenusDatum(model, a, 1 + a * (a - 2))
    raise ValueError(f"unknown model {model!r}")


# ---------------------------------------------------------------------------
# per-construction maximum point counts

# construction tag -> (minimum q, bound function of q, source)
_CONSTRUCTIONS = {
    "Y-F4": (2, lambda q: 3 * q + 3, "Y, Lambda_4: at most 3q+3 points"),
    "Z-L3": (2, lambda q: 2 * q + 2, "Z, Gamma_3: at most 2q+2 points"),
    "Z-L4": (4, lambda q: 3 * q + 2, "Z, Gamma_4: at most 3q+2 points"),
    "Z-L5": (5, lambda q: 4 * q + 2, "Z, Gamma_5: at most 4q+2 points"),
    "quadric-m2": (2, lambda q: 2 * q + 2, "X, O_X(2): at most 2q+2 points"),
    "quadric-m3": (5, lambda q: cube_bound(q).value, "X, O_X(3): cubic-section bound"),
}


def construction_lower_bound(construction: str, q: int) -> BoundResult:
    """Maximum rational points on a nonzero section of the construction's system.

    The minimum distance is at least n minus this value.
    """
    try:
        qmin, fn, src = _CONSTRUCTIONS[construction]
    except KeyError:
        raise ValueError(f"unknown construction {construction!r}") from None
    if q < qmin:
        raise OutOfRangeError(f"{construction} bound is stated for q >= {qmin}")
    return BoundResult(fn(q), src)


def construction_max_points_q_range(construction: str) -> int:
    return _CONSTRUCTIONS[construction][0]


def plane_bounds(q: int, d: int) -> list[BoundResult]:
    """Every closed-form bound applicable to a plane curve of degree d."""
    out = [homma_kim(q, d), cor_major(q, d), aubry_perret(q, genus("plane", d).arithmetic_genus)]
    return out
