"""Branch-cut selection over sampled unit directions.

Each candidate direction y on the unit circle yields a sign-level curve of
the field; its jump functional J(y) integrates |f|^(1/r) along that curve.
Directions whose curve passes through a near-critical point of the sign map
are filtered out, and the cheapest regular candidate wins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field_core import ComplexField, fmt
from .levelset import LevelCurveSet, bilinear_sample, curve_integral, extract_norm_level, extract_sign_level

__all__ = [
    "BranchCut",
    "DirectionScan",
    "scan_directions",
    "verify_level_tail",
    "verify_norm_level_growth",
    "TailReport",
    "GrowthReport",
    "scan_to_csv",
]

# A candidate is non-regular when the sign-map gradient magnitude somewhere on
# its curve drops below this fraction of the curve median.
REGULARITY_TAU = 1e-3


@dataclass(frozen=True)
class BranchCut:
    """A chosen unit direction with its extracted curve and jump functional."""

    direction: complex
    curve: LevelCurveSet
    jump_functional: float
    regular: bool

    @property
    def is_empty(self) -> bool:
        return self.curve.is_empty


@dataclass(frozen=True)
class DirectionScan:
    """All scanned candidates plus the best regular one."""

    candidates: list
    best: BranchCut
    r: float

    def table(self) -> list:
        return [(j, c.direction, c.jump_functional, c.regular)
                for j, c in enumerate(self.candidates)]


def scan_directions(field: ComplexField, r: float, K: int,
                    zero_eps: float | None = None,
                    tau: float = REGULARITY_TAU) -> DirectionScan:
    """Evaluate J(y_j) for the K-th roots of unity y_j and pick the best.

    Ties in J are broken by the smallest candidate index.  Raises
    ``RuntimeError`` when every candidate is non-regular, which signals a
    pathological field or a too-coarse grid.
    """
    if K < 8:
        raise ValueError("need at least 8 candidate directions")
    if r <= 0.0:
        raise ValueError("radical exponent must be positive")
    fmax = field.abs_max
    if fmax == 0.0:
        raise ValueError("field is identically zero")
    if zero_eps is None:
        zero_eps = 1e-8 * fmax

    absf = np.abs(field.values)
    weight = absf ** (1.0 / r)

    # |grad(sgn f)| by finite differences; the sign map is zeroed where f is
    # below the zero threshold, which only inflates the gradient near zeros
    # and never hides a critical point.
    with np.errstate(divide="ignore", invalid="ignore"):
        sgn = np.where(absf > zero_eps, field.values / absf, 0.0)
    gx = np.gradient(sgn, field.grid.hx, axis=0, edge_order=2)
    gy = np.gradient(sgn, field.grid.hy, axis=1, edge_order=2)
    sgrad = np.sqrt(np.abs(gx) ** 2 + np.abs(gy) ** 2)

    candidates = []
    for j in range(K):
        y = complex(np.exp(2j * np.pi * j / K))
        curve = extract_sign_level(field, y, zero_eps)
        if curve.is_empty:
            candidates.append(BranchCut(direction=y, curve=curve,
                                        jump_functional=0.0, regular=True))
            continue
        jump = curve_integral(curve, weight)
        svals = np.real(bilinear_sample(field.grid, sgrad, curve.midpoints()))
        med = float(np.median(svals))
        regular = bool(svals.min() >= tau * med) and med > 0.0
        candidates.append(BranchCut(direction=y, curve=curve,
                                    jump_functional=jump, regular=regular))

    best = None
    for cand in candidates:
        if not cand.regular:
            continue
        if best is None or cand.jump_functional < best.jump_functional:
            best = cand
    if best is None:
        raise RuntimeError("every candidate direction is non-regular; "
                           "the field is pathological or the grid too coarse")
    return DirectionScan(candidates=candidates, best=best, r=r)


@dataclass(frozen=True)
class TailReport:
    """Markov-type tail of the jump functional over scanned directions."""

    thresholds: np.ndarray
    fractions: np.ndarray
    products: np.ndarray
    max_product: float
    bound: float | None
    passed: bool | None


def verify_level_tail(scan: DirectionScan, bound: float | None = None,
                      n_levels: int = 16) -> TailReport:
    """Fractions of directions with J(y) > T over a geometric ladder of T.

    The products fraction(T) * T quantify the tail decay; when a bound is
    given the report asserts max_product <= bound.
    """
    n_regular = sum(1 for c in scan.candidates if c.regular)
    if n_regular < 16:
        raise ValueError("tail check needs at least 16 regular candidates")
    J = np.array([c.jump_functional for c in scan.candidates])
    top = float(J.max()) if J.max() > 0 else 1.0
    thresholds = top * 0.5 ** np.arange(n_levels)
    fractions = np.array([(J > t).mean() for t in thresholds])
    products = fractions * thresholds
    mp = float(products.max())
    passed = None if bound is None else bool(mp <= bound)
    return TailReport(thresholds=thresholds, fractions=fractions,
                      products=products, max_product=mp, bound=bound, passed=passed)


@dataclass(frozen=True)
class GrowthReport:
    """Scaled level-curve lengths y^(1/s) * H^1(|f|^-1(y)) per level."""

    levels: np.ndarray
    values: np.ndarray
    median: float
    bound: float | None
    passed: bool | None


def verify_norm_level_growth(field: ComplexField, s: float, levels,
                             bound: float | None = None) -> GrowthReport:
    """Measure y^(1/s) times the norm-level curve length for each level.

    Raises ``ValueError`` on a degenerate level (positive-area level set).
    """
    if s <= 0.0:
        raise ValueError("s must be positive")
    levels = np.asarray(levels, dtype=float)
    if np.any(levels <= 0.0):
        raise ValueError("levels must be positive")
    values = []
    for y in levels:
        curve = extract_norm_level(field, float(y))
        if curve.degenerate:
            raise ValueError(f"degenerate norm level at y={y}")
        values.append(y ** (1.0 / s) * curve.total_length)
    values = np.asarray(values)
    med = float(np.median(values)) if values.size else 0.0
    passed = None if bound is None else bool(med <= bound)
    return GrowthReport(levels=levels, values=values, median=med,
                        bound=bound, passed=passed)


def scan_to_csv(scan: DirectionScan) -> str:
    lines = ["j,re_y,im_y,J,regular"]
    for j, y, jump, regular in scan.table():
        lines.append(f"{j},{fmt(y.real)},{fmt(y.imag)},{fmt(jump)},{int(regular)}")
    return "\n".join(lines) + "\n"
