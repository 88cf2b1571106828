"""BV decompositions, weak Lebesgue quasinorms, and 1D radical checks.

The discrete variation of a sampled selection splits into an L1 part, an
absolutely continuous part integrated over grid edges away from the cut and
the zero set, and a jump part summed along the cut with one-sided samples.
Gradient magnitudes are measured by the largest singular value of the real
2x2 Jacobian, so the identity map has |grad| = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field_core import Grid2D, HolderEstimate, DEFAULT_SEED
from .levelset import LevelCurveSet
from .radical import SbvField

__all__ = [
    "VariationReport",
    "variation_decompose",
    "variation_decompose_values",
    "weak_lp_quasinorm",
    "gg_check_1d",
    "verify_radical_bound",
    "GgReport",
    "RatioReport",
    "derivative_1d",
    "holder_norm_1d",
    "raw_gradient_seminorm",
    "jump_along_curve",
]

HOLDER_1D_WINDOW = 64
HOLDER_1D_RANDOM_PAIRS = 10_000


@dataclass(frozen=True)
class VariationReport:
    """L1 + absolutely continuous + jump decomposition with a weak quasinorm."""

    l1: float
    ac_part: float
    jump_part: float
    bv_total: float
    weak_lp: float
    p: float

    def as_dict(self) -> dict:
        return {"l1": self.l1, "ac_part": self.ac_part, "jump_part": self.jump_part,
                "bv_total": self.bv_total, "weak_lp": self.weak_lp, "p": self.p}


def weak_lp_quasinorm(samples, p: float, cell_measure: float) -> float:
    """Exact weak-L^p quasinorm of a piecewise-constant sample distribution.

    Sorting magnitudes descending, the supremum of s * measure{|g| > s}^(1/p)
    over all s > 0 equals max_k v_k * (k * cell_measure)^(1/p).
    """
    if p < 1.0:
        raise ValueError("p must be at least 1")
    v = np.abs(np.ravel(np.asarray(samples, dtype=complex)))
    if v.size == 0:
        raise ValueError("empty sample array")
    v = np.sort(v)[::-1]
    k = np.arange(1, v.size + 1, dtype=float)
    return float(np.max(v * (k * cell_measure) ** (1.0 / p)))


def _sigma_max(a: np.ndarray, b: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Largest singular value from |gx|^2, |gy|^2, Re(gx conj(gy))."""
    half = 0.5 * (a + b)
    rad = np.sqrt((0.5 * (a - b)) ** 2 + d ** 2)
    return np.sqrt(np.maximum(half + rad, 0.0))


def _trapezoid_weights(shape) -> np.ndarray:
    """Node quadrature weights (1 interior, 1/2 edges, 1/4 corners)."""
    w = np.ones(shape)
    w[0, :] *= 0.5
    w[-1, :] *= 0.5
    w[:, 0] *= 0.5
    w[:, -1] *= 0.5
    return w


def jump_along_curve(values: np.ndarray, grid: Grid2D, curve: LevelCurveSet) -> float:
    """Sum of |v+ - v-| * segment length with one-node offsets off the curve.

    For each segment, v+ and v- are read at the grid nodes nearest to the
    midpoint displaced one node spacing along each side of the unit normal.
    """
    if curve.is_empty:
        return 0.0
    seg = curve.segments
    mids = curve.midpoints()
    tx = seg[:, 2] - seg[:, 0]
    ty = seg[:, 3] - seg[:, 1]
    norm = np.hypot(tx, ty)
    norm[norm == 0.0] = 1.0
    nx_, ny_ = -ty / norm, tx / norm
    off = np.column_stack([nx_ * grid.hx, ny_ * grid.hy])

    def node_values(pts):
        i = np.clip(np.rint((pts[:, 0] - grid.xmin) / grid.hx), 0, grid.nx - 1).astype(int)
        j = np.clip(np.rint((pts[:, 1] - grid.ymin) / grid.hy), 0, grid.ny - 1).astype(int)
        return values[i, j]

    vplus = node_values(mids + off)
    vminus = node_values(mids - off)
    return float(np.dot(np.abs(vplus - vminus), curve.lengths))


def variation_decompose_values(values: np.ndarray, grid: Grid2D, p: float,
                               cut_h_edges=None, cut_v_edges=None,
                               zero_mask=None, cut_curve: LevelCurveSet | None = None
                               ) -> VariationReport:
    """Variation decomposition of an arbitrary sampled complex selection."""
    if p < 1.0:
        raise ValueError("p must be at least 1")
    cell = grid.cell_area
    quad = _trapezoid_weights(values.shape)
    l1 = float((np.abs(values) * quad).sum() * cell)

    if zero_mask is None:
        zero_mask = np.zeros(values.shape, dtype=bool)
    if cut_h_edges is None:
        cut_h_edges = np.zeros((grid.nx - 1, grid.ny), dtype=bool)
    if cut_v_edges is None:
        cut_v_edges = np.zeros((grid.nx, grid.ny - 1), dtype=bool)

    dx = np.diff(values, axis=0) / grid.hx
    dy = np.diff(values, axis=1) / grid.hy
    valid_x = ~cut_h_edges & ~zero_mask[:-1, :] & ~zero_mask[1:, :]
    valid_y = ~cut_v_edges & ~zero_mask[:, :-1] & ~zero_mask[:, 1:]

    a = np.zeros(values.shape)
    b = np.zeros(values.shape)
    d = np.zeros(values.shape)
    a[:-1, :] = np.where(valid_x, np.abs(dx) ** 2, 0.0)
    b[:, :-1] = np.where(valid_y, np.abs(dy) ** 2, 0.0)
    both = np.zeros(values.shape, dtype=bool)
    both[:-1, :-1] = valid_x[:, :-1] & valid_y[:-1, :]
    d[:-1, :-1] = np.where(both[:-1, :-1],
                           (dx[:, :-1] * np.conj(dy[:-1, :])).real, 0.0)
    sigma = _sigma_max(a, b, d)
    ac = float((sigma * quad).sum() * cell)
    weak = weak_lp_quasinorm(sigma, p, cell)

    jump = 0.0
    if cut_curve is not None and not cut_curve.is_empty:
        jump = jump_along_curve(values, grid, cut_curve)

    return VariationReport(l1=l1, ac_part=ac, jump_part=jump,
                           bv_total=l1 + ac + jump, weak_lp=weak, p=p)


def variation_decompose(sbv: SbvField, p: float) -> VariationReport:
    """Variation decomposition of a constructed radical selection."""
    curve = sbv.cut.curve if sbv.cut is not None else None
    return variation_decompose_values(sbv.lam.values, sbv.grid, p,
                                      cut_h_edges=sbv.cut_h_edges,
                                      cut_v_edges=sbv.cut_v_edges,
                                      zero_mask=sbv.zero_mask,
                                      cut_curve=curve)


def raw_gradient_seminorm(values: np.ndarray, grid: Grid2D, p: float) -> float:
    """p-power gradient sum over all raw forward differences, cut included.

    This is the discrete integral of |grad lam|^p with no edge exclusions, the
    quantity whose boundedness fails beyond the critical integrability
    exponent while the p = 1 value stays finite.
    """
    dx = np.diff(values, axis=0) / grid.hx
    dy = np.diff(values, axis=1) / grid.hy
    a = np.zeros(values.shape)
    b = np.zeros(values.shape)
    d = np.zeros(values.shape)
    a[:-1, :] = np.abs(dx) ** 2
    b[:, :-1] = np.abs(dy) ** 2
    d[:-1, :-1] = (dx[:, :-1] * np.conj(dy[:-1, :])).real
    sigma = _sigma_max(a, b, d)
    return float((sigma ** p).sum() * grid.cell_area)


# --- 1D machinery -----------------------------------------------------------

def derivative_1d(values: np.ndarray, dt: float, kind: str = "forward") -> np.ndarray:
    """Difference-quotient derivative samples of a 1D array.

    ``forward`` returns the N-1 per-cell quotients.  ``minmod`` returns the
    N-2 node-centred limited slopes: zero where the one-sided quotients
    disagree in sign, else the smaller in magnitude.  The limiter avoids the
    O(1) overestimate a one-sided quotient commits across a kink, which
    otherwise biases weak-norm measurements of singular derivatives.
    """
    v = np.asarray(values)
    fwd = np.diff(v) / dt
    if kind == "forward":
        return fwd
    if kind == "minmod":
        left, right = fwd[:-1], fwd[1:]
        if np.iscomplexobj(v):
            take_left = np.abs(left) <= np.abs(right)
            agree = (left * np.conj(right)).real > 0.0
        else:
            take_left = np.abs(left) <= np.abs(right)
            agree = left * right > 0.0
        out = np.where(take_left, left, right)
        return np.where(agree, out, 0.0)
    raise ValueError(f"unknown derivative kind {kind!r}")


def _holder_quotient_1d(values: np.ndarray, t: np.ndarray, alpha: float,
                        seed: int) -> float:
    best = 0.0
    n = values.size
    for d in range(1, min(HOLDER_1D_WINDOW, n - 1) + 1):
        num = np.abs(values[d:] - values[:-d])
        den = np.abs(t[d:] - t[:-d]) ** alpha
        best = max(best, float((num / den).max()))
    rng = np.random.default_rng(seed)
    i1 = rng.integers(0, n, HOLDER_1D_RANDOM_PAIRS)
    i2 = rng.integers(0, n, HOLDER_1D_RANDOM_PAIRS)
    keep = i1 != i2
    if np.any(keep):
        num = np.abs(values[i1[keep]] - values[i2[keep]])
        den = np.abs(t[i1[keep]] - t[i2[keep]]) ** alpha
        best = max(best, float((num / den).max()))
    return best


def holder_norm_1d(values: np.ndarray, t: np.ndarray, k: int, alpha: float,
                   seed: int = DEFAULT_SEED) -> HolderEstimate:
    """C^{k,alpha} norm estimate of a sampled 1D function (possibly complex)."""
    if not (0.0 < alpha <= 1.0):
        raise ValueError("alpha must lie in (0, 1]")
    v = np.asarray(values)
    t = np.asarray(t, dtype=float)
    if v.size < k + 2:
        raise ValueError(f"too few samples for derivatives of order {k}")
    sup = 0.0
    cur = v
    for order in range(k + 1):
        sup += float(np.abs(cur).max())
        if order < k:
            cur = np.gradient(cur, t, edge_order=2)
    semi = _holder_quotient_1d(cur, t, alpha, seed)
    return HolderEstimate(k=k, alpha=alpha, sup_derivatives=sup,
                          hoelder_seminorm=semi, total=sup + semi)


@dataclass(frozen=True)
class GgReport:
    """Weak-norm check of a continuous 1D radical against its driver norms."""

    lhs: float
    rhs_core: float
    ratio: float
    p: float
    baseline: float | None
    passed: bool | None


def gg_check_1d(f: np.ndarray, t: np.ndarray, r: float, k: int, alpha: float,
                baseline: float | None = None, seed: int = DEFAULT_SEED) -> GgReport:
    """Weak-L^p quasinorm of the derivative of lam = |f|^(1/r) on an interval.

    Requires r = k + alpha with k >= 1.  The left side is the weak quasinorm
    of the limited difference quotients of lam at the dual exponent
    1/p = 1 - 1/r; the right side is max(Hoeld_alpha(f^(k))^(1/r) |I|^(1/p),
    sup|f'|^(1/r)).  When a baseline is supplied the report asserts
    lhs <= baseline * rhs_core.
    """
    if abs(r - (k + alpha)) > 1e-9:
        raise ValueError("need r = k + alpha")
    if k < 1:
        raise ValueError("k must be at least 1")
    f = np.asarray(f, dtype=float)
    t = np.asarray(t, dtype=float)
    dt = float(t[1] - t[0])
    lam = np.abs(f) ** (1.0 / r)
    p = r / (r - 1.0)
    slopes = derivative_1d(lam, dt, kind="minmod")
    lhs = weak_lp_quasinorm(slopes, p, dt)

    fprime = np.diff(f) / dt
    sup_fprime = float(np.abs(fprime).max())
    fk = f
    for _ in range(k):
        fk = np.gradient(fk, t, edge_order=2)
    hoeld = _holder_quotient_1d(fk, t, alpha, seed)
    interval = float(t[-1] - t[0])
    rhs = max(hoeld ** (1.0 / r) * interval ** (1.0 / p), sup_fprime ** (1.0 / r))

    if lhs == 0.0:
        ratio = 0.0
    elif rhs == 0.0:
        ratio = np.inf
    else:
        ratio = lhs / rhs
    passed = None if baseline is None else bool(ratio <= baseline)
    return GgReport(lhs=lhs, rhs_core=rhs, ratio=float(ratio), p=p,
                    baseline=baseline, passed=passed)


@dataclass(frozen=True)
class RatioReport:
    """bv_total / ||f||^(1/r) regression ratio for the radical bound."""

    ratio: float
    bv_total: float
    norm_total: float
    r: float
    baseline: float | None
    passed: bool | None


def verify_radical_bound(sbv: SbvField, norm: HolderEstimate,
                         p: float | None = None,
                         baseline: float | None = None,
                         rel_band: float = 0.03) -> RatioReport:
    """Ratio of the measured BV norm to the scaled driver norm.

    The uniform-bound constant is non-constructive, so the check is a frozen
    regression: with a baseline the report asserts the ratio stays within
    ``rel_band`` of it.
    """
    if p is None:
        p = sbv.r / (sbv.r - 1.0) if sbv.r > 1.0 else 2.0
    var = variation_decompose(sbv, p)
    denom = norm.total ** (1.0 / sbv.r)
    ratio = var.bv_total / denom if denom > 0 else np.inf
    passed = None
    if baseline is not None:
        passed = bool(abs(ratio - baseline) <= rel_band * abs(baseline))
    return RatioReport(ratio=float(ratio), bv_total=var.bv_total,
                       norm_total=norm.total, r=sbv.r,
                       baseline=baseline, passed=passed)
