"""Continuous root tracking for monic polynomial families on an interval.

Roots are solved pointwise through companion-matrix eigenvalues and matched
between consecutive parameter samples by a minimal-total-distance perfect
matching, which keeps every tracked component continuous up to the sampling
resolution.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import linear_sum_assignment

from .field_core import compile_expression, fmt, DEFAULT_SEED
from .variation import holder_norm_1d

__all__ = [
    "CoeffCurve",
    "RootTrack",
    "solve_pointwise",
    "match_continuous",
    "sobolev_check",
    "SobolevReport",
    "build_coeff_curve",
    "min_matching",
    "reconstruction_error",
    "magnitude_bound_excess",
    "track_to_csv",
]

RESIDUAL_TOL = 1e-8
# Exhaustive permutation matching below this degree; Hungarian above.
ENUMERATION_LIMIT = 6


@dataclass(frozen=True)
class CoeffCurve:
    """Sampled coefficient path t -> (a_1, ..., a_n)."""

    t: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if t.ndim != 1 or c.ndim != 2 or c.shape[0] != t.size:
            raise ValueError("need t of shape (S,) and coeffs of shape (S, n)")
        if t.size < 2 or np.any(np.diff(t) <= 0.0):
            raise ValueError("t must be strictly increasing with >= 2 samples")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients contain non-finite values")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self) -> int:
        return self.coeffs.shape[1]


@dataclass(frozen=True)
class RootTrack:
    """Ordered root tuples along the parameter samples."""

    curve: CoeffCurve
    lam: np.ndarray
    max_step_jump: float

    @property
    def t(self) -> np.ndarray:
        return self.curve.t

    @property
    def n(self) -> int:
        return self.curve.n


def solve_pointwise(coeffs) -> np.ndarray:
    """All n roots of Z^n + a_1 Z^(n-1) + ... + a_n, with a residual check."""
    a = np.asarray(coeffs, dtype=np.complex128).ravel()
    n = a.size
    if n < 1:
        raise ValueError("need a degree >= 1 polynomial")
    poly = np.concatenate([[1.0 + 0.0j], a])
    roots = np.roots(poly)
    scale = (1.0 + float(np.abs(a).max())) ** n
    residual = np.abs(np.polyval(poly, roots))
    if np.any(residual > RESIDUAL_TOL * scale):
        raise RuntimeError(f"root solver residual {residual.max():.3e} exceeds "
                           f"tolerance for coefficients {a!r}")
    return roots


@lru_cache(maxsize=None)
def _perm_table(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=int)


def min_matching(ref: np.ndarray, new: np.ndarray) -> np.ndarray:
    """Permutation p minimizing sum_i |new[p[i]] - ref[i]|.

    Exhaustive over permutations for small n (first minimizer in
    lexicographic order wins ties), Hungarian assignment otherwise.
    """
    n = ref.size
    if n == 1:
        return np.zeros(1, dtype=int)
    if n <= ENUMERATION_LIMIT:
        perms = _perm_table(n)
        cost = np.abs(new[perms] - ref[None, :]).sum(axis=1)
        return perms[int(np.argmin(cost))]
    dist = np.abs(ref[:, None] - new[None, :])
    rows, cols = linear_sum_assignment(dist)
    perm = np.empty(n, dtype=int)
    perm[rows] = cols
    return perm


def match_continuous(curve: CoeffCurve, initial_perm=None) -> RootTrack:
    """Track the root tuple along the curve by minimal-distance matching.

    The initial ordering is the solver output at the first sample (optionally
    permuted by ``initial_perm``); each later sample is permuted to minimize
    the total distance to its predecessor.
    """
    S, n = curve.coeffs.shape
    lam = np.empty((S, n), dtype=np.complex128)
    lam[0] = solve_pointwise(curve.coeffs[0])
    if initial_perm is not None:
        lam[0] = lam[0][np.asarray(initial_perm, dtype=int)]
    max_jump = 0.0
    for s in range(1, S):
        roots = solve_pointwise(curve.coeffs[s])
        perm = min_matching(lam[s - 1], roots)
        lam[s] = roots[perm]
        step = float(np.abs(lam[s] - lam[s - 1]).max())
        if step > max_jump:
            max_jump = step
    return RootTrack(curve=curve, lam=lam, max_step_jump=max_jump)


def reconstruction_error(track: RootTrack) -> float:
    """Worst relative mismatch of elementary symmetric functions vs coefficients."""
    worst = 0.0
    for s in range(track.lam.shape[0]):
        rebuilt = np.poly(track.lam[s])[1:]
        target = track.curve.coeffs[s]
        denom = np.maximum(np.abs(target), 1.0)
        worst = max(worst, float((np.abs(rebuilt - target) / denom).max()))
    return worst


def magnitude_bound_excess(lam: np.ndarray, coeffs: np.ndarray) -> float:
    """Largest violation of |root| <= 2 max_j |a_j|^(1/j) over all samples.

    Negative values mean the bound holds everywhere with room to spare.
    """
    lam = np.asarray(lam)
    coeffs = np.asarray(coeffs)
    n = coeffs.shape[-1]
    powers = 1.0 / np.arange(1, n + 1)
    bound = 2.0 * (np.abs(coeffs) ** powers).max(axis=-1)
    return float((np.abs(lam).max(axis=-1) - bound).max())


@dataclass(frozen=True)
class SobolevReport:
    """Discrete W^{1,p} data of a track against the scaled coefficient norms."""

    p: float
    lp_power: np.ndarray   # per sheet: sum |lam'|^p dt
    lp_norm: np.ndarray    # per sheet: the p-th root of lp_power
    lhs: float             # largest sheet norm
    rhs_core: float
    ratio: float
    out_of_range: bool
    baseline: float | None
    passed: bool | None


def sobolev_check(track: RootTrack, p: float, baseline: float | None = None,
                  seed: int = DEFAULT_SEED) -> SobolevReport:
    """Forward-difference L^p data of the tracked derivative.

    The certified integrability range is 1 <= p < n/(n-1); larger p is still
    computed and flagged ``out_of_range`` so divergence experiments can use
    the same path.  The right side is max_j ||a_j||_{C^{n-1,1}}^(1/j)
    estimated from the sampled coefficients.
    """
    if p < 1.0:
        raise ValueError("p must be at least 1")
    t = track.t
    dt = np.diff(t)
    d = np.diff(track.lam, axis=0) / dt[:, None]
    power = (np.abs(d) ** p * dt[:, None]).sum(axis=0)
    norm = power ** (1.0 / p)

    n = track.n
    rhs = 0.0
    for j in range(1, n + 1):
        est = holder_norm_1d(track.curve.coeffs[:, j - 1], t, k=max(n - 1, 0),
                             alpha=1.0, seed=seed)
        rhs = max(rhs, est.total ** (1.0 / j))
    lhs = float(norm.max())
    ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0.0 else np.inf)
    out_of_range = bool(n > 1 and p >= n / (n - 1))
    passed = None if baseline is None else bool(ratio <= baseline)
    return SobolevReport(p=p, lp_power=power, lp_norm=norm, lhs=lhs,
                         rhs_core=float(rhs), ratio=float(ratio),
                         out_of_range=out_of_range, baseline=baseline,
                         passed=passed)


def build_coeff_curve(spec: dict) -> CoeffCurve:
    """Build a coefficient curve from its JSON descriptor.

    Expected shape: ``{"n": 2, "coeffs": [{"expr": "0"}, {"expr": "-t"}],
    "t": [t0, t1, samples]}``.  Each entry is an expression in t (or a
    constant), broadcast over the sample array.
    """
    try:
        n = int(spec["n"])
        t0, t1, samples = spec["t"]
        entries = spec["coeffs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed coefficient-curve descriptor: {exc}") from exc
    if len(entries) != n:
        raise ValueError(f"expected {n} coefficient entries, got {len(entries)}")
    t = np.linspace(float(t0), float(t1), int(samples))
    cols = []
    for entry in entries:
        if isinstance(entry, dict) and "expr" in entry:
            fn = compile_expression(entry["expr"], variables=("t",))
            col = np.broadcast_to(np.asarray(fn(t=t), dtype=np.complex128), t.shape)
        else:
            col = np.full(t.shape, complex(entry))
        cols.append(col)
    return CoeffCurve(t=t, coeffs=np.column_stack(cols))


def track_to_csv(track: RootTrack) -> str:
    n = track.n
    header = "t," + ",".join(f"re_{i+1},im_{i+1}" for i in range(n))
    lines = [header]
    for s in range(track.lam.shape[0]):
        vals = []
        for i in range(n):
            vals.append(fmt(track.lam[s, i].real))
            vals.append(fmt(track.lam[s, i].imag))
        lines.append(fmt(track.t[s]) + "," + ",".join(vals))
    return "\n".join(lines) + "\n"
