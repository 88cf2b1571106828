"""Level curves of the sign map and the norm map, and integrals along them.

Curves are extracted by marching squares with linear edge interpolation and
returned as an unordered segment soup; segment order is canonicalized by cell
index so repeated runs produce identical output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field_core import ComplexField, Grid2D, fmt

__all__ = [
    "LevelCurveSet",
    "extract_sign_level",
    "extract_norm_level",
    "curve_integral",
    "bilinear_sample",
    "sign_level_crossing_edges",
    "coarea_check",
    "CoareaReport",
    "curves_to_csv",
    "curves_to_svg",
]

SOURCE_SIGN = "sign-level"
SOURCE_NORM = "norm-level"

# Fraction of nodes sitting exactly on a norm level above which the level is
# reported as degenerate (positive-area level set).
DEGENERATE_NODE_FRACTION = 0.005

# Relative margin for the half-plane restriction Re(f conj(y)) > 0; breaks
# floating ties deterministically when grid corners land on the boundary rays.
HALFPLANE_MARGIN_REL = 1e-9


@dataclass(frozen=True)
class LevelCurveSet:
    """Polyline approximation of a level set.

    ``segments`` has shape (M, 4) with rows (x0, y0, x1, y1); ``lengths``
    holds the per-segment Euclidean lengths and ``total_length`` their sum.
    """

    grid: Grid2D
    segments: np.ndarray
    lengths: np.ndarray
    total_length: float
    source: str
    level: complex
    degenerate: bool = False

    def __post_init__(self):
        seg = np.asarray(self.segments, dtype=float).reshape(-1, 4)
        seg.setflags(write=False)
        object.__setattr__(self, "segments", seg)
        ln = np.asarray(self.lengths, dtype=float).ravel()
        ln.setflags(write=False)
        object.__setattr__(self, "lengths", ln)

    @property
    def is_empty(self) -> bool:
        return self.segments.shape[0] == 0

    def midpoints(self) -> np.ndarray:
        s = self.segments
        return np.column_stack([(s[:, 0] + s[:, 2]) * 0.5, (s[:, 1] + s[:, 3]) * 0.5])


def _empty_curves(grid, source, level, degenerate=False) -> LevelCurveSet:
    return LevelCurveSet(grid=grid, segments=np.empty((0, 4)), lengths=np.empty(0),
                         total_length=0.0, source=source, level=level,
                         degenerate=degenerate)


# Marching-squares connectivity: corner bits BL=1, BR=2, TR=4, TL=8, edges
# B(ottom), R(ight), T(op), L(eft).  Saddles (5, 10) are resolved by the
# cell-centre value and handled separately.
_SEG_TABLE = {
    1: (("L", "B"),),
    2: (("B", "R"),),
    3: (("L", "R"),),
    4: (("R", "T"),),
    6: (("B", "T"),),
    7: (("L", "T"),),
    8: (("T", "L"),),
    9: (("B", "T"),),
    11: (("R", "T"),),
    12: (("L", "R"),),
    13: (("B", "R"),),
    14: (("L", "B"),),
}
_SADDLE = {
    5: {True: (("B", "R"), ("T", "L")), False: (("L", "B"), ("R", "T"))},
    10: {True: (("L", "B"), ("R", "T")), False: (("B", "R"), ("T", "L"))},
}


def _edge_points(grid: Grid2D, g: np.ndarray):
    """Linear-interpolation crossing points on every grid edge.

    Returns (hpts, vpts): crossing coordinates for horizontal edges
    (shape (nx-1, ny, 2)) and vertical edges (shape (nx, ny-1, 2)).  Entries
    for non-crossing edges are filled but never referenced.
    """
    x, y = grid.x, grid.y
    inside = g > 0.0

    ga, gb = g[:-1, :], g[1:, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(inside[:-1, :] != inside[1:, :], ga / (ga - gb), 0.0)
    hpts = np.empty(ga.shape + (2,))
    hpts[..., 0] = x[:-1, None] + t * grid.hx
    hpts[..., 1] = np.broadcast_to(y[None, :], ga.shape)

    ga, gb = g[:, :-1], g[:, 1:]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(inside[:, :-1] != inside[:, 1:], ga / (ga - gb), 0.0)
    vpts = np.empty(ga.shape + (2,))
    vpts[..., 0] = np.broadcast_to(x[:, None], ga.shape)
    vpts[..., 1] = y[None, :-1] + t * grid.hy
    return hpts, vpts


def _marching_squares(grid: Grid2D, g: np.ndarray, cell_mask=None) -> np.ndarray:
    """Zero contour of g as an (M, 4) segment array, cell-lexicographic order."""
    inside = g > 0.0
    code = (inside[:-1, :-1].astype(np.int8)
            + 2 * inside[1:, :-1]
            + 4 * inside[1:, 1:]
            + 8 * inside[:-1, 1:])
    if cell_mask is not None:
        code = np.where(cell_mask, code, 0)
    if not np.any((code > 0) & (code < 15)):
        return np.empty((0, 4))

    hpts, vpts = _edge_points(grid, g)
    cell_pts = {
        "B": hpts[:, :-1],
        "T": hpts[:, 1:],
        "L": vpts[:-1, :],
        "R": vpts[1:, :],
    }
    center = 0.25 * (g[:-1, :-1] + g[1:, :-1] + g[1:, 1:] + g[:-1, 1:])

    rows = []

    def emit(mask, pairs):
        if not np.any(mask):
            return
        ii, jj = np.nonzero(mask)
        for slot, (ea, eb) in enumerate(pairs):
            pa = cell_pts[ea][ii, jj]
            pb = cell_pts[eb][ii, jj]
            rows.append(np.column_stack([ii, jj,
                                         np.full(ii.shape, slot),
                                         pa[:, 0], pa[:, 1], pb[:, 0], pb[:, 1]]))

    for c, pairs in _SEG_TABLE.items():
        emit(code == c, pairs)
    for c, variants in _SADDLE.items():
        m = code == c
        emit(m & (center > 0.0), variants[True])
        emit(m & ~(center > 0.0), variants[False])

    if not rows:
        return np.empty((0, 4))
    table = np.concatenate(rows, axis=0)
    order = np.lexsort((table[:, 2], table[:, 1], table[:, 0]))
    return table[order, 3:7]


def _finish(grid, segments, source, level) -> LevelCurveSet:
    lengths = np.hypot(segments[:, 2] - segments[:, 0], segments[:, 3] - segments[:, 1])
    return LevelCurveSet(grid=grid, segments=segments, lengths=lengths,
                         total_length=float(lengths.sum()), source=source, level=level)


def extract_sign_level(field: ComplexField, y: complex, zero_eps: float | None = None
                       ) -> LevelCurveSet:
    """Level curve of the sign map f/|f| at a unit direction y.

    Extracts the zero contour of Im(f * conj(y)) restricted to cells whose
    corners all satisfy Re(f * conj(y)) > 0 and |f| > zero_eps, so the curve
    stays away from the zero set of f and picks the y ray, not the -y ray.
    """
    y = complex(y)
    if abs(abs(y) - 1.0) > 1e-12:
        raise ValueError("level direction must be a unit complex number")
    if zero_eps is None:
        zero_eps = 1e-8 * field.abs_max
    if zero_eps <= 0.0:
        raise ValueError("zero_eps must be positive")
    w = field.values * np.conj(y)
    absf = np.abs(field.values)
    ok = (w.real > HALFPLANE_MARGIN_REL * absf) & (absf > zero_eps)
    cell_mask = ok[:-1, :-1] & ok[1:, :-1] & ok[1:, 1:] & ok[:-1, 1:]
    segments = _marching_squares(field.grid, w.imag, cell_mask)
    return _finish(field.grid, segments, SOURCE_SIGN, y)


def extract_norm_level(field: ComplexField, y: float) -> LevelCurveSet:
    """Level curve of the modulus |f| at a positive level y.

    A level hit exactly by a macroscopic fraction of nodes has a positive-area
    level set; an empty set flagged ``degenerate`` is returned in that case.
    """
    y = float(y)
    if y <= 0.0:
        raise ValueError("norm level must be positive")
    g = np.abs(field.values) - y
    near = np.abs(g) <= 1e-12 * max(1.0, y)
    if near.mean() > DEGENERATE_NODE_FRACTION:
        return _empty_curves(field.grid, SOURCE_NORM, y, degenerate=True)
    segments = _marching_squares(field.grid, g)
    return _finish(field.grid, segments, SOURCE_NORM, y)


def bilinear_sample(grid: Grid2D, values: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Bilinear interpolation of node values at points (M, 2), clamped to the box."""
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    u = np.clip((pts[:, 0] - grid.xmin) / grid.hx, 0.0, grid.nx - 1 - 1e-12)
    v = np.clip((pts[:, 1] - grid.ymin) / grid.hy, 0.0, grid.ny - 1 - 1e-12)
    i0 = u.astype(int)
    j0 = v.astype(int)
    fu = u - i0
    fv = v - j0
    v00 = values[i0, j0]
    v10 = values[i0 + 1, j0]
    v01 = values[i0, j0 + 1]
    v11 = values[i0 + 1, j0 + 1]
    return (v00 * (1 - fu) * (1 - fv) + v10 * fu * (1 - fv)
            + v01 * (1 - fu) * fv + v11 * fu * fv)


def curve_integral(curves: LevelCurveSet, integrand) -> float:
    """Midpoint-rule line integral along the curve set.

    ``integrand`` is either a callable f(x, y) or an array of node values on
    the curves' grid, sampled by bilinear interpolation at segment midpoints.
    """
    if curves.is_empty:
        return 0.0
    mids = curves.midpoints()
    if callable(integrand):
        vals = np.asarray(integrand(mids[:, 0], mids[:, 1]), dtype=float)
    else:
        vals = np.real(bilinear_sample(curves.grid, np.asarray(integrand), mids))
    if not np.all(np.isfinite(vals)):
        raise ValueError("integrand is non-finite along the curve")
    return float(np.dot(vals, curves.lengths))


def sign_level_crossing_edges(field: ComplexField, y: complex,
                              zero_eps: float | None = None):
    """Grid edges crossed by the sign-level curve at direction y.

    Returns boolean masks (h_cross, v_cross) for horizontal edges, shape
    (nx-1, ny), and vertical edges, shape (nx, ny-1).  An edge is crossed when
    the extraction of :func:`extract_sign_level` places a contour point on it.
    """
    y = complex(y)
    if zero_eps is None:
        zero_eps = 1e-8 * field.abs_max
    w = field.values * np.conj(y)
    absf = np.abs(field.values)
    inside = w.imag > 0.0
    ok = (w.real > HALFPLANE_MARGIN_REL * absf) & (absf > zero_eps)
    cell = ok[:-1, :-1] & ok[1:, :-1] & ok[1:, 1:] & ok[:-1, 1:]

    ny = field.grid.ny
    h_cross = inside[:-1, :] != inside[1:, :]
    h_used = np.zeros_like(h_cross)
    h_used[:, :-1] |= cell          # edge is the bottom of cell (i, j)
    h_used[:, 1:] |= cell           # edge is the top of cell (i, j-1)
    h_cross &= h_used

    v_cross = inside[:, :-1] != inside[:, 1:]
    v_used = np.zeros_like(v_cross)
    v_used[:-1, :] |= cell          # left edge of cell
    v_used[1:, :] |= cell           # right edge of cell
    v_cross &= v_used
    return h_cross, v_cross


@dataclass(frozen=True)
class CoareaReport:
    bulk_integral: float
    levelwise_integral: float
    rel_gap: float


def coarea_check(field: ComplexField, radius: float, n_levels: int = 32) -> CoareaReport:
    """Numerical two-sided coarea identity for u = |f| on {|f| < radius}.

    The bulk side integrates |grad u| over the sublevel region; the level side
    integrates the level-curve length over a midpoint ladder of levels.  Both
    sides are computed independently.
    """
    u = np.abs(field.values)
    gx = np.gradient(u, field.grid.hx, axis=0, edge_order=2)
    gy = np.gradient(u, field.grid.hy, axis=1, edge_order=2)
    mag = np.hypot(gx, gy)
    lhs = float(mag[u < radius].sum() * field.grid.cell_area)

    dy = radius / n_levels
    levels = (np.arange(n_levels) + 0.5) * dy
    rhs = 0.0
    for lev in levels:
        rhs += extract_norm_level(field, float(lev)).total_length * dy
    gap = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
    return CoareaReport(bulk_integral=lhs, levelwise_integral=float(rhs), rel_gap=gap)


def curves_to_csv(curves: LevelCurveSet) -> str:
    lines = ["x0,y0,x1,y1,len"]
    for (x0, y0, x1, y1), ln in zip(curves.segments, curves.lengths):
        lines.append(f"{fmt(x0)},{fmt(y0)},{fmt(x1)},{fmt(y1)},{fmt(ln)}")
    return "\n".join(lines) + "\n"


def curves_to_svg(field: ComplexField, curve_sets, width: int = 640) -> str:
    """SVG with a coarse |f| heatmap under the given curve sets."""
    grid = field.grid
    wx = grid.xmax - grid.xmin
    wy = grid.ymax - grid.ymin
    height = max(1, int(round(width * wy / wx)))

    mag = np.abs(field.values)
    step = max(1, max(grid.nx, grid.ny) // 96)
    tiles = mag[::step, ::step]
    vmax = tiles.max() or 1.0

    def sx(x):
        return (x - grid.xmin) / wx * width

    def sy(y):
        return (grid.ymax - y) / wy * height

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">']
    tile_w = width * step * grid.hx / wx
    tile_h = height * step * grid.hy / wy
    for i in range(tiles.shape[0]):
        for j in range(tiles.shape[1]):
            shade = int(round(255 * (1.0 - tiles[i, j] / vmax)))
            px = sx(grid.xmin + i * step * grid.hx)
            py = sy(grid.ymin + (j * step + step) * grid.hy)
            parts.append(f'<rect x="{px:.2f}" y="{py:.2f}" width="{tile_w + 0.5:.2f}" '
                         f'height="{tile_h + 0.5:.2f}" fill="rgb({shade},{shade},255)"/>')
    colors = ["#d62728", "#2ca02c", "#ff7f0e", "#9467bd"]
    for idx, cs in enumerate(curve_sets):
        col = colors[idx % len(colors)]
        for x0, y0, x1, y1 in cs.segments:
            parts.append(f'<line x1="{sx(x0):.2f}" y1="{sy(y0):.2f}" '
                         f'x2="{sx(x1):.2f}" y2="{sy(y1):.2f}" '
                         f'stroke="{col}" stroke-width="1.5"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
