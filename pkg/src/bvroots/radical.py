"""Single-valued radical construction with branch cuts.

Covers the exponent case split for Z^r = f, the monodromy classification of
the sign map around zero clusters of f, and the construction of a bounded
variation selection: a per-node branch of the logarithm anchored at the cut
direction when a cut is required, or a spanning-tree phase unwrapping when a
continuous selection exists.  The selection is extended by zero across the
zero set of f.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import ndimage

from .cut_select import BranchCut
from .field_core import ComplexField, Grid2D
from .levelset import sign_level_crossing_edges

__all__ = [
    "RadicalCase",
    "RadicalPlan",
    "Rationality",
    "Decision",
    "MonodromyClass",
    "SbvField",
    "reduce_exponent",
    "classify_exponent",
    "classify_monodromy",
    "construct_radical",
    "zero_clusters",
    "loop_winding",
    "ZeroCluster",
]

RATIONAL_DENOMINATOR_CAP = 10 ** 6
# Cluster loops are drawn this many cells away from the cells flagged as
# containing zeros.
LOOP_MARGIN = 2


class RadicalCase(enum.Enum):
    POWER_ONLY = "power-only"
    POWER_TIMES_RADICAL = "power-times-radical"
    DIRECT = "direct"


@dataclass(frozen=True)
class Rationality:
    """Detected arithmetic class of the exponent."""

    kind: str  # "integer" | "rational" | "irrational"
    numerator: int | None = None
    denominator: int | None = None

    def label(self) -> str:
        if self.kind == "integer":
            return f"integer({self.numerator})"
        if self.kind == "rational":
            return f"rational({self.numerator}/{self.denominator})"
        return "irrational"


@dataclass(frozen=True)
class RadicalPlan:
    """Normal form r = ell + beta and the construction route it dictates."""

    r: float
    ell: int
    beta: float
    case: RadicalCase
    prepower: int
    reduced_r: float
    rationality: Rationality


class Decision(enum.Enum):
    CONTINUOUS_EXISTS = "ContinuousExists"
    CUT_REQUIRED = "CutRequired"


@dataclass(frozen=True)
class MonodromyClass:
    winding_numbers: list
    decision: Decision
    rationality: Rationality


@dataclass(frozen=True)
class ZeroCluster:
    """Connected cluster of cells containing zeros, with its probing loop."""

    i0: int
    i1: int
    j0: int
    j1: int  # inclusive node ranges of the surrounding loop rectangle

    @property
    def bbox(self):
        return (self.i0, self.i1, self.j0, self.j1)


@dataclass(frozen=True)
class SbvField:
    """A constructed radical selection with its cut bookkeeping.

    ``lam`` holds the selection, zero on ``zero_mask``; ``cut_h_edges`` and
    ``cut_v_edges`` mark the grid edges crossed by the cut curve.
    """

    lam: ComplexField
    cut: BranchCut | None
    r: float
    zero_mask: np.ndarray
    plan: RadicalPlan
    cut_h_edges: np.ndarray
    cut_v_edges: np.ndarray

    @property
    def grid(self) -> Grid2D:
        return self.lam.grid


def classify_exponent(r: float, max_denominator: int = RATIONAL_DENOMINATOR_CAP
                      ) -> Rationality:
    """Continued-fraction rationality detection with a denominator cap.

    A float is treated as rational when some fraction with denominator at
    most the cap reproduces it to within a machine-precision-scale tolerance;
    anything beyond the cap counts as irrational.
    """
    if r <= 0.0:
        raise ValueError("exponent must be positive")
    approx = Fraction(r).limit_denominator(max_denominator)
    err = abs(r - approx.numerator / approx.denominator)
    if err <= 1e-15 * max(1.0, abs(r)):
        if approx.denominator == 1:
            return Rationality("integer", int(approx.numerator), 1)
        return Rationality("rational", int(approx.numerator), int(approx.denominator))
    return Rationality("irrational")


def reduce_exponent(r: float) -> RadicalPlan:
    """Case split for the unique representation r = ell + beta, beta in (0, 1].

    For r <= 1 the radical is either a plain integer power of f (1/beta an
    integer) or an integer power times a radical with exponent 1/frac(1/beta);
    for r > 1 the radical is constructed directly.
    """
    if r <= 0.0:
        raise ValueError("exponent must be positive")
    rat = classify_exponent(r)
    if rat.kind == "integer":
        n = rat.numerator
        ell, beta = n - 1, 1.0
        if n == 1:
            return RadicalPlan(r, 0, 1.0, RadicalCase.POWER_ONLY, 1, 1.0, rat)
        return RadicalPlan(r, ell, beta, RadicalCase.DIRECT, 0, float(r), rat)
    if r > 1.0:
        ell = int(np.floor(r))
        return RadicalPlan(r, ell, r - ell, RadicalCase.DIRECT, 0, float(r), rat)
    # r < 1, non-integer: beta = r
    if rat.kind == "rational":
        p, q = rat.numerator, rat.denominator
        if p == 1:
            return RadicalPlan(r, 0, r, RadicalCase.POWER_ONLY, q, 1.0, rat)
        prepower = q // p
        reduced = p / (q - prepower * p)
        return RadicalPlan(r, 0, r, RadicalCase.POWER_TIMES_RADICAL,
                           prepower, float(reduced), rat)
    inv = 1.0 / r
    prepower = int(np.floor(inv))
    frac = inv - prepower
    return RadicalPlan(r, 0, r, RadicalCase.POWER_TIMES_RADICAL,
                       prepower, 1.0 / frac, rat)


# --- zero clusters and winding numbers -------------------------------------

def zero_clusters(field: ComplexField, zero_eps: float | None = None,
                  margin: int = LOOP_MARGIN) -> list:
    """Locate zero clusters of f and surrounding loop rectangles.

    A cell is flagged when both Re f and Im f change sign across it or when a
    corner falls below the zero threshold; flagged cells are grouped by
    8-connectivity and loops whose rectangles overlap are merged.  Flat zero
    regions (below threshold at whole cells) that reach the boundary are
    dropped: no loop inside the domain encircles them.  Raises ``ValueError``
    when a point-like cluster loop would leave the grid (zero at boundary).
    """
    if zero_eps is None:
        zero_eps = 1e-8 * field.abs_max
    v = field.values
    re, im = v.real, v.imag

    def crossings(comp):
        c00, c10 = comp[:-1, :-1], comp[1:, :-1]
        c11, c01 = comp[1:, 1:], comp[:-1, 1:]
        cmin = np.minimum(np.minimum(c00, c10), np.minimum(c11, c01))
        cmax = np.maximum(np.maximum(c00, c10), np.maximum(c11, c01))
        return (cmin <= 0.0) & (cmax >= 0.0)

    small = np.abs(v) <= zero_eps
    cell_small = small[:-1, :-1] | small[1:, :-1] | small[1:, 1:] | small[:-1, 1:]
    # A cell is "deep" when f is below the zero threshold at all four corners;
    # clusters containing deep cells are flat zero regions, not point zeros.
    deep = small[:-1, :-1] & small[1:, :-1] & small[1:, 1:] & small[:-1, 1:]
    zero_cells = (crossings(re) & crossings(im)) | cell_small
    if not np.any(zero_cells):
        return []

    labels, n = ndimage.label(zero_cells, structure=np.ones((3, 3), dtype=int))
    boxes = []
    nx, ny = field.grid.nx, field.grid.ny
    for lab in range(1, n + 1):
        member = labels == lab
        ii, jj = np.nonzero(member)
        box = [int(ii.min()), int(ii.max()), int(jj.min()), int(jj.max())]
        flat = bool(np.any(deep & member))
        rect = [box[0] - margin, box[1] + 1 + margin,
                box[2] - margin, box[3] + 1 + margin]
        outside = rect[0] < 0 or rect[2] < 0 or rect[1] > nx - 1 or rect[3] > ny - 1
        if flat and outside:
            # A flat zero region reaching the boundary cannot be encircled by
            # any loop inside the domain, so it imposes no winding condition.
            continue
        boxes.append(rect)

    rects = boxes
    merged = True
    while merged:
        merged = False
        out = []
        while rects:
            cur = rects.pop()
            i = 0
            while i < len(out):
                o = out[i]
                if not (cur[1] < o[0] or o[1] < cur[0]
                        or cur[3] < o[2] or o[3] < cur[2]):
                    cur = [min(cur[0], o[0]), max(cur[1], o[1]),
                           min(cur[2], o[2]), max(cur[3], o[3])]
                    out.pop(i)
                    merged = True
                else:
                    i += 1
            out.append(cur)
        rects = out

    clusters = []
    for i0, i1, j0, j1 in sorted(rects):
        if i0 < 0 or j0 < 0 or i1 > field.grid.nx - 1 or j1 > field.grid.ny - 1:
            raise ValueError("zero cluster touches the domain boundary; "
                             "winding number undefined")
        clusters.append(ZeroCluster(i0, i1, j0, j1))
    return clusters


def _loop_nodes(i0, i1, j0, j1):
    """Counterclockwise node loop along a rectangle boundary (closed)."""
    nodes = []
    nodes += [(i, j0) for i in range(i0, i1)]
    nodes += [(i1, j) for j in range(j0, j1)]
    nodes += [(i, j1) for i in range(i1, i0, -1)]
    nodes += [(i0, j) for j in range(j1, j0, -1)]
    nodes.append((i0, j0))
    return nodes


def loop_winding(field: ComplexField, i0: int, i1: int, j0: int, j1: int,
                 zero_eps: float | None = None) -> int:
    """Winding number of sgn(f) along a rectangular node loop.

    Phase increments per step are taken in (-pi, pi] and summed; the loop must
    stay clear of the zero set.
    """
    if zero_eps is None:
        zero_eps = 1e-8 * field.abs_max
    nodes = _loop_nodes(i0, i1, j0, j1)
    vals = np.array([field.values[i, j] for i, j in nodes])
    if np.any(np.abs(vals) <= zero_eps):
        raise ValueError("winding loop passes through the zero set")
    steps = np.angle(vals[1:] * np.conj(vals[:-1]))
    return int(np.rint(steps.sum() / (2.0 * np.pi)))


def _continuity_decision(windings, rationality: Rationality) -> Decision:
    if rationality.kind == "irrational":
        ok = all(w == 0 for w in windings)
    else:
        a = rationality.numerator
        ok = all(w % a == 0 for w in windings)
    return Decision.CONTINUOUS_EXISTS if ok else Decision.CUT_REQUIRED


def _cluster_winding(field: ComplexField, cluster: ZeroCluster,
                     zero_eps: float | None) -> int:
    """Winding along the cluster loop, shrinking the margin when the widest
    rectangle strays into the zero set (tight zero support)."""
    i0, i1, j0, j1 = cluster.bbox
    last_err: Exception = ValueError("degenerate cluster rectangle")
    for d in range(0, LOOP_MARGIN + 1):
        if i0 + d >= i1 - d or j0 + d >= j1 - d:
            break
        try:
            return loop_winding(field, i0 + d, i1 - d, j0 + d, j1 - d,
                                zero_eps=zero_eps)
        except ValueError as err:
            last_err = err
    raise last_err


def classify_monodromy(field: ComplexField, r: float,
                       zero_eps: float | None = None) -> MonodromyClass:
    """Decide whether a continuous solution of Z^r = f exists on the grid.

    Zeros of f are located by sign-change cells; each cluster contributes the
    winding number of sgn(f) along a surrounding loop.  A continuous selection
    exists iff every winding is a multiple of the numerator of r (rational r)
    or zero (irrational r).
    """
    rat = classify_exponent(r)
    clusters = zero_clusters(field, zero_eps)
    windings = [_cluster_winding(field, c, zero_eps) for c in clusters]
    return MonodromyClass(winding_numbers=windings,
                          decision=_continuity_decision(windings, rat),
                          rationality=rat)


# --- construction -----------------------------------------------------------

def _unwrap_phase(values: np.ndarray, mask: np.ndarray,
                  avoid: np.ndarray | None = None):
    """Spanning-tree phase lift of arg(f) over unmasked nodes.

    Breadth-first in row-major order, adding the wrapped increment
    arg(f_b / f_a) along each tree edge.  Any two lifts of the same node
    differ by 2*pi times a loop winding, which is harmless for exponents
    whose monodromy condition holds.  Returns (theta, visited).

    Close to a zero the per-edge increment of arg(f) can exceed pi and alias,
    so nodes flagged in ``avoid`` are skipped here and lifted afterwards by
    :func:`_fill_deferred`.
    """
    nx, ny = values.shape
    theta = np.full((nx, ny), np.nan)
    base = np.angle(values)
    visited = np.zeros((nx, ny), dtype=bool)
    if avoid is None:
        avoid = np.zeros((nx, ny), dtype=bool)

    def sweep(allowed):
        for si in range(nx):
            for sj in range(ny):
                if not allowed[si, sj] or visited[si, sj]:
                    continue
                # each fresh component anchors at its principal argument
                theta[si, sj] = base[si, sj]
                visited[si, sj] = True
                queue = deque([(si, sj)])
                while queue:
                    i, j = queue.popleft()
                    vc = values[i, j]
                    tc = theta[i, j]
                    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                        a, b = i + di, j + dj
                        if 0 <= a < nx and 0 <= b < ny and not visited[a, b] \
                                and allowed[a, b]:
                            theta[a, b] = tc + np.angle(values[a, b] * np.conj(vc))
                            visited[a, b] = True
                            queue.append((a, b))

    sweep(~mask & ~avoid)
    return theta, visited


def _fill_deferred(values: np.ndarray, mask: np.ndarray, theta: np.ndarray,
                   visited: np.ndarray, r: float) -> np.ndarray:
    """Lift the deferred (aliasing-prone) nodes from the outside in.

    The wrapped increment is unreliable here, so each node takes the 2*pi
    offset of its lift that keeps the phase of the r-th root continuous with
    the already-lifted neighbour.
    """
    nx, ny = values.shape
    base = np.angle(values)
    offsets = 2.0 * np.pi * np.arange(-int(np.ceil(r)) - 1, int(np.ceil(r)) + 2)

    def anchor(i, j):
        # take the neighbour with the smallest wrapped increment: a step
        # nearly diametric across the zero (increment close to pi) cannot
        # decide the sheet, a small radial step can
        best = None
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            a, b = i + di, j + dj
            if 0 <= a < nx and 0 <= b < ny and visited[a, b]:
                inc = float(np.angle(values[i, j] * np.conj(values[a, b])))
                if best is None or abs(inc) < abs(best[0]):
                    best = (inc, a, b)
        if best is None:
            return False
        inc, a, b = best
        cand = theta[a, b] + inc + offsets
        dist = np.abs(np.exp(1j * cand / r) - np.exp(1j * theta[a, b] / r))
        theta[i, j] = cand[int(np.argmin(dist))]
        visited[i, j] = True
        return True

    frontier = deque(
        (i, j) for i in range(nx) for j in range(ny)
        if not mask[i, j] and not visited[i, j]
        and any(0 <= i + di < nx and 0 <= j + dj < ny and visited[i + di, j + dj]
                for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1))))
    while frontier:
        i, j = frontier.popleft()
        if visited[i, j] or not anchor(i, j):
            continue
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            a, b = i + di, j + dj
            if 0 <= a < nx and 0 <= b < ny and not visited[a, b] \
                    and not mask[a, b]:
                frontier.append((a, b))
    for i in range(nx):
        for j in range(ny):
            if not mask[i, j] and not visited[i, j]:
                theta[i, j] = base[i, j]  # isolated pocket
    return theta


def _direct_radical(field: ComplexField, r: float, cut: BranchCut | None,
                    mask: np.ndarray) -> np.ndarray:
    values = field.values
    absf = np.abs(values)
    if cut is not None and not cut.is_empty:
        theta_cut = float(np.angle(cut.direction))
        theta = theta_cut + np.mod(np.angle(values) - theta_cut, 2.0 * np.pi)
    else:
        mono = classify_monodromy(field, r)
        if mono.decision is Decision.CUT_REQUIRED:
            raise ValueError("a branch cut is required for this field and "
                             "exponent but none was supplied")
        avoid = np.zeros(values.shape, dtype=bool)
        for cluster in zero_clusters(field):
            i0, i1, j0, j1 = cluster.bbox
            avoid[i0:i1 + 1, j0:j1 + 1] = True
        theta, visited = _unwrap_phase(values, mask, avoid)
        theta = _fill_deferred(values, mask, theta, visited, r)
        theta = np.where(mask, 0.0, theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.where(mask, 0.0, absf ** (1.0 / r) * np.exp(1j * theta / r))
    return lam


def construct_radical(field: ComplexField, r: float, cut: BranchCut | None = None,
                      zero_eps: float | None = None) -> SbvField:
    """Construct a single-valued selection of Z^r = f on the grid.

    With a cut, the argument of f is taken in the 2*pi window anchored at the
    cut direction, node by node.  Without a cut the phase is unwrapped over a
    spanning tree, which requires the monodromy classification to permit a
    continuous selection.  The selection is zero wherever |f| falls below the
    zero threshold.
    """
    plan = reduce_exponent(r)
    fmax = field.abs_max
    if zero_eps is None:
        zero_eps = 1e-8 * fmax
    values = field.values
    mask = np.abs(values) <= zero_eps

    if fmax == 0.0:
        lam = np.zeros_like(values)
    elif plan.case is RadicalCase.POWER_ONLY:
        lam = np.where(mask, 0.0, values ** plan.prepower)
    elif plan.case is RadicalCase.POWER_TIMES_RADICAL:
        mu = _direct_radical(field, plan.reduced_r, cut, mask)
        lam = np.where(mask, 0.0, values ** plan.prepower * mu)
    else:
        lam = _direct_radical(field, plan.r, cut, mask)

    if cut is not None and not cut.is_empty:
        h_edges, v_edges = sign_level_crossing_edges(field, cut.direction, zero_eps)
    else:
        h_edges = np.zeros((field.grid.nx - 1, field.grid.ny), dtype=bool)
        v_edges = np.zeros((field.grid.nx, field.grid.ny - 1), dtype=bool)

    return SbvField(lam=ComplexField(field.grid, lam), cut=cut, r=r,
                    zero_mask=mask, plan=plan,
                    cut_h_edges=h_edges, cut_v_edges=v_edges)
