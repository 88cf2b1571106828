"""SBV parameterization of all roots of a polynomial field over a 2D grid.

Monodromy of the root sheets is detected as permutation holonomy around the
zero clusters of the discriminant.  When nontrivial, a cut is placed along
the cheapest sign-level curve of the discriminant (integrand scaled to the
root-separation exponent), root tuples are solved per node, and the sheets
are glued across non-cut edges by minimal-distance matching.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .cut_select import BranchCut, scan_directions
from .field_core import ComplexField, Grid2D, fmt
from .levelset import sign_level_crossing_edges
from .radical import zero_clusters, ZeroCluster, _loop_nodes
from .roots1d import min_matching
from .variation import variation_decompose_values

__all__ = [
    "RootField",
    "HolonomyReport",
    "discriminant_field",
    "plaquette_holonomy",
    "plaquette_identity_violations",
    "build_root_field",
    "solve_field_roots",
    "multiset_error",
    "perm_to_cycles",
    "cut_edges_to_csv",
    "sheet_to_csv",
]

DISC_CLUSTER_EPS_REL = 1e-6
HOLONOMY_CLEARANCE = 2  # cells a probing loop must keep from a zero cluster
ENUMERATION_LIMIT_CHECK = 6  # plaquette verification enumerates n! matchings


@dataclass(frozen=True)
class HolonomyReport:
    """Per-cluster loop permutations of the root sheets."""

    clusters: list          # (ZeroCluster, permutation ndarray) pairs
    nontrivial: bool

    def cycle_strings(self) -> list:
        return [perm_to_cycles(perm) for _, perm in self.clusters]


@dataclass(frozen=True)
class RootField:
    """Glued n-sheeted root samples with cut bookkeeping and variation."""

    grid: Grid2D
    lam: np.ndarray                 # (nx, ny, n)
    coeff_fields: tuple
    cut: BranchCut | None
    cut_h_edges: np.ndarray
    cut_v_edges: np.ndarray
    cut_jumps: np.ndarray           # (M, 5): x0, y0, x1, y1, jump per cut edge
    holonomy: HolonomyReport
    variation: tuple                # per-sheet VariationReport
    collision_nodes: np.ndarray     # nodes inside root-collision neighbourhoods

    @property
    def n(self) -> int:
        return self.lam.shape[2]


def perm_to_cycles(perm) -> str:
    """Cycle-notation string of a permutation, fixed points omitted."""
    perm = list(perm)
    seen = [False] * len(perm)
    parts = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = perm[nxt]
        parts.append("(" + " ".join(str(c + 1) for c in cyc) + ")")
    return "".join(parts) if parts else "id"


# --- discriminant -----------------------------------------------------------

def _sylvester_resultant(coeff_stack: np.ndarray) -> np.ndarray:
    """Resultant of P and P' for a batch of monic coefficient rows.

    ``coeff_stack`` has shape (..., n) holding (a_1, ..., a_n); the result is
    the determinant of the (2n-1) x (2n-1) Sylvester matrix per entry.
    """
    a = np.asarray(coeff_stack, dtype=np.complex128)
    n = a.shape[-1]
    batch = a.shape[:-1]
    p = np.concatenate([np.ones(batch + (1,), dtype=np.complex128), a], axis=-1)
    dcoef = np.arange(n, 0, -1, dtype=np.complex128)
    dp = p[..., :-1] * dcoef
    size = 2 * n - 1
    M = np.zeros(batch + (size, size), dtype=np.complex128)
    for row in range(n - 1):
        M[..., row, row:row + n + 1] = p
    for row in range(n):
        M[..., n - 1 + row, row:row + n] = dp
    return np.linalg.det(M)


def discriminant_field(coeff_fields) -> ComplexField:
    """Pointwise discriminant of the monic polynomial field.

    Computed as (-1)^(n(n-1)/2) times the resultant of (P, P'); for n = 2 this
    is a_1^2 - 4 a_2.
    """
    fields = list(coeff_fields)
    n = len(fields)
    if n < 2:
        raise ValueError("discriminant needs degree >= 2")
    grid = fields[0].grid
    stack = np.stack([f.values for f in fields], axis=-1)
    sign = (-1) ** ((n * (n - 1)) // 2)
    return ComplexField(grid, sign * _sylvester_resultant(stack))


# --- pointwise solving and holonomy ------------------------------------------

def solve_field_roots(coeff_fields) -> np.ndarray:
    """Companion-matrix eigenvalues per node, shape (nx, ny, n), solver order."""
    fields = list(coeff_fields)
    n = len(fields)
    grid = fields[0].grid
    a = np.stack([f.values for f in fields], axis=-1).reshape(-1, n)
    comp = np.zeros((a.shape[0], n, n), dtype=np.complex128)
    if n > 1:
        idx = np.arange(n - 1)
        comp[:, idx + 1, idx] = 1.0
    comp[:, :, -1] = -a[:, ::-1]
    roots = np.linalg.eigvals(comp)
    return roots.reshape(grid.nx, grid.ny, n)


def _cluster_clearance(cluster: ZeroCluster, loop_rect, margin: int) -> bool:
    i0, i1, j0, j1 = loop_rect
    return (cluster.i0 - margin <= i0 and i1 <= cluster.i1 + margin
            and cluster.j0 - margin <= j0 and j1 <= cluster.j1 + margin)


def _loop_permutation(roots_at, nodes) -> np.ndarray:
    """Continue the tuple along the closed node loop; return the end-to-start
    matching permutation."""
    start = roots_at(nodes[0])
    cur = start
    for node in nodes[1:]:
        nxt = roots_at(node)
        cur = nxt[min_matching(cur, nxt)]
    return min_matching(cur, start)


def plaquette_holonomy(coeff_fields, loop, disc: ComplexField | None = None
                       ) -> np.ndarray:
    """Permutation acquired by the root tuple along a closed grid loop.

    ``loop`` is a sequence of (i, j) node indices; the first node is also the
    implicit last.  Raises ``ValueError`` when the loop comes within
    ``HOLONOMY_CLEARANCE`` cells of a discriminant zero cluster.
    """
    fields = list(coeff_fields)
    if disc is None:
        disc = discriminant_field(fields)
    clusters = zero_clusters(disc, DISC_CLUSTER_EPS_REL * disc.abs_max, margin=0)
    for i, j in loop:
        for c in clusters:
            if (c.i0 - HOLONOMY_CLEARANCE <= i <= c.i1 + HOLONOMY_CLEARANCE
                    and c.j0 - HOLONOMY_CLEARANCE <= j <= c.j1 + HOLONOMY_CLEARANCE):
                raise ValueError("loop passes too close to a discriminant zero")
    stack = np.stack([f.values for f in fields], axis=-1)

    from .roots1d import solve_pointwise

    def roots_at(node):
        return solve_pointwise(stack[node[0], node[1]])

    nodes = list(loop)
    if nodes[0] != nodes[-1]:
        nodes = nodes + [nodes[0]]
    return _loop_permutation(roots_at, nodes)


# --- gluing -------------------------------------------------------------------

def _glue_sheets(raw: np.ndarray, h_cut: np.ndarray, v_cut: np.ndarray,
                 amb_nodes: np.ndarray) -> np.ndarray:
    """Order root tuples into sheets, continuous across glued edges.

    Three staged breadth-first floods, all matching each node to its flood
    parent by minimal distance:

    1. from row-major seeds over edges that are neither cut nor inside a
       collision neighbourhood — each cut-separated component anchors
       independently and stays continuous;
    2. from the assigned region across collision-neighbourhood edges, filling
       nodes whose matching is ambiguous anyway (never across the cut);
    3. fresh anchors for anything still unreached (pockets enclosed by cut).
    """
    nx, ny, n = raw.shape
    h_amb = amb_nodes[:-1, :] | amb_nodes[1:, :]
    v_amb = amb_nodes[:, :-1] | amb_nodes[:, 1:]
    h_clean = ~h_cut & ~h_amb
    v_clean = ~v_cut & ~v_amb
    h_fill = ~h_cut
    v_fill = ~v_cut

    lam = np.empty_like(raw)
    assigned = np.zeros((nx, ny), dtype=bool)

    def edge_ok(i, j, a, b, h_mask, v_mask):
        if j == b:
            return h_mask[min(i, a), j]
        return v_mask[i, min(j, b)]

    def flood(queue, h_mask, v_mask):
        while queue:
            i, j = queue.popleft()
            ref = lam[i, j]
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                a, b = i + di, j + dj
                if 0 <= a < nx and 0 <= b < ny and not assigned[a, b] \
                        and edge_ok(i, j, a, b, h_mask, v_mask):
                    lam[a, b] = raw[a, b][min_matching(ref, raw[a, b])]
                    assigned[a, b] = True
                    queue.append((a, b))

    # stage 1: clean components, independently anchored
    for sj in range(ny):
        for si in range(nx):
            if assigned[si, sj] or amb_nodes[si, sj]:
                continue
            lam[si, sj] = raw[si, sj]
            assigned[si, sj] = True
            flood(deque([(si, sj)]), h_clean, v_clean)

    # stage 2: collision pockets, glued to their surroundings
    if not assigned.all():
        frontier = deque(
            (i, j) for j in range(ny) for i in range(nx)
            if assigned[i, j] and any(
                0 <= i + di < nx and 0 <= j + dj < ny
                and not assigned[i + di, j + dj]
                and edge_ok(i, j, i + di, j + dj, h_fill, v_fill)
                for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1))))
        flood(frontier, h_fill, v_fill)

    # stage 3: pockets fully enclosed by the cut
    for sj in range(ny):
        for si in range(nx):
            if not assigned[si, sj]:
                lam[si, sj] = raw[si, sj]
                assigned[si, sj] = True
                flood(deque([(si, sj)]), h_fill, v_fill)
    return lam


def _identity_matching_violations(lam: np.ndarray, h_cut: np.ndarray,
                                  v_cut: np.ndarray, perms: np.ndarray) -> int:
    """Count non-cut edges where some non-identity matching beats identity."""
    tol = 1e-12

    def count(A, B, open_mask):
        a = A.reshape(-1, A.shape[-1])
        b = B.reshape(-1, B.shape[-1])
        keep = open_mask.ravel()
        if not np.any(keep):
            return 0
        a, b = a[keep], b[keep]
        ident = np.abs(a - b).sum(axis=1)
        best = np.full(ident.shape, np.inf)
        for perm in perms:
            cost = np.abs(a - b[:, perm]).sum(axis=1)
            np.minimum(best, cost, out=best)
        scale = 1.0 + np.abs(a).sum(axis=1)
        return int((ident > best + tol * scale).sum())

    bad = count(lam[:-1, :, :], lam[1:, :, :], ~h_cut)
    bad += count(lam[:, :-1, :], lam[:, 1:, :], ~v_cut)
    return bad


def multiset_error(lam: np.ndarray, coeff_fields) -> float:
    """Worst relative mismatch between Vieta coefficients of the tuples and
    the coefficient fields."""
    fields = list(coeff_fields)
    n = len(fields)
    nx, ny = fields[0].grid.nx, fields[0].grid.ny
    rebuilt = np.zeros((nx, ny, n + 1), dtype=np.complex128)
    rebuilt[..., 0] = 1.0
    for i in range(n):
        root = lam[..., i]
        upper = rebuilt[..., :i + 1].copy()
        rebuilt[..., 1:i + 2] -= root[..., None] * upper
    worst = 0.0
    for j, f in enumerate(fields):
        denom = np.maximum(np.abs(f.values), 1.0)
        worst = max(worst, float((np.abs(rebuilt[..., j + 1] - f.values) / denom).max()))
    return worst


def _cut_edge_jumps(grid: Grid2D, lam: np.ndarray, h_cut: np.ndarray,
                    v_cut: np.ndarray) -> np.ndarray:
    x, y = grid.x, grid.y
    rows = []
    ii, jj = np.nonzero(h_cut)
    for i, j in zip(ii, jj):
        jump = float(np.abs(lam[i, j] - lam[i + 1, j]).max())
        rows.append((x[i], y[j], x[i + 1], y[j], jump))
    ii, jj = np.nonzero(v_cut)
    for i, j in zip(ii, jj):
        jump = float(np.abs(lam[i, j] - lam[i, j + 1]).max())
        rows.append((x[i], y[j], x[i], y[j + 1], jump))
    if not rows:
        return np.empty((0, 5))
    return np.array(sorted(rows))


def build_root_field(coeff_fields, K: int = 16, p: float | None = None) -> RootField:
    """Construct the glued SBV root field with cuts along discriminant levels.

    Holonomy is probed around every discriminant zero cluster; when any loop
    permutation is nontrivial, the cut is the minimal-jump sign-level curve of
    the discriminant with integrand exponent 1/(n(n-1)).  After gluing, every
    non-cut edge is verified to carry the identity as its minimal matching;
    failure raises ``RuntimeError`` (resolution too coarse to separate the
    detected holonomy).
    """
    fields = list(coeff_fields)
    n = len(fields)
    grid = fields[0].grid
    if p is None:
        p = n / (n - 1) if n > 1 else 2.0

    disc = discriminant_field(fields)
    if disc.abs_max == 0.0:
        raise ValueError("discriminant vanishes identically")
    raw = solve_field_roots(fields)

    clusters = zero_clusters(disc, DISC_CLUSTER_EPS_REL * disc.abs_max)
    holo_pairs = []
    for cluster in clusters:
        nodes = _loop_nodes(*cluster.bbox)
        perm = _loop_permutation(lambda nd: raw[nd[0], nd[1]], nodes)
        holo_pairs.append((cluster, perm))
    nontrivial = any(np.any(perm != np.arange(perm.size)) for _, perm in holo_pairs)
    holonomy = HolonomyReport(clusters=holo_pairs, nontrivial=nontrivial)

    if nontrivial:
        scan = scan_directions(disc, r=float(n * (n - 1)), K=K)
        cut = scan.best
        h_cut, v_cut = sign_level_crossing_edges(disc, cut.direction)
    else:
        cut = None
        h_cut = np.zeros((grid.nx - 1, grid.ny), dtype=bool)
        v_cut = np.zeros((grid.nx, grid.ny - 1), dtype=bool)

    # Matching is ambiguous where root sheets collide, so the glue never
    # tracks through a cluster neighbourhood: those edges are deferred and
    # the nodes inside are filled last.
    amb_nodes = np.zeros((grid.nx, grid.ny), dtype=bool)
    for cluster in clusters:
        amb_nodes[cluster.i0 + 1:cluster.i1, cluster.j0 + 1:cluster.j1] = True
    h_amb = amb_nodes[:-1, :] | amb_nodes[1:, :]
    v_amb = amb_nodes[:, :-1] | amb_nodes[:, 1:]

    lam = _glue_sheets(raw, h_cut, v_cut, amb_nodes)

    from .roots1d import _perm_table
    perms = _perm_table(n) if n <= 6 else None
    if perms is not None:
        bad = _identity_matching_violations(lam, h_cut | h_amb, v_cut | v_amb, perms)
        if bad:
            raise RuntimeError(
                f"{bad} non-cut edges still carry a sheet swap after gluing; "
                "the cut does not separate the detected holonomy "
                "(resolution too coarse?)")

    cut_jumps = _cut_edge_jumps(grid, lam, h_cut, v_cut)
    curve = cut.curve if cut is not None else None
    variation = tuple(
        variation_decompose_values(lam[:, :, i], grid, p,
                                   cut_h_edges=h_cut, cut_v_edges=v_cut,
                                   cut_curve=curve)
        for i in range(n))

    return RootField(grid=grid, lam=lam, coeff_fields=tuple(fields), cut=cut,
                     cut_h_edges=h_cut, cut_v_edges=v_cut, cut_jumps=cut_jumps,
                     holonomy=holonomy, variation=variation,
                     collision_nodes=amb_nodes)


def plaquette_identity_violations(field: RootField) -> int:
    """Count grid plaquettes in the cut complement with nonidentity holonomy.

    Per-edge matching permutations are recomputed from scratch (argmin over
    all permutations of the summed sheet distances) and composed around every
    cell whose four edges avoid the cut and the collision neighbourhoods, so
    the check is independent of how the sheets were glued.
    """
    lam = field.lam
    n = field.n
    if n > ENUMERATION_LIMIT_CHECK:
        raise ValueError("plaquette verification supports degree <= 6")
    from .roots1d import _perm_table
    perms = _perm_table(n)
    nperm = perms.shape[0]

    def edge_perm_index(A, B, chunk=65536):
        a = A.reshape(-1, n)
        b = B.reshape(-1, n)
        out = np.empty(a.shape[0], dtype=int)
        for lo in range(0, a.shape[0], chunk):
            hi = min(lo + chunk, a.shape[0])
            costs = np.empty((nperm, hi - lo))
            for q, perm in enumerate(perms):
                costs[q] = np.abs(b[lo:hi, perm] - a[lo:hi]).sum(axis=1)
            out[lo:hi] = np.argmin(costs, axis=0)
        return out.reshape(A.shape[:2])

    h_idx = edge_perm_index(lam[:-1, :, :], lam[1:, :, :])   # left -> right
    v_idx = edge_perm_index(lam[:, :-1, :], lam[:, 1:, :])   # down -> up

    # Composition and inversion tables over the permutation list.
    lookup = {tuple(p): q for q, p in enumerate(perms)}
    comp = np.empty((nperm, nperm), dtype=int)
    inv = np.empty(nperm, dtype=int)
    for qa, pa in enumerate(perms):
        inv[qa] = lookup[tuple(np.argsort(pa))]
        for qb, pb in enumerate(perms):
            comp[qa, qb] = lookup[tuple(pa[pb])]

    bottom = h_idx[:, :-1]
    top = h_idx[:, 1:]
    left = v_idx[:-1, :]
    right = v_idx[1:, :]
    # around the cell: a->b (bottom), b->c (right), c->d (top reversed),
    # d->a (left reversed); the composite must be the identity index 0
    loop = comp[inv[left], comp[inv[top], comp[right, bottom]]]

    amb = field.collision_nodes
    open_h = ~field.cut_h_edges & ~(amb[:-1, :] | amb[1:, :])
    open_v = ~field.cut_v_edges & ~(amb[:, :-1] | amb[:, 1:])
    clean = (open_h[:, :-1] & open_h[:, 1:] & open_v[:-1, :] & open_v[1:, :])
    return int(np.count_nonzero(clean & (loop != 0)))


def cut_edges_to_csv(field: RootField) -> str:
    lines = ["x0,y0,x1,y1,jump"]
    for x0, y0, x1, y1, jump in field.cut_jumps:
        lines.append(f"{fmt(x0)},{fmt(y0)},{fmt(x1)},{fmt(y1)},{fmt(jump)}")
    return "\n".join(lines) + "\n"


def sheet_to_csv(field: RootField) -> str:
    n = field.n
    X, Y = field.grid.mesh()
    header = "x,y," + ",".join(f"re_{i+1},im_{i+1}" for i in range(n))
    lines = [header]
    lamflat = field.lam.reshape(-1, n)
    for (xi, yi), row in zip(zip(X.ravel(), Y.ravel()), lamflat):
        vals = []
        for i in range(n):
            vals.append(fmt(row[i].real))
            vals.append(fmt(row[i].imag))
        lines.append(f"{fmt(xi)},{fmt(yi)}," + ",".join(vals))
    return "\n".join(lines) + "\n"
