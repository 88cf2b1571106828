"""Disk-sum field whose branch cuts have divergent total length.

The field is a sum of localized linear factors, one per disk D_k of radius
1/k, each flattened to zero outside its disk by a quintic smoothstep bump and
scaled by 2^-k.  Every inner half-radius disk carries a simple zero with
winding one, so a square-root selection needs a cut of length at least 1/(2k)
per disk; the cut lengths therefore grow like half the harmonic series.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cut_select import scan_directions
from .field_core import ComplexField, Grid2D, register_builtin_pattern
from .radical import Decision, classify_monodromy

__all__ = [
    "DisksSpec",
    "disk_layout",
    "build_disks_field",
    "disks_cut_length",
    "DisksCutReport",
    "harmonic_number",
    "growth_table",
    "smoothstep5",
    "RECT",
]

# The whole disk collection packs into this open rectangle.
RECT = (0.0, 4.0, 0.0, 2.0)


def smoothstep5(u: np.ndarray) -> np.ndarray:
    """Quintic smoothstep: 0 for u <= 0, 1 for u >= 1, C^2 monotone between."""
    u = np.clip(u, 0.0, 1.0)
    return u ** 3 * (10.0 - 15.0 * u + 6.0 * u ** 2)


def _bump(k: int, rho2: np.ndarray) -> np.ndarray:
    """1 - h(k^2 rho^2): equals 1 inside radius 1/(2k), 0 outside radius 1/k."""
    return 1.0 - smoothstep5((k * k * rho2 - 0.25) / 0.75)


def disk_layout(N: int) -> list:
    """Centers of disks 1..N under the dyadic column packing.

    Disks with 2^(n-1) <= k < 2^n occupy one column of 2^(n-1) stacked squares
    of side 2^(2-n); the columns tile (0, 4) x (0, 2) from the left.
    """
    if N < 1:
        raise ValueError("need at least one disk")
    centers = []
    for k in range(1, N + 1):
        n = int(np.floor(np.log2(k))) + 1   # block with 2^(n-1) <= k < 2^n
        side = 2.0 ** (2 - n)
        x_left = 4.0 * (1.0 - 2.0 ** (1 - n))
        slot = k - 2 ** (n - 1)
        centers.append(complex(x_left + side / 2.0, slot * side + side / 2.0))
    return centers


@dataclass(frozen=True)
class DisksSpec:
    """Layout of the first N disks: centers p_k, radii 1/k."""

    N: int
    centers: list
    radii: list

    @classmethod
    def build(cls, N: int) -> "DisksSpec":
        centers = disk_layout(N)
        return cls(N=N, centers=centers, radii=[1.0 / k for k in range(1, N + 1)])

    def min_gap(self) -> float:
        """Smallest center distance minus radius sum over all pairs (> 0)."""
        gap = np.inf
        for a in range(self.N):
            for b in range(a + 1, self.N):
                dist = abs(self.centers[a] - self.centers[b])
                gap = min(gap, dist - (self.radii[a] + self.radii[b]))
        return float(gap)


def build_disks_field(N: int, grid: Grid2D) -> ComplexField:
    """Sample the truncated disk-sum field on a grid covering (0,4) x (0,2).

    Requires the grid spacing to resolve the last disk: h <= 1/(4N).
    """
    spec = DisksSpec.build(N)
    if grid.xmin > RECT[0] or grid.xmax < RECT[1] or grid.ymin > RECT[2] \
            or grid.ymax < RECT[3]:
        raise ValueError(f"grid must cover the rectangle {RECT}")
    h = max(grid.hx, grid.hy)
    if h > 1.0 / (4.0 * N) + 1e-12:
        raise ValueError(f"resolution insufficient for disk {N}: "
                         f"need spacing <= {1.0 / (4.0 * N):.6g}, got {h:.6g}")
    x, y = grid.x, grid.y
    values = np.zeros((grid.nx, grid.ny), dtype=np.complex128)
    for k, p in enumerate(spec.centers, start=1):
        rad = 1.0 / k
        i0 = int(np.searchsorted(x, p.real - rad) - 1)
        i1 = int(np.searchsorted(x, p.real + rad) + 1)
        j0 = int(np.searchsorted(y, p.imag - rad) - 1)
        j1 = int(np.searchsorted(y, p.imag + rad) + 1)
        i0, j0 = max(i0, 0), max(j0, 0)
        i1, j1 = min(i1, grid.nx - 1), min(j1, grid.ny - 1)
        Z = x[i0:i1 + 1, None] + 1j * y[None, j0:j1 + 1]
        w = Z - p
        rho2 = w.real ** 2 + w.imag ** 2
        values[i0:i1 + 1, j0:j1 + 1] += _bump(k, rho2) * w * 2.0 ** (-k)
    return ComplexField(grid, values)


@dataclass(frozen=True)
class DisksCutReport:
    N: int
    per_disk: list
    total: float
    lower_bound: float   # H_N / 2
    curves: tuple = ()   # chosen cut curve per disk, in subgrid coordinates


def harmonic_number(N: int) -> float:
    return float(np.sum(1.0 / np.arange(1, N + 1)))


def disks_cut_length(N: int, field: ComplexField, r: float = 2.0,
                     K: int = 16) -> DisksCutReport:
    """Total constructed cut length for the first N disks.

    Each disk is handled on a local subgrid restricted to its own support:
    the winding-one zero forces a cut, the direction scan picks the cheapest
    sign-level ray, and its length is accumulated.
    """
    spec = DisksSpec.build(N)
    grid = field.grid
    x, y = grid.x, grid.y
    margin = 4
    per_disk = []
    curves = []
    for k, p in enumerate(spec.centers, start=1):
        rad = 1.0 / k
        i0 = max(int(np.searchsorted(x, p.real - rad)) - margin, 0)
        i1 = min(int(np.searchsorted(x, p.real + rad)) + margin, grid.nx - 1)
        j0 = max(int(np.searchsorted(y, p.imag - rad)) - margin, 0)
        j1 = min(int(np.searchsorted(y, p.imag + rad)) + margin, grid.ny - 1)
        sub = grid.subgrid(i0, i1, j0, j1)
        Z = x[i0:i1 + 1, None] + 1j * y[None, j0:j1 + 1]
        support = np.abs(Z - p) < rad
        local = ComplexField(sub, np.where(support, field.values[i0:i1 + 1,
                                                                 j0:j1 + 1], 0.0))
        mono = classify_monodromy(local, r)
        if mono.decision is not Decision.CUT_REQUIRED:
            raise RuntimeError(f"disk {k} unexpectedly admits a continuous root "
                               f"(windings {mono.winding_numbers})")
        scan = scan_directions(local, r, K)
        per_disk.append(float(scan.best.curve.total_length))
        curves.append(scan.best.curve)
    total = float(np.sum(per_disk))
    return DisksCutReport(N=N, per_disk=per_disk, total=total,
                          lower_bound=harmonic_number(N) / 2.0,
                          curves=tuple(curves))


def growth_table(field: ComplexField, N: int, r: float = 2.0, K: int = 16) -> list:
    """Rows (N', cut_length, lower_bound) for N' in powers of two up to N."""
    report = disks_cut_length(N, field, r=r, K=K)
    rows = []
    nprime = 1
    while nprime <= N:
        rows.append((nprime, float(np.sum(report.per_disk[:nprime])),
                     harmonic_number(nprime) / 2.0))
        nprime *= 2
    if rows[-1][0] != N:
        rows.append((N, report.total, report.lower_bound))
    return rows


def _disks_builtin(match, grid: Grid2D):
    return build_disks_field(int(match.group(1)), grid).values


register_builtin_pattern(r"disks\((\d+)\)", _disks_builtin)
