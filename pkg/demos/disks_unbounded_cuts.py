"""A smooth field whose square roots need cuts of arbitrarily large length.

The field sums localized linear factors over disjoint disks of radius 1/k.
Every disk center is a simple zero with winding one, so each disk forces its
own cut of length about 1/k, and the total cut length grows like the
harmonic series: no square-root selection has a finite-length discontinuity
set in the limit.
"""

import numpy as np

import bvroots as bv


def main():
    N = 32
    grid = bv.Grid2D(0.0, 4.0, 0.0, 2.0, 16 * N + 1, 8 * N + 1)
    field = bv.build_disks_field(N, grid)
    covered = float((np.abs(field.values) > 0).mean()) * 8.0
    print(f"disks 1..{N}: covered area {covered:.4f} "
          f"(limit pi^3/6 = {np.pi ** 3 / 6:.4f})")

    report = bv.disks_cut_length(N, field)
    print(f"\n{'N':>4s} {'cut length':>12s} {'H_N / 2':>10s}")
    cum = np.cumsum(report.per_disk)
    n = 1
    while n <= N:
        print(f"{n:4d} {cum[n - 1]:12.4f} {bv.harmonic_number(n) / 2:10.4f}")
        n *= 2
    print(f"\ntotal cut length for N={N}: {report.total:.4f}, "
          f"lower bound H_N/2 = {report.lower_bound:.4f}")
    print("the lower bound grows like (ln 2)/2 per doubling "
          f"= {np.log(2) / 2:.4f}, so the total is unbounded in N")


if __name__ == "__main__":
    main()
