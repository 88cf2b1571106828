"""Level curves of the sign and norm maps, and the coarea identity.

For f(z) = z the sign-level curve at direction y is the ray along y and the
norm-level curve at height y is the circle of radius y; integrating the
circle lengths over heights reproduces the bulk integral of |grad|f|| --
the coarea formula as a numerical identity with both sides computed
independently.
"""

import numpy as np

import bvroots as bv


def main():
    grid = bv.Grid2D(-1.0, 1.0, -1.0, 1.0, 256, 256)
    f = bv.build_field("z", grid)

    ray = bv.extract_sign_level(f, 1.0)
    print(f"sign level at y=1: length {ray.total_length:.4f} (ray of length 1)")

    diag = bv.extract_sign_level(f, np.exp(1j * np.pi / 4))
    print(f"sign level at y=e^(i pi/4): length {diag.total_length:.4f} "
          f"(diagonal, sqrt(2) = {np.sqrt(2):.4f})")

    for y in (0.25, 0.5, 0.75):
        circle = bv.extract_norm_level(f, y)
        print(f"norm level at {y}: length {circle.total_length:.4f} "
              f"(2 pi y = {2 * np.pi * y:.4f})")

    val = bv.curve_integral(ray, np.abs(f.values) ** 0.5)
    print(f"\nintegral of |f|^(1/2) along the y=1 ray: {val:.4f} "
          f"(2/3 = {2/3:.4f})")

    rep = bv.coarea_check(f, 0.9, n_levels=32)
    print("\ncoarea identity for u = |f| on {|f| < 0.9}:")
    print(f"  bulk integral of |grad u|:     {rep.bulk_integral:.5f}")
    print(f"  integral of level lengths:     {rep.levelwise_integral:.5f}")
    print(f"  relative gap:                  {rep.rel_gap:.2e}")
    print(f"  exact value pi * 0.81:         {np.pi * 0.81:.5f}")


if __name__ == "__main__":
    main()
