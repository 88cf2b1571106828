"""Glue the two sheets of Z^2 = z over a grid into a BV parameterization.

The discriminant of Z^2 - z is 4z; continuing the root pair around its zero
swaps the sheets, so one cut along a sign-level ray of the discriminant is
placed and the tuples are glued by minimal matching across every other edge.
The jump height across the cut integrates to 4/3 per sheet, matching the
radical picture.
"""

import pathlib

import numpy as np

import bvroots as bv

OUT = pathlib.Path("demo_output/root_sheets_2d")


def main():
    grid = bv.Grid2D(-1.0, 1.0, -1.0, 1.0, 256, 256)
    a1 = bv.build_field({"kind": "expr", "body": "0*z"}, grid)
    a2 = bv.build_field({"kind": "expr", "body": "-z"}, grid)

    disc = bv.discriminant_field([a1, a2])
    z = grid.zmesh()
    print(f"discriminant vs 4z, max deviation: "
          f"{np.abs(disc.values - 4 * z).max():.2e}")

    rf = bv.build_root_field([a1, a2], K=16)
    print(f"holonomy around discriminant zeros: {rf.holonomy.cycle_strings()}")
    print(f"cut direction: {rf.cut.direction:.3f}, "
          f"cut length: {rf.cut.curve.total_length:.4f}")
    print(f"per-node multiset error: {bv.multiset_error(rf.lam, [a1, a2]):.2e}")
    for i, rep in enumerate(rf.variation, 1):
        print(f"sheet {i}: ac = {rep.ac_part:.4f}, jump = {rep.jump_part:.4f} "
              f"(4/3 = {4/3:.4f})")

    smooth = bv.build_root_field(
        [a1, bv.build_field({"kind": "expr", "body": "-z^2"}, grid)], K=16)
    print(f"\nZ^2 = z^2 for comparison: holonomy "
          f"{smooth.holonomy.cycle_strings()}, cut: {smooth.cut}, "
          f"ac per sheet ~ {smooth.variation[0].ac_part:.4f} (sheets are +-z)")

    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "cuts.csv").write_text(bv.roots2d.cut_edges_to_csv(rf))
    print(f"\ncut edges with jump heights written to {OUT/'cuts.csv'}")


if __name__ == "__main__":
    main()
