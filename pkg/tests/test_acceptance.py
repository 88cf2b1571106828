"""Acceptance gate: each test pins one criterion at its stated tolerance and
prints a PASS/FAIL line (run with ``pytest -s tests/test_acceptance.py``)."""

import subprocess
import sys
import time

import numpy as np

from bvroots.cut_select import scan_directions
from bvroots.disks import build_disks_field, disks_cut_length, harmonic_number
from bvroots.field_core import Grid2D, build_field
from bvroots.levelset import coarea_check
from bvroots.radical import Decision, classify_monodromy, construct_radical
from bvroots.roots1d import (build_coeff_curve, magnitude_bound_excess,
                             match_continuous, sobolev_check)
from bvroots.roots2d import (build_root_field, multiset_error,
                             plaquette_identity_violations, solve_field_roots)
from bvroots.variation import (gg_check_1d, variation_decompose,
                               variation_decompose_values)
from bvroots.verify import _curve_component_count


def report(name, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'} {name}" + (f"  ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def square_field(spec, res=256):
    return build_field(spec, Grid2D(-1.0, 1.0, -1.0, 1.0, res, res))


def test_criterion_01_radical_jump_functional():
    t0 = time.perf_counter()
    field = square_field("z")
    scan = scan_directions(field, r=2.0, K=16)
    elapsed = time.perf_counter() - t0
    best = scan.best
    axes = [1 + 0j, 1j, -1 + 0j, -1j]
    on_axis = min(abs(best.direction - a) for a in axes) < 1e-9
    target = 2.0 / 3.0
    ok = (on_axis and abs(best.jump_functional - target) <= 0.03 * target
          and elapsed < 5.0)
    report("criterion 1: radical jump functional", ok,
           f"J={best.jump_functional:.5f} target={target:.5f} t={elapsed:.2f}s")


def test_criterion_02_variation_decomposition():
    field = square_field("z")
    cut = scan_directions(field, r=2.0, K=16).candidates[0]
    sbv = construct_radical(field, 2.0, cut)
    var = variation_decompose(sbv, p=2.0)
    target = 4.0 / 3.0
    jump_ok = abs(var.jump_part - target) <= 0.04 * target

    c = 2.5 - 1.0j
    scaled = variation_decompose_values(sbv.lam.values * c, sbv.grid, 2.0,
                                        cut_h_edges=sbv.cut_h_edges,
                                        cut_v_edges=sbv.cut_v_edges,
                                        zero_mask=sbv.zero_mask,
                                        cut_curve=sbv.cut.curve)
    hom = abs(scaled.bv_total - abs(c) * var.bv_total) / (abs(c) * var.bv_total)
    ok = jump_ok and hom <= 1e-10
    report("criterion 2: variation decomposition", ok,
           f"jump={var.jump_part:.5f} target={target:.5f} hom={hom:.2e}")


def test_criterion_03_gg_weak_l2():
    t0 = time.perf_counter()
    t = np.linspace(-1.0, 1.0, 100_000)
    rep = gg_check_1d(t, t, r=2.0, k=1, alpha=1.0)
    elapsed = time.perf_counter() - t0
    target = 2.0 ** -0.5
    ok = abs(rep.lhs - target) <= 0.02 * target and elapsed < 1.0
    report("criterion 3: weak-L2 quasinorm", ok,
           f"lhs={rep.lhs:.5f} target={target:.5f} t={elapsed:.2f}s")


def test_criterion_04_sharpness_dichotomy():
    p1, p2 = [], []
    for samples in (10 ** 3, 10 ** 4, 10 ** 5):
        curve = build_coeff_curve({"n": 2,
                                   "coeffs": [{"expr": "0"}, {"expr": "-t"}],
                                   "t": [-1.0, 1.0, samples]})
        track = match_continuous(curve)
        p1.append(float(sobolev_check(track, 1.0).lp_power.max()))
        p2.append(float(sobolev_check(track, 2.0).lp_power.max()))
    value_ok = abs(p1[-1] - 2.0) <= 0.04
    growth = [p2[i + 1] / p2[i] for i in range(2)]
    ok = value_ok and all(g >= 1.20 for g in growth)
    report("criterion 4: sharpness dichotomy", ok,
           f"L1={p1[-1]:.4f} growth={[round(g, 3) for g in growth]}")


def test_criterion_05_monodromy_table():
    table = [("z", 2.0, [1], Decision.CUT_REQUIRED),
             ("z2", 2.0, [2], Decision.CONTINUOUS_EXISTS),
             ("z3", 3.0, [3], Decision.CONTINUOUS_EXISTS),
             ("z", float(np.sqrt(2.0)), [1], Decision.CUT_REQUIRED),
             ("z2", float(np.sqrt(2.0)), [2], Decision.CUT_REQUIRED)]
    rows_ok = []
    for spec, r, windings, decision in table:
        mono = classify_monodromy(square_field(spec), r)
        rows_ok.append(mono.winding_numbers == windings
                       and mono.decision is decision)
    report("criterion 5: monodromy classifier table", all(rows_ok),
           f"rows={rows_ok}")


def test_criterion_06_disks_growth():
    bounds = {4: 1.0417, 16: 1.6904, 64: 2.3603}
    totals = {}
    for N in (4, 16, 64):
        grid = Grid2D(0.0, 4.0, 0.0, 2.0, 16 * N + 1, 8 * N + 1)
        rep = disks_cut_length(N, build_disks_field(N, grid))
        totals[N] = rep.total
    ok = (all(totals[N] >= bounds[N] for N in bounds)
          and all(totals[N] >= harmonic_number(N) / 2.0 for N in bounds)
          and totals[4] < totals[16] < totals[64]
          and totals[64] > 2.0)
    report("criterion 6: disk cut-length growth", ok,
           f"totals={ {N: round(v, 4) for N, v in totals.items()} }")


def test_criterion_07_root_field():
    t0 = time.perf_counter()
    grid = Grid2D(-1.0, 1.0, -1.0, 1.0, 256, 256)
    coeffs = [build_field({"kind": "expr", "body": "0*z"}, grid),
              build_field({"kind": "expr", "body": "-z"}, grid)]
    rf = build_root_field(coeffs, K=16)
    elapsed = time.perf_counter() - t0
    components = _curve_component_count(rf.cut.curve) if rf.cut else 0
    violations = plaquette_identity_violations(rf)
    recon = multiset_error(rf.lam, coeffs)
    target = 4.0 / 3.0
    jump_ok = all(abs(v.jump_part - target) <= 0.04 * target
                  for v in rf.variation)
    ok = (components == 1 and violations == 0 and recon <= 1e-8
          and jump_ok and elapsed < 30.0)
    report("criterion 7: root field Z^2 - z", ok,
           f"components={components} violations={violations} "
           f"recon={recon:.2e} t={elapsed:.1f}s")


def test_criterion_08_root_magnitude_bound():
    worst = -np.inf
    for spec in ({"n": 2, "coeffs": [{"expr": "0"}, {"expr": "-t"}],
                  "t": [-1.0, 1.0, 2001]},
                 {"n": 2, "coeffs": [{"expr": "0"},
                                     {"expr": "-exp(2j*pi*t)"}],
                  "t": [0.0, 1.0, 2001]},
                 {"n": 3, "coeffs": [{"expr": "0"}, {"expr": "0"},
                                     {"expr": "-t"}],
                  "t": [-1.0, 1.0, 2001]},
                 {"n": 3, "coeffs": [{"expr": "-t"}, {"expr": "1+0*t"},
                                     {"expr": "t*t"}],
                  "t": [-1.0, 1.0, 2001]}):
        curve = build_coeff_curve(spec)
        track = match_continuous(curve)
        worst = max(worst, magnitude_bound_excess(track.lam, curve.coeffs))
    grid = Grid2D(-1.0, 1.0, -1.0, 1.0, 128, 128)
    for exprs in (("0*z", "-z"), ("0*z", "-z^2"), ("z", "z*(z-1)")):
        flds = [build_field({"kind": "expr", "body": e}, grid) for e in exprs]
        roots = solve_field_roots(flds)
        coeffs = np.stack([f.values for f in flds], axis=-1)
        worst = max(worst, magnitude_bound_excess(roots, coeffs))
    ok = worst <= 1e-8
    report("criterion 8: root magnitude bound", ok, f"worst excess={worst:.2e}")


def test_criterion_09_coarea_identity():
    field = square_field("z", res=512)
    rep = coarea_check(field, 0.9, n_levels=32)
    ok = rep.rel_gap <= 0.03
    report("criterion 9: coarea identity", ok,
           f"bulk={rep.bulk_integral:.5f} level={rep.levelwise_integral:.5f} "
           f"gap={rep.rel_gap:.2e}")


def test_criterion_10_determinism(tmp_path):
    blobs = []
    for run in ("a", "b"):
        out = tmp_path / run
        cmd = [sys.executable, "-m", "bvroots.cli", "verify",
               "--case", "radical_jump", "--case", "gg_weak_l2",
               "--case", "monodromy_table", "--case", "radical_bound",
               "--seed", "0", "--out", str(out)]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        blobs.append((out / "report.json").read_bytes())
    ok = blobs[0] == blobs[1]
    report("criterion 10: byte-identical verify reports", ok,
           f"{len(blobs[0])} bytes")
