import numpy as np
import pytest

from bvroots.baselines import DISKS16_TAIL_MAX_PRODUCT
from bvroots.cut_select import (scan_directions, scan_to_csv, verify_level_tail,
                                verify_norm_level_growth)
from bvroots.field_core import Grid2D, build_field, scale_field


def field(spec, res=256):
    return build_field(spec, Grid2D(-1.0, 1.0, -1.0, 1.0, res, res))


def test_scan_identity_field_oracle():
    scan = scan_directions(field("z"), r=2.0, K=16)
    axes = [1, 1j, -1, -1j]
    assert min(abs(scan.best.direction - a) for a in axes) < 1e-9
    assert scan.best.jump_functional == pytest.approx(2.0 / 3.0, rel=0.03)
    # diagonal candidate j=2 at angle pi/4: J = (2/3) * 2^(3/4)
    diag = scan.candidates[2]
    assert diag.jump_functional == pytest.approx((2.0 / 3.0) * 2 ** 0.75, rel=0.03)


def test_scan_constant_field_all_empty():
    scan = scan_directions(field("one"), r=3.0, K=16)
    assert all(c.curve.is_empty and c.regular for c in scan.candidates)
    assert scan.best.jump_functional == 0.0
    assert scan.best.direction == pytest.approx(1 + 0j)


def test_scan_preconditions():
    with pytest.raises(ValueError):
        scan_directions(field("z"), r=2.0, K=4)
    with pytest.raises(ValueError):
        scan_directions(field("z"), r=0.0, K=16)
    zero = build_field({"kind": "expr", "body": "0*z"},
                       Grid2D(-1, 1, -1, 1, 64, 64))
    with pytest.raises(ValueError):
        scan_directions(zero, r=2.0, K=16)


def test_best_is_minimum_over_regular():
    scan = scan_directions(field("z2"), r=2.0, K=16)
    best = scan.best.jump_functional
    for cand in scan.candidates:
        if cand.regular:
            assert best <= cand.jump_functional


def test_scaling_invariance_of_argmin():
    f = field("z")
    base = scan_directions(f, r=2.0, K=16)
    scaled = scan_directions(scale_field(f, 5.0), r=2.0, K=16)
    factor = 5.0 ** 0.5
    # curves are re-extracted but identical for c > 0, so J scales candidate
    # by candidate and the minimizer set (up to floating ties) is preserved
    for a, b in zip(base.candidates, scaled.candidates):
        assert b.jump_functional == pytest.approx(
            factor * a.jump_functional, rel=1e-6, abs=1e-12)
    assert scaled.best.jump_functional == pytest.approx(
        factor * base.best.jump_functional, rel=1e-6)
    base_J = np.array([c.jump_functional for c in base.candidates])
    minimizers = set(np.nonzero(base_J <= base_J.min() * (1 + 1e-9))[0])
    scaled_idx = [c.direction for c in scaled.candidates].index(
        scaled.best.direction)
    assert scaled_idx in minimizers


def test_rotation_symmetry_square_field():
    # for f = z^2 the level family is invariant under y -> y * exp(2*pi*i/2)
    scan = scan_directions(field("z2"), r=2.0, K=16)
    J = [c.jump_functional for c in scan.candidates]
    for j in range(16):
        assert J[j] == pytest.approx(J[(j + 8) % 16], rel=0.02)


def test_tail_identity_field():
    scan = scan_directions(field("z"), r=2.0, K=64)
    tail = verify_level_tail(scan)
    Jmax = max(c.jump_functional for c in scan.candidates)
    assert Jmax <= 1.13
    assert all(frac == 0.0 for frac, t in zip(tail.fractions, tail.thresholds)
               if t > 1.13)
    assert np.all(np.diff(tail.fractions) >= 0.0)


def test_tail_constant_field():
    scan = scan_directions(field("one"), r=2.0, K=32)
    tail = verify_level_tail(scan)
    assert np.all(tail.fractions == 0.0)
    assert tail.max_product == 0.0


def test_tail_needs_enough_regulars():
    scan = scan_directions(field("z"), r=2.0, K=8)
    with pytest.raises(ValueError):
        verify_level_tail(scan)


def test_tail_disks_baseline():
    from bvroots.disks import build_disks_field
    grid = Grid2D(0.0, 4.0, 0.0, 2.0, 257, 129)
    scan = scan_directions(build_disks_field(16, grid), r=2.0, K=64)
    tail = verify_level_tail(scan, bound=DISKS16_TAIL_MAX_PRODUCT)
    assert tail.passed
    assert np.all(np.diff(tail.fractions) >= 0.0)


def test_norm_level_growth_circle():
    rep = verify_norm_level_growth(field("z"), s=2.0, levels=[0.25])
    assert rep.values[0] == pytest.approx(0.25 ** 0.5 * 2 * np.pi * 0.25, rel=0.03)


def test_norm_level_growth_ladder_decreasing():
    rep = verify_norm_level_growth(field("z"), s=2.0, levels=[0.2, 0.1, 0.05])
    expected = [2 * np.pi * y ** 1.5 for y in (0.2, 0.1, 0.05)]
    for got, want in zip(rep.values, expected):
        assert got == pytest.approx(want, rel=0.03)
    assert np.all(np.diff(rep.values) < 0.0)


def test_norm_level_growth_empty_level():
    rep = verify_norm_level_growth(field("one"), s=2.0, levels=[0.5])
    assert rep.values[0] == 0.0


def test_norm_level_growth_degenerate_errors():
    with pytest.raises(ValueError, match="degenerate"):
        verify_norm_level_growth(field("one"), s=2.0, levels=[1.0])


def test_scan_csv():
    scan = scan_directions(field("z", 64), r=2.0, K=8)
    lines = scan_to_csv(scan).splitlines()
    assert lines[0] == "j,re_y,im_y,J,regular"
    assert len(lines) == 9
