import numpy as np
import pytest

from bvroots.baselines import GG_RATIO_CEILING, RADICAL_Z_BOUND_RATIO
from bvroots.cut_select import scan_directions
from bvroots.field_core import Grid2D, build_field, holder_norm_estimate, scale_field
from bvroots.radical import construct_radical
from bvroots.variation import (derivative_1d, gg_check_1d, holder_norm_1d,
                               raw_gradient_seminorm, variation_decompose,
                               variation_decompose_values, verify_radical_bound,
                               weak_lp_quasinorm)


def square(res=256):
    return Grid2D(-1.0, 1.0, -1.0, 1.0, res, res)


def sqrt_selection(res=256):
    f = build_field("z", square(res))
    cut = scan_directions(f, 2.0, 16).candidates[0]
    return f, construct_radical(f, 2.0, cut)


# --- weak quasinorm ---------------------------------------------------------

def test_weak_lp_zero_field():
    assert weak_lp_quasinorm(np.zeros(100), 2.0, 0.1) == 0.0


def test_weak_lp_single_cell():
    assert weak_lp_quasinorm([3.0], 2.0, 0.25) == pytest.approx(3.0 * 0.25 ** 0.5)


def test_weak_lp_rejects_bad_input():
    with pytest.raises(ValueError):
        weak_lp_quasinorm([], 2.0, 0.1)
    with pytest.raises(ValueError):
        weak_lp_quasinorm([1.0], 0.5, 0.1)


def test_weak_lp_sqrt_derivative():
    t = np.linspace(-1.0, 1.0, 100_000)
    h = t[1] - t[0]
    lam = np.sqrt(np.abs(t))
    slopes = derivative_1d(lam, h, kind="minmod")
    got = weak_lp_quasinorm(slopes, 2.0, h)
    assert got == pytest.approx(2.0 ** -0.5, rel=0.02)


def test_weak_lp_below_strong_lp_on_random():
    rng = np.random.default_rng(11)
    for p in (1.0, 1.5, 2.0, 3.0):
        v = rng.exponential(1.0, 400)
        cell = 1.0 / v.size
        weak = weak_lp_quasinorm(v, p, cell)
        strong = (np.sum(v ** p) * cell) ** (1.0 / p)
        assert weak <= strong + 1e-12


# --- variation decomposition -------------------------------------------------

def test_constant_selection():
    g = Grid2D(0.0, 1.0, 0.0, 1.0, 64, 64)
    rep = variation_decompose_values(np.full((64, 64), 2.0 - 1.0j), g, 2.0)
    assert rep.l1 == pytest.approx(abs(2.0 - 1.0j), rel=0.001)
    assert rep.ac_part == pytest.approx(0.0, abs=1e-12)
    assert rep.jump_part == 0.0


def test_linear_selection_ac():
    g = square(256)
    f = build_field({"kind": "expr", "body": "x + 0*z"}, g)
    rep = variation_decompose_values(f.values, g, 2.0)
    assert rep.ac_part == pytest.approx(4.0, rel=0.01)


def test_sqrt_jump_part():
    _, sbv = sqrt_selection()
    rep = variation_decompose(sbv, 2.0)
    assert rep.jump_part == pytest.approx(4.0 / 3.0, rel=0.04)
    assert rep.bv_total == pytest.approx(rep.l1 + rep.ac_part + rep.jump_part,
                                         abs=1e-12)


def test_positive_homogeneity_exact():
    _, sbv = sqrt_selection(128)
    base = variation_decompose(sbv, 2.0)
    c = -2.0 + 1.5j
    scaled = variation_decompose_values(
        sbv.lam.values * c, sbv.grid, 2.0, cut_h_edges=sbv.cut_h_edges,
        cut_v_edges=sbv.cut_v_edges, zero_mask=sbv.zero_mask,
        cut_curve=sbv.cut.curve)
    for a, b in ((base.l1, scaled.l1), (base.ac_part, scaled.ac_part),
                 (base.jump_part, scaled.jump_part),
                 (base.weak_lp, scaled.weak_lp)):
        assert abs(b - abs(c) * a) <= 1e-10 * max(1.0, abs(c) * a)


def test_integrability_dichotomy():
    # raw p=1 gradient sum stays bounded under refinement, p=3 diverges
    p1, p3 = [], []
    for res in (128, 256, 512):
        _, sbv = sqrt_selection(res)
        p1.append(raw_gradient_seminorm(sbv.lam.values, sbv.grid, 1.0))
        p3.append(raw_gradient_seminorm(sbv.lam.values, sbv.grid, 3.0))
    assert abs(p1[2] - p1[1]) <= 0.05 * p1[1]
    assert p3[1] >= 1.2 * p3[0]
    assert p3[2] >= 1.2 * p3[1]


# --- 1D radical checks --------------------------------------------------------

def test_gg_identity_function():
    t = np.linspace(-1.0, 1.0, 100_000)
    rep = gg_check_1d(t, t, r=2.0, k=1, alpha=1.0, baseline=GG_RATIO_CEILING)
    assert rep.lhs == pytest.approx(2.0 ** -0.5, rel=0.02)
    assert rep.rhs_core == pytest.approx(1.0, rel=1e-6)
    assert rep.passed


def test_gg_constant_function():
    t = np.linspace(-1.0, 1.0, 10_000)
    rep = gg_check_1d(np.ones_like(t), t, r=2.0, k=1, alpha=1.0)
    assert rep.lhs == 0.0
    assert rep.ratio == 0.0


def test_gg_square_function():
    t = np.linspace(-1.0, 1.0, 100_000)
    rep = gg_check_1d(t ** 2, t, r=2.0, k=1, alpha=1.0)
    # lam = |t|, derivative +-1: weak-L2 norm sqrt(2)
    assert rep.lhs == pytest.approx(np.sqrt(2.0), rel=0.02)


def test_gg_requires_matching_exponent():
    t = np.linspace(-1.0, 1.0, 100)
    with pytest.raises(ValueError):
        gg_check_1d(t, t, r=2.5, k=1, alpha=1.0)


def test_holder_norm_1d_linear():
    t = np.linspace(-1.0, 1.0, 4000)
    est = holder_norm_1d(t, t, k=1, alpha=1.0)
    # sup|f| + sup|f'| + Hoeld(f') = 1 + 1 + 0
    assert est.total == pytest.approx(2.0, rel=1e-6)


# --- radical bound regression --------------------------------------------------

def test_radical_bound_constant_field():
    g = square(64)
    f = build_field({"kind": "expr", "body": "2 + 0*z"}, g)
    sbv = construct_radical(f, 2.0)
    norm = holder_norm_estimate(f, 2, 1.0)
    rep = verify_radical_bound(sbv, norm)
    assert rep.ratio == pytest.approx(4.0, rel=0.01)  # area of the square


def test_radical_bound_scale_invariance():
    f, sbv = sqrt_selection(128)
    norm = holder_norm_estimate(f, 2, 1.0)
    base = verify_radical_bound(sbv, norm)
    f5 = scale_field(f, 5.0)
    cut5 = scan_directions(f5, 2.0, 16).candidates[0]
    sbv5 = construct_radical(f5, 2.0, cut5)
    norm5 = holder_norm_estimate(f5, 2, 1.0)
    scaled = verify_radical_bound(sbv5, norm5)
    assert scaled.ratio == pytest.approx(base.ratio, rel=1e-6)


def test_radical_bound_frozen_baseline():
    f, sbv = sqrt_selection(256)
    norm = holder_norm_estimate(f, 2, 1.0)
    rep = verify_radical_bound(sbv, norm, baseline=RADICAL_Z_BOUND_RATIO)
    assert rep.passed
