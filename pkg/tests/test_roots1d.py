import numpy as np
import pytest

from bvroots.baselines import SOBOLEV_SQRT_RATIO_CEILING
from bvroots.roots1d import (CoeffCurve, build_coeff_curve, magnitude_bound_excess,
                             match_continuous, min_matching, reconstruction_error,
                             sobolev_check, solve_pointwise, track_to_csv)


def sqrt_curve(samples=2001):
    return build_coeff_curve({"n": 2, "coeffs": [{"expr": "0"}, {"expr": "-t"}],
                              "t": [-1.0, 1.0, samples]})


def test_solve_pointwise_simple():
    roots = sorted(solve_pointwise([0, -1]), key=lambda z: z.real)
    assert roots[0] == pytest.approx(-1.0)
    assert roots[1] == pytest.approx(1.0)


def test_solve_pointwise_imaginary_pair():
    roots = sorted(solve_pointwise([0, 1]), key=lambda z: z.imag)
    assert roots[0] == pytest.approx(-1j)
    assert roots[1] == pytest.approx(1j)


def test_solve_pointwise_zero_polynomial():
    roots = solve_pointwise([0, 0, 0])
    assert roots.shape == (3,)
    assert np.abs(roots).max() == 0.0


def test_coeff_curve_validation():
    with pytest.raises(ValueError):
        CoeffCurve(t=np.array([0.0, 0.0]), coeffs=np.zeros((2, 1)))
    with pytest.raises(ValueError):
        CoeffCurve(t=np.array([0.0]), coeffs=np.zeros((1, 1)))
    with pytest.raises(ValueError):
        build_coeff_curve({"n": 2, "coeffs": [{"expr": "0"}], "t": [0, 1, 10]})


def test_track_sqrt_continuity():
    track = match_continuous(sqrt_curve())
    lam1 = track.lam[:, 0]
    assert min(abs(lam1[0] - 1j), abs(lam1[0] + 1j)) < 1e-9
    assert min(abs(lam1[-1] - 1.0), abs(lam1[-1] + 1.0)) < 1e-9
    assert abs(lam1[-1] - 1.0) < 1e-9  # deterministic branch assignment
    assert track.max_step_jump <= 0.05
    steps = np.abs(np.diff(track.lam, axis=0)).max(axis=1)
    assert steps.max() <= 0.05


def test_track_constant_coeffs():
    curve = build_coeff_curve({"n": 2, "coeffs": [{"expr": "0"},
                                                  {"expr": "-1 + 0*t"}],
                               "t": [0.0, 1.0, 101]})
    track = match_continuous(curve)
    assert track.max_step_jump == 0.0


def test_track_monodromy_loop():
    curve = build_coeff_curve({"n": 2,
                               "coeffs": [{"expr": "0"},
                                          {"expr": "-exp(2j*pi*t)"}],
                               "t": [0.0, 1.0, 4001]})
    track = match_continuous(curve)
    assert track.lam[-1, 0] == pytest.approx(-track.lam[0, 0], rel=1e-6)


def test_reconstruction_error_catalog():
    for spec in ({"n": 2, "coeffs": [{"expr": "0"}, {"expr": "-t"}],
                  "t": [-1.0, 1.0, 501]},
                 {"n": 3, "coeffs": [{"expr": "-t"}, {"expr": "1 + 0*t"},
                                     {"expr": "t*t"}],
                  "t": [-1.0, 1.0, 501]}):
        track = match_continuous(build_coeff_curve(spec))
        assert reconstruction_error(track) <= 1e-8


def test_root_magnitude_bound():
    for spec in ({"n": 2, "coeffs": [{"expr": "0"}, {"expr": "-t"}],
                  "t": [-1.0, 1.0, 501]},
                 {"n": 3, "coeffs": [{"expr": "2*t"}, {"expr": "0*t"},
                                     {"expr": "-t*t*t"}],
                  "t": [-1.0, 1.0, 501]}):
        curve = build_coeff_curve(spec)
        track = match_continuous(curve)
        assert magnitude_bound_excess(track.lam, curve.coeffs) <= 1e-8


def test_refinement_does_not_grow_jumps():
    coarse = match_continuous(sqrt_curve(2001))
    fine = match_continuous(sqrt_curve(4001))
    assert fine.max_step_jump <= 1.05 * coarse.max_step_jump


def test_permutation_invariance():
    # roots stay well separated along this curve, so no matching ties arise
    # (at a collision the labels are genuinely forgotten)
    curve = build_coeff_curve({"n": 2,
                               "coeffs": [{"expr": "0"},
                                          {"expr": "-exp(2j*pi*t)"}],
                               "t": [0.0, 1.0, 801]})
    base = match_continuous(curve)
    swapped = match_continuous(curve, initial_perm=[1, 0])
    assert np.array_equal(swapped.lam, base.lam[:, [1, 0]])


def test_min_matching_hungarian_consistency():
    rng = np.random.default_rng(3)
    for n in (2, 5, 8):
        ref = rng.normal(size=n) + 1j * rng.normal(size=n)
        new = rng.normal(size=n) + 1j * rng.normal(size=n)
        perm = min_matching(ref, new)
        assert sorted(perm) == list(range(n))
        cost = np.abs(new[perm] - ref).sum()
        for _ in range(200):
            trial = rng.permutation(n)
            assert cost <= np.abs(new[trial] - ref).sum() + 1e-12


def test_sobolev_sqrt_l1():
    track = match_continuous(sqrt_curve(100_001))
    rep = sobolev_check(track, p=1.0, baseline=SOBOLEV_SQRT_RATIO_CEILING)
    assert rep.lp_norm[0] == pytest.approx(2.0, rel=0.02)
    assert not rep.out_of_range
    assert rep.passed


def test_sobolev_constant_zero():
    curve = build_coeff_curve({"n": 2, "coeffs": [{"expr": "0"},
                                                  {"expr": "-1 + 0*t"}],
                               "t": [0.0, 1.0, 101]})
    rep = sobolev_check(match_continuous(curve), p=1.0)
    assert rep.lhs == 0.0


def test_sobolev_out_of_range_flag():
    track = match_continuous(sqrt_curve(1001))
    rep = sobolev_check(track, p=2.0)
    assert rep.out_of_range
    assert np.all(np.isfinite(rep.lp_power))


def test_sobolev_divergence_at_critical_p():
    powers = []
    for samples in (10 ** 3, 10 ** 4, 10 ** 5):
        rep = sobolev_check(match_continuous(sqrt_curve(samples)), p=2.0)
        powers.append(float(rep.lp_power.max()))
    assert powers[1] >= 1.2 * powers[0]
    assert powers[2] >= 1.2 * powers[1]


def test_track_csv():
    track = match_continuous(sqrt_curve(11))
    lines = track_to_csv(track).splitlines()
    assert lines[0] == "t,re_1,im_1,re_2,im_2"
    assert len(lines) == 12
