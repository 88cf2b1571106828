import numpy as np
import pytest

from bvroots.field_core import (ComplexField, Grid2D, build_field, field_to_csv,
                                gradient, holder_norm_estimate, parse_descriptor,
                                scale_field)


def square(res):
    return Grid2D(-1.0, 1.0, -1.0, 1.0, res, res)


def test_grid_invariants():
    g = Grid2D(-1, 1, 0, 2, 5, 9)
    assert g.hx == pytest.approx(0.5)
    assert g.hy == pytest.approx(0.25)
    with pytest.raises(ValueError):
        Grid2D(1, -1, 0, 2, 5, 5)
    with pytest.raises(ValueError):
        Grid2D(-1, 1, 0, 2, 1, 5)


def test_identity_sampling():
    f = build_field("z", square(3))
    assert f.values[2, 1] == pytest.approx(1 + 0j)
    assert f.values[1, 2] == pytest.approx(1j)


def test_square_at_i():
    f = build_field("z^2", square(3))
    assert f.values[1, 2] == pytest.approx(-1 + 0j)


def test_unknown_builtin_rejected():
    with pytest.raises(ValueError, match="unknown builtin"):
        build_field({"kind": "builtin", "name": "nope"}, square(8))


def test_nonfinite_expression_rejected():
    with pytest.raises(ValueError, match="non-finite"):
        build_field({"kind": "expr", "body": "log(0*z)"}, square(8))


def test_descriptor_parsing():
    assert parse_descriptor("z") == {"kind": "builtin", "name": "z"}
    assert parse_descriptor("x + y")["kind"] == "expr"
    with pytest.raises(ValueError):
        parse_descriptor({"kind": "mystery"})
    with pytest.raises(ValueError):
        parse_descriptor({"kind": "expr", "body": 3})


def test_expression_unknown_name():
    with pytest.raises(ValueError, match="unknown name"):
        build_field({"kind": "expr", "body": "wobble * z"}, square(8))


def test_nonfinite_values_rejected_in_field():
    g = square(4)
    bad = np.ones((4, 4), dtype=complex)
    bad[1, 2] = np.nan
    with pytest.raises(ValueError):
        ComplexField(g, bad)


def test_gradient_affine_exact():
    f = build_field("z", square(64))
    gx, gy = gradient(f)
    assert np.abs(gx.values - 1.0).max() <= 1e-12
    assert np.abs(gy.values - 1j).max() <= 1e-12


def test_gradient_constant_zero():
    f = build_field({"kind": "expr", "body": "2.5 + 0*z"}, square(32))
    gx, gy = gradient(f)
    assert np.abs(gx.values).max() <= 1e-12
    assert np.abs(gy.values).max() <= 1e-12


def test_gradient_square_second_order():
    g = square(128)
    f = build_field("z2", g)
    gx, _ = gradient(f)
    i = int(np.argmin(np.abs(g.x - 1.0)))
    j = int(np.argmin(np.abs(g.y - 1.0)))
    # analytic derivative of z^2 is 2z = 2 + 2i at 1 + i
    assert abs(gx.values[i, j] - (2 + 2j)) <= 10 * g.hx ** 2


def test_gradient_needs_three_nodes():
    f = build_field("z", Grid2D(-1, 1, -1, 1, 2, 5))
    with pytest.raises(ValueError):
        gradient(f)


def test_holder_linear_k0():
    est = holder_norm_estimate(build_field({"kind": "expr", "body": "x + 0*z"},
                                           square(128)), 0, 1.0)
    assert est.total == pytest.approx(2.0, rel=1e-6)
    assert est.sup_derivatives == pytest.approx(1.0, rel=1e-6)
    assert est.hoelder_seminorm == pytest.approx(1.0, rel=1e-6)


def test_holder_constant():
    est = holder_norm_estimate(build_field({"kind": "expr", "body": "3 + 0*z"},
                                           square(64)), 2, 0.5)
    assert est.total == pytest.approx(3.0, abs=1e-12)


def test_holder_identity_k1():
    est = holder_norm_estimate(build_field("z", square(128)), 1, 1.0)
    assert est.total == pytest.approx(np.sqrt(2) + 1.0, rel=0.02)


def test_holder_scaling_exact():
    f = build_field("z", square(96))
    base = holder_norm_estimate(f, 1, 1.0)
    scaled = holder_norm_estimate(scale_field(f, 4.0), 1, 1.0)
    assert abs(scaled.total - 4.0 * base.total) <= 1e-10 * base.total


def test_holder_invalid_args():
    f = build_field("z", square(16))
    with pytest.raises(ValueError):
        holder_norm_estimate(f, 1, 0.0)
    with pytest.raises(ValueError):
        holder_norm_estimate(f, 40, 1.0)


@pytest.mark.parametrize("spec", ["z", "z2", "z3"])
def test_holder_refinement_monotone_within_band(spec):
    totals = [holder_norm_estimate(build_field(spec, square(res)), 1, 1.0).total
              for res in (64, 128, 256)]
    assert totals[1] >= totals[0] * 0.98
    assert totals[2] >= totals[1] * 0.98


def test_scale_field_trivial():
    f = build_field("z", square(16))
    assert np.array_equal(scale_field(f, 1.0).values, f.values)
    assert np.abs(scale_field(f, 0.0).values).max() == 0.0


def test_field_csv_shape():
    f = build_field("z", square(3))
    lines = field_to_csv(f).strip().split("\n")
    assert lines[0] == "x,y,re,im"
    assert len(lines) == 1 + 9
    # row-major: second row is node (0, 0), third is node (0, 1)
    assert lines[1].startswith("-1.0,-1.0,")
    assert lines[2].startswith("-1.0,0.0,")


def test_values_are_immutable():
    f = build_field("z", square(8))
    with pytest.raises(ValueError):
        f.values[0, 0] = 5.0
