import json

import numpy as np
import pytest

from ptcorr.propagator import Geometry
from ptcorr.sweep import (
    CurveSet,
    VisibilityGrid,
    axis,
    extract_features,
    geometry_deficit,
    geometry_visibility,
    visibility_curves,
    visibility_map,
)

PI = np.pi


def sign(v, tol=1e-9):
    return 0 if abs(v) <= tol else int(np.sign(v))


# -- axes and maps -------------------------------------------------------------


@pytest.mark.parametrize("args", [(0, 1, 1), (1, 0, 5), (0, 0, 5), (0, np.inf, 3), (0, 1, 2.5)])
def test_axis_validation(args):
    with pytest.raises(ValueError):
        axis(*args)


def test_axis_is_inclusive():
    assert np.array_equal(axis(0, 1, 3), [0, 0.5, 1])


def test_map_lossless_row_examples():
    grid = visibility_map("m-xmtx", (0, PI / 4, 3), (0, 1, 2))
    row = grid.row(0)
    assert row[0] == pytest.approx(0, abs=1e-15)
    assert row[1] == pytest.approx(-1, abs=1e-12)


def test_map_threshold_row_is_zero():
    grid = visibility_map("mt-m", (0, 2 * PI, 400), (1, 3, 3))
    assert np.max(np.abs(grid.row(2))) < 1e-10


def test_map_broken_row_rises_to_one():
    grid = visibility_map("m-xmtx", (2, 10, 9), (3, 4, 2))
    row = grid.row(3)
    assert row[-1] > 0.99
    assert np.all(np.diff(row) >= 0)
    # V rounds to 1 here; the strict rise shows in the deficit 1 - V
    deficit = geometry_deficit("m-xmtx", grid.kl_axis, 3)
    assert np.all(np.diff(deficit) < 0)


def test_map_shape_ordering_and_bounds():
    grid = visibility_map("m-mt", (0, 2 * PI, 7), (0, 4, 5))
    assert grid.values.shape == (5, 7)
    assert grid.values.size == len(grid.kl_axis) * len(grid.gok_axis)
    assert np.all(grid.values[np.isfinite(grid.values)] >= -1 - 1e-12)
    # kl runs fastest within a row
    direct = geometry_visibility("m-mt", grid.kl_axis, grid.gok_axis[2])
    assert np.array_equal(grid.values[2], direct)


def test_map_rejects_negative_length_and_bad_ranges():
    with pytest.raises(ValueError):
        visibility_map("m-mt", (-1, 1, 5), (0, 1, 3))
    with pytest.raises(ValueError):
        visibility_map("m-mt", (0, 1, 1), (0, 1, 3))


def test_map_is_deterministic_and_order_independent():
    a = visibility_map("m-xmtx", (0, 6, 50), (0, 4, 40))
    b = visibility_map("m-xmtx", (0, 6, 50), (0, 4, 40))
    assert np.array_equal(a.values, b.values, equal_nan=True)
    nodes = np.array([geometry_visibility("m-xmtx", x, g) for g in a.gok_axis[::-1] for x in a.kl_axis[::-1]])
    assert np.array_equal(nodes.reshape(a.values.shape)[::-1, ::-1], a.values, equal_nan=True)


def test_grid_round_trip_with_undefined_nodes():
    grid = visibility_map("m-mt", (0, 2, 4), (0, 1, 3))
    grid.values[1, 2] = np.nan
    back = VisibilityGrid.from_dict(json.loads(json.dumps(grid.to_dict())))
    assert back.config is Geometry.M_MT
    assert np.array_equal(back.values, grid.values, equal_nan=True)
    assert np.array_equal(back.gok_axis, grid.gok_axis)


# -- lock-step and lossless properties ------------------------------------


@pytest.mark.parametrize("gok", [0, 0.5, 2, 3.5, 0.38 + 0.19j, 0.83 + 0.41j, 1.2 - 0.7j])
def test_aligned_pair_lock_step(gok):
    kl = np.linspace(0, 3 * PI, 301)
    a = geometry_visibility("m-xmtx", kl, gok)
    b = geometry_visibility("xmtx-m", kl, gok)
    assert np.nanmax(np.abs(a - b)) < 1e-10


def test_lossless_all_geometries_identical_and_non_positive():
    lengths = np.linspace(0, 8, 400)
    cs = visibility_curves(list(Geometry), 0, lengths)
    ref = cs.values[Geometry.M_XMTX]
    for g in Geometry:
        assert np.max(cs.values[g]) <= 1e-12
        assert np.max(np.abs(cs.values[g] - ref)) < 1e-10


def test_curves_complex_loss_separate_pairs():
    lengths = np.linspace(0, 8, 400)
    cs = visibility_curves(list(Geometry), 0.83 + 0.41j, lengths)
    v = cs.values
    assert np.max(np.abs(v[Geometry.M_XMTX] - v[Geometry.XMTX_M])) < 1e-10
    assert np.max(np.abs(v[Geometry.M_XMTX] - v[Geometry.MT_M])) > 0.05
    assert np.max(np.abs(v[Geometry.M_XMTX] - v[Geometry.M_MT])) > 0.05


def test_curves_indistinguishability_scaling():
    lengths = np.linspace(0, 8, 50)
    full = visibility_curves(["m-mt", "mt-m"], 0.38 + 0.19j, lengths)
    part = visibility_curves(["m-mt", "mt-m"], 0.38 + 0.19j, lengths, indistinguishability=0.96)
    for g in full.configs:
        assert np.max(np.abs(part.values[g] - 0.96 * full.values[g])) < 1e-15


def test_curves_use_physical_length():
    cs = visibility_curves(["m-xmtx"], 0, [PI / 8 / 0.85], kappa=0.85)
    assert cs.values[Geometry.M_XMTX][0] == pytest.approx(-1, abs=1e-12)


@pytest.mark.parametrize("kwargs", [dict(kappa=0), dict(indistinguishability=1.2), dict(lengths=[-1.0, 1.0])])
def test_curves_validation(kwargs):
    args = dict(configs=["m-mt"], gamma_over_kappa=0.5, lengths=[0.0, 1.0])
    args.update(kwargs)
    with pytest.raises(ValueError):
        visibility_curves(**args)


def test_curve_set_round_trip_and_validation():
    cs = visibility_curves(list(Geometry), 0.38 + 0.19j, np.linspace(0, 2, 5), indistinguishability=0.96)
    back = CurveSet.from_dict(json.loads(json.dumps(cs.to_dict())))
    assert back.configs == cs.configs and back.gamma_over_kappa == cs.gamma_over_kappa
    for g in cs.configs:
        assert np.array_equal(back.values[g], cs.values[g])
    with pytest.raises(ValueError):
        CurveSet(["m-mt"], 0, 0.85, [0, 1], {"m-mt": [0.0]})


# -- deficit -------------------------------------------------------------------


@pytest.mark.parametrize("g", list(Geometry))
def test_deficit_matches_one_minus_v_where_resolvable(g):
    kl = np.linspace(0, 3, 200)
    for gok in (0.5, 3.0, 0.83 + 0.41j):
        d = geometry_deficit(g, kl, gok)
        v = geometry_visibility(g, kl, gok)
        assert np.nanmax(np.abs(d - (1 - v))) < 1e-9


# -- features ------------------------------------------------------------------


def test_features_lossless_first_dip():
    kl = np.linspace(0, 2 * PI, 2000)
    f = extract_features(kl, geometry_visibility("m-xmtx", kl, 0))
    pos, val = f.first_minimum()
    assert abs(pos - PI / 8) < 1e-4
    assert val == pytest.approx(-1, abs=1e-6)


def test_features_loss_shifts_first_dip_earlier():
    kl = np.linspace(0, 2 * PI, 4000)
    pos, _ = extract_features(kl, geometry_visibility("m-xmtx", kl, 1.0)).first_minimum()
    assert pos < PI / 8 - 0.01


def test_features_broken_phase_tail():
    kl = np.linspace(0, 10, 1000)
    v = geometry_visibility("m-xmtx", kl, 3)
    d = geometry_deficit("m-xmtx", kl, 3)
    assert extract_features(kl, v, deficit=d).monotonic_tail
    lossless = geometry_visibility("m-xmtx", kl, 0)
    assert not extract_features(kl, lossless).monotonic_tail


def test_features_zero_crossings_and_nan_handling():
    x = np.linspace(0, 2 * PI, 1001)
    f = extract_features(x, np.sin(x))
    assert [round(c, 6) for c in f.zero_crossings] == [round(PI, 6)]
    assert f.maxima[0][0] == pytest.approx(PI / 2, abs=1e-6)
    v = np.sin(x)
    v[240:260] = np.nan
    g = extract_features(x, v)
    assert all(not (x[239] < m[0] < x[260]) for m in g.maxima)


def test_features_validation():
    with pytest.raises(ValueError):
        extract_features([0, 1], [0, 1])
    with pytest.raises(ValueError):
        extract_features([0, 1, 2], [np.nan] * 3)
    with pytest.raises(ValueError):
        extract_features([0, 1, 2], [0, 1])


@pytest.mark.parametrize("gok", [0.5, 1.0])
def test_m_mt_even_maxima_follow_single_coupler(gok):
    # the single coupler of length kl is M_XMTX at kl / 2
    kl = np.linspace(0, 4 * PI, 8001)
    step = kl[1] - kl[0]
    mt = extract_features(kl, geometry_visibility("m-mt", kl, gok)).maxima
    single = extract_features(kl, geometry_visibility("m-xmtx", kl / 2, gok))
    even = mt[1::2]
    n = min(len(even), len(single.maxima))
    assert n >= 5
    for (x_mt, v_mt), (x_s, v_s) in zip(even[:n], single.maxima[:n]):
        assert abs(x_mt - x_s) < 2 * step
        assert sign(v_mt, 1e-6) == sign(v_s, 1e-6)
    # the odd maxima touch zero where the single coupler has its full dips
    for (x_mt, v_mt), (x_s, v_s) in zip(mt[0::2], single.minima):
        assert abs(x_mt - x_s) < 2 * step
        # sampled near a tangential zero, so only zero to grid accuracy
        assert abs(v_mt) < 1e-6 and v_s == pytest.approx(-1, abs=1e-5)
    # hence the visibility turns positive every four maxima
    positive = [i + 1 for i, (_, v) in enumerate(mt[:12]) if sign(v, 1e-6) > 0]
    assert positive == [2, 6, 10]
