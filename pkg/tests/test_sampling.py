"""Grid builders: determinism, cumulative nesting, coverage."""

import numpy as np
import pytest

import holonorm.sampling as sp
from holonorm.errors import InputError


def test_ladder_validation():
    assert sp.check_ladder((0.2, 0.1)) == (0.2, 0.1)
    with pytest.raises(InputError):
        sp.check_ladder(())
    with pytest.raises(InputError):
        sp.check_ladder((0.1, 0.2))
    with pytest.raises(InputError):
        sp.check_ladder((0.5, 0.0))


def test_disc_ladder_grids_are_prefix_nested():
    grids = sp.disc_ladder_grids((0.2, 0.1, 0.05), radii=8, angles=16)
    assert len(grids) == 3
    for early, late in zip(grids, grids[1:]):
        assert late.shape[0] > early.shape[0]
        assert np.array_equal(late[: early.shape[0]], early)


def test_disc_ladder_grids_reach_each_rung():
    ladder = (0.2, 0.1, 0.05)
    grids = sp.disc_ladder_grids(ladder, radii=8, angles=16)
    for eps, g in zip(ladder, grids):
        r = np.abs(g)
        assert np.all(r <= 1 - eps + 1e-12)
        assert r.max() > 1 - 2 * eps  # the rung annulus is actually sampled


def test_disc_ladder_first_rung_contains_origin():
    g = sp.disc_ladder_grids((0.2,), radii=8, angles=16)[0]
    assert np.any(g == 0)


def test_ball_ladder_grids_prefix_nested_and_axis_led():
    grids = sp.ball_ladder_grids(2, (0.2, 0.1), directions=5, radii=6, seed=0)
    for early, late in zip(grids, grids[1:]):
        assert np.array_equal(late[: early.shape[0]], early)
    deep = grids[-1]
    norms = np.linalg.norm(deep, axis=1)
    assert np.all(norms <= 0.9 + 1e-12)
    assert norms.max() > 0.85
    # origin plus both coordinate axis rays are present
    assert np.any(norms == 0)
    on_e1 = np.abs(deep[:, 1]) < 1e-15
    assert np.count_nonzero(on_e1 & (norms > 0.5)) > 0


def test_unit_sphere_points_seeded():
    a = sp.unit_sphere_points(3, 10, seed=4)
    b = sp.unit_sphere_points(3, 10, seed=4)
    c = sp.unit_sphere_points(3, 10, seed=5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.allclose(np.linalg.norm(a, axis=1), 1.0, atol=1e-12)


def test_uniform_ball_points_inside():
    pts = sp.uniform_ball_points(2, 200, 0.9, seed=6)
    assert np.all(np.linalg.norm(pts, axis=1) <= 0.9 + 1e-12)


def test_ball_grid_includes_origin_and_axes():
    g = sp.ball_grid(2, 0.5, directions=4, radii=3, seed=1)
    assert np.any(np.all(g == 0, axis=1))
    norms = np.linalg.norm(g, axis=1)
    assert np.all(norms <= 0.5 + 1e-12)
    on_e2 = np.abs(g[:, 0]) < 1e-15
    assert np.count_nonzero(on_e2 & (norms > 0)) > 0


def test_axis_directions():
    ax = sp.axis_directions(3)
    assert np.array_equal(ax, np.eye(3, dtype=complex))
