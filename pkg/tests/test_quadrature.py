# -*- coding: utf-8 -*-
import numpy as np
import pytest

from src.beam import BeamParams, lg_mode
from src.errors import DomainError, EvaluationError
from src.quadrature import (GridSpec, axis_rule, integrate_3d, integrate_polar_2d, polar_rule,
                            required_nodes)


def gaussian(points):
    return np.exp(-np.sum(points ** 2, axis=-1))


@pytest.fixture
def gaussian_grid():
    return GridSpec((0.0, 0.0, 0.0), (6.0, 6.0, 6.0), 64, 3)


def test_constant_field_gives_volume():
    grid = GridSpec((1.0, -2.0, 0.5), (1.0, 2.0, 3.0), 8, 2)
    result = integrate_3d(lambda p: np.ones(p.shape[:-1]), grid)
    assert result.value.real == pytest.approx(48.0, rel=1e-14)


def test_gaussian(gaussian_grid):
    result = integrate_3d(gaussian, gaussian_grid)
    assert result.value.real == pytest.approx(np.pi ** 1.5, abs=1e-10)
    assert result.levels_used == 3
    assert result.nodes_per_axis == 144
    assert result.abs_error_estimate < 1e-8


def test_odd_field_cancels(gaussian_grid):
    result = integrate_3d(lambda p: p[..., 0] * gaussian(p), gaussian_grid)
    assert abs(result.value) <= 1e-13 * np.pi ** 1.5


def test_early_stop_on_relative_tolerance(gaussian_grid):
    result = integrate_3d(gaussian, gaussian_grid, rel_tol=1e-6)
    assert result.levels_used == 2
    assert result.nodes_per_axis == 96


def test_single_level_uses_companion_rule():
    grid = GridSpec((0.0, 0.0, 0.0), (6.0, 6.0, 6.0), 48, 1)
    result = integrate_3d(gaussian, grid)
    assert result.levels_used == 1
    assert result.value.real == pytest.approx(np.pi ** 1.5, rel=1e-6)
    assert np.isfinite(result.abs_error_estimate)


def test_result_independent_of_workers(gaussian_grid):
    def field(p):
        return np.exp(1j * 0.7 * p[..., 2]) * gaussian(p)

    serial = integrate_3d(field, gaussian_grid, workers=1)
    for workers in (2, 4, 8):
        assert integrate_3d(field, gaussian_grid, workers=workers).value == serial.value


def test_non_finite_sample_reports_coordinate():
    grid = GridSpec((0.0, 0.0, 0.0), (1.0, 1.0, 1.0), 8, 1)

    def field(p):
        return np.where(p[..., 0] > 0.5, np.nan, 1.0)

    with pytest.raises(EvaluationError) as info:
        integrate_3d(field, grid)
    assert info.value.coordinate[0] > 0.5


def test_oscillation_guard_warns():
    grid = GridSpec((0.0, 0.0, 0.0), (10.0, 10.0, 10.0), 16, 1)
    # 20 bohr 宽的盒子上 20/2π 个振荡，每个振荡 6 个点
    assert required_nodes(grid, 1.0) == 20
    result = integrate_3d(gaussian, grid, max_phase_gradient=1.0)
    assert len(result.warnings) == 1
    assert "< 20" in result.warnings[0]
    assert not integrate_3d(gaussian, grid, max_phase_gradient=0.5).warnings


def test_level_nodes():
    assert GridSpec((0, 0, 0), (1, 1, 1), 48, 3).level_nodes() == [48, 72, 108]
    assert GridSpec((0, 0, 0), (1, 1, 1), 64, 3).level_nodes() == [64, 96, 144]


@pytest.mark.parametrize("kwargs", [
    dict(nodes_per_axis=7),
    dict(nodes_per_axis=2),
    dict(refinement_levels=0),
    dict(half_widths=(1.0, 0.0, 1.0)),
    dict(center=(0.0, np.inf, 0.0)),
])
def test_grid_validation(kwargs):
    spec = dict(center=(0.0, 0.0, 0.0), half_widths=(1.0, 1.0, 1.0))
    spec.update(kwargs)
    with pytest.raises(DomainError):
        GridSpec(**spec)


def test_grid_covers_and_with_nodes():
    grid = GridSpec((0.0, 0.0, 0.0), (2.0, 2.0, 2.0), 16, 2)
    assert grid.covers((-2.0, -1.0, 0.0), (2.0, 1.0, 1.0))
    assert not grid.covers((-2.5, 0.0, 0.0), (0.0, 0.0, 0.0))
    finer = grid.with_nodes(32)
    assert (finer.nodes_per_axis, finer.refinement_levels) == (32, 2)
    assert finer.to_dict()['half_widths'] == [2.0, 2.0, 2.0]


def test_axis_rule_is_mirror_symmetric():
    nodes, weights = axis_rule(1.5, 2.0, 20, 4, 3.0)
    assert np.all(np.diff(nodes) > 0)
    np.testing.assert_allclose(nodes - 1.5, -(nodes[::-1] - 1.5), rtol=0, atol=1e-15)
    np.testing.assert_array_equal(weights, weights[::-1])
    assert weights.sum() == pytest.approx(4.0, rel=1e-14)
    assert not nodes.flags.writeable


def test_polar_disk_area():
    assert integrate_polar_2d(lambda r, p: np.ones_like(r * p), 2.0, 16).real == pytest.approx(4.0 * np.pi)


def test_polar_azimuthal_orthogonality():
    assert abs(integrate_polar_2d(lambda r, p: np.exp(1j * p) + 0.0 * r, 3.0, 16)) < 1e-14


def test_polar_lg_normalization():
    beam = BeamParams(100.0, 1.0e4, 0, 1)
    value = integrate_polar_2d(lambda r, p: np.abs(lg_mode(beam, r, 0.0, p)) ** 2, 8.0 * beam.waist, 200)
    assert value.real == pytest.approx(1.0, abs=1e-8)


def test_polar_rule_layout():
    rule = polar_rule(1.0, 3, 4)
    points = rule.points()
    assert points.shape == (12, 2)
    np.testing.assert_allclose(np.hypot(points[:4, 0], points[:4, 1]), rule.rho[0])
    assert rule.weights().sum() == pytest.approx(np.pi)


def test_polar_rule_validation():
    with pytest.raises(DomainError):
        polar_rule(0.0, 8)
    with pytest.raises(DomainError):
        polar_rule(1.0, 0)
