# -*- coding: utf-8 -*-
import numpy as np
import pytest

from src.atom import AtomicState
from src.beam import BeamParams
from src.errors import CoverageError, DomainError
from src.formfactor import (ScatteringGeometry, multi_center_ff, plane_wave_ff, point_limit_ff,
                            rotate_to_scattered_frame, structure_factor, vortex_ff)
from src.quadrature import GridSpec
from src.selftest import oracle_grid

ORIGIN_GRID = GridSpec((0.0, 0.0, 0.0), (21.3, 21.3, 21.3), 64, 3)
COARSE_GRID = GridSpec((0.0, 0.0, 0.0), (21.3, 21.3, 21.3), 32, 2)


def hydrogen_1s_form_factor(q):
    return (1.0 + q * q / 4.0) ** -2


@pytest.mark.parametrize("q", [0.0, 0.1, 0.5, 1.0])
def test_ground_state_elastic_oracle(ground_state, q):
    value = plane_wave_ff(ground_state, ground_state, (0.0, 0.0, q), ORIGIN_GRID).value
    assert value.real == pytest.approx(hydrogen_1s_form_factor(q), rel=1e-6)
    assert abs(value.imag) < 1e-12


@pytest.mark.slow
@pytest.mark.parametrize("q", [2.0, 5.0])
def test_ground_state_elastic_oracle_large_q(ground_state, q):
    value = plane_wave_ff(ground_state, ground_state, (0.0, 0.0, q), oracle_grid(q)).value
    assert value.real == pytest.approx(hydrogen_1s_form_factor(q), rel=1e-6)


def test_direction_independence(ground_state):
    q = 0.8 * np.array([1.0, 2.0, -2.0]) / 3.0
    value = plane_wave_ff(ground_state, ground_state, q, ORIGIN_GRID).value
    assert value.real == pytest.approx(hydrogen_1s_form_factor(0.8), rel=1e-6)


def test_orthogonal_states_at_zero_q(ground_state):
    grid = GridSpec((0.0, 0.0, 0.0), (50.0, 50.0, 50.0), 64, 3, panels_per_half=6, grading=3.0)
    result = plane_wave_ff(ground_state, AtomicState(2, 0, 0), (0.0, 0.0, 0.0), grid)
    assert abs(result.value) < 1e-6


@pytest.mark.parametrize("c", [(1.0, 0.5, -0.3), (3.0, 0.0, 0.0), (0.0, -2.0, 1.5)])
@pytest.mark.parametrize("q", [(0.4, -0.3, 0.7), (0.0, 0.0, 1.5)])
def test_shift_multiplies_by_phase(ground_state, c, q):
    q, c = np.array(q), np.array(c)
    shifted = ground_state.at(c)
    at_origin = plane_wave_ff(ground_state, ground_state, q).value
    moved = plane_wave_ff(shifted, shifted, q).value
    expected = np.exp(1j * q @ c) * at_origin
    assert moved == pytest.approx(expected, abs=1e-10)
    assert abs(moved) == pytest.approx(abs(at_origin), rel=1e-6)
    assert np.angle(moved / expected) == pytest.approx(0.0, abs=1e-6)


def test_hermiticity(ground_state):
    excited = AtomicState(2, 1, 1)
    q = np.array([0.3, -0.2, 0.6])
    forward = plane_wave_ff(ground_state, excited, q).value
    backward = plane_wave_ff(excited, ground_state, -q).value
    assert forward == pytest.approx(np.conj(backward), abs=1e-12)
    assert abs(forward) > 1e-3


def test_grid_too_small_is_refused(ground_state):
    small = GridSpec((0.0, 0.0, 0.0), (5.0, 5.0, 5.0), 16, 1)
    with pytest.raises(CoverageError) as info:
        plane_wave_ff(ground_state, ground_state, (0.0, 0.0, 1.0), small)
    assert info.value.exit_code == 4
    assert info.value.required['half_widths'][0] == pytest.approx(17.69, abs=0.01)


def test_invalid_q(ground_state):
    with pytest.raises(DomainError):
        plane_wave_ff(ground_state, ground_state, (0.0, np.nan, 1.0))
    with pytest.raises(DomainError):
        plane_wave_ff(ground_state, ground_state, (1.0, 2.0))


def test_result_metadata(ground_state):
    result = plane_wave_ff(ground_state, ground_state, (0.0, 0.0, 1.0), COARSE_GRID)
    assert result.grid == COARSE_GRID
    assert result.levels_used == 2
    assert result.metadata['nodes_per_axis'] == 48


# ---------- 几何 ----------

def test_rotation_identity_at_zero_angle():
    r = np.array([[0.3, -1.2, 2.0], [1.0, 0.0, 0.0]])
    np.testing.assert_allclose(rotate_to_scattered_frame(r, 0.0, 0.7), r, atol=1e-15)


def test_rotation_quarter_turn():
    rotated = rotate_to_scattered_frame((0.0, 0.0, 1.0), np.pi / 2.0)
    np.testing.assert_allclose(rotated, (0.0, 1.0, 0.0), atol=1e-15)
    assert np.linalg.norm(rotated) == pytest.approx(1.0)


@pytest.mark.parametrize("theta, azimuth", [(0.3, 0.0), (1.2, 0.8), (np.pi, -2.0), (2.5, 3.0)])
def test_rotation_maps_outgoing_direction_to_axis(theta, azimuth):
    geom = ScatteringGeometry.elastic(1.0, theta, azimuth)
    np.testing.assert_allclose(rotate_to_scattered_frame(geom.k_f_hat, theta, azimuth),
                               (0.0, 0.0, 1.0), atol=1e-14)


def test_elastic_momentum_transfer():
    k = 0.5
    for theta in (0.0, 0.4, np.pi / 2.0, np.pi):
        geom = ScatteringGeometry.elastic(k, theta)
        assert geom.q_magnitude == pytest.approx(2.0 * k * np.sin(theta / 2.0), abs=1e-15)
        assert geom.is_elastic
    back = ScatteringGeometry.from_q(k, 0.6, azimuth=0.2)
    assert back.q_magnitude == pytest.approx(0.6)
    assert back.azimuth == 0.2


def test_q_lies_in_scattering_plane():
    geom = ScatteringGeometry.elastic(1.0, 0.9)
    assert geom.q[0] == 0.0
    assert geom.q[1] > 0


def test_from_q_rejects_beyond_backscatter():
    with pytest.raises(DomainError):
        ScatteringGeometry.from_q(0.5, 1.01)


def test_inelastic_forward_transfer():
    geom = ScatteringGeometry(1.0, 0.8, 0.0)
    np.testing.assert_allclose(geom.q, (0.0, 0.0, 0.2), atol=1e-15)
    assert not geom.is_elastic


@pytest.mark.parametrize("kwargs", [
    dict(k_i=0.0, k_f=1.0, theta=0.1),
    dict(k_i=1.0, k_f=1.0, theta=-0.1),
    dict(k_i=1.0, k_f=1.0, theta=3.2),
])
def test_geometry_validation(kwargs):
    with pytest.raises(DomainError):
        ScatteringGeometry(**kwargs)


# ---------- 涡旋形状因子 ----------

def test_plane_wave_limit_is_monotonic(ground_state):
    wavelength = 100.0
    deviations = []
    for ratio in (1e3, 1e4, 1e5, 1e6):
        beam = BeamParams(wavelength, ratio * wavelength)
        geom = ScatteringGeometry.from_beams(beam, beam, 0.0)
        vortex = vortex_ff(ground_state, ground_state, beam, beam, geom, COARSE_GRID).value
        plane = plane_wave_ff(ground_state, ground_state, geom.q, COARSE_GRID).value
        deviations.append(abs(vortex - plane))
    assert all(a > b for a, b in zip(deviations, deviations[1:]))
    assert deviations[-1] < 5e-3


def test_point_limit_on_axis_equals_plane_wave(ground_state):
    beam = BeamParams(100.0, 1.0e4)
    geom = ScatteringGeometry.from_beams(beam, beam, 0.3)
    point = point_limit_ff(ground_state, ground_state, beam, beam, geom, COARSE_GRID)
    plane = plane_wave_ff(ground_state, ground_state, geom.q, COARSE_GRID)
    assert point.value == pytest.approx(plane.value, rel=1e-12)
    assert point.metadata['beam_factor'] == pytest.approx(1.0, rel=1e-12)


def test_oam_transfer_forbidden_for_on_axis_s_state(ground_state):
    geom_beam_in = BeamParams(100.0, 1.0e4, 0, 1)
    geom_beam_out = BeamParams(100.0, 1.0e4, 0, -1)
    geom = ScatteringGeometry.from_beams(geom_beam_in, geom_beam_out, 0.0)
    result = vortex_ff(ground_state, ground_state, geom_beam_in, geom_beam_out, geom, COARSE_GRID)
    assert abs(result.value) < 1e-12
    assert result.metadata['prefactor_beam'] == 'beam_in'
    assert not result.metadata['unequal_beams']


def test_selection_rule_for_2p_final_state(ground_state):
    beam_in = BeamParams(100.0, 1.0e4, 0, 1)
    beam_out = BeamParams(100.0, 1.0e4, 0, 0)
    geom = ScatteringGeometry.from_beams(beam_in, beam_out, 0.0)
    grid = GridSpec((0.0, 0.0, 0.0), (45.0, 45.0, 45.0), 32, 2)
    values = {M: vortex_ff(ground_state, AtomicState(2, 1, M), beam_in, beam_out, geom, grid).value
              for M in (-1, 0, 1)}
    assert abs(values[1]) > 1e-4
    assert abs(values[0]) < 1e-12
    assert abs(values[-1]) < 1e-12


SELECTION_STATES = [AtomicState(1, 0, 0)] + [AtomicState(2, 1, M) for M in (-1, 0, 1)]


@pytest.mark.slow
def test_azimuthal_selection_rule_all_channels():
    # 轴上原子、Θ=0：ℓ_i + M_i ≠ ℓ_f + M_f 的通道为零
    allowed, forbidden = {}, {}
    for ell_in in (-1, 0, 1):
        for ell_out in (-1, 0, 1):
            beam_in = BeamParams(100.0, 1.0e4, 0, ell_in)
            beam_out = BeamParams(100.0, 1.0e4, 0, ell_out)
            geom = ScatteringGeometry.from_beams(beam_in, beam_out, 0.0)
            for initial in SELECTION_STATES:
                for final in SELECTION_STATES:
                    value = vortex_ff(initial, final, beam_in, beam_out, geom, workers=4).value
                    channel = (ell_in, initial.label, ell_out, final.label)
                    if ell_in + initial.M == ell_out + final.M:
                        allowed[channel] = abs(value)
                    else:
                        forbidden[channel] = abs(value)
    assert len(allowed) + len(forbidden) == 144
    reference = max(allowed.values())
    assert reference > 0.5
    worst = max(forbidden, key=forbidden.get)
    assert forbidden[worst] < 1e-8 * reference, worst
    # 2p(+1) → 2p(-1) 只能由 ℓ -1 → 1 驱动
    assert allowed[(-1, "2p(M=1)", 1, "2p(M=-1)")] > 1e-8


def test_vortex_form_factor_independent_of_beam_scale(ground_state):
    # 光束远大于原子时，½λz_R 归一化使 M_v 与光束尺度无关
    q = 0.05
    values = []
    for wavelength, rayleigh_range in ((100.0, 1.0e6), (200.0, 4.0e6), (50.0, 4.0e6)):
        beam = BeamParams(wavelength, rayleigh_range)
        geom = ScatteringGeometry.from_q(beam.k, q)
        values.append(vortex_ff(ground_state, ground_state, beam, beam, geom, COARSE_GRID).value)
    for value in values[1:]:
        assert abs(value) == pytest.approx(abs(values[0]), rel=1e-4)
    assert abs(values[0]) == pytest.approx(hydrogen_1s_form_factor(q), rel=1e-4)


def test_beam_wavenumber_must_match_geometry(ground_state):
    beam = BeamParams(100.0, 1.0e4)
    geom = ScatteringGeometry.elastic(1.0, 0.1)
    with pytest.raises(DomainError):
        vortex_ff(ground_state, ground_state, beam, beam, geom, COARSE_GRID)


def test_unequal_beams_metadata(ground_state):
    beam_in = BeamParams(100.0, 1.0e4)
    beam_out = BeamParams(100.0, 2.0e4)
    geom = ScatteringGeometry.from_beams(beam_in, beam_out, 0.1)
    result = vortex_ff(ground_state, ground_state, beam_in, beam_out, geom, COARSE_GRID)
    assert result.metadata['unequal_beams']
    assert result.metadata['max_phase_gradient'] >= geom.q_magnitude


def test_non_paraxial_beam_warning_propagates(ground_state):
    beam = BeamParams(100.0, 10.0)
    geom = ScatteringGeometry.from_beams(beam, beam, 0.0)
    result = vortex_ff(ground_state, ground_state, beam, beam, geom, COARSE_GRID)
    assert beam.paraxial_warning in result.warnings


# ---------- 多中心靶 ----------

def test_structure_factor():
    q = np.array([0.0, 0.0, 1.3])
    assert structure_factor(q, [(0.0, 0.0, 0.0)]) == pytest.approx(1.0)
    d = np.array([0.2, 0.0, 0.8])
    pair = structure_factor(q, [d / 2.0, -d / 2.0])
    assert pair == pytest.approx(2.0 * np.cos(q @ d / 2.0), abs=1e-15)


def test_structure_factor_validation():
    with pytest.raises(DomainError):
        structure_factor((0.0, 0.0, 1.0), [])
    with pytest.raises(DomainError):
        structure_factor((0.0, 0.0, 1.0), [(0.0, 1.0)])


def test_multi_center_form_factor(ground_state):
    q = np.array([0.0, 0.0, 1.0])
    centers = [(0.0, 0.0, 1.0), (0.0, 0.0, -1.0)]
    single = plane_wave_ff(ground_state, ground_state, q, COARSE_GRID).value
    combined = multi_center_ff(ground_state.at((5.0, 0.0, 0.0)), ground_state, q, centers, COARSE_GRID)
    assert combined.value == pytest.approx(2.0 * np.cos(1.0) * single, rel=1e-12)
    assert combined.metadata['structure_factor'] == pytest.approx(2.0 * np.cos(1.0))
