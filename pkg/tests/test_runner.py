# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from src.beam import BeamParams
from src.errors import ConvergenceError
from src.observables import R0_METERS
from src.result_writer import ResultWriter
from src.run_config import parse_config
from src.runner import COLUMNS, Runner

PLANE_TEXT = """\
[run]
mode = plane

[atom_initial]
N = 1

[geometry]
q = 0.5, 1.0
"""

TV_SCAN_TEXT = """\
[run]
mode = tv_scan

[atom_initial]
N = 1

[beam_in]
wavelength = 100
rayleigh_range = 1e3
ell = 1

[geometry]
theta = 0.0
b_over_w0 = 0.5

[sweep]
parameter = z_R
values = 10, 100, 1000
unit = wavelength
"""

XSEC_TEXT = """\
[run]
mode = xsec

[atom_initial]
N = 1

[beam_in]
wavelength = 100
rayleigh_range = 1e4

[geometry]
theta = 0.1, 1.0
"""

GAUSSIAN_TEXT = """\
[run]
mode = impact_profile

[atom_initial]
N = 1

[profile]
kind = gaussian
sigma = 1.0
k = 2.0
"""


def test_plane_table():
    result = Runner(parse_config(PLANE_TEXT)).run()
    assert result.columns == COLUMNS['plane']
    assert len(result.rows) == 2
    for q, re_m, im_m in zip(result.column('q'), result.column('re_M'), result.column('im_M')):
        assert re_m == pytest.approx((1.0 + q * q / 4.0) ** -2, rel=1e-4)
        assert abs(im_m) < 1e-10
    assert result.column('q') == pytest.approx([0.5, 1.0])
    assert all(math.isnan(v) for v in result.column('sweep_value'))
    assert result.metadata['mode'] == 'plane'
    assert result.metadata['sweep'] == 'none'
    assert result.metadata['grids'][0]['nodes_per_axis'] == 48
    assert result.metadata['config'].startswith("[run]\nmode = plane")


def test_output_is_independent_of_thread_count(tmp_path):
    cfg = parse_config(PLANE_TEXT)
    contents = []
    for workers in (1, 4, 8):
        path = tmp_path / f"plane_{workers}.csv"
        ResultWriter().save(Runner(cfg, workers).run(), str(path))
        contents.append(path.read_bytes())
    assert contents[0] == contents[1] == contents[2]


def test_grid_override_reaches_metadata():
    cfg = parse_config(PLANE_TEXT.replace("q = 0.5, 1.0", "q = 0.5") + "[grid]\nnodes_per_axis = 64\n")
    result = Runner(cfg).run()
    assert result.metadata['grids'][0]['nodes_per_axis'] == 64


def test_convergence_error_on_single_level():
    # 单级网格的误差估计来自伴随规则，4 节点远不足以积分 1s
    cfg = parse_config(PLANE_TEXT + "[grid]\nnodes_per_axis = 4\nrefinement_levels = 1\n")
    with pytest.raises(ConvergenceError) as info:
        Runner(cfg).run()
    assert info.value.exit_code == 3


def test_tv_scan_approaches_plane_wave_limit():
    result = Runner(parse_config(TV_SCAN_TEXT)).run()
    assert result.columns == COLUMNS['tv_scan']
    assert result.column('sweep_value') == [10.0, 100.0, 1000.0]

    t_v = np.array(result.column('T_v'))
    assert np.all(t_v < 0)
    assert np.all(np.diff(np.abs(t_v)) < 0)
    assert abs(t_v[-1]) < 1e-5

    beam = BeamParams(100.0, 1.0e3, 0, 1)
    expected = -4.0 / beam.waist ** 2 - 5.0 / beam.rayleigh_range ** 2
    assert t_v[0] == pytest.approx(expected, rel=0.02)

    ratio = np.array(result.column('abs_Mv2')) / np.array(result.column('abs_Mp2'))
    np.testing.assert_allclose(ratio - 1.0, t_v, rtol=1e-9, atol=1e-15)
    assert result.metadata['sweep'] == 'z_R'
    assert result.metadata['sweep_unit'] == 'wavelength'


def test_xsec_columns():
    result = Runner(parse_config(XSEC_TEXT)).run()
    assert result.columns == COLUMNS['xsec']
    for theta, m2, thomson, dcs, dcs_si in zip(*(result.column(c) for c in
                                                 ('theta', 'abs_M2', 'thomson_dcs', 'compton_dcs',
                                                  'compton_dcs_m2'))):
        assert thomson == pytest.approx((0.5 * (1.0 + math.cos(theta))) ** 2, rel=1e-12)
        assert dcs == pytest.approx(m2 * thomson, rel=1e-12)
        assert dcs_si == pytest.approx(dcs * R0_METERS ** 2, rel=1e-12)
        assert 0.0 < m2 <= 1.0 + 1e-6


def test_gaussian_impact_profile():
    result = Runner(parse_config(GAUSSIAN_TEXT)).run()
    assert result.columns == COLUMNS['impact_profile']
    assert result.rows
    assert result.footer['rel_diff'] <= 1e-3
    assert result.footer['sigma_q'] == pytest.approx(math.pi / 4.0, rel=1e-6)
    assert result.footer['probability_bound_ok'] is True
    assert max(result.column('abs_a2')) == pytest.approx(0.25, rel=1e-3)


def test_tv_scan_gaussian_beam_limit():
    text = TV_SCAN_TEXT.replace("ell = 1\n", "").replace("b_over_w0 = 0.5\n", "") \
        .replace("values = 10, 100, 1000", "values = 1e3, 1e6")
    result = Runner(parse_config(text), workers=2).run()
    t_v = result.column('T_v')
    assert abs(t_v[-1]) < 5e-3
    assert abs(t_v[-1]) <= abs(t_v[0])
    assert result.column('abs_Mv2')[-1] == pytest.approx(1.0, abs=5e-3)


def test_density_floor_reaches_coverage_check():
    # 1e-6 给出更小的盒子，求积和覆盖检查必须使用同一个下限
    cfg = parse_config(PLANE_TEXT + "[grid]\ndensity_floor = 1e-6\n")
    result = Runner(cfg).run()
    half = result.metadata['grids'][0]['half_widths']
    assert half[0] < Runner(parse_config(PLANE_TEXT)).grid_for(
        [cfg.to_state(cfg.atom_initial)]).half_widths[0]
    for q, re_m in zip(result.column('q'), result.column('re_M')):
        assert re_m == pytest.approx((1.0 + q * q / 4.0) ** -2, rel=1e-3)


def _csv_bytes(cfg, workers, path):
    ResultWriter().save(Runner(cfg, workers).run(), str(path))
    return path.read_bytes()


@pytest.mark.slow
def test_tv_scan_is_independent_of_thread_count(tmp_path):
    cfg = parse_config(TV_SCAN_TEXT)
    contents = [_csv_bytes(cfg, w, tmp_path / f"tv_{w}.csv") for w in (1, 4, 8)]
    assert contents[0] == contents[1] == contents[2]


def test_impact_profile_is_independent_of_thread_count(tmp_path):
    gaussian = parse_config(GAUSSIAN_TEXT)
    contents = [_csv_bytes(gaussian, w, tmp_path / f"g_{w}.csv") for w in (1, 4, 8)]
    assert contents[0] == contents[1] == contents[2]


def test_profile_k_conflicting_with_beam_warns():
    beam = "\n[beam_in]\nwavelength = 3.141592653589793\nrayleigh_range = 100\n"
    result = Runner(parse_config(GAUSSIAN_TEXT.replace("k = 2.0", "k = 3.0") + beam)).run()
    assert any("[profile] k=3" in w for w in result.metadata['warnings'])
    # 实际使用光束的波数 k = 2
    assert result.footer['sigma_q'] == pytest.approx(math.pi / 4.0, rel=1e-6)

    consistent = Runner(parse_config(GAUSSIAN_TEXT + beam)).run()
    assert not any("[profile]" in w for w in consistent.metadata['warnings'])
