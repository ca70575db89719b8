#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
自检模块
用解析结果作为参照检查各个数值组件，每个检查输出一行 PASS/FAIL
"""
import logging
from typing import Callable, List, NamedTuple

import numpy as np

try:
    from .atom import AtomicState
    from .beam import BeamParams, beam_width, coulomb_angle, transverse_norm
    from .formfactor import ScatteringGeometry, plane_wave_ff, point_limit_ff, structure_factor, vortex_ff
    from .observables import fit_power_law, gaussian_q_profile, impact_profile, parseval_check, vortex_factor
    from .quadrature import GridSpec, required_nodes
    from .specfun import PolyIndex, assoc_laguerre, laguerre_derivative_form
except ImportError:
    from atom import AtomicState
    from beam import BeamParams, beam_width, coulomb_angle, transverse_norm
    from formfactor import ScatteringGeometry, plane_wave_ff, point_limit_ff, structure_factor, vortex_ff
    from observables import fit_power_law, gaussian_q_profile, impact_profile, parseval_check, vortex_factor
    from quadrature import GridSpec, required_nodes
    from specfun import PolyIndex, assoc_laguerre, laguerre_derivative_form


logger = logging.getLogger(__name__)


class OracleResult(NamedTuple):
    name: str
    passed: bool
    deviation: float
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<32s} 偏差 {self.deviation:.3e}  容差 {self.tolerance:.1e}"


def _check(name: str, deviation: float, tolerance: float) -> OracleResult:
    deviation = float(deviation)
    return OracleResult(name, bool(np.isfinite(deviation) and deviation <= tolerance), deviation, tolerance)


def oracle_laguerre(quick: bool) -> OracleResult:
    x = np.linspace(0.0, 20.0, 41)
    worst = 0.0
    for p in range(5):
        for alpha in range(5):
            idx = PolyIndex(p, alpha)
            a, b = assoc_laguerre(idx, x), laguerre_derivative_form(idx, x)
            worst = max(worst, float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a)))))
    return _check("拉盖尔多项式两种形式", worst, 1e-9)


ORACLE_HALF_WIDTH = 21.3


def oracle_grid(q: float, quick: bool = False) -> GridSpec:
    """氢 1s 参照网格：小 q 用 64 节点三级，大 q 按振荡采样要求加密并减为两级"""
    grid = GridSpec((0.0, 0.0, 0.0), (ORACLE_HALF_WIDTH,) * 3, 64, 2 if quick else 3)
    needed = required_nodes(grid, q)
    if needed <= grid.nodes_per_axis:
        return grid
    return grid.with_nodes(needed + needed % 2, 2)


def oracle_hydrogen_1s(quick: bool) -> OracleResult:
    state = AtomicState(1, 0, 0)
    worst = 0.0
    for q in ((1.0,) if quick else (0.1, 0.5, 1.0, 2.0, 5.0)):
        value = plane_wave_ff(state, state, (0.0, 0.0, q), oracle_grid(q, quick)).value
        exact = (1.0 + q * q / 4.0) ** -2
        worst = max(worst, abs(value - exact) / exact)
    return _check("氢 1s 弹性形状因子", worst, 1e-5 if quick else 1e-6)


def oracle_lg_norm(quick: bool) -> OracleResult:
    worst = 0.0
    modes = [(1, 2)] if quick else [(p, ell) for p in range(4) for ell in (-4, -1, 0, 2, 4)]
    for p, ell in modes:
        beam = BeamParams(100.0, 1.0e3, p, ell)
        for z in (0.0, beam.rayleigh_range):
            worst = max(worst, abs(transverse_norm(beam, z) - 1.0))
    return _check("拉盖尔-高斯横向归一化", worst, 1e-8)


def oracle_plane_wave_limit(quick: bool) -> OracleResult:
    state = AtomicState(1, 0, 0)
    beam = BeamParams(100.0, 1.0e8)
    grid = GridSpec((0.0, 0.0, 0.0), (ORACLE_HALF_WIDTH,) * 3, 48, 2)
    value = vortex_ff(state, state, beam, beam, ScatteringGeometry.from_beams(beam, beam, 0.0), grid).value
    return _check("平面波极限 M_v → 1", abs(value - 1.0), 2e-3)


def oracle_geometry(quick: bool) -> OracleResult:
    beam = BeamParams(100.0, 1.0e3)
    z = 1e6 * beam.rayleigh_range
    asymptote = abs(beam_width(beam, z) / z - beam.waist / beam.rayleigh_range)
    coulomb = abs(coulomb_angle(0.5, 1.0) - np.pi / 2.0)
    pair = abs(structure_factor((0.0, 0.0, 1.3), [(0, 0, 0.4), (0, 0, -0.4)]) - 2.0 * np.cos(1.3 * 0.4))
    return _check("几何恒等式", max(asymptote, coulomb, pair), 1e-10)


def oracle_parseval(quick: bool) -> OracleResult:
    fq = gaussian_q_profile(1.0, 2.0)
    report = parseval_check(fq, impact_profile(fq))
    return _check("高斯 Parseval 恒等式", report.rel_diff, 1e-4)


def oracle_selection_rule(quick: bool) -> OracleResult:
    # 轴上 1s、Θ=0：ℓ 1 → -1 改变 ℓ + M，必须为零
    state = AtomicState(1, 0, 0)
    grid = GridSpec((0.0, 0.0, 0.0), (ORACLE_HALF_WIDTH,) * 3, 32 if quick else 48, 2)
    beam_in = BeamParams(100.0, 1.0e4, 0, 1)
    values = []
    for ell_out in (1, -1):
        beam_out = BeamParams(100.0, 1.0e4, 0, ell_out)
        geom = ScatteringGeometry.from_beams(beam_in, beam_out, 0.0)
        values.append(vortex_ff(state, state, beam_in, beam_out, geom, grid).value)
    allowed, forbidden = values
    return _check("方位角选择定则", abs(forbidden) / abs(allowed), 1e-8)


def oracle_shift(quick: bool) -> OracleResult:
    state = AtomicState(1, 0, 0)
    q = np.array([0.4, -0.3, 0.7])
    c = np.array([1.0, 0.5, -0.3])
    nodes = 32 if quick else 48
    at_origin = plane_wave_ff(state, state, q, GridSpec((0.0, 0.0, 0.0), (ORACLE_HALF_WIDTH,) * 3, nodes, 2)).value
    shifted = state.at(c)
    moved = plane_wave_ff(shifted, shifted, q, GridSpec(tuple(c), (ORACLE_HALF_WIDTH,) * 3, nodes, 2)).value
    return _check("平移相位 e^{iq·b}", abs(moved - np.exp(1j * q @ c) * at_origin) / abs(at_origin), 1e-8)


def oracle_tv_slope(quick: bool) -> OracleResult:
    # b = w0/2、ℓ = 1 时 T_v ∝ 1/z_R，两点对数斜率应为 -1
    rayleigh = (1.0e3, 1.0e4)
    t_v = []
    for z_r in rayleigh:
        beam = BeamParams(100.0, z_r, 0, 1)
        state = AtomicState(1, 0, 0, (0.5 * beam.waist, 0.0, 0.0))
        geom = ScatteringGeometry.from_beams(beam, beam, 0.0)
        m_v = vortex_ff(state, state, beam, beam, geom)
        m_p = point_limit_ff(state, state, beam, beam, geom, m_v.grid)
        t_v.append(vortex_factor(m_v.value, m_p.value))
    fit = fit_power_law(rayleigh, t_v)
    return _check("T_v 随 z_R 的标度", abs(fit.slope + 1.0), 0.1)


ORACLES: List[Callable[[bool], OracleResult]] = [
    oracle_laguerre,
    oracle_geometry,
    oracle_lg_norm,
    oracle_hydrogen_1s,
    oracle_plane_wave_limit,
    oracle_parseval,
    oracle_selection_rule,
    oracle_shift,
    oracle_tv_slope,
]


def run_selftest(quick: bool = False) -> List[OracleResult]:
    """
    依次运行所有自检

    Args:
        quick: 使用更小的网格和更少的参数点

    Returns:
        每个自检的结果
    """
    results = []
    for oracle in ORACLES:
        result = oracle(quick)
        logger.info(f"[自检] {result.line()}")
        results.append(result)
    return results
