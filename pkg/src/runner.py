#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
运行调度模块
把 RunConfig 展开为扫描点 × 散射几何的任务列表，按模式计算并汇总成表格结果

扫描点可以并发执行，结果行始终按扫描顺序输出
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np
import scipy

try:
    from .atom import AtomicState
    from .beam import BeamParams
    from .config import config
    from .errors import ConvergenceError
    from .formfactor import (FormFactorResult, ScatteringGeometry, beam_metadata, default_grid,
                             plane_wave_ff, point_limit_ff, vortex_ff)
    from .observables import (BOHR_METERS, PolarizationPair, compton_dcs, compton_dcs_si,
                              form_factor_q_profile, gaussian_q_profile, impact_profile,
                              parseval_check, thomson_dcs, vortex_factor)
    from .quadrature import GridSpec
    from .result_writer import RunResult
    from .run_config import BEAM_SWEEPS, RunConfig, emit_config
except ImportError:
    from atom import AtomicState
    from beam import BeamParams
    from config import config
    from errors import ConvergenceError
    from formfactor import (FormFactorResult, ScatteringGeometry, beam_metadata, default_grid,
                            plane_wave_ff, point_limit_ff, vortex_ff)
    from observables import (BOHR_METERS, PolarizationPair, compton_dcs, compton_dcs_si,
                             form_factor_q_profile, gaussian_q_profile, impact_profile,
                             parseval_check, thomson_dcs, vortex_factor)
    from quadrature import GridSpec
    from result_writer import RunResult
    from run_config import BEAM_SWEEPS, RunConfig, emit_config


COLUMNS = {
    'plane': ['sweep_value', 'theta', 'q', 're_M', 'im_M', 'abs_M2', 'err_est'],
    'vortex': ['sweep_value', 'theta', 'q', 're_Mv', 'im_Mv', 'abs_Mv2', 'err_est'],
    'tv_scan': ['sweep_value', 're_Mv', 'im_Mv', 'abs_Mv2', 're_Mp', 'im_Mp', 'abs_Mp2', 'T_v', 'err_est'],
    'impact_profile': ['b', 'phi_b', 're_a', 'im_a', 'abs_a2'],
    'xsec': ['sweep_value', 'theta', 'q', 'abs_M2', 'thomson_dcs', 'compton_dcs', 'compton_dcs_m2'],
}


@dataclass(frozen=True)
class Scenario:
    """一个扫描点上的物理输入"""
    sweep_value: float
    initial: AtomicState
    final: AtomicState
    beam_in: Optional[BeamParams]
    beam_out: Optional[BeamParams]
    thetas: Tuple[float, ...]


@dataclass(frozen=True)
class Task:
    scenario: Scenario
    theta: float
    q_vector: np.ndarray
    geometry: Optional[ScatteringGeometry]


class Runner:
    """运行调度类"""

    def __init__(self, cfg: RunConfig, workers: int = 1):
        self.logger = logging.getLogger(__name__)
        self.cfg = cfg
        self.workers = max(1, int(workers))
        self.warnings: List[str] = []
        self.grids: List[dict] = []

    # ---------- 展开扫描 ----------

    def _sweep_length(self, value: float, beam: Optional[BeamParams]) -> float:
        if self.cfg.sweep.unit == 'wavelength':
            return value * beam.wavelength
        return value * self.cfg.length_scale

    def _apply_beam_sweep(self, beam: BeamParams, value: float) -> BeamParams:
        parameter = self.cfg.sweep.parameter
        if parameter == 'z_R':
            return replace(beam, rayleigh_range=self._sweep_length(value, beam))
        if parameter == 'ell':
            return replace(beam, ell=int(value))
        return replace(beam, p=int(value))

    def scenario(self, value: Optional[float]) -> Scenario:
        """构造一个扫描点（value 为 None 表示不扫描）"""
        cfg = self.cfg
        beam_in = cfg.to_beam(cfg.beam_in)
        beam_out = cfg.to_beam(cfg.beam_out)
        thetas = cfg.geometry.theta
        sweep = cfg.sweep
        if value is not None and sweep.parameter in BEAM_SWEEPS:
            if sweep.apply_to in ('both', 'in'):
                beam_in = self._apply_beam_sweep(beam_in, value)
            if sweep.apply_to in ('both', 'out'):
                beam_out = self._apply_beam_sweep(beam_out, value)
        if value is not None and sweep.parameter == 'Theta':
            thetas = (value,)

        if value is not None and sweep.parameter == 'b':
            offset = self._sweep_length(value, beam_in)
        elif cfg.geometry.b_over_w0 is not None:
            offset = cfg.geometry.b_over_w0 * beam_in.waist
        else:
            offset = cfg.impact_offset()

        return Scenario(float('nan') if value is None else float(value),
                        cfg.to_state(cfg.atom_initial, offset), cfg.to_state(cfg.atom_final, offset),
                        beam_in, beam_out, tuple(thetas))

    def scenarios(self) -> List[Scenario]:
        if self.cfg.sweep is None:
            return [self.scenario(None)]
        return [self.scenario(v) for v in self.cfg.sweep.values]

    def tasks(self) -> List[Task]:
        """扫描点 × 散射几何"""
        azimuth = self.cfg.geometry.azimuth
        tasks = []
        for sc in self.scenarios():
            if self.cfg.geometry.q:
                for q in self.cfg.q_values():
                    if sc.beam_in is not None:
                        geom = ScatteringGeometry.from_q(sc.beam_in.k, q, azimuth)
                        tasks.append(Task(sc, geom.theta, geom.q, geom))
                    else:
                        # 没有波长时 q 取散射平面内的横向方向
                        q_vec = q * np.array([-np.sin(azimuth), np.cos(azimuth), 0.0])
                        tasks.append(Task(sc, float('nan'), q_vec, None))
            else:
                for theta in sc.thetas:
                    geom = ScatteringGeometry.from_beams(sc.beam_in, sc.beam_out, theta, azimuth)
                    tasks.append(Task(sc, theta, geom.q, geom))
        return tasks

    # ---------- 数值 ----------

    def grid_for(self, states) -> GridSpec:
        cfg = self.cfg.grid
        base = default_grid(states, cfg.density_floor, cfg.nodes_per_axis, cfg.refinement_levels)
        return GridSpec(base.center, base.half_widths, base.nodes_per_axis, base.refinement_levels,
                        cfg.panels_per_half, cfg.grading)

    def check_convergence(self, result: FormFactorResult, label: str):
        tolerance = max(config.convergence_abs_tol, config.convergence_rel_tol * abs(result.value))
        if result.abs_error_estimate > tolerance:
            raise ConvergenceError(
                f"{label} 未收敛: 误差估计 {result.abs_error_estimate:.3g} > 容差 {tolerance:.3g} "
                f"(nodes_per_axis={result.grid.nodes_per_axis}, levels={result.grid.refinement_levels})")

    def _record(self, result: FormFactorResult):
        for warning in result.warnings:
            if warning not in self.warnings:
                self.warnings.append(warning)
        grid = result.grid.to_dict()
        if grid not in self.grids:
            self.grids.append(grid)

    def _form_factor(self, task: Task, grid: GridSpec, workers: int, vortex: bool) -> FormFactorResult:
        sc = task.scenario
        floor = self.cfg.grid.density_floor
        if vortex:
            result = vortex_ff(sc.initial, sc.final, sc.beam_in, sc.beam_out, task.geometry, grid, workers,
                               density_floor=floor)
        else:
            result = plane_wave_ff(sc.initial, sc.final, task.q_vector, grid, workers, density_floor=floor)
        self.check_convergence(result, f"{'M_v' if vortex else 'M'}(Θ={task.theta:.6g})")
        return result

    def _row(self, task: Task, workers: int) -> Tuple[list, List[FormFactorResult]]:
        sc = task.scenario
        mode = self.cfg.mode
        grid = self.grid_for([sc.initial, sc.final])
        q = self._q_out(float(np.linalg.norm(task.q_vector)))

        if mode in ('plane', 'vortex'):
            res = self._form_factor(task, grid, workers, vortex=(mode == 'vortex'))
            return [sc.sweep_value, task.theta, q, res.value.real, res.value.imag,
                    abs(res.value) ** 2, res.abs_error_estimate], [res]

        if mode == 'tv_scan':
            mv = self._form_factor(task, grid, workers, vortex=True)
            mp = point_limit_ff(sc.initial, sc.final, sc.beam_in, sc.beam_out, task.geometry, grid, workers,
                                density_floor=self.cfg.grid.density_floor)
            self.check_convergence(mp, f"M_p(Θ={task.theta:.6g})")
            tv = vortex_factor(mv.value, mp.value)
            return [sc.sweep_value, mv.value.real, mv.value.imag, abs(mv.value) ** 2,
                    mp.value.real, mp.value.imag, abs(mp.value) ** 2, tv,
                    max(mv.abs_error_estimate, mp.abs_error_estimate)], [mv, mp]

        # xsec
        res = self._form_factor(task, grid, workers, vortex=(self.cfg.run.form_factor == 'vortex'))
        geom = task.geometry
        pol = PolarizationPair.from_helicity(self.cfg.polarization.m_s_in, self.cfg.polarization.m_s_out,
                                             geom.theta, geom.azimuth)
        thomson = thomson_dcs(pol, geom.k_i, geom.k_f)
        return [sc.sweep_value, task.theta, q, abs(res.value) ** 2, thomson,
                compton_dcs(res.value, thomson), compton_dcs_si(res.value, thomson)], [res]

    def _q_out(self, q: float) -> float:
        return q / BOHR_METERS if self.cfg.units.output == 'si' else q

    def _b_out(self, b: float) -> float:
        return b * BOHR_METERS if self.cfg.units.output == 'si' else b

    # ---------- 模式 ----------

    def _run_table(self) -> RunResult:
        tasks = self.tasks()
        self.logger.info(f"[运行] 模式 {self.cfg.mode}: {len(tasks)} 个计算点，{self.workers} 线程")
        if self.workers > 1 and len(tasks) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                outputs = list(executor.map(lambda t: self._row(t, 1), tasks))
        else:
            outputs = [self._row(t, self.workers) for t in tasks]
        rows = []
        for row, results in outputs:
            rows.append(row)
            for res in results:
                self._record(res)
        return RunResult(COLUMNS[self.cfg.mode], rows)

    def _run_impact_profile(self) -> RunResult:
        cfg = self.cfg
        profile = cfg.profile
        s = cfg.length_scale
        sc = self.scenario(None)
        k = sc.beam_in.k if sc.beam_in is not None else profile.k / s
        if sc.beam_in is not None and profile.k is not None \
                and not np.isclose(profile.k / s, k, rtol=1e-9, atol=0.0):
            warning = (f"[profile] k={profile.k:g} 与 [beam_in] 的波数 {k * s:.12g} 不一致，"
                       f"使用光束的波数")
            self.logger.warning(f"[运行] {warning}")
            self.warnings.append(warning)
        q_max = profile.q_max / s if profile.q_max is not None else None
        b_max = profile.b_max * s if profile.b_max is not None else None

        if profile.kind == 'gaussian':
            fq = gaussian_q_profile(profile.sigma * s, k, q_max,
                                    profile.q_n_rho or 64, profile.q_n_phi or 256)
        else:
            vortex = cfg.run.form_factor == 'vortex'
            grid = self.grid_for([sc.initial, sc.final])
            self.grids.append(grid.to_dict())
            fq = form_factor_q_profile(
                sc.initial, sc.final, k,
                beam_in=sc.beam_in if vortex else None, beam_out=sc.beam_out if vortex else None,
                helicity=(cfg.polarization.m_s_in, cfg.polarization.m_s_out), q_max=q_max,
                n_rho=profile.q_n_rho, n_phi=profile.q_n_phi, grid=grid,
                symmetric=profile.symmetric, workers=self.workers,
                density_floor=cfg.grid.density_floor)

        ab = impact_profile(fq, b_max, profile.b_n_rho, profile.b_n_phi, workers=self.workers)
        report = parseval_check(fq, ab)
        for warning in ab.warnings:
            if warning not in self.warnings:
                self.warnings.append(warning)

        rows = [[self._b_out(b), phi, a.real, a.imag, abs(a) ** 2]
                for b, phi, a in zip(ab.radii, ab.angles, ab.values)]
        footer = {
            'sigma_q': report.sigma_q,
            'sigma_b': report.sigma_b,
            'rel_diff': report.rel_diff,
            'max_abs_a2': report.max_probability,
            'probability_bound_ok': report.probability_bound_ok,
            'q_max': self._q_out(fq.q_max),
            'b_max': self._b_out(ab.b_max),
        }
        return RunResult(COLUMNS['impact_profile'], rows, footer=footer)

    def metadata(self) -> dict:
        cfg = self.cfg
        meta = {
            'app': 'vortexff',
            'version': config.version,
            'numpy': np.__version__,
            'scipy': scipy.__version__,
            'mode': cfg.mode,
            'output_units': cfg.units.output,
            'sweep': cfg.sweep.parameter if cfg.sweep else 'none',
            'sweep_unit': (cfg.units.length if cfg.sweep.unit == 'length' else 'wavelength')
                          if cfg.sweep else 'none',
        }
        beam_in, beam_out = cfg.to_beam(cfg.beam_in), cfg.to_beam(cfg.beam_out)
        if beam_in is not None:
            meta.update(beam_metadata(beam_in, beam_out))
            meta['waist'] = beam_in.waist
        meta['grids'] = self.grids
        meta['warnings'] = self.warnings
        meta['config'] = emit_config(cfg)
        return meta

    def run(self) -> RunResult:
        """
        执行配置描述的计算

        Returns:
            RunResult（列、行、元数据、尾注）
        """
        self.warnings = []
        self.grids = []
        if self.cfg.mode == 'impact_profile':
            result = self._run_impact_profile()
        else:
            result = self._run_table()
        result.metadata = self.metadata()
        self.logger.info(f"[运行] 完成: {len(result.rows)} 行")
        return result


def run(cfg: RunConfig, workers: int = 1) -> RunResult:
    """执行一次运行"""
    return Runner(cfg, workers).run()
