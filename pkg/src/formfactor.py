#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
形状因子模块
平面波形状因子 M = <f|e^{iq·r}|i>、涡旋形状因子 M_v 以及多中心靶的结构因子

散射平面取 y-z 平面：出射方向 k̂_f = R_z(φ_s) R_x(Θ) ẑ，
出射光束的带撇坐标由 r' = R_z(φ_s) R_x(-Θ) R_z(-φ_s) r 给出
"""
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.transform import Rotation

try:
    from .atom import AtomicState, union_box
    from .beam import BeamParams, lg_mode
    from .config import config
    from .errors import CoverageError, DomainError
    from .quadrature import GridSpec, integrate_3d
except ImportError:
    from atom import AtomicState, union_box
    from beam import BeamParams, lg_mode
    from config import config
    from errors import CoverageError, DomainError
    from quadrature import GridSpec, integrate_3d


logger = logging.getLogger(__name__)


def scattering_rotation(theta: float, azimuth: float) -> Rotation:
    # 外旋 z-x-z：先 R_z(-φ_s)，再 R_x(-Θ)，最后 R_z(φ_s)
    return Rotation.from_euler('zxz', [-azimuth, -theta, azimuth])


@dataclass(frozen=True)
class ScatteringGeometry:
    """
    散射几何

    k_i, k_f: 入射/出射波数（1/bohr）
    theta: 散射角 Θ（弧度，0..π）
    azimuth: 散射平面方位角 φ_s（弧度），0 对应 y-z 平面
    """
    k_i: float
    k_f: float
    theta: float
    azimuth: float = 0.0

    def __post_init__(self):
        for name in ('k_i', 'k_f'):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise DomainError(f"{name} 必须为正: {value}")
        if not np.isfinite(self.theta) or not (0.0 <= self.theta <= np.pi):
            raise DomainError(f"散射角必须在 [0, π] 内: {self.theta}")
        if not np.isfinite(self.azimuth):
            raise DomainError(f"azimuth 必须是有限值: {self.azimuth}")
        for name in ('k_i', 'k_f', 'theta', 'azimuth'):
            object.__setattr__(self, name, float(getattr(self, name)))

    @classmethod
    def elastic(cls, k: float, theta: float, azimuth: float = 0.0) -> "ScatteringGeometry":
        return cls(k, k, theta, azimuth)

    @classmethod
    def from_beams(cls, beam_in: BeamParams, beam_out: BeamParams, theta: float,
                   azimuth: float = 0.0) -> "ScatteringGeometry":
        """波数取自两束光的波长"""
        return cls(beam_in.k, beam_out.k, theta, azimuth)

    @classmethod
    def from_q(cls, k: float, q: float, azimuth: float = 0.0) -> "ScatteringGeometry":
        """
        弹性散射中由动量转移大小反解散射角 Θ = 2 arcsin(q/2k)

        Args:
            k: 波数
            q: 动量转移大小，0 <= q <= 2k
            azimuth: 散射平面方位角
        """
        if k <= 0:
            raise DomainError(f"k 必须为正: {k}")
        if q < 0 or q > 2.0 * k * (1.0 + 1e-14):
            raise DomainError(f"弹性散射要求 0 <= q <= 2k: q={q}, k={k}")
        ratio = min(q / (2.0 * k), 1.0)
        return cls(k, k, 2.0 * np.arcsin(ratio), azimuth)

    @property
    def k_f_hat(self) -> np.ndarray:
        """出射方向单位向量 R_z(φ_s) R_x(Θ) ẑ"""
        s, c = np.sin(self.theta), np.cos(self.theta)
        return np.array([np.sin(self.azimuth) * s, -np.cos(self.azimuth) * s, c])

    @property
    def q(self) -> np.ndarray:
        """动量转移 q = k_i ẑ - k_f k̂_f"""
        return np.array([0.0, 0.0, self.k_i]) - self.k_f * self.k_f_hat

    @property
    def q_magnitude(self) -> float:
        return float(np.linalg.norm(self.q))

    @property
    def is_elastic(self) -> bool:
        return abs(self.k_i - self.k_f) <= 1e-12 * self.k_i


@dataclass(frozen=True)
class FormFactorResult:
    """形状因子结果（无量纲复数）"""
    value: complex
    abs_error_estimate: float
    grid: GridSpec
    levels_used: int = 0
    warnings: Tuple[str, ...] = field(default_factory=tuple)
    metadata: dict = field(default_factory=dict, compare=False)


def rotate_to_scattered_frame(r, theta: float, azimuth: float = 0.0) -> np.ndarray:
    """
    把坐标变换到出射光束坐标系，使 ẑ' 与 k̂_f 重合

    Args:
        r: 形状 (3,) 或 (..., 3) 的坐标
        theta: 散射角
        azimuth: 散射平面方位角

    Returns:
        与 r 形状相同的数组
    """
    r = np.asarray(r, dtype=float)
    matrix = scattering_rotation(theta, azimuth).as_matrix()
    return r @ matrix.T


def _cylindrical(points: np.ndarray):
    x, y, z = points[..., 0], points[..., 1], points[..., 2]
    return np.hypot(x, y), z, np.arctan2(y, x)


def default_grid(states: Iterable[AtomicState], density_floor: Optional[float] = None,
                 nodes_per_axis: Optional[int] = None,
                 refinement_levels: Optional[int] = None) -> GridSpec:
    """
    覆盖所有原子态支撑区域的默认求积网格

    Args:
        states: 参与积分的原子态
        density_floor: 支撑半径的密度下限
        nodes_per_axis: 每轴节点数
        refinement_levels: 细化级数
    """
    center, half = union_box(states, density_floor)
    return GridSpec(center, half,
                    nodes_per_axis or config.default_nodes_per_axis,
                    refinement_levels or config.default_refinement_levels)


def check_coverage(grid: GridSpec, states: Sequence[AtomicState],
                   density_floor: Optional[float] = None):
    """网格不覆盖所有态的支撑区域时抛出 CoverageError，并给出所需盒子"""
    center, half = union_box(states, density_floor, factor=1.0)
    lo = np.asarray(center) - np.asarray(half)
    hi = np.asarray(center) + np.asarray(half)
    if not grid.covers(lo, hi):
        raise CoverageError(
            f"积分盒 center={grid.center}, half_widths={grid.half_widths} 未覆盖原子支撑区域",
            required={'center': tuple(round(float(c), 6) for c in center),
                      'half_widths': tuple(round(float(h), 6) for h in half)})


def _resolve_grid(grid: Optional[GridSpec], states: Sequence[AtomicState],
                  density_floor: Optional[float] = None) -> GridSpec:
    # 生成和检查盒子必须使用同一个密度下限
    if grid is None:
        return default_grid(states, density_floor)
    check_coverage(grid, states, density_floor)
    return grid


def plane_wave_ff(initial: AtomicState, final: AtomicState, q, grid: Optional[GridSpec] = None,
                  workers: int = 1, rel_tol: Optional[float] = None,
                  density_floor: Optional[float] = None) -> FormFactorResult:
    """
    平面波形状因子 ∫ φ_f* e^{iq·r} φ_i d³r

    Args:
        initial: 初态
        final: 末态
        q: 动量转移（1/bohr，三维向量）
        grid: 求积网格；None 时由支撑半径自动生成
        workers: 线程数
        rel_tol: 细化提前停止的相对容差
        density_floor: 检查网格覆盖时使用的支撑半径密度下限

    Returns:
        FormFactorResult
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (3,) or not np.all(np.isfinite(q)):
        raise DomainError(f"q 必须是有限的三维向量: {q}")
    grid = _resolve_grid(grid, [initial, final], density_floor)

    def integrand(points):
        phase = np.exp(1j * (points @ q))
        return np.conj(final.wavefunction(points)) * phase * initial.wavefunction(points)

    result = integrate_3d(integrand, grid, max_phase_gradient=float(np.linalg.norm(q)),
                          workers=workers, rel_tol=rel_tol)
    logger.debug(f"[形状因子] M({initial.label}→{final.label}, |q|={np.linalg.norm(q):.6g}) = {result.value:.12g}")
    return FormFactorResult(result.value, result.abs_error_estimate, grid, result.levels_used,
                            result.warnings, {'nodes_per_axis': result.nodes_per_axis})


def _check_beam_geometry(beam_in: BeamParams, beam_out: BeamParams, geom: ScatteringGeometry):
    for name, beam, k in (('beam_in', beam_in, geom.k_i), ('beam_out', beam_out, geom.k_f)):
        if abs(beam.k - k) > 1e-9 * k:
            raise DomainError(f"{name} 的波数 2π/λ={beam.k:.12g} 与散射几何的 {k:.12g} 不一致")


def _phase_gradient_bound(grid: GridSpec, geom: ScatteringGeometry, beam_in: BeamParams,
                          beam_out: BeamParams) -> float:
    reach = float(np.linalg.norm(np.abs(grid.center) + np.asarray(grid.half_widths)))
    curvature = max(geom.k_i / beam_in.rayleigh_range, geom.k_f / beam_out.rayleigh_range)
    return geom.q_magnitude + curvature * reach


def beam_metadata(beam_in: BeamParams, beam_out: BeamParams) -> dict:
    return {
        'prefactor_beam': 'beam_in',
        'unequal_beams': (beam_in.wavelength, beam_in.rayleigh_range)
                         != (beam_out.wavelength, beam_out.rayleigh_range),
    }


def vortex_ff(initial: AtomicState, final: AtomicState, beam_in: BeamParams, beam_out: BeamParams,
              geom: ScatteringGeometry, grid: Optional[GridSpec] = None, workers: int = 1,
              rel_tol: Optional[float] = None,
              density_floor: Optional[float] = None) -> FormFactorResult:
    """
    涡旋形状因子

    M_v = ½ λ_in z_R,in ∫ φ_f* · conj(u_out(r')) · e^{iq·r} · u_in(r) · φ_i d³r

    u 为拉盖尔-高斯模式，r' 为出射光束坐标系中的坐标；原子相对涡旋轴的偏移
    由原子态的 center 给出

    Args:
        initial: 初态
        final: 末态
        beam_in: 入射光束
        beam_out: 出射光束
        geom: 散射几何，波数须与两束光一致
        grid: 求积网格
        workers: 线程数
        rel_tol: 细化提前停止的相对容差
        density_floor: 检查网格覆盖时使用的支撑半径密度下限

    Returns:
        FormFactorResult，metadata 记录归一化所用光束
    """
    _check_beam_geometry(beam_in, beam_out, geom)
    grid = _resolve_grid(grid, [initial, final], density_floor)
    q = geom.q
    matrix = scattering_rotation(geom.theta, geom.azimuth).as_matrix()
    prefactor = 0.5 * beam_in.wavelength * beam_in.rayleigh_range

    def integrand(points):
        rho, z, phi = _cylindrical(points)
        u_in = lg_mode(beam_in, rho, z, phi)
        rho_p, z_p, phi_p = _cylindrical(points @ matrix.T)
        u_out = lg_mode(beam_out, rho_p, z_p, phi_p)
        phase = np.exp(1j * (points @ q))
        return (np.conj(final.wavefunction(points)) * np.conj(u_out) * phase
                * u_in * initial.wavefunction(points))

    gradient = _phase_gradient_bound(grid, geom, beam_in, beam_out)
    result = integrate_3d(integrand, grid, max_phase_gradient=gradient,
                          workers=workers, rel_tol=rel_tol)

    warnings = list(result.warnings)
    for beam in (beam_in, beam_out):
        if beam.paraxial_warning and beam.paraxial_warning not in warnings:
            warnings.append(beam.paraxial_warning)

    metadata = beam_metadata(beam_in, beam_out)
    metadata.update({'max_phase_gradient': gradient, 'nodes_per_axis': result.nodes_per_axis})
    value = prefactor * result.value
    logger.debug(f"[形状因子] M_v({initial.label}→{final.label}, ℓ {beam_in.ell}→{beam_out.ell}, "
                 f"Θ={geom.theta:.6g}) = {value:.12g}")
    return FormFactorResult(value, prefactor * result.abs_error_estimate, grid,
                            result.levels_used, tuple(warnings), metadata)


def point_limit_ff(initial: AtomicState, final: AtomicState, beam_in: BeamParams,
                   beam_out: BeamParams, geom: ScatteringGeometry, grid: Optional[GridSpec] = None,
                   workers: int = 1, rel_tol: Optional[float] = None,
                   density_floor: Optional[float] = None) -> FormFactorResult:
    """
    M_v 的平面波极限 M_p：光束因子取原子中心处的值

    M_p = ½ λ_in z_R,in · conj(u_out(c')) · u_in(c) · M(q)

    轴上 ℓ = p = 0 时 M_p = M
    """
    _check_beam_geometry(beam_in, beam_out, geom)
    c = np.asarray(initial.center)
    rho, z, phi = _cylindrical(c)
    rho_p, z_p, phi_p = _cylindrical(rotate_to_scattered_frame(c, geom.theta, geom.azimuth))
    beam_factor = (0.5 * beam_in.wavelength * beam_in.rayleigh_range
                   * np.conj(lg_mode(beam_out, rho_p, z_p, phi_p)) * lg_mode(beam_in, rho, z, phi))

    plane = plane_wave_ff(initial, final, geom.q, grid, workers, rel_tol, density_floor)
    metadata = beam_metadata(beam_in, beam_out)
    metadata.update(plane.metadata)
    metadata['beam_factor'] = complex(beam_factor)
    return FormFactorResult(complex(beam_factor * plane.value),
                            float(abs(beam_factor) * plane.abs_error_estimate),
                            plane.grid, plane.levels_used, plane.warnings, metadata)


def structure_factor(q, centers: Iterable[Sequence[float]]) -> complex:
    """
    几何结构因子 G = Σ_j e^{iq·R_j}

    Args:
        q: 动量转移
        centers: 散射中心列表

    Returns:
        复数
    """
    centers = np.asarray(list(centers), dtype=float)
    if centers.size == 0:
        raise DomainError("结构因子至少需要一个中心")
    if centers.ndim != 2 or centers.shape[1] != 3:
        raise DomainError(f"centers 必须是三维向量列表: shape={centers.shape}")
    phases = np.exp(1j * (centers @ np.asarray(q, dtype=float)))
    return complex(np.sum(phases))


def multi_center_ff(initial: AtomicState, final: AtomicState, q,
                    centers: Iterable[Sequence[float]], grid: Optional[GridSpec] = None,
                    workers: int = 1, density_floor: Optional[float] = None) -> FormFactorResult:
    """
    独立中心近似下的多中心靶形状因子 G(q)·M(q)

    initial/final 的 center 被忽略，单中心形状因子在原点处计算
    """
    origin = (0.0, 0.0, 0.0)
    G = structure_factor(q, centers)
    single = plane_wave_ff(initial.at(origin), final.at(origin), q, grid, workers,
                           density_floor=density_floor)
    metadata = dict(single.metadata)
    metadata['structure_factor'] = G
    return FormFactorResult(G * single.value, abs(G) * single.abs_error_estimate, single.grid,
                            single.levels_used, single.warnings, metadata)
