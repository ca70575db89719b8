#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
可观测量模块
汤姆逊/康普顿微分截面、涡旋因子 T_v、碰撞参数振幅 a(b) 以及总截面的 Parseval 恒等式

q 剖面存放在极坐标网格上：半径为 |q|，方向为 q 横向分量的方位角
"""
import logging
import math
import warnings as _warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import constants
from scipy.stats import linregress

try:
    from .atom import AtomicState
    from .beam import BeamParams
    from .config import config
    from .errors import CoverageError, DegenerateDenominatorError, DomainError, UndersampledGridWarning
    from .formfactor import (ScatteringGeometry, scattering_rotation, plane_wave_ff, vortex_ff)
    from .quadrature import GridSpec, polar_rule
except ImportError:
    from atom import AtomicState
    from beam import BeamParams
    from config import config
    from errors import CoverageError, DegenerateDenominatorError, DomainError, UndersampledGridWarning
    from formfactor import (ScatteringGeometry, scattering_rotation, plane_wave_ff, vortex_ff)
    from quadrature import GridSpec, polar_rule


logger = logging.getLogger(__name__)

# 经典电子半径 r0（米）和玻尔半径（米）
R0_METERS = constants.physical_constants['classical electron radius'][0]
BOHR_METERS = constants.physical_constants['Bohr radius'][0]

_B_CHUNK = 256


# ==================== 截面 ====================

@dataclass(frozen=True)
class PolarizationPair:
    """入射/出射光子的偏振单位向量（允许复数，圆偏振）"""
    lambda_i: Tuple[complex, complex, complex]
    lambda_f: Tuple[complex, complex, complex]

    def __post_init__(self):
        for name in ('lambda_i', 'lambda_f'):
            vec = np.asarray(getattr(self, name), dtype=complex)
            if vec.shape != (3,) or not np.all(np.isfinite(vec)):
                raise DomainError(f"{name} 必须是有限的三维向量")
            if abs(np.linalg.norm(vec) - 1.0) > 1e-12:
                raise DomainError(f"{name} 必须是单位向量: |{name}|={np.linalg.norm(vec):.15g}")
            object.__setattr__(self, name, tuple(complex(v) for v in vec))

    @classmethod
    def from_helicity(cls, m_s_in: int, m_s_out: int, theta: float,
                      azimuth: float = 0.0) -> "PolarizationPair":
        """
        圆偏振 (x̂ + i m_s ŷ)/√2；出射偏振由把 ẑ 转到 k̂_f 的最小转动携带

        Args:
            m_s_in: 入射螺旋度 ±1
            m_s_out: 出射螺旋度 ±1
            theta: 散射角
            azimuth: 散射平面方位角
        """
        for m in (m_s_in, m_s_out):
            if m not in (-1, 1):
                raise DomainError(f"螺旋度 m_s 必须是 ±1: {m}")
        eps_in = np.array([1.0, 1j * m_s_in, 0.0]) / np.sqrt(2.0)
        eps_out = np.array([1.0, 1j * m_s_out, 0.0]) / np.sqrt(2.0)
        matrix = scattering_rotation(theta, azimuth).inv().as_matrix()
        return cls(tuple(eps_in), tuple(matrix @ eps_out))

    def overlap(self) -> complex:
        """Λ̂_f* · Λ̂_i"""
        return complex(np.vdot(self.lambda_f, self.lambda_i))


def _check_frequencies(omega_i: float, omega_f: float):
    if not (omega_i > 0 and omega_f > 0):
        raise DomainError(f"频率必须为正: omega_i={omega_i}, omega_f={omega_f}")


def thomson_dcs(pol: PolarizationPair, omega_i: float, omega_f: float) -> float:
    """
    汤姆逊微分截面 (ω_f/ω_i) |Λ̂_f*·Λ̂_i|²，单位 r0²/sr
    """
    _check_frequencies(omega_i, omega_f)
    return float((omega_f / omega_i) * abs(pol.overlap()) ** 2)


def thomson_amplitude(pol: PolarizationPair, omega_i: float, omega_f: float) -> complex:
    """汤姆逊振幅 √(ω_f/ω_i) Λ̂_f*·Λ̂_i，|振幅|² 即 thomson_dcs"""
    _check_frequencies(omega_i, omega_f)
    return complex(np.sqrt(omega_f / omega_i) * pol.overlap())


def compton_dcs(M: complex, thomson: float) -> float:
    """康普顿微分截面 |M|² dσ_T/dΩ"""
    if thomson < 0:
        raise DomainError(f"汤姆逊截面必须非负: {thomson}")
    return float(abs(M) ** 2 * thomson)


def compton_dcs_si(M: complex, thomson: float) -> float:
    """康普顿微分截面（m²/sr）"""
    return compton_dcs(M, thomson) * R0_METERS ** 2


def vortex_factor(M_v: complex, M_p: complex, floor: Optional[float] = None) -> float:
    """
    涡旋因子 T_v = |M_v|²/|M_p|² - 1

    Args:
        M_v: 涡旋形状因子
        M_p: 平面波极限形状因子
        floor: |M_p| 的下限，默认 config.degenerate_floor

    Returns:
        T_v
    """
    if floor is None:
        floor = config.degenerate_floor
    if not abs(M_p) > floor:
        raise DegenerateDenominatorError(f"|M_p|={abs(M_p):.3g} 低于下限 {floor:.3g}，T_v 无定义")
    return float((abs(M_v) / abs(M_p)) ** 2 - 1.0)


def conversion_factor(M_v: complex, M_p: complex, floor: Optional[float] = None) -> float:
    """涡旋转换因子 T_v + 1"""
    return vortex_factor(M_v, M_p, floor) + 1.0


class PowerLawFit(NamedTuple):
    slope: float
    prefactor: float
    r_value: float
    stderr: float


def fit_power_law(x: Sequence[float], y: Sequence[float]) -> PowerLawFit:
    """
    对数坐标最小二乘拟合 y = A x^s

    Args:
        x: 正数序列
        y: 与 x 等长的非零序列（取绝对值）

    Returns:
        PowerLawFit(slope, prefactor, r_value, stderr)
    """
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    if x.shape != y.shape or x.size < 2:
        raise DomainError("幂律拟合至少需要两个等长的数据点")
    if np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("幂律拟合要求 x > 0 且 |y| > 0")
    fit = linregress(np.log(x), np.log(y))
    return PowerLawFit(float(fit.slope), float(np.exp(fit.intercept)),
                       float(fit.rvalue), float(fit.stderr))


# ==================== q / b 剖面 ====================

@dataclass(frozen=True, eq=False)
class PolarProfile:
    """极坐标张量网格上的复值剖面（ρ 外层、φ 内层）"""
    points: np.ndarray
    values: np.ndarray
    weights: np.ndarray
    k: float
    extent: float
    n_rho: int
    n_phi: int
    warnings: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not (self.k > 0):
            raise DomainError(f"k 必须为正: {self.k}")
        points = np.asarray(self.points, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        weights = np.asarray(self.weights, dtype=float)
        if not (len(points) == len(values) == len(weights)):
            raise DomainError("points/values/weights 长度不一致")
        if len(points) and len(points) != self.n_rho * self.n_phi:
            raise DomainError("剖面必须是 n_rho × n_phi 的张量网格")
        if not (np.all(np.isfinite(points)) and np.all(np.isfinite(values))):
            raise DomainError("剖面包含非有限值")
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'weights', weights)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def radii(self) -> np.ndarray:
        return np.hypot(self.points[:, 0], self.points[:, 1])

    @property
    def angles(self) -> np.ndarray:
        return np.arctan2(self.points[:, 1], self.points[:, 0])

    def rings(self) -> np.ndarray:
        """按 (n_rho, n_phi) 排列的值"""
        return self.values.reshape(self.n_rho, self.n_phi)


class QProfile(PolarProfile):
    """动量转移空间的散射振幅 f(q)，extent 为 q_max"""

    @property
    def q_max(self) -> float:
        return self.extent

    @classmethod
    def on_polar_grid(cls, f: Callable[[np.ndarray], np.ndarray], q_max: float, k: float,
                      n_rho: Optional[int] = None, n_phi: Optional[int] = None) -> "QProfile":
        """
        在圆盘 |q| <= q_max 的极坐标网格上对 f 采样

        Args:
            f: 输入形状 (n, 2) 的 q 点，返回 n 个复数
            q_max: 圆盘半径
            k: 波数
            n_rho: 径向节点数
            n_phi: 方位角节点数
        """
        n_rho = n_rho or config.q_rho_nodes
        n_phi = n_phi or config.q_phi_nodes
        rule = polar_rule(q_max, n_rho, n_phi)
        points = rule.points()
        values = np.asarray(f(points), dtype=complex)
        return cls(points, values, rule.weights(), float(k), float(q_max), n_rho, n_phi)


class BProfile(PolarProfile):
    """碰撞参数空间的振幅 a(b)，extent 为 b_max"""

    @property
    def b_max(self) -> float:
        return self.extent


def gaussian_q_profile(sigma: float, k: float, q_max: Optional[float] = None,
                       n_rho: int = 64, n_phi: int = 256) -> QProfile:
    """各向同性高斯剖面 f(q) = exp(-q²σ²/2)，默认截断在 q_max = 9/σ"""
    if not sigma > 0:
        raise DomainError(f"sigma 必须为正: {sigma}")
    if q_max is None:
        q_max = 9.0 / sigma

    def f(points):
        return np.exp(-0.5 * sigma ** 2 * np.sum(points ** 2, axis=-1))

    return QProfile.on_polar_grid(f, q_max, k, n_rho, n_phi)


def form_factor_q_profile(initial: AtomicState, final: AtomicState, k: float,
                          beam_in: Optional[BeamParams] = None, beam_out: Optional[BeamParams] = None,
                          helicity: Tuple[int, int] = (1, 1), q_max: Optional[float] = None,
                          n_rho: Optional[int] = None, n_phi: Optional[int] = None,
                          grid: Optional[GridSpec] = None, symmetric: bool = False,
                          workers: int = 1, density_floor: Optional[float] = None) -> QProfile:
    """
    光子-原子弹性散射振幅 f(q) = M(q) · 汤姆逊振幅，q 位于物理圆盘 |q| <= 2k 内

    每个 q 点对应 Θ = 2 arcsin(|q|/2k)、φ_s = φ_q - π/2 的散射几何；
    给出光束时 M 为涡旋形状因子，否则为平面波形状因子

    symmetric=True 时只在 φ_q = π/2 的射线上计算，其余方向乘以
    e^{iΔJ(φ_q - π/2)}，ΔJ = ℓ_i + M_i + m_i - ℓ_f - M_f - m_f；仅适用于轴上原子

    Args:
        initial: 初态
        final: 末态
        k: 波数（弹性）
        beam_in: 入射光束；None 表示平面波
        beam_out: 出射光束，默认与入射相同
        helicity: (m_s_in, m_s_out)
        q_max: 圆盘半径，默认且不超过 2k
        n_rho: 径向节点数
        n_phi: 方位角节点数
        grid: 求积网格
        symmetric: 是否使用方位对称捷径
        workers: 线程数
        density_floor: 检查网格覆盖时使用的支撑半径密度下限

    Returns:
        QProfile
    """
    if beam_out is None:
        beam_out = beam_in
    if q_max is None:
        q_max = 2.0 * k
    if q_max > 2.0 * k * (1.0 + 1e-14):
        raise DomainError(f"弹性散射的 q_max 不能超过 2k: q_max={q_max}, 2k={2.0 * k}")
    m_in, m_out = helicity
    n_rho = n_rho or config.q_rho_nodes
    n_phi = n_phi or config.q_phi_nodes

    def amplitude(q_mag: float, phi_q: float) -> complex:
        geom = ScatteringGeometry.from_q(k, q_mag, azimuth=phi_q - 0.5 * np.pi)
        if beam_in is None:
            M = plane_wave_ff(initial, final, geom.q, grid, workers, density_floor=density_floor).value
        else:
            M = vortex_ff(initial, final, beam_in, beam_out, geom, grid, workers,
                          density_floor=density_floor).value
        pol = PolarizationPair.from_helicity(m_in, m_out, geom.theta, geom.azimuth)
        return M * thomson_amplitude(pol, 1.0, 1.0)

    def f(points):
        q_mag = np.hypot(points[:, 0], points[:, 1])
        phi_q = np.arctan2(points[:, 1], points[:, 0])
        return np.array([amplitude(q, p) for q, p in zip(q_mag, phi_q)])

    logger.info(f"[可观测量] 计算 f(q) 剖面: {initial.label}→{final.label}, q_max={q_max:.6g}, "
                f"{n_rho}×{n_phi} 点{'（对称捷径）' if symmetric else ''}")
    if not symmetric:
        return QProfile.on_polar_grid(f, q_max, k, n_rho, n_phi)

    for state in (initial, final):
        if abs(state.center[0]) > 0 or abs(state.center[1]) > 0:
            raise DomainError("方位对称捷径只适用于轴上原子")
    ell_i = beam_in.ell if beam_in is not None else 0
    ell_f = beam_out.ell if beam_out is not None else 0
    delta_j = ell_i + initial.M + m_in - ell_f - final.M - m_out
    rule = polar_rule(q_max, n_rho, n_phi)
    radial = np.array([amplitude(q, 0.5 * np.pi) for q in rule.rho])
    values = np.outer(radial, np.exp(1j * delta_j * (rule.phi - 0.5 * np.pi))).ravel()
    return QProfile(rule.points(), values, rule.weights(), float(k), float(q_max), n_rho, n_phi)


def sampling_requirements(q_max: float, b: float) -> Tuple[int, int]:
    """分辨 e^{iq·b} 所需的 q 网格节点数 (n_rho, n_phi)"""
    s = config.samples_per_wavelength
    b = abs(b)
    n_rho = int(math.ceil(s * q_max * b / (2.0 * np.pi)))
    n_phi = int(math.ceil(2.0 * s * q_max * b / np.pi))
    return n_rho, n_phi


def _undersampled(fq: QProfile, b: float) -> Optional[UndersampledGridWarning]:
    need_rho, need_phi = sampling_requirements(fq.q_max, b)
    if fq.n_rho < need_rho or fq.n_phi < need_phi:
        return UndersampledGridWarning(
            f"q 网格 {fq.n_rho}×{fq.n_phi} 不足以分辨 e^{{iq·b}}", b, need_rho, need_phi)
    return None


def _transform(fq: QProfile, b_points: np.ndarray) -> np.ndarray:
    weighted = fq.weights * fq.values / (2.0 * np.pi * fq.k)
    phase = np.exp(1j * (b_points @ fq.points.T))
    return phase @ weighted


def impact_amplitude(fq: QProfile, b: Sequence[float]) -> complex:
    """
    碰撞参数振幅 a(b) = (1/2πk) ∫ e^{iq·b} f(q) d²q

    q 网格不足以分辨相位振荡时发出 UndersampledGridWarning

    Args:
        fq: q 剖面
        b: 二维碰撞参数（bohr）

    Returns:
        复振幅
    """
    if len(fq) == 0:
        raise DomainError("q 剖面为空")
    b = np.asarray(b, dtype=float)
    if b.shape != (2,) or not np.all(np.isfinite(b)):
        raise DomainError(f"b 必须是有限的二维向量: {b}")
    warning = _undersampled(fq, float(np.hypot(*b)))
    if warning is not None:
        logger.warning(f"[可观测量] {warning}")
        _warnings.warn(warning, stacklevel=2)
    return complex(_transform(fq, b[None, :])[0])


def _ring_max(fq: QProfile, radius: float, n_phi: int) -> float:
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    ring = radius * np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    return float(np.max(np.abs(_transform(fq, ring))))


def adaptive_b_max(fq: QProfile, n_phi: Optional[int] = None) -> float:
    """
    几何递增地探测 b_j = b_start·growth^j（b_start = 2π/q_max），
    在连续两个探测环上 |a| 的最大值都低于峰值的 b_grid_threshold 时停止

    Returns:
        b_max（第二个低于阈值的探测半径）
    """
    n_phi = n_phi or config.b_phi_nodes
    b = 2.0 * np.pi / fq.q_max
    peak = abs(_transform(fq, np.zeros((1, 2)))[0])
    below = 0
    for _ in range(config.b_probe_max_steps):
        ring = _ring_max(fq, b, n_phi)
        peak = max(peak, ring)
        if peak == 0.0:
            return b
        below = below + 1 if ring < config.b_grid_threshold * peak else 0
        if below >= 2:
            logger.debug(f"[可观测量] 自适应 b_max = {b:.6g}, 峰值 |a| = {peak:.6g}")
            return b
        b *= config.b_probe_growth
    raise CoverageError("自适应 b 网格在最大探测步数内没有找到 |a| 的衰减区",
                        required={'b_probe_max_steps': config.b_probe_max_steps, 'last_b': b})


def impact_profile(fq: QProfile, b_max: Optional[float] = None, n_rho: Optional[int] = None,
                   n_phi: Optional[int] = None, workers: int = 1) -> BProfile:
    """
    在极坐标 b 网格上计算 a(b)

    Args:
        fq: q 剖面
        b_max: b 网格半径；None 时自适应确定
        n_rho: 径向节点数
        n_phi: 方位角节点数
        workers: 线程数，不影响结果

    Returns:
        BProfile
    """
    if len(fq) == 0:
        raise DomainError("q 剖面为空")
    n_rho = n_rho or config.b_rho_nodes
    n_phi = n_phi or config.b_phi_nodes
    if b_max is None:
        b_max = adaptive_b_max(fq, n_phi)

    rule = polar_rule(b_max, n_rho, n_phi)
    points = rule.points()
    chunks = [points[i:i + _B_CHUNK] for i in range(0, len(points), _B_CHUNK)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(lambda chunk: _transform(fq, chunk), chunks))
    else:
        parts = [_transform(fq, chunk) for chunk in chunks]
    values = np.concatenate(parts)

    notes = []
    warning = _undersampled(fq, b_max)
    if warning is not None:
        logger.warning(f"[可观测量] {warning}")
        _warnings.warn(warning, stacklevel=2)
        notes.append(str(warning))
    return BProfile(points, values, rule.weights(), fq.k, float(b_max), n_rho, n_phi,
                    tuple(fq.warnings) + tuple(notes))


@dataclass(frozen=True)
class ParsevalReport:
    """q 空间与 b 空间总截面的比较"""
    sigma_q: float
    sigma_b: float
    rel_diff: float
    max_probability: float
    probability_bound_ok: bool


def parseval_check(fq: QProfile, ab: BProfile) -> ParsevalReport:
    """
    Parseval 恒等式：∫|a|² d²b 与 (1/k²)∫|f|² d²q 应相等

    b 网格边界上的 |a|² 超过峰值的 coverage_threshold 时抛出 CoverageError；
    max |a|² > 1 只作为诊断报告

    Args:
        fq: q 剖面
        ab: 由 fq 得到的 b 剖面

    Returns:
        ParsevalReport
    """
    if abs(fq.k - ab.k) > 1e-12 * fq.k:
        raise DomainError(f"q 剖面与 b 剖面的 k 不一致: {fq.k} vs {ab.k}")
    probability = np.abs(ab.values) ** 2
    peak = float(probability.max()) if len(probability) else 0.0
    if peak > 0:
        boundary = float(np.max(np.abs(ab.rings()[-1]) ** 2))
        if boundary > config.coverage_threshold * peak:
            raise CoverageError(
                f"b 网格被截断: 边界 |a|²/峰值 = {boundary / peak:.3g} > {config.coverage_threshold:g}",
                required={'b_max': round(ab.b_max * config.b_probe_growth ** 2, 6)})

    sigma_q = math.fsum(fq.weights * np.abs(fq.values) ** 2) / fq.k ** 2
    sigma_b = math.fsum(ab.weights * probability)
    scale = max(abs(sigma_q), abs(sigma_b))
    rel_diff = abs(sigma_q - sigma_b) / scale if scale > 0 else 0.0
    bound_ok = peak <= 1.0
    if not bound_ok:
        logger.warning(f"[可观测量] max |a(b)|² = {peak:.4g} > 1，一阶微扰结果不再可靠")
    logger.info(f"[可观测量] Parseval: σ_q={sigma_q:.10g}, σ_b={sigma_b:.10g}, 相对差 {rel_diff:.3g}")
    return ParsevalReport(float(sigma_q), float(sigma_b), float(rel_diff), peak, bound_ok)
