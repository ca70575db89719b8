#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
光束模块
拉盖尔-高斯扭曲光子模式 u_{p,ℓ}(ρ, z, φ) 以及光束几何关系：
束宽、Gouy 相位、发散角、库仑角

柱坐标采用标准约定 ρ = r sinθ, z = r cosθ（θ=0 沿光束轴）
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

try:
    from .config import config
    from .errors import DomainError
    from .quadrature import integrate_polar_2d
    from .specfun import PolyIndex, assoc_laguerre, log_factorial
except ImportError:
    from config import config
    from errors import DomainError
    from quadrature import integrate_polar_2d
    from specfun import PolyIndex, assoc_laguerre, log_factorial


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BeamParams:
    """
    单个扭曲光子模式的参数（长度单位 bohr）

    wavelength: 波长 λ
    rayleigh_range: 瑞利长度 z_R
    p: 径向指标（径向节点数）
    ell: 轨道角动量指标 ℓ（符号表示手性）
    """
    wavelength: float
    rayleigh_range: float
    p: int = 0
    ell: int = 0

    def __post_init__(self):
        if not np.isfinite(self.wavelength) or self.wavelength <= 0:
            raise DomainError(f"波长必须为正: {self.wavelength}")
        if not np.isfinite(self.rayleigh_range) or self.rayleigh_range <= 0:
            raise DomainError(f"瑞利长度必须为正: {self.rayleigh_range}")
        if int(self.p) != self.p or self.p < 0:
            raise DomainError(f"径向指标 p 必须是非负整数: {self.p}")
        if int(self.ell) != self.ell:
            raise DomainError(f"ℓ 必须是整数: {self.ell}")
        object.__setattr__(self, 'wavelength', float(self.wavelength))
        object.__setattr__(self, 'rayleigh_range', float(self.rayleigh_range))
        object.__setattr__(self, 'p', int(self.p))
        object.__setattr__(self, 'ell', int(self.ell))
        if not self.is_paraxial:
            logger.warning(f"[光束] {self.paraxial_warning}")

    @property
    def k(self) -> float:
        """波数 2π/λ（1/bohr）"""
        return 2.0 * np.pi / self.wavelength

    @property
    def waist(self) -> float:
        """束腰 w0 = sqrt(λ z_R / π)"""
        return float(np.sqrt(self.wavelength * self.rayleigh_range / np.pi))

    @property
    def paraxial_angle(self) -> float:
        """光束发散角 arctan(w0/z_R)（弧度）"""
        return float(np.arctan(self.waist / self.rayleigh_range))

    @property
    def is_paraxial(self) -> bool:
        return np.degrees(self.paraxial_angle) < config.paraxial_limit_deg

    @property
    def paraxial_warning(self) -> Optional[str]:
        """超出傍轴近似适用范围时的警告文本，否则为 None"""
        if self.is_paraxial:
            return None
        return (f"发散角 {np.degrees(self.paraxial_angle):.1f}° 超过 "
                f"{config.paraxial_limit_deg:.0f}°，傍轴拉盖尔-高斯描述不再可靠 "
                f"(λ={self.wavelength:g}, z_R={self.rayleigh_range:g})")

    @property
    def mode_norm(self) -> float:
        """归一化系数 sqrt(2 p! / (π (p+|ℓ|)!))"""
        m = abs(self.ell)
        return float(np.exp(0.5 * (np.log(2.0 / np.pi) + log_factorial(self.p) - log_factorial(self.p + m))))


def beam_width(beam: BeamParams, z):
    """w(z) = w0 sqrt(1 + z^2/z_R^2)"""
    z = np.asarray(z, dtype=float)
    value = beam.waist * np.sqrt(1.0 + (z / beam.rayleigh_range) ** 2)
    return float(value) if value.ndim == 0 else value


def gouy_phase(beam: BeamParams, z):
    """Gouy 相位 (2p + |ℓ| + 1) arctan(z/z_R)"""
    z = np.asarray(z, dtype=float)
    value = (2 * beam.p + abs(beam.ell) + 1) * np.arctan(z / beam.rayleigh_range)
    return float(value) if value.ndim == 0 else value


def lg_mode(beam: BeamParams, rho, z, phi):
    """
    拉盖尔-高斯模式的复振幅

    u = C/w (ρ√2/w)^|ℓ| exp(-ρ²/w²) L_p^|ℓ|(2ρ²/w²) e^{iℓφ}
        × exp(i k ρ² z / 2(z²+z_R²)) × exp(-i (2p+|ℓ|+1) arctan(z/z_R))

    Args:
        beam: 光束参数
        rho: 到光束轴的距离（bohr），非负
        z: 轴向坐标（bohr）
        phi: 方位角（弧度）

    Returns:
        复数值，形状为三个参数广播后的形状
    """
    rho = np.asarray(rho, dtype=float)
    z = np.asarray(z, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(rho < 0):
        raise DomainError("rho 必须非负")

    m = abs(beam.ell)
    w = beam_width(beam, z)
    x = 2.0 * rho ** 2 / w ** 2
    # ρ=0 且 ℓ≠0 时 0.0**m 精确为 0，不经过对数
    radial = (beam.mode_norm / w) * (np.sqrt(2.0) * rho / w) ** m * np.exp(-x / 2.0)
    if beam.p > 0:
        radial = radial * assoc_laguerre(PolyIndex(beam.p, m), x)
    curvature = beam.k * rho ** 2 * z / (2.0 * (z ** 2 + beam.rayleigh_range ** 2))
    phase = beam.ell * phi + curvature - gouy_phase(beam, z)
    value = radial * np.exp(1j * phase)
    return complex(value) if np.ndim(value) == 0 else value


def divergence_angle(beam: BeamParams, b: float) -> float:
    """
    渐近发散角 Θ_V(b) = arctan(b/z_R)；b = w0 时即光束发散角

    Args:
        beam: 光束参数
        b: 距涡旋中心的距离（bohr），非负

    Returns:
        角度（弧度）
    """
    if b < 0:
        raise DomainError(f"b 必须非负: {b}")
    return float(np.arctan(b / beam.rayleigh_range))


def coulomb_angle(b: float, d0: float) -> float:
    """
    库仑偏转角 Θ_C = 2 arctan(d0 / 2b)

    Args:
        b: 碰撞参数（bohr），必须为正
        d0: 正碰最近距离（bohr），必须为正

    Returns:
        角度（弧度），位于 (0, π)
    """
    if b <= 0:
        raise DomainError(f"碰撞参数 b 必须为正（正碰 b→0 时 Θ_C→π 由调用方处理）: b={b}")
    if d0 <= 0:
        raise DomainError(f"d0 必须为正: {d0}")
    return float(2.0 * np.arctan(d0 / (2.0 * b)))


def ray_radius(beam: BeamParams, b: float, z):
    """经过 z=0 处距轴 b 的等强度包络在 z 处的半径 ρ(z) = b w(z)/w0"""
    if b < 0:
        raise DomainError(f"b 必须非负: {b}")
    return b * np.asarray(beam_width(beam, z)) / beam.waist


def max_classical_oam(beam: BeamParams, b: float) -> float:
    """z≈0 附近经典轨道角动量上限 ℓ <= b k"""
    if b < 0:
        raise DomainError(f"b 必须非负: {b}")
    return float(b * beam.k)


def transverse_norm(beam: BeamParams, z: float, nodes: int = None, n_phi: int = None) -> float:
    """
    横截面归一化 ∫∫ |u|² ρ dρ dφ，积分到 ρ = 8 w(z)

    Args:
        beam: 光束参数
        z: 轴向位置（bohr）
        nodes: 径向高斯-勒让德节点数
        n_phi: 方位角节点数

    Returns:
        归一化积分值（应当为 1）
    """
    if nodes is None:
        nodes = config.default_polar_nodes
    rho_max = config.beam_norm_extent * beam_width(beam, z)

    def intensity(rho, phi):
        return np.abs(lg_mode(beam, rho, z, phi)) ** 2

    return float(integrate_polar_2d(intensity, rho_max, nodes, n_phi).real)
