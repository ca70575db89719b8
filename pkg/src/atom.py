#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
原子态模块
类氢靶态 φ_{N,L,M}，允许原子整体偏离涡旋轴（中心偏移即碰撞参数 b）

量子化轴取入射光束方向 ẑ
"""
import functools
import logging
from dataclasses import dataclass, replace
from typing import Iterable, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

try:
    from .config import config
    from .errors import DomainError
    from .specfun import hydrogenic_radial, spherical_harmonic
except ImportError:
    from config import config
    from errors import DomainError
    from specfun import hydrogenic_radial, spherical_harmonic


logger = logging.getLogger(__name__)

Vector3 = Tuple[float, float, float]


@dataclass(frozen=True)
class AtomicState:
    """
    类氢束缚态 (N, L, M)，中心位于 center（bohr，相对 z=0 处的涡旋中心）
    """
    N: int
    L: int
    M: int
    center: Vector3 = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if self.N < 1 or self.L < 0 or self.L >= self.N:
            raise DomainError(f"L must satisfy 0 ≤ L < N (N={self.N}, L={self.L})")
        if abs(self.M) > self.L:
            raise DomainError(f"M must satisfy |M| ≤ L (L={self.L}, M={self.M})")
        center = tuple(float(c) for c in self.center)
        if len(center) != 3 or not all(np.isfinite(center)):
            raise DomainError(f"center 必须是有限的三维向量: {self.center}")
        object.__setattr__(self, 'center', center)

    @property
    def label(self) -> str:
        """光谱记号，如 1s、2p(M=1)"""
        letters = "spdfghik"
        letter = letters[self.L] if self.L < len(letters) else f"[L={self.L}]"
        if self.L == 0:
            return f"{self.N}{letter}"
        return f"{self.N}{letter}(M={self.M})"

    @property
    def target_size(self) -> float:
        """靶尺寸 a_T = N^2 a_0（bohr）"""
        return float(self.N ** 2)

    def displaced(self, shift: Sequence[float]) -> "AtomicState":
        """返回整体平移 shift 后的新态"""
        new_center = tuple(c + float(s) for c, s in zip(self.center, shift))
        return replace(self, center=new_center)

    def at(self, center: Sequence[float]) -> "AtomicState":
        """返回中心位于 center 的同一量子态"""
        return replace(self, center=tuple(float(c) for c in center))

    def wavefunction(self, points: np.ndarray) -> np.ndarray:
        """
        在点集上求波函数 R_NL(|r-c|) Y_LM(r-c 的方向角)

        Args:
            points: 形状 (..., 3) 的坐标数组（bohr）

        Returns:
            形状 (...) 的复数数组
        """
        pts = np.asarray(points, dtype=float)
        d = pts - np.asarray(self.center)
        dx, dy, dz = d[..., 0], d[..., 1], d[..., 2]
        rho = np.hypot(dx, dy)
        r = np.hypot(rho, dz)
        theta = np.arctan2(rho, dz)
        phi = np.arctan2(dy, dx)
        radial = hydrogenic_radial(self.N, self.L, r)
        if self.L == 0:
            return radial * complex(spherical_harmonic(0, 0, 0.0, 0.0))
        return radial * spherical_harmonic(self.L, self.M, theta, phi)

    def support_radius(self, density_floor: float = None) -> float:
        """见模块级 support_radius"""
        if density_floor is None:
            density_floor = config.default_density_floor
        return _support_radius(self.N, self.L, float(density_floor))


def wavefunction(state: AtomicState, r: Sequence[float]) -> complex:
    """
    单点波函数值

    Args:
        state: 原子态
        r: 三维坐标（bohr）

    Returns:
        复振幅
    """
    value = state.wavefunction(np.asarray(r, dtype=float))
    return complex(value)


def support_radius(state: AtomicState, density_floor: float = None) -> float:
    """
    支撑半径：径向概率密度 r^2 R^2 在其之外处处低于 density_floor * 最大值

    Args:
        state: 原子态（只与 N, L 有关）
        density_floor: 相对密度下限，0 < floor <= 1；取 1 时返回密度最大处

    Returns:
        半径（bohr）
    """
    return state.support_radius(density_floor)


@functools.lru_cache(maxsize=256)
def _support_radius(N: int, L: int, density_floor: float) -> float:
    if not (0.0 < density_floor <= 1.0):
        raise DomainError(f"density_floor 必须在 (0, 1] 内: {density_floor}")

    def density(r):
        return (r * hydrogenic_radial(N, L, r)) ** 2

    # 采样区间足够大，使最外侧密度已低于阈值
    r_hi = 10.0 * N * N + 20.0
    while True:
        grid = np.linspace(0.0, r_hi, 4001)
        values = density(grid)
        peak_idx = int(np.argmax(values))
        lo = grid[max(peak_idx - 1, 0)]
        hi = grid[min(peak_idx + 1, len(grid) - 1)]
        refined = minimize_scalar(lambda r: -density(r), bounds=(lo, hi), method='bounded',
                                  options={'xatol': 1e-12})
        r_peak = float(refined.x)
        peak = float(density(r_peak))
        threshold = density_floor * peak
        if values[-1] < threshold:
            break
        r_hi *= 2.0

    if density_floor >= 1.0:
        return r_peak

    above = np.nonzero(values >= threshold)[0]
    last = int(above[-1])
    radius = brentq(lambda r: density(r) - threshold, grid[last], grid[last + 1], xtol=1e-13)
    logger.debug(f"[原子] 支撑半径 N={N}, L={L}, floor={density_floor:g}: {radius:.6f} bohr")
    return float(radius)


def union_box(states: Iterable[AtomicState], density_floor: float = None,
              factor: float = None) -> Tuple[Vector3, Vector3]:
    """
    覆盖所有原子态支撑区域的轴对齐盒子

    Args:
        states: 原子态列表
        density_floor: 支撑半径的密度下限
        factor: 半宽放大因子，默认 config.box_factor

    Returns:
        (盒中心, 半宽)，均为三维元组（bohr）
    """
    if factor is None:
        factor = config.box_factor
    states = list(states)
    if not states:
        raise DomainError("至少需要一个原子态")
    lo = np.full(3, np.inf)
    hi = np.full(3, -np.inf)
    for state in states:
        radius = state.support_radius(density_floor)
        c = np.asarray(state.center)
        lo = np.minimum(lo, c - radius)
        hi = np.maximum(hi, c + radius)
    center = 0.5 * (lo + hi)
    half = factor * 0.5 * (hi - lo)
    return tuple(float(v) for v in center), tuple(float(v) for v in half)
