#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
求积模块
笛卡尔盒上的确定性张量积高斯-勒让德求积（带误差估计），以及极坐标二维求积

三维求积的归约顺序固定：x 轴按固定大小切块，块内用 numpy 求和，
块间按下标顺序做补偿求和，因此结果与线程数无关
"""
import functools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

try:
    from .config import config
    from .errors import DomainError, EvaluationError
except ImportError:
    from config import config
    from errors import DomainError, EvaluationError


logger = logging.getLogger(__name__)

Vector3 = Tuple[float, float, float]
Field3D = Callable[[np.ndarray], np.ndarray]


def _even_ceil(value: float) -> int:
    n = int(math.ceil(value))
    return n + (n % 2)


@dataclass(frozen=True)
class GridSpec:
    """
    张量积求积网格参数

    center: 盒中心（bohr）
    half_widths: 三个方向的半宽（bohr）
    nodes_per_axis: 第 0 级每轴节点数（偶数）
    refinement_levels: 细化级数，每级节点数乘以 1.5 并取偶数
    panels_per_half: 每个半轴的分段数，分段宽度从中心向外按 grading 几何增长
    """
    center: Vector3
    half_widths: Vector3
    nodes_per_axis: int = config.default_nodes_per_axis
    refinement_levels: int = config.default_refinement_levels
    panels_per_half: int = config.default_panels_per_half
    grading: float = config.default_panel_grading

    def __post_init__(self):
        center = tuple(float(c) for c in self.center)
        half = tuple(float(h) for h in self.half_widths)
        if len(center) != 3 or len(half) != 3:
            raise DomainError("center 和 half_widths 必须是三维向量")
        if not all(np.isfinite(center)) or not all(np.isfinite(half)):
            raise DomainError("center 和 half_widths 必须是有限值")
        if min(half) <= 0:
            raise DomainError(f"half_widths 必须严格为正: {half}")
        if self.nodes_per_axis < 4 or self.nodes_per_axis % 2 != 0:
            raise DomainError(f"nodes_per_axis 必须是不小于 4 的偶数: {self.nodes_per_axis}")
        if self.refinement_levels < 1:
            raise DomainError(f"refinement_levels 至少为 1: {self.refinement_levels}")
        if self.panels_per_half < 1 or self.grading <= 0:
            raise DomainError("panels_per_half 至少为 1，grading 必须为正")
        object.__setattr__(self, 'center', center)
        object.__setattr__(self, 'half_widths', half)

    def level_nodes(self) -> List[int]:
        """各细化级的每轴节点数"""
        sizes = [int(self.nodes_per_axis)]
        for _ in range(1, self.refinement_levels):
            sizes.append(_even_ceil(sizes[-1] * config.refinement_factor))
        return sizes

    def covers(self, lo: Sequence[float], hi: Sequence[float]) -> bool:
        """盒子是否包含 [lo, hi]"""
        c = np.asarray(self.center)
        h = np.asarray(self.half_widths)
        return bool(np.all(c - h <= np.asarray(lo)) and np.all(c + h >= np.asarray(hi)))

    def with_nodes(self, nodes_per_axis: Optional[int] = None,
                   refinement_levels: Optional[int] = None) -> "GridSpec":
        """返回修改了节点数或级数的副本"""
        return GridSpec(self.center, self.half_widths,
                        nodes_per_axis or self.nodes_per_axis,
                        refinement_levels or self.refinement_levels,
                        self.panels_per_half, self.grading)

    def to_dict(self) -> dict:
        return {
            'center': list(self.center),
            'half_widths': list(self.half_widths),
            'nodes_per_axis': self.nodes_per_axis,
            'refinement_levels': self.refinement_levels,
            'panels_per_half': self.panels_per_half,
            'grading': self.grading,
        }


@dataclass(frozen=True)
class QuadResult:
    """求积结果"""
    value: complex
    abs_error_estimate: float
    levels_used: int
    nodes_per_axis: int
    warnings: Tuple[str, ...] = field(default_factory=tuple)


@functools.lru_cache(maxsize=128)
def _leggauss(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _half_axis_edges(half_width: float, panels: int, grading: float) -> np.ndarray:
    widths = grading ** np.arange(panels, dtype=float)
    edges = np.concatenate([[0.0], np.cumsum(widths)]) * (half_width / widths.sum())
    edges[-1] = half_width
    return edges


@functools.lru_cache(maxsize=256)
def axis_rule(center: float, half_width: float, n: int, panels: int,
              grading: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    一维复合高斯-勒让德规则，关于 center 精确镜像对称

    Args:
        center: 轴中心
        half_width: 半宽
        n: 总节点数（偶数）
        panels: 每个半轴的分段数
        grading: 分段宽度增长比

    Returns:
        (节点, 权重)，按坐标升序
    """
    n_half = n // 2
    panels = max(1, min(panels, n_half))
    edges = _half_axis_edges(half_width, panels, grading)
    base, extra = divmod(n_half, panels)

    t_parts, w_parts = [], []
    for j in range(panels):
        k = base + (1 if j < extra else 0)
        x, w = _leggauss(k)
        a, b = edges[j], edges[j + 1]
        t_parts.append(0.5 * (b - a) * x + 0.5 * (b + a))
        w_parts.append(0.5 * (b - a) * w)
    t = np.concatenate(t_parts)
    w = np.concatenate(w_parts)

    nodes = np.concatenate([center - t[::-1], center + t])
    weights = np.concatenate([w[::-1], w])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _slab_sum(f: Field3D, rules, i0: int, i1: int) -> complex:
    (xn, xw), (yn, yw), (zn, zw) = rules
    X, Y, Z = np.broadcast_arrays(xn[i0:i1, None, None], yn[None, :, None], zn[None, None, :])
    points = np.stack([X, Y, Z], axis=-1)
    values = np.asarray(f(points), dtype=complex)
    if values.shape != X.shape:
        values = np.broadcast_to(values, X.shape)
    finite = np.isfinite(values)
    if not np.all(finite):
        bad = tuple(np.argwhere(~finite)[0])
        raise EvaluationError("被积函数取到非有限值", points[bad])
    weights = xw[i0:i1, None, None] * yw[None, :, None] * zw[None, None, :]
    return complex(np.sum(values * weights))


def _tensor_sum(f: Field3D, grid: GridSpec, n: int, workers: int) -> complex:
    rules = [axis_rule(c, h, n, grid.panels_per_half, grid.grading)
             for c, h in zip(grid.center, grid.half_widths)]
    slab = max(1, config.slab_size)
    bounds = [(i0, min(i0 + slab, n)) for i0 in range(0, n, slab)]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            partials = list(executor.map(lambda b: _slab_sum(f, rules, b[0], b[1]), bounds))
    else:
        partials = [_slab_sum(f, rules, i0, i1) for i0, i1 in bounds]

    # 固定顺序的补偿求和
    real = math.fsum(p.real for p in partials)
    imag = math.fsum(p.imag for p in partials)
    return complex(real, imag)


def required_nodes(grid: GridSpec, max_phase_gradient: float) -> int:
    """按每个最短振荡波长至少 samples_per_wavelength 个采样点所需的每轴节点数"""
    if max_phase_gradient <= 0:
        return 0
    extent = 2.0 * max(grid.half_widths)
    oscillations = extent * max_phase_gradient / (2.0 * np.pi)
    return int(math.ceil(config.samples_per_wavelength * oscillations))


def integrate_3d(f: Field3D, grid: GridSpec, max_phase_gradient: Optional[float] = None,
                 workers: int = 1, rel_tol: Optional[float] = None) -> QuadResult:
    """
    三维张量积高斯-勒让德求积

    误差估计为相邻两级结果之差的模；只有一级时与 2/3 节点数的伴随规则比较

    Args:
        f: 复值场，输入形状 (..., 3) 的坐标数组，返回形状 (...) 的数组
        grid: 求积网格
        max_phase_gradient: 被积函数相位梯度上界（1/bohr），用于振荡采样检查
        workers: 线程数，不影响结果
        rel_tol: 相邻两级相对差低于该值时提前停止

    Returns:
        QuadResult
    """
    warnings = []
    if max_phase_gradient is not None:
        needed = required_nodes(grid, max_phase_gradient)
        if grid.nodes_per_axis < needed:
            msg = (f"振荡采样不足: nodes_per_axis={grid.nodes_per_axis} < {needed} "
                   f"(相位梯度 {max_phase_gradient:.4g}/bohr，每波长 {config.samples_per_wavelength} 点)")
            logger.warning(f"[求积] {msg}")
            warnings.append(msg)

    sizes = grid.level_nodes()
    if len(sizes) == 1:
        companion = max(4, _even_ceil(sizes[0] / config.refinement_factor - 1))
        previous = _tensor_sum(f, grid, companion, workers)
    else:
        previous = None

    value = previous
    error = 0.0
    levels_used = 0
    nodes_used = sizes[0]
    for level, n in enumerate(sizes):
        value = _tensor_sum(f, grid, n, workers)
        levels_used = level + 1
        nodes_used = n
        if previous is not None:
            error = abs(value - previous)
            logger.debug(f"[求积] 第 {level} 级 n={n}: value={value:.12g}, |Δ|={error:.3g}")
            if rel_tol is not None and level > 0 and error <= rel_tol * abs(value):
                break
        previous = value

    return QuadResult(value=complex(value), abs_error_estimate=float(error),
                      levels_used=levels_used, nodes_per_axis=nodes_used,
                      warnings=tuple(warnings))


class PolarRule(NamedTuple):
    """极坐标规则：ρ 方向高斯-勒让德（权重含 ρ 雅可比），φ 方向均匀梯形"""
    rho: np.ndarray
    rho_weights: np.ndarray
    phi: np.ndarray
    phi_weight: float

    def points(self) -> np.ndarray:
        """展平后的笛卡尔点 (n, 2)，ρ 外层、φ 内层"""
        R, P = np.meshgrid(self.rho, self.phi, indexing='ij')
        return np.stack([R * np.cos(P), R * np.sin(P)], axis=-1).reshape(-1, 2)

    def weights(self) -> np.ndarray:
        """与 points() 对应的展平权重"""
        return np.repeat(self.rho_weights * self.phi_weight, len(self.phi))


def polar_rule(rho_max: float, nodes: int, n_phi: Optional[int] = None) -> PolarRule:
    """
    构造圆盘 ρ <= rho_max 上的极坐标求积规则

    Args:
        rho_max: 圆盘半径
        nodes: 径向节点数
        n_phi: 方位角节点数

    Returns:
        PolarRule
    """
    if not np.isfinite(rho_max) or rho_max <= 0:
        raise DomainError(f"rho_max 必须为正: {rho_max}")
    if nodes < 1:
        raise DomainError(f"nodes 至少为 1: {nodes}")
    if n_phi is None:
        n_phi = config.default_polar_phi_nodes
    if n_phi < 1:
        raise DomainError(f"n_phi 至少为 1: {n_phi}")
    x, w = _leggauss(int(nodes))
    rho = 0.5 * rho_max * (x + 1.0)
    rho_weights = 0.5 * rho_max * w * rho
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    return PolarRule(rho, rho_weights, phi, 2.0 * np.pi / n_phi)


def integrate_polar_2d(g: Callable[[np.ndarray, np.ndarray], np.ndarray], rho_max: float,
                       nodes: int, n_phi: Optional[int] = None) -> complex:
    """
    圆盘上的二维积分 ∫∫ g(ρ, φ) ρ dρ dφ

    φ 方向的均匀梯形规则对有限傅里叶成分精确

    Args:
        g: 复值函数 g(rho, phi)，参数可广播
        rho_max: 圆盘半径
        nodes: 径向节点数
        n_phi: 方位角节点数

    Returns:
        积分值
    """
    rule = polar_rule(rho_max, nodes, n_phi)
    values = np.asarray(g(rule.rho[:, None], rule.phi[None, :]), dtype=complex)
    values = np.broadcast_to(values, (len(rule.rho), len(rule.phi)))
    finite = np.isfinite(values)
    if not np.all(finite):
        i, j = np.argwhere(~finite)[0]
        raise EvaluationError("被积函数取到非有限值", (rule.rho[i], rule.phi[j]))
    rings = values.sum(axis=1) * rule.phi_weight * rule.rho_weights
    return complex(math.fsum(rings.real), math.fsum(rings.imag))
