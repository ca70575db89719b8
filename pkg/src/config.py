#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
配置管理模块
统一管理数值引擎和命令行的默认配置项
"""
import os
from dataclasses import dataclass
from typing import Optional


@dataclass
class AppConfig:
    """应用程序配置"""
    # 版本信息
    version: str = "1.2.0"
    version_date: str = "2026-10-19"

    # 求积网格默认值
    default_nodes_per_axis: int = 48
    default_refinement_levels: int = 3
    default_panels_per_half: int = 4  # 每个半轴上的分段数
    default_panel_grading: float = 3.0  # 相邻分段宽度之比（从中心向外）
    refinement_factor: float = 1.5  # 每一级节点数乘以该因子（向上取偶数）
    slab_size: int = 4  # 每个归约块包含的 x 节点数，与线程数无关

    # 原子支撑区域
    default_density_floor: float = 1e-12
    box_factor: float = 1.2  # 积分盒半宽 = box_factor * 支撑半径

    # 数值检查
    samples_per_wavelength: int = 6
    paraxial_limit_deg: float = 30.0
    degenerate_floor: float = 1e-300
    convergence_rel_tol: float = 1e-3
    convergence_abs_tol: float = 1e-10

    # 极坐标求积（归一化、q/b 剖面）
    default_polar_nodes: int = 200
    default_polar_phi_nodes: int = 64
    beam_norm_extent: float = 8.0  # 横向归一化积分到 8 * w(z)
    q_rho_nodes: int = 48
    q_phi_nodes: int = 96
    b_rho_nodes: int = 48
    b_phi_nodes: int = 64
    b_grid_threshold: float = 1e-4  # |a| 低于峰值的该比例时截断 b 网格
    b_probe_growth: float = 1.25
    b_probe_max_steps: int = 80
    coverage_threshold: float = 1e-6  # 边界 |a|^2 与峰值之比的上限

    # 输出配置
    csv_significant_digits: int = 17
    default_output_format: str = "csv"
    default_output_path: str = "vortexff_out.csv"

    # 并发配置
    threads_env_var: str = "VORTEXFF_THREADS"

    def resolve_threads(self, cli_value: Optional[int] = None) -> int:
        """
        确定工作线程数：命令行参数优先，其次环境变量，默认 1

        Args:
            cli_value: 命令行 --threads 的值

        Returns:
            线程数（至少为 1）
        """
        if cli_value is not None:
            return max(1, int(cli_value))
        env_value = os.environ.get(self.threads_env_var)
        if env_value:
            try:
                return max(1, int(env_value))
            except ValueError:
                return 1
        return 1


# 全局配置实例
config = AppConfig()
