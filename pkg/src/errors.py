#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
异常定义模块
统一定义数值引擎和命令行使用的异常类型，每种异常对应一个退出码
"""
from typing import Optional, Sequence


class VortexFFError(Exception):
    """所有引擎异常的基类"""
    exit_code = 1


class DomainError(VortexFFError, ValueError):
    """参数超出定义域（量子数非法、非有限输入、空列表等）"""
    exit_code = 2


class ConfigError(VortexFFError):
    """配置文件解析或校验失败，消息中包含键名和行号"""
    exit_code = 2

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        self.key = key
        self.line = line
        location = []
        if key is not None:
            location.append(f"键 '{key}'")
        if line is not None:
            location.append(f"第 {line} 行")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}{message}")


class EvaluationError(VortexFFError):
    """被积函数在某个采样点上取到非有限值"""
    exit_code = 3

    def __init__(self, message: str, coordinate: Optional[Sequence[float]] = None):
        self.coordinate = tuple(float(c) for c in coordinate) if coordinate is not None else None
        if self.coordinate is not None:
            message = f"{message} (坐标: {self.coordinate})"
        super().__init__(message)


class ConvergenceError(VortexFFError):
    """求积误差估计超过容差"""
    exit_code = 3


class DegenerateDenominatorError(VortexFFError):
    """涡旋因子的分母 |M_p| 低于下限"""
    exit_code = 3


class CoverageError(VortexFFError):
    """积分盒或 b 网格没有覆盖所需区域"""
    exit_code = 4

    def __init__(self, message: str, required: Optional[dict] = None):
        self.required = required or {}
        if self.required:
            details = ", ".join(f"{k}={v}" for k, v in self.required.items())
            message = f"{message} (需要: {details})"
        super().__init__(message)


class UndersampledGridWarning(UserWarning):
    """q 网格不足以分辨 e^{iq·b} 的振荡，携带所需节点数"""

    def __init__(self, message: str, b: float = 0.0, required_rho: int = 0, required_phi: int = 0):
        self.b = float(b)
        self.required_rho = int(required_rho)
        self.required_phi = int(required_phi)
        super().__init__(f"{message} (b={self.b:.6g}, 需要 n_rho>={self.required_rho}, "
                         f"n_phi>={self.required_phi})")
