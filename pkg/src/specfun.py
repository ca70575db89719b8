#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
特殊函数模块
广义拉盖尔多项式、球谐函数和类氢径向函数，原子态和光束模式都以此为基础
"""
from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.polynomial import laguerre as npl
from scipy.special import gammaln, lpmv

try:
    from .errors import DomainError
except ImportError:
    from errors import DomainError


ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class PolyIndex:
    """拉盖尔多项式指标：径向指标 p 和上标 alpha"""
    p: int
    alpha: int

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 0:
            raise DomainError(f"p 必须是非负整数: p={self.p}")
        if int(self.alpha) != self.alpha or self.alpha < 0:
            raise DomainError(f"alpha 必须是非负整数: alpha={self.alpha}")


def log_factorial(n: ArrayLike) -> ArrayLike:
    """log(n!)，用 gammaln 计算，避免大 n 时溢出"""
    return gammaln(np.asarray(n, dtype=float) + 1.0)


def _check_finite(x: ArrayLike, name: str = "x"):
    if not np.all(np.isfinite(x)):
        raise DomainError(f"{name} 必须是有限值")


def assoc_laguerre(idx: PolyIndex, x: ArrayLike) -> ArrayLike:
    """
    广义拉盖尔多项式 L_p^alpha(x)

    使用关于 p 的三项递推（升序）：
    (k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}

    Args:
        idx: 多项式指标 (p, alpha)
        x: 自变量，标量或数组

    Returns:
        与 x 形状相同的实数值
    """
    _check_finite(x)
    x_arr = np.asarray(x, dtype=float)
    alpha = float(idx.alpha)

    prev = np.ones_like(x_arr)
    if idx.p == 0:
        result = prev
    else:
        curr = 1.0 + alpha - x_arr
        for k in range(1, idx.p):
            prev, curr = curr, ((2 * k + 1 + alpha - x_arr) * curr - (k + alpha) * prev) / (k + 1)
        result = curr

    if np.ndim(x) == 0:
        return float(result)
    return result


def laguerre_derivative_form(idx: PolyIndex, x: ArrayLike) -> ArrayLike:
    """
    (-1)^alpha d^alpha/dx^alpha L_{p+alpha}(x)

    用普通拉盖尔级数求导得到，与 assoc_laguerre 的标准约定应当一致

    Args:
        idx: 多项式指标 (p, alpha)
        x: 自变量

    Returns:
        多项式值
    """
    _check_finite(x)
    coeffs = np.zeros(idx.p + idx.alpha + 1)
    coeffs[-1] = 1.0
    derived = npl.lagder(coeffs, m=idx.alpha) if idx.alpha > 0 else coeffs
    value = (-1.0) ** idx.alpha * npl.lagval(np.asarray(x, dtype=float), derived)
    if np.ndim(x) == 0:
        return float(value)
    return value


def spherical_harmonic(L: int, M: int, theta: ArrayLike, phi: ArrayLike) -> ArrayLike:
    """
    正交归一复球谐函数 Y_LM(theta, phi)，带 Condon-Shortley 相位

    Args:
        L: 角量子数，L >= 0
        M: 磁量子数，|M| <= L
        theta: 极角（弧度）
        phi: 方位角（弧度）

    Returns:
        复数值（与 theta/phi 广播后的形状相同）
    """
    if L < 0 or abs(M) > L:
        raise DomainError(f"球谐函数要求 0 <= L 且 |M| <= L: L={L}, M={M}")
    _check_finite(theta, "theta")
    _check_finite(phi, "phi")

    m = abs(M)
    theta_arr = np.asarray(theta, dtype=float)
    phi_arr = np.asarray(phi, dtype=float)
    log_norm = 0.5 * (np.log((2 * L + 1) / (4.0 * np.pi)) + log_factorial(L - m) - log_factorial(L + m))
    # lpmv 已包含 (-1)^m Condon-Shortley 相位
    legendre = lpmv(m, L, np.cos(theta_arr))
    value = np.exp(log_norm) * legendre * np.exp(1j * m * phi_arr)
    if M < 0:
        value = (-1.0) ** m * np.conj(value)

    if np.ndim(value) == 0:
        return complex(value)
    return value


def hydrogenic_radial(N: int, L: int, r: ArrayLike) -> ArrayLike:
    """
    类氢原子（Z=1）径向函数 R_NL(r)，长度单位为玻尔半径

    归一化为 ∫ R^2 r^2 dr = 1

    Args:
        N: 主量子数，N >= 1
        L: 角量子数，0 <= L < N
        r: 径向距离（bohr），r >= 0

    Returns:
        实数值
    """
    if N < 1 or L < 0 or L >= N:
        raise DomainError(f"类氢态要求 N >= 1 且 0 <= L < N: N={N}, L={L}")
    _check_finite(r, "r")
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise DomainError("r 必须非负")

    rho = 2.0 * r_arr / N
    log_norm = 0.5 * (3.0 * np.log(2.0 / N) + log_factorial(N - L - 1)
                      - np.log(2.0 * N) - log_factorial(N + L))
    laguerre = assoc_laguerre(PolyIndex(N - L - 1, 2 * L + 1), rho)
    value = np.exp(log_norm) * np.exp(-rho / 2.0) * rho ** L * laguerre

    if np.ndim(r) == 0:
        return float(value)
    return value
