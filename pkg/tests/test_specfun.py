# -*- coding: utf-8 -*-
import numpy as np
import pytest
from scipy import integrate, special

from src.errors import DomainError
from src.specfun import (PolyIndex, assoc_laguerre, hydrogenic_radial, laguerre_derivative_form,
                         spherical_harmonic)


@pytest.mark.parametrize("p, alpha, x, expected", [
    (0, 3, 7.2, 1.0),
    (1, 0, 1.0, 0.0),
    (2, 1, 2.0, -1.0),
])
def test_assoc_laguerre_values(p, alpha, x, expected):
    assert assoc_laguerre(PolyIndex(p, alpha), x) == pytest.approx(expected, abs=1e-14)


def test_assoc_laguerre_keeps_array_shape():
    x = np.linspace(0.0, 3.0, 7).reshape(7, 1)
    assert assoc_laguerre(PolyIndex(3, 2), x).shape == (7, 1)


@pytest.mark.parametrize("p", range(6))
@pytest.mark.parametrize("alpha", range(5))
def test_laguerre_forms_agree(p, alpha):
    x = np.linspace(0.0, 15.0, 31)
    idx = PolyIndex(p, alpha)
    a = assoc_laguerre(idx, x)
    b = laguerre_derivative_form(idx, x)
    np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-10)


def test_laguerre_rejects_non_finite():
    with pytest.raises(DomainError):
        assoc_laguerre(PolyIndex(1, 0), np.nan)
    with pytest.raises(DomainError):
        laguerre_derivative_form(PolyIndex(1, 0), np.array([0.0, np.inf]))


LAGUERRE_X = np.linspace(0.0, 50.0, 201)


@pytest.mark.parametrize("alpha", range(11))
def test_laguerre_recurrence_full_domain(alpha):
    values = [assoc_laguerre(PolyIndex(p, alpha), LAGUERRE_X) for p in range(22)]
    for p in range(1, 21):
        lhs = (p + 1) * values[p + 1]
        rhs = (2 * p + alpha + 1 - LAGUERRE_X) * values[p] - (p + alpha) * values[p - 1]
        scale = np.abs(lhs) + np.abs((2 * p + alpha + 1 - LAGUERRE_X) * values[p]) \
            + np.abs((p + alpha) * values[p - 1])
        assert np.all(np.abs(lhs - rhs) <= 1e-12 * scale + 1e-300)


@pytest.mark.parametrize("alpha", [0, 1, 4, 10])
@pytest.mark.parametrize("p", [0, 3, 11, 20])
def test_laguerre_matches_scipy_full_domain(p, alpha):
    ours = assoc_laguerre(PolyIndex(p, alpha), LAGUERRE_X)
    reference = special.eval_genlaguerre(p, alpha, LAGUERRE_X)
    np.testing.assert_allclose(ours, reference, rtol=0.0, atol=1e-10 * np.max(np.abs(reference)))


@pytest.mark.parametrize("p, alpha", [(-1, 0), (0, -2), (1.5, 0)])
def test_poly_index_validation(p, alpha):
    with pytest.raises(DomainError):
        PolyIndex(p, alpha)


def test_spherical_harmonic_values():
    assert spherical_harmonic(0, 0, 0.3, 1.1) == pytest.approx(1.0 / np.sqrt(4.0 * np.pi))
    assert spherical_harmonic(1, 0, 0.0, 0.0) == pytest.approx(np.sqrt(3.0 / (4.0 * np.pi)))


def test_spherical_harmonic_phase_winding():
    theta, phi = 0.7, 0.4
    assert spherical_harmonic(1, 1, theta, phi + np.pi) == pytest.approx(
        -spherical_harmonic(1, 1, theta, phi), abs=1e-15)


def test_spherical_harmonic_negative_m_relation():
    theta, phi = 1.2, -0.5
    for L, M in [(1, 1), (2, 1), (2, 2), (3, 2)]:
        lhs = spherical_harmonic(L, -M, theta, phi)
        rhs = (-1) ** M * np.conj(spherical_harmonic(L, M, theta, phi))
        assert lhs == pytest.approx(rhs, abs=1e-14)


def test_spherical_harmonic_orthonormal():
    x, w = np.polynomial.legendre.leggauss(24)
    theta = np.arccos(x)[:, None]
    phi = (2.0 * np.pi * np.arange(16) / 16)[None, :]
    dphi = 2.0 * np.pi / 16

    def inner(a, b):
        ya = spherical_harmonic(*a, theta, phi)
        yb = spherical_harmonic(*b, theta, phi)
        return np.sum(w[:, None] * np.conj(ya) * yb) * dphi

    assert inner((2, 1), (2, 1)) == pytest.approx(1.0, abs=1e-12)
    assert inner((2, 1), (3, 1)) == pytest.approx(0.0, abs=1e-12)
    assert inner((2, 1), (2, -1)) == pytest.approx(0.0, abs=1e-12)


def test_spherical_harmonic_rejects_invalid_m():
    with pytest.raises(DomainError):
        spherical_harmonic(1, 2, 0.0, 0.0)


def test_hydrogenic_radial_values():
    assert hydrogenic_radial(1, 0, 0.0) == pytest.approx(2.0)
    assert hydrogenic_radial(2, 1, 0.0) == 0.0
    assert hydrogenic_radial(2, 0, 2.0) == pytest.approx(0.0, abs=1e-15)
    # 2s 的节点在 r = 2 两侧变号
    assert hydrogenic_radial(2, 0, 1.9) * hydrogenic_radial(2, 0, 2.1) < 0


@pytest.mark.parametrize("N, L", [(1, 0), (2, 0), (2, 1), (3, 1), (4, 3)])
def test_hydrogenic_radial_normalized(N, L):
    value, _ = integrate.quad(lambda r: (r * hydrogenic_radial(N, L, r)) ** 2, 0.0, np.inf,
                              epsabs=1e-14, epsrel=1e-13, limit=200)
    assert value == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("N, L", [(0, 0), (1, 1), (2, -1)])
def test_hydrogenic_radial_rejects_invalid_state(N, L):
    with pytest.raises(DomainError):
        hydrogenic_radial(N, L, 1.0)


@pytest.mark.parametrize("N1, N2, L", [(1, 2, 0), (1, 3, 0), (2, 3, 0), (1, 4, 0), (3, 4, 0),
                                       (2, 3, 1), (2, 4, 1), (3, 4, 1), (3, 4, 2)])
def test_hydrogenic_radial_orthogonal(N1, N2, L):
    value, _ = integrate.quad(lambda r: r * r * hydrogenic_radial(N1, L, r) * hydrogenic_radial(N2, L, r),
                              0.0, np.inf, epsabs=1e-14, epsrel=1e-13, limit=200)
    assert abs(value) < 1e-8
