"""Nystroem matrices for the Helmholtz boundary layer operators.

For a density f on the curve, the six boundary operators are

    S f  = int Phi f ds                D f  = int dPhi/dn(y) f ds
    NS f = int dPhi/dn(x) f ds         ND f = int d2Phi/dn(x)dn(y) f ds
    TS f = int dPhi/dtau(x) f ds       TD f = int d2Phi/dtau(x)dn(y) f ds

with Phi(x, y) = (i/4) H0^(1)(kappa |x - y|).  The weakly singular kernels
are split as M(t, s) = M1(t, s) ln(4 sin^2((t-s)/2)) + M2(t, s); the log
part is integrated with the trigonometric-interpolation quadrature weights
and the smooth remainder with the trapezoidal rule (weight pi/n), which is
spectrally accurate on analytic curves.

TS and TD are realised as spectral tangential derivatives of the computed
S and D traces, and the hypersingular ND through Maue's identity

    ND f = d/ds S(df/ds) + kappa^2 n . S(n f),

so no hypersingular quadrature is ever needed.  Far-field operators use
the smooth kernel Phi_inf(xhat, y) = e^{i pi/4} / sqrt(8 pi kappa)
e^{-i kappa xhat . y} and plain trapezoidal sums.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import log_weight_matrix, trig_diff_matrix
from .specfun import EULER_GAMMA, bessel_j, hankel1


def _pairwise_distance(curve):
    dx = curve.z[:, 0][:, None] - curve.z[None, :, 0]
    dy = curve.z[:, 1][:, None] - curve.z[None, :, 1]
    dist = np.hypot(dx, dy)
    np.fill_diagonal(dist, 1.0)  # placeholder, diagonals are set analytically
    return dist


def _log_sin_factor(curve):
    diff = curve.t[:, None] - curve.t[None, :]
    fac = 4.0 * np.sin(0.5 * diff) ** 2
    np.fill_diagonal(fac, 1.0)
    return np.log(fac)


def single_layer_matrix(curve, kappa):
    """Nystroem matrix of the single-layer boundary operator at wavenumber kappa."""
    if kappa <= 0:
        raise ValueError("wavenumber must be positive")
    n = curve.n
    dist = _pairwise_distance(curve)
    m1 = -(1.0 / (4.0 * np.pi)) * bessel_j(0, kappa * dist) * curve.jac[None, :]
    m2 = 0.25j * hankel1(0, kappa * dist) * curve.jac[None, :] - m1 * _log_sin_factor(curve)
    diag = (0.25j - EULER_GAMMA / (2.0 * np.pi) - np.log(0.5 * kappa * curve.jac) / (2.0 * np.pi)) * curve.jac
    np.fill_diagonal(m1, -(1.0 / (4.0 * np.pi)) * curve.jac)
    np.fill_diagonal(m2, diag)
    return log_weight_matrix(n) * m1 + (np.pi / n) * m2


def _directional_kernel(curve, kappa, projection, curvature_diag):
    """Shared log-splitting for the D and NS kernels.

    Both are (i kappa / 4) H1(kappa R) * projection / R with a projection
    factor vanishing like R^2 on the diagonal, which leaves the Laplace
    curvature limit ``curvature_diag`` as the smooth part's diagonal.
    """
    n = curve.n
    dist = _pairwise_distance(curve)
    ratio = projection / dist
    m1 = -(kappa / (4.0 * np.pi)) * bessel_j(1, kappa * dist) * ratio
    m2 = 0.25j * kappa * hankel1(1, kappa * dist) * ratio - m1 * _log_sin_factor(curve)
    np.fill_diagonal(m1, 0.0)
    np.fill_diagonal(m2, curvature_diag)
    return log_weight_matrix(n) * m1 + (np.pi / n) * m2


def double_layer_matrix(curve, kappa):
    """Nystroem matrix of the double-layer boundary operator (normal in y)."""
    if kappa <= 0:
        raise ValueError("wavenumber must be positive")
    nu = np.stack((curve.dz[:, 1], -curve.dz[:, 0]), axis=1)  # unnormalised outward normal
    gap = curve.z[:, None, :] - curve.z[None, :, :]
    projection = gap[:, :, 0] * nu[None, :, 0] + gap[:, :, 1] * nu[None, :, 1]
    curvature = (curve.d2z[:, 0] * nu[:, 0] + curve.d2z[:, 1] * nu[:, 1]) / (4.0 * np.pi * curve.jac**2)
    return _directional_kernel(curve, kappa, projection, curvature)


def adjoint_double_layer_matrix(curve, kappa):
    """Nystroem matrix of the normal derivative of the single layer (normal in x)."""
    if kappa <= 0:
        raise ValueError("wavenumber must be positive")
    nu = np.stack((curve.dz[:, 1], -curve.dz[:, 0]), axis=1)
    gap = curve.z[None, :, :] - curve.z[:, None, :]
    projection = (gap[:, :, 0] * nu[:, None, 0] + gap[:, :, 1] * nu[:, None, 1]) * (
        curve.jac[None, :] / curve.jac[:, None]
    )
    curvature = (curve.d2z[:, 0] * nu[:, 0] + curve.d2z[:, 1] * nu[:, 1]) / (4.0 * np.pi * curve.jac**2)
    return _directional_kernel(curve, kappa, projection, curvature)


def _tangential_derivative(curve):
    return trig_diff_matrix(curve.n) / curve.jac[:, None]


def tangential_single_layer_matrix(curve, kappa, single=None):
    """TS as the spectral tangential derivative of the single-layer trace."""
    if single is None:
        single = single_layer_matrix(curve, kappa)
    return _tangential_derivative(curve) @ single


def tangential_double_layer_matrix(curve, kappa, double=None):
    """TD as the spectral tangential derivative of the double-layer trace."""
    if double is None:
        double = double_layer_matrix(curve, kappa)
    return _tangential_derivative(curve) @ double


def hypersingular_matrix(curve, kappa, single=None):
    """ND via Maue's identity; reuses the single-layer matrix."""
    if single is None:
        single = single_layer_matrix(curve, kappa)
    dtau = _tangential_derivative(curve)
    n1 = curve.normal[:, 0]
    n2 = curve.normal[:, 1]
    weighted = (n1[:, None] * single) * n1[None, :] + (n2[:, None] * single) * n2[None, :]
    return dtau @ single @ dtau + kappa**2 * weighted


@dataclass(frozen=True)
class BoundaryOperatorSet:
    """All six operator matrices for one curve and one wavenumber."""

    kappa: float
    single: np.ndarray
    double: np.ndarray
    adj_double: np.ndarray
    hyper: np.ndarray
    tan_single: np.ndarray
    tan_double: np.ndarray


def assemble_operator_set(curve, kappa):
    single = single_layer_matrix(curve, kappa)
    double = double_layer_matrix(curve, kappa)
    return BoundaryOperatorSet(
        kappa=kappa,
        single=single,
        double=double,
        adj_double=adjoint_double_layer_matrix(curve, kappa),
        hyper=hypersingular_matrix(curve, kappa, single=single),
        tan_single=tangential_single_layer_matrix(curve, kappa, single=single),
        tan_double=tangential_double_layer_matrix(curve, kappa, double=double),
    )


def farfield_amplitude(kappa0):
    """The constant e^{i pi/4} / sqrt(8 pi kappa0) of the far-field kernel."""
    return np.exp(0.25j * np.pi) / np.sqrt(8.0 * np.pi * kappa0)


def farfield_matrices(curve, kappa0, obs_angles):
    """Trapezoidal far-field matrices (S_inf, D_inf) at the observation angles."""
    if kappa0 <= 0:
        raise ValueError("wavenumber must be positive")
    obs_angles = np.atleast_1d(np.asarray(obs_angles, dtype=float))
    if obs_angles.size == 0:
        raise ValueError("need at least one observation angle")
    xhat = np.stack((np.cos(obs_angles), np.sin(obs_angles)), axis=1)
    phase = np.exp(-1j * kappa0 * (xhat @ curve.z.T))
    weight = (np.pi / curve.n) * curve.jac
    s_inf = farfield_amplitude(kappa0) * phase * weight[None, :]
    d_inf = s_inf * (-1j * kappa0) * (xhat @ curve.normal.T)
    return s_inf, d_inf
