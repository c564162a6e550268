"""Bessel functions J, Y and Hankel functions H^(1) of orders 0 and 1.

These are the only special functions the layer-potential kernels need:
the fundamental solution is (i/4) H0^(1)(kappa |x-y|) and its gradient
brings in H1^(1); everything else is reduced to tangential derivatives.

Evaluation uses three branches of comparable (~1e-13 relative) accuracy:

* ``x <= 6``            ascending power series (with the log/pole terms
                        split off explicitly for Y),
* ``6 < x < 20``        real integral representations (full-period
                        trapezoidal sum for J, Gauss-Legendre panels for
                        the oscillatory and monotone parts of Y),
* ``x >= 20``           Hankel asymptotic expansion, truncated at the
                        smallest term.

A plain two-branch series/asymptotic split cannot reach 1e-12 in double
precision: the series loses ~exp(x) in cancellation while the asymptotic
tail only reaches ~exp(-2x)*sqrt(x), and the two error curves cross near
x ~ 16 at the 1e-10 level.  The quadrature branch bridges that window.
The branch cut points are module constants and both overlaps are covered
by continuity tests.
"""

from __future__ import annotations

import numpy as np

EULER_GAMMA = 0.57721566490153286060651209008240243

SERIES_CUT = 6.0
ASYMPTOTIC_CUT = 20.0

_SERIES_TERMS = 36

# Full-period trapezoidal rule for J_n(x) = (1/2pi) int_0^2pi cos(n t - x sin t) dt.
# Sampling at N points aliases order n onto n +- N, n +- 2N, ...; with N = 256
# and x < 20 the leading alias J_{255}(20) is far below machine precision.
_TRAP_NODES = 256

# Harmonic numbers H_0..H_k used by the Y series.
_HARMONIC = np.concatenate(([0.0], np.cumsum(1.0 / np.arange(1, _SERIES_TERMS + 3))))


def _panel_gauss(a, b, order):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


# Oscillatory part of Y_n: int_0^pi sin(x sin t - n t) dt.  At most ~3.2
# wavelengths for x < 20, so 100 Gauss points are far past convergence.
_OSC_NODES, _OSC_WEIGHTS = _panel_gauss(0.0, np.pi, 100)
_OSC_SIN = np.sin(_OSC_NODES)

# Monotone part after u = sinh(t):  int_0^inf e^{-x u} w(u) / sqrt(1+u^2) du.
# The integrand decays like e^{-6u} on this branch; truncation at u = 8
# leaves e^{-48}.  Panels keep the u = +-i branch points off the Bernstein
# ellipses.
_MONO_PANELS = [_panel_gauss(a, b, 40) for a, b in ((0.0, 1.0), (1.0, 3.0), (3.0, 8.0))]
_MONO_NODES = np.concatenate([p[0] for p in _MONO_PANELS])
_MONO_WEIGHTS = np.concatenate([p[1] for p in _MONO_PANELS])
_MONO_ROOT = np.sqrt(1.0 + _MONO_NODES**2)


def _series_j(order, x):
    q = -0.25 * x * x
    if order == 0:
        term = np.ones_like(x)
        total = term.copy()
        for k in range(1, _SERIES_TERMS):
            term = term * q / (k * k)
            total += term
        return total
    term = np.ones_like(x)
    total = term.copy()
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + 1))
        total += term
    return 0.5 * x * total


def _series_y(order, x):
    # A&S 9.1.11 specialised to n = 0, 1 with psi(k+1) = H_k - gamma.
    log_part = (2.0 / np.pi) * (np.log(0.5 * x) + EULER_GAMMA) * _series_j(order, x)
    q = -0.25 * x * x
    if order == 0:
        term = np.ones_like(x)
        corr = np.zeros_like(x)
        for k in range(1, _SERIES_TERMS):
            term = term * q / (k * k)
            corr += term * _HARMONIC[k]
        return log_part - (2.0 / np.pi) * corr
    term = np.ones_like(x)
    corr = term * (_HARMONIC[0] + _HARMONIC[1])
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + 1))
        corr += term * (_HARMONIC[k] + _HARMONIC[k + 1])
    return log_part - 2.0 / (np.pi * x) - (0.5 * x / np.pi) * corr


def _quad_j(order, x):
    theta = 2.0 * np.pi * np.arange(_TRAP_NODES) / _TRAP_NODES
    phase = order * theta[None, :] - np.outer(x, np.sin(theta))
    return np.mean(np.cos(phase), axis=1)


def _quad_y(order, x):
    phase = np.outer(x, _OSC_SIN) - order * _OSC_NODES[None, :]
    osc = np.sin(phase) @ _OSC_WEIGHTS
    weight = _MONO_WEIGHTS / _MONO_ROOT
    if order == 1:
        weight = weight * _MONO_NODES
    mono = np.exp(-np.outer(x, _MONO_NODES)) @ weight
    return (osc - 2.0 * mono) / np.pi


def _asymptotic_h1(order, x):
    # DLMF 10.17.5: H^(1)_n(x) ~ sqrt(2/(pi x)) e^{i(x - n pi/2 - pi/4)}
    #               * sum_k i^k a_k(n) / x^k, truncated at the smallest term.
    mu = 4.0 * order * order
    term = np.ones(x.shape, dtype=complex)
    total = term.copy()
    for k in range(1, 35):
        term = term * (1j * (mu - (2 * k - 1) ** 2) / (8.0 * k)) / x
        total += term
        if np.max(np.abs(term)) < 1e-18:
            break
    camp = np.sqrt(2.0 / (np.pi * x)) * np.exp(1j * (x - 0.5 * order * np.pi - 0.25 * np.pi))
    return camp * total


def _dispatch(order, x, kind):
    out = np.empty(x.shape, dtype=complex if kind == "h" else float)
    small = x <= SERIES_CUT
    large = x >= ASYMPTOTIC_CUT
    mid = ~(small | large)
    if np.any(small):
        xs = x[small]
        if kind == "j":
            out[small] = _series_j(order, xs)
        elif kind == "y":
            out[small] = _series_y(order, xs)
        else:
            out[small] = _series_j(order, xs) + 1j * _series_y(order, xs)
    if np.any(mid):
        xm = x[mid]
        if kind == "j":
            out[mid] = _quad_j(order, xm)
        elif kind == "y":
            out[mid] = _quad_y(order, xm)
        else:
            out[mid] = _quad_j(order, xm) + 1j * _quad_y(order, xm)
    if np.any(large):
        h = _asymptotic_h1(order, x[large])
        out[large] = {"j": h.real, "y": h.imag, "h": h}[kind]
    return out


def _prepare(order, x, positive):
    if order not in (0, 1):
        raise ValueError(f"only orders 0 and 1 are supported, got {order!r}")
    arr = np.asarray(x, dtype=float)
    if positive:
        if np.any(arr <= 0.0):
            raise ValueError("argument must be strictly positive")
    elif np.any(arr < 0.0):
        raise ValueError("argument must be non-negative")
    return arr, np.isscalar(x) or arr.ndim == 0


def bessel_j(order, x):
    """Bessel function of the first kind, order 0 or 1, for real x >= 0."""
    arr, scalar = _prepare(order, x, positive=False)
    out = _dispatch(order, np.atleast_1d(arr), "j")
    return float(out[0]) if scalar else out.reshape(arr.shape)


def bessel_y(order, x):
    """Bessel function of the second kind, order 0 or 1, for real x > 0."""
    arr, scalar = _prepare(order, x, positive=True)
    out = _dispatch(order, np.atleast_1d(arr), "y")
    return float(out[0]) if scalar else out.reshape(arr.shape)


def hankel1(order, x):
    """Hankel function of the first kind, J_n(x) + i Y_n(x), for real x > 0."""
    arr, scalar = _prepare(order, x, positive=True)
    out = _dispatch(order, np.atleast_1d(arr), "h")
    return complex(out[0]) if scalar else out.reshape(arr.shape)
