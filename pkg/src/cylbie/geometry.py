"""Star-shaped boundary curves and periodic spectral machinery.

A boundary is parametrised radially, z(t) = r(t) (cos t, sin t) with
r > 0, sampled on the even grid t_j = j pi / n, j = 0..2n-1 (counter-
clockwise, so the outward normal is (z2', -z1')/|z'|).  This module also
provides the trigonometric differentiation matrix and the quadrature
weights for the ln(4 sin^2((t-s)/2)) singularity that the Nystroem
assembly is built on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def grid_nodes(n):
    """The 2n equidistant parameter nodes t_j = j pi / n."""
    return np.pi * np.arange(2 * n) / n


class TrigPolynomial:
    """Real trigonometric polynomial q(t) = sum a_k cos kt + sum b_k sin kt.

    Coefficients are stored as ``cos_coef = (a_0, ..., a_m)`` and
    ``sin_coef = (b_1, ..., b_m)``.  Differentiation is exact (coefficient
    shifts), which keeps the inverse iteration free of numerical
    differentiation error.
    """

    def __init__(self, cos_coef, sin_coef=None):
        self.cos_coef = np.atleast_1d(np.asarray(cos_coef, dtype=float))
        if sin_coef is None:
            sin_coef = np.zeros(max(self.cos_coef.size - 1, 0))
        self.sin_coef = np.atleast_1d(np.asarray(sin_coef, dtype=float)) if np.size(sin_coef) else np.zeros(0)
        if self.sin_coef.size != self.cos_coef.size - 1:
            raise ValueError("sin_coef must have one entry fewer than cos_coef")
        if not (np.all(np.isfinite(self.cos_coef)) and np.all(np.isfinite(self.sin_coef))):
            raise ValueError("non-finite trigonometric coefficients")

    @property
    def degree(self):
        return self.cos_coef.size - 1

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        k = np.arange(self.degree + 1)
        kt = np.multiply.outer(t, k)
        out = np.cos(kt) @ self.cos_coef
        if self.degree:
            out = out + np.sin(kt[..., 1:]) @ self.sin_coef
        return out

    def derivative(self):
        m = self.degree
        k = np.arange(1, m + 1)
        cos_coef = np.concatenate(([0.0], k * self.sin_coef)) if m else np.zeros(1)
        sin_coef = -k * self.cos_coef[1:]
        return TrigPolynomial(cos_coef, sin_coef)

    def padded(self, degree):
        if degree < self.degree:
            raise ValueError("cannot pad to a lower degree")
        pad = degree - self.degree
        return TrigPolynomial(
            np.concatenate((self.cos_coef, np.zeros(pad))),
            np.concatenate((self.sin_coef, np.zeros(pad))),
        )

    def __add__(self, other):
        m = max(self.degree, other.degree)
        a, b = self.padded(m), other.padded(m)
        return TrigPolynomial(a.cos_coef + b.cos_coef, a.sin_coef + b.sin_coef)

    def scaled(self, factor):
        return TrigPolynomial(factor * self.cos_coef, factor * self.sin_coef)

    def coefficient_vector(self):
        """Flat coefficients in the order (a_0..a_m, b_1..b_m)."""
        return np.concatenate((self.cos_coef, self.sin_coef))

    @classmethod
    def from_coefficient_vector(cls, x, degree):
        x = np.asarray(x, dtype=float)
        if x.size != 2 * degree + 1:
            raise ValueError("coefficient vector length must be 2*degree + 1")
        return cls(x[: degree + 1], x[degree + 1 :])

    @classmethod
    def constant(cls, value):
        return cls([float(value)])

    def __repr__(self):
        return f"TrigPolynomial(degree={self.degree})"


def fourier_derivative(values, order=1):
    """Spectral derivative of samples on an even uniform periodic grid.

    For odd derivative orders the (real-asymmetric) Nyquist mode is
    dropped, the usual convention for even grids.
    """
    values = np.asarray(values, dtype=float)
    nn = values.size
    if nn % 2:
        raise ValueError("expected an even number of samples")
    freq = np.fft.rfftfreq(nn, d=1.0 / nn)
    mult = (1j * freq) ** order
    if order % 2:
        mult[-1] = 0.0
    return np.fft.irfft(np.fft.rfft(values) * mult, nn)


def resample(values, new_size):
    """Trigonometric interpolation of periodic samples onto a finer even grid."""
    values = np.asarray(values)
    nn = values.size
    if new_size < nn or new_size % 2 or nn % 2:
        raise ValueError("new_size must be an even integer >= len(values)")
    if new_size == nn:
        return values.copy()
    if np.iscomplexobj(values):
        return resample(values.real, new_size) + 1j * resample(values.imag, new_size)
    spec = np.fft.rfft(values)
    out = np.zeros(new_size // 2 + 1, dtype=complex)
    out[: spec.size] = spec
    out[spec.size - 1] *= 0.5  # the old Nyquist bin becomes an interior mode
    return np.fft.irfft(out, new_size) * (new_size / nn)


@dataclass(frozen=True)
class BoundaryCurve:
    """Sampled boundary geometry on the 2n-point grid.

    All arrays are per-node samples; ``z``, ``dz``, ``d2z``, ``normal`` and
    ``tangent`` have shape (2n, 2).  ``normal`` is the outward unit normal,
    ``tangent = (-normal_2, normal_1)`` the counter-clockwise unit tangent,
    ``jac = |z'|`` the parametrisation Jacobian.
    """

    n: int
    t: np.ndarray
    r: np.ndarray
    z: np.ndarray
    dz: np.ndarray
    d2z: np.ndarray
    jac: np.ndarray
    normal: np.ndarray
    tangent: np.ndarray
    radial: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for name in ("t", "r", "z", "dz", "d2z", "jac", "normal", "tangent"):
            getattr(self, name).setflags(write=False)


def curve_from_radial(radial, n):
    """Build a :class:`BoundaryCurve` from a radial function.

    ``radial`` is either a :class:`TrigPolynomial` (differentiated
    analytically) or a plain callable of t (differentiated spectrally from
    its grid samples; exact to round-off for radials resolved by the grid).
    """
    if n < 4:
        raise ValueError("grid half-size n must be at least 4")
    t = grid_nodes(n)
    if isinstance(radial, TrigPolynomial):
        r = radial(t)
        r1 = radial.derivative()(t)
        r2 = radial.derivative().derivative()(t)
    else:
        r = np.asarray(radial(t), dtype=float)
        r1 = fourier_derivative(r, 1)
        r2 = fourier_derivative(r, 2)
    if np.any(r <= 0.0) or not np.all(np.isfinite(r)):
        raise ValueError("radial function must be strictly positive on the grid")
    ct, st = np.cos(t), np.sin(t)
    ray = np.stack((ct, st), axis=1)
    ray_t = np.stack((-st, ct), axis=1)
    z = r[:, None] * ray
    dz = r1[:, None] * ray + r[:, None] * ray_t
    d2z = (r2 - r)[:, None] * ray + 2.0 * r1[:, None] * ray_t
    jac = np.hypot(dz[:, 0], dz[:, 1])
    if np.any(jac <= 0.0):
        raise ValueError("degenerate parametrisation: |z'(t)| vanishes on the grid")
    normal = np.stack((dz[:, 1], -dz[:, 0]), axis=1) / jac[:, None]
    tangent = np.stack((-normal[:, 1], normal[:, 0]), axis=1)
    return BoundaryCurve(
        n=n, t=t, r=r, z=z, dz=dz, d2z=d2z, jac=jac, normal=normal, tangent=tangent, radial=radial
    )


def trig_diff_matrix(n):
    """Differentiation matrix of trigonometric interpolation on the 2n grid.

    Q[k, j] = (1/2) (-1)^(k-j) cot((t_k - t_j)/2) off the diagonal, zero on
    it; exact for trigonometric polynomials of degree < n.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    t = grid_nodes(n)
    diff = t[:, None] - t[None, :]
    idx = np.arange(2 * n)
    sign = np.where((idx[:, None] - idx[None, :]) % 2 == 0, 1.0, -1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = 0.5 * sign / np.tan(0.5 * diff)
    np.fill_diagonal(q, 0.0)
    return q


def _log_weight_row(n, offsets):
    m = np.arange(1, n)
    angles = np.multiply.outer(offsets, m) * (np.pi / n)
    row = -(2.0 * np.pi / n) * (np.cos(angles) @ (1.0 / m))
    row -= (np.pi / n**2) * np.cos(np.pi * offsets)
    return row


def log_quadrature_weights(n, t):
    """Weights R_j(t) with sum_j R_j(t) f(t_j) ~ int ln(4 sin^2((t-s)/2)) f(s) ds.

    The collocation point t must be one of the grid nodes; the rule is
    exact for trigonometric polynomials f of degree < n.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    pos = float(t) * n / np.pi
    j = np.rint(pos)
    if abs(pos - j) > 1e-10:
        raise ValueError("collocation point is not a grid node")
    return _log_weight_row(n, j - np.arange(2 * n))


def log_weight_matrix(n):
    """All collocation rows R_j(t_k) at once (circulant in k - j)."""
    base = _log_weight_row(n, np.arange(2 * n))
    idx = (np.arange(2 * n)[:, None] - np.arange(2 * n)[None, :]) % (2 * n)
    return base[idx]


def circle_radius(radius):
    """Radial function of a circle, as a degree-0 trigonometric polynomial."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    return TrigPolynomial.constant(radius)


def peanut_radius(t):
    """Peanut-shaped benchmark boundary, r(t) = sqrt(0.5 cos^2 t + 0.15 sin^2 t)."""
    t = np.asarray(t, dtype=float)
    return np.sqrt(0.5 * np.cos(t) ** 2 + 0.15 * np.sin(t) ** 2)


def apple_radius(t):
    """Apple-shaped benchmark boundary, r(t) = (0.45 + 0.3 cos t - 0.1 sin 2t)/(1 + 0.7 cos t)."""
    t = np.asarray(t, dtype=float)
    return (0.45 + 0.3 * np.cos(t) - 0.1 * np.sin(2.0 * t)) / (1.0 + 0.7 * np.cos(t))


def rotated_radial(radial, alpha):
    """Radial function of the same curve rotated by angle alpha."""
    return lambda t: radial(np.asarray(t, dtype=float) - alpha)
