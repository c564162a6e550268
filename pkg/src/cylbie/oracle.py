"""Reference far fields for circular cross-sections by separation of variables.

On a circle every field expands in Fourier-Bessel modes and the four
transmission conditions reduce to one 4x4 linear system per mode; the
oblique-incidence coupling enters only through the tangential-derivative
terms (factor i l / a).  The series gives far fields to machine precision
and is the independent check for the Nystroem direct solver.

This module intentionally uses ``scipy.special`` for the Bessel/Hankel
functions of arbitrary order, so the oracle path shares no code with the
package's own special-function branch.
"""

from __future__ import annotations

import numpy as np
from scipy.special import h1vp, hankel1, jv, jvp

from .direct import FarFieldPattern
from .errors import IrregularFrequencyError
from .params import PhysicalParams


def circle_farfield_series(radius, params: PhysicalParams, obs_angles, tol=1e-14, max_modes=200):
    """Far-field pattern of a penetrable circular cylinder of given radius.

    Modes are summed until three consecutive orders contribute below
    ``tol`` relative to the accumulated coefficients (and past the physical
    cutoff kappa0 * radius), so the result is truncation independent.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    obs_angles = np.atleast_1d(np.asarray(obs_angles, dtype=float))
    a = float(radius)
    k0a = params.kappa0 * a
    k1a = params.kappa1 * a
    amp = np.sin(params.theta) / np.sqrt(params.eps0)

    e_inf = np.zeros(obs_angles.size, dtype=complex)
    h_inf = np.zeros(obs_angles.size, dtype=complex)
    coeff_scale = 0.0
    quiet = 0

    def mode_coefficients(l):
        jn1, jp1 = jv(l, k1a), jvp(l, k1a)
        jn0, jp0 = jv(l, k0a), jvp(l, k0a)
        hn0, hp0 = hankel1(l, k0a), h1vp(l, k0a)
        il_a = 1j * l / a
        exc = amp * (1j**l) * np.exp(-1j * l * params.phi)
        system = np.array(
            [
                [jn1, 0.0, -hn0, 0.0],
                [0.0, jn1, 0.0, -hn0],
                [
                    params.beta1 * il_a * jn1,
                    params.mu_t1 * params.omega * params.kappa1 * jp1,
                    -params.beta0 * il_a * hn0,
                    -params.mu_t0 * params.omega * params.kappa0 * hp0,
                ],
                [
                    params.eps_t1 * params.omega * params.kappa1 * jp1,
                    -params.beta1 * il_a * jn1,
                    -params.eps_t0 * params.omega * params.kappa0 * hp0,
                    params.beta0 * il_a * hn0,
                ],
            ],
            dtype=complex,
        )
        rhs = np.array(
            [
                exc * jn0,
                0.0,
                params.beta0 * il_a * exc * jn0,
                params.eps_t0 * params.omega * params.kappa0 * exc * jp0,
            ],
            dtype=complex,
        )
        # High modes mix huge Hankel and tiny Bessel values, so equilibrate
        # before judging singularity; a true irregular frequency survives it.
        col = np.max(np.abs(system), axis=0)
        scaled = system / col
        row = np.max(np.abs(scaled), axis=1)
        scaled = scaled / row[:, None]
        cond = np.linalg.cond(scaled)
        if not np.isfinite(cond) or cond > 1e14:
            raise IrregularFrequencyError(
                f"mode {l} system is numerically singular (condition {cond:.2e})"
            )
        return np.linalg.solve(scaled, rhs / row) / col

    front = np.sqrt(2.0 / (np.pi * params.kappa0)) * np.exp(-0.25j * np.pi)
    for l in range(0, max_modes + 1):
        orders = (l,) if l == 0 else (l, -l)
        contribution = 0.0
        for ll in orders:
            a_l, b_l, c_l, d_l = mode_coefficients(ll)
            phase = front * (-1j) ** ll * np.exp(1j * ll * obs_angles)
            e_inf += c_l * phase
            h_inf += d_l * phase
            contribution = max(contribution, abs(c_l), abs(d_l))
        coeff_scale = max(coeff_scale, contribution)
        if l > k0a and contribution < tol * max(coeff_scale, 1e-300):
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
    else:
        raise RuntimeError("mode series did not converge within max_modes")
    return FarFieldPattern(obs_angles=obs_angles, e_inf=e_inf, h_inf=h_inf)
