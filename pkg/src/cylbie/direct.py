"""Direct transmission solver for oblique plane-wave incidence.

The axial field components are represented by Green-formula potentials,

    e_int = -D1 phi1 + S1 eta1        e_sc = D0 phi0 - S0 eta0
    h_int = -D1 psi1 + S1 xi1         h_sc = D0 psi0 - S0 xi0,

so the densities are boundary traces and normal derivatives.  Eliminating
the normal derivatives through the Dirichlet-to-Neumann maps

    K_j = (NS_j +- I/2)^{-1} ND_j     (+ exterior, - interior)

and the tangential-trace maps L_j = 2 (TD_j - TS_j K_j) turns the four
transmission conditions into a 4n x 4n system for the scattered traces
(phi0, psi0).  The far-field pattern follows from the far-field operators
applied to (phi0, eta0) and (psi0, xi0).  This is the synthetic-data
generator for the inverse problem.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IrregularFrequencyError
from .operators import assemble_operator_set, farfield_matrices
from .params import PhysicalParams
from .specfun import hankel1

CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class IncidentTrace:
    """The incident axial electric field and its surface derivatives.

    The magnetic axial component of a TM plane wave vanishes identically,
    so only e is carried.
    """

    values: np.ndarray
    normal_deriv: np.ndarray
    tangential_deriv: np.ndarray


def incident_trace(curve, params: PhysicalParams):
    """Sample e_inc = sin(theta)/sqrt(eps0) e^{i kappa0 d.x} and its derivatives on the curve."""
    d = np.array([np.cos(params.phi), np.sin(params.phi)])
    values = (np.sin(params.theta) / np.sqrt(params.eps0)) * np.exp(
        1j * params.kappa0 * (curve.z @ d)
    )
    factor = 1j * params.kappa0 * values
    return IncidentTrace(
        values=values,
        normal_deriv=factor * (curve.normal @ d),
        tangential_deriv=factor * (curve.tangent @ d),
    )


def dtn_matrix(ops, exterior):
    """Discrete Dirichlet-to-Neumann map (NS +- I/2)^{-1} ND.

    The sign comes from the jump relations of the single-layer normal
    derivative: + for the exterior (radiating) side, - for the interior.
    """
    nn = ops.single.shape[0]
    sign = 0.5 if exterior else -0.5
    return np.linalg.solve(ops.adj_double + sign * np.eye(nn), ops.hyper)


def tangential_trace_matrix(ops, dtn):
    """L = 2 (TD - TS K): maps a field trace to its tangential derivative
    (with + sign for exterior representations, - for interior ones)."""
    return 2.0 * (ops.tan_double - ops.tan_single @ dtn)


@dataclass(frozen=True)
class DirectDensities:
    """Traces (phi, psi) and normal derivatives (eta, xi) of e and h."""

    phi0: np.ndarray
    psi0: np.ndarray
    phi1: np.ndarray
    psi1: np.ndarray
    eta0: np.ndarray
    eta1: np.ndarray
    xi0: np.ndarray
    xi1: np.ndarray


def solve_direct(curve, params: PhysicalParams, trace=None, _flip_interior_sign=False):
    """Solve the direct transmission problem for the scattered boundary traces.

    ``_flip_interior_sign`` deliberately mis-signs the interior jump
    relation; it exists so the validation suite can demonstrate that the
    circle oracle detects a wrong sign loudly.
    """
    if trace is None:
        trace = incident_trace(curve, params)
    nn = 2 * curve.n
    ident = np.eye(nn)
    ops0 = assemble_operator_set(curve, params.kappa0)
    ops1 = assemble_operator_set(curve, params.kappa1)
    k0map = dtn_matrix(ops0, exterior=True)
    k1map = dtn_matrix(ops1, exterior=_flip_interior_sign)
    l0map = tangential_trace_matrix(ops0, k0map)
    l1map = tangential_trace_matrix(ops1, k1map)
    s0 = ops0.single
    d0 = ops0.double

    coupling = s0 @ (params.beta1 * l1map + params.beta0 * l0map)
    a11 = d0 - 0.5 * ident - (params.eps_t1 / params.eps_t0) * (s0 @ k1map)
    a12 = -coupling / (params.eps_t0 * params.omega)
    a21 = coupling / (params.mu_t0 * params.omega)
    a22 = d0 - 0.5 * ident - (params.mu_t1 / params.mu_t0) * (s0 @ k1map)
    system = np.block([[a11, a12], [a21, a22]])

    k1e = k1map @ trace.values
    rhs = np.concatenate(
        (
            -s0 @ trace.normal_deriv + (params.eps_t1 / params.eps_t0) * (s0 @ k1e),
            -(s0 @ (params.beta0 * trace.tangential_deriv + params.beta1 * (l1map @ trace.values)))
            / (params.mu_t0 * params.omega),
        )
    )

    cond = np.linalg.cond(system)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise IrregularFrequencyError(
            f"direct system condition number {cond:.3e} exceeds {CONDITION_LIMIT:.0e}; "
            "the wavenumber is likely near an interior eigenvalue - perturb omega"
        )
    solution = np.linalg.solve(system, rhs)
    phi0, psi0 = solution[:nn], solution[nn:]
    phi1 = phi0 + trace.values
    psi1 = psi0
    return DirectDensities(
        phi0=phi0,
        psi0=psi0,
        phi1=phi1,
        psi1=psi1,
        eta0=k0map @ phi0,
        eta1=k1map @ phi1,
        xi0=k0map @ psi0,
        xi1=k1map @ psi1,
    )


@dataclass(frozen=True)
class FarFieldPattern:
    """Complex far-field samples (e_inf, h_inf) at angles on the unit circle."""

    obs_angles: np.ndarray
    e_inf: np.ndarray
    h_inf: np.ndarray


def far_field(curve, params: PhysicalParams, densities: DirectDensities, obs_angles):
    """Far-field pattern e = D_inf phi0 - S_inf eta0, h = D_inf psi0 - S_inf xi0."""
    s_inf, d_inf = farfield_matrices(curve, params.kappa0, obs_angles)
    return FarFieldPattern(
        obs_angles=np.atleast_1d(np.asarray(obs_angles, dtype=float)),
        e_inf=d_inf @ densities.phi0 - s_inf @ densities.eta0,
        h_inf=d_inf @ densities.psi0 - s_inf @ densities.xi0,
    )


def scattered_field(curve, params: PhysicalParams, densities: DirectDensities, points):
    """Evaluate (e_sc, h_sc) at exterior points well away from the boundary.

    Plain trapezoidal evaluation of the representation potentials; accuracy
    degrades within a few grid spacings of the curve.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    gap = points[:, None, :] - curve.z[None, :, :]
    dist = np.hypot(gap[:, :, 0], gap[:, :, 1])
    kr = params.kappa0 * dist
    weight = (np.pi / curve.n) * curve.jac
    single = 0.25j * hankel1(0, kr) * weight[None, :]
    ndoty = (gap[:, :, 0] * curve.normal[None, :, 0] + gap[:, :, 1] * curve.normal[None, :, 1]) / dist
    double = 0.25j * params.kappa0 * hankel1(1, kr) * ndoty * weight[None, :]
    e_sc = double @ densities.phi0 - single @ densities.eta0
    h_sc = double @ densities.psi0 - single @ densities.xi0
    return e_sc, h_sc


def add_noise(pattern: FarFieldPattern, delta1, delta2, seed):
    """Perturb the far field with complex Gaussian noise of exact relative size.

    The perturbation of each component is scaled so its Euclidean norm
    equals delta * ||component||_2 exactly; a fixed seed gives a fixed
    perturbation.  Both noise vectors are always drawn, so the same seed
    produces the same h-noise regardless of delta1.
    """
    if delta1 < 0 or delta2 < 0:
        raise ValueError("noise levels must be non-negative")
    rng = np.random.default_rng(seed)
    size = pattern.e_inf.size
    u = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    e_inf = pattern.e_inf.copy()
    h_inf = pattern.h_inf.copy()
    if delta1 > 0 and np.linalg.norm(e_inf) > 0:
        e_inf = e_inf + delta1 * (np.linalg.norm(e_inf) / np.linalg.norm(u)) * u
    if delta2 > 0 and np.linalg.norm(h_inf) > 0:
        h_inf = h_inf + delta2 * (np.linalg.norm(h_inf) / np.linalg.norm(v)) * v
    return FarFieldPattern(obs_angles=pattern.obs_angles.copy(), e_inf=e_inf, h_inf=h_inf)
