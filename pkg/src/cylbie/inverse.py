"""Two-step iterative shape reconstruction from far-field data.

The scattered fields are represented indirectly (single layers outside,
double layers inside), which turns the transmission conditions into a
well-posed 4n x 4n subsystem for the densities (zeta_e, xi_h, zeta_h,
xi_e) on the current boundary guess, and leaves one smooth (hence
ill-posed) far-field equation linking the boundary and the data.

Each iteration solves the subsystem, freezes the densities, linearises
the far-field map with respect to the radial function, and updates the
radius by a Tikhonov-regularised least-squares step over trigonometric
polynomials of fixed degree, with regularisation parameter
lambda_k = lambda_0 * decay^(k-1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .direct import FarFieldPattern, IncidentTrace, incident_trace
from .errors import CGConvergenceError, RadiusPositivityError, SubsystemConditioningError
from .geometry import TrigPolynomial, curve_from_radial, grid_nodes, trig_diff_matrix
from .operators import assemble_operator_set, farfield_amplitude, farfield_matrices
from .params import PhysicalParams, with_incidence

SUBSYSTEM_CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class InverseDensities:
    """Parametrised layer densities, packed in the unknown order of the subsystem."""

    zeta_e: np.ndarray
    xi_h: np.ndarray
    zeta_h: np.ndarray
    xi_e: np.ndarray

    @property
    def combined(self):
        return self.zeta_e + self.zeta_h


def assemble_subsystem(curve, params: PhysicalParams, trace: IncidentTrace):
    """Discretise the four boundary equations of the indirect formulation.

    Block structure (unknowns zeta_e, xi_h, zeta_h, xi_e):

        [ I - 2 NS0        0        c_m TS0      2 ND1   ] [zeta_e]   [ 2 eps_t0 dn e_inc        ]
        [     0        I - 2 D1   2 mu_r S0        0     ] [xi_h  ]   [ 0                        ]
        [ -c_e TS0      2 ND1     I - 2 NS0        0     ] [zeta_h] = [ (2/w)(b0 - b1) dtau e_inc]
        [ 2 eps_r S0       0          0        I - 2 D1  ] [xi_e  ]   [ -2 eps_t1 e_inc          ]

    with c_m = 2 (b0 - b1) / (w mu_t0), c_e = 2 (b0 - b1) / (w eps_t0),
    eps_r = eps_t1/eps_t0 and mu_r = mu_t1/mu_t0.
    """
    nn = 2 * curve.n
    ident = np.eye(nn)
    zero = np.zeros((nn, nn))
    ops0 = assemble_operator_set(curve, params.kappa0)
    ops1 = assemble_operator_set(curve, params.kappa1)
    beta_gap = params.beta0 - params.beta1
    c_m = 2.0 * beta_gap / (params.omega * params.mu_t0)
    c_e = 2.0 * beta_gap / (params.omega * params.eps_t0)
    a_ns = ident - 2.0 * ops0.adj_double
    a_d = ident - 2.0 * ops1.double
    system = np.block(
        [
            [a_ns, zero, c_m * ops0.tan_single, 2.0 * ops1.hyper],
            [zero, a_d, 2.0 * (params.mu_t1 / params.mu_t0) * ops0.single, zero],
            [-c_e * ops0.tan_single, 2.0 * ops1.hyper, a_ns, zero],
            [2.0 * (params.eps_t1 / params.eps_t0) * ops0.single, zero, zero, a_d],
        ]
    )
    rhs = np.concatenate(
        (
            2.0 * params.eps_t0 * trace.normal_deriv,
            np.zeros(nn),
            (2.0 / params.omega) * beta_gap * trace.tangential_deriv,
            -2.0 * params.eps_t1 * trace.values,
        )
    )
    return system, rhs


def solve_subsystem(system, rhs):
    """Dense solve of the assembled subsystem, with a conditioning guard."""
    cond = np.linalg.cond(system)
    if not np.isfinite(cond) or cond > SUBSYSTEM_CONDITION_LIMIT:
        raise SubsystemConditioningError(
            f"density subsystem condition number {cond:.3e} exceeds "
            f"{SUBSYSTEM_CONDITION_LIMIT:.0e} on the current curve"
        )
    solution = np.linalg.solve(system, rhs)
    nn = rhs.size // 4
    return InverseDensities(
        zeta_e=solution[:nn],
        xi_h=solution[nn : 2 * nn],
        zeta_h=solution[2 * nn : 3 * nn],
        xi_e=solution[3 * nn :],
    )


def combined_data(pattern: FarFieldPattern, params: PhysicalParams):
    """The data-side combination eps_t0 e_inf + mu_t0 h_inf of the far-field equation."""
    return params.eps_t0 * pattern.e_inf + params.mu_t0 * pattern.h_inf


def farfield_residual(curve, params: PhysicalParams, densities: InverseDensities, pattern: FarFieldPattern):
    """Residual of the far-field equation, F5 - S_inf (zeta_e + zeta_h), on the data grid."""
    s_inf, _ = farfield_matrices(curve, params.kappa0, pattern.obs_angles)
    return combined_data(pattern, params) - s_inf @ densities.combined


def frechet_sample_matrix(curve, params: PhysicalParams, zeta, obs_angles):
    """Linearisation of the far-field map with respect to the radial function.

    Returns the complex matrix mapping samples of the radial perturbation q
    on the curve grid to the perturbation of S_inf zeta at the observation
    angles.  The kernel splits into a multiplicative part (G1) and a part
    acting on q' (G2), with q' realised through the trigonometric
    differentiation matrix, so the result is G1 + G2 Q.
    """
    obs_angles = np.atleast_1d(np.asarray(obs_angles, dtype=float))
    xhat = np.stack((np.cos(obs_angles), np.sin(obs_angles)), axis=1)
    ct, st = np.cos(curve.t), np.sin(curve.t)
    ray = np.stack((ct, st), axis=1)
    ray_t = np.stack((-st, ct), axis=1)
    phase = np.exp(-1j * params.kappa0 * (xhat @ curve.z.T))
    weight = (np.pi / curve.n) * farfield_amplitude(params.kappa0) * phase * zeta[None, :]
    radial_term = -1j * params.kappa0 * (xhat @ ray.T) * curve.jac[None, :]
    swivel_term = ((curve.dz * ray_t).sum(axis=1) / curve.jac)[None, :]
    g1 = weight * (radial_term + swivel_term)
    g2 = weight * ((curve.dz * ray).sum(axis=1) / curve.jac)[None, :]
    return g1 + g2 @ trig_diff_matrix(curve.n)


def trig_basis_matrix(n, degree):
    """Evaluation matrix of the update basis (cos 0..m t, sin 1..m t) on the grid."""
    t = grid_nodes(n)
    k = np.arange(degree + 1)
    cos_block = np.cos(np.outer(t, k))
    sin_block = np.sin(np.outer(t, k[1:]))
    return np.concatenate((cos_block, sin_block), axis=1)


def frechet_matrix(curve, params: PhysicalParams, zeta, obs_angles, degree):
    """The design matrix A T acting on trigonometric update coefficients."""
    return frechet_sample_matrix(curve, params, zeta, obs_angles) @ trig_basis_matrix(
        curve.n, degree
    )


def sobolev_weights(degree, p):
    """Diagonal of the H^p penalty: (1 + k^2)^p per harmonic k (for both a_k and b_k)."""
    if p < 0:
        raise ValueError("Sobolev exponent must be >= 0")
    k = np.arange(degree + 1)
    w = (1.0 + k.astype(float) ** 2) ** p
    return np.concatenate((w, w[1:]))


def conjugate_gradient(matrix, rhs, tol=1e-10, max_iter=None):
    """Plain CG for a small SPD system; raises if the residual target is missed."""
    if max_iter is None:
        max_iter = rhs.size
    x = np.zeros_like(rhs)
    r = rhs - matrix @ x
    d = r.copy()
    rho = float(r @ r)
    scale = max(np.linalg.norm(rhs), 1e-300)
    for _ in range(max_iter):
        if np.sqrt(rho) / scale <= tol:
            return x
        ad = matrix @ d
        alpha = rho / float(d @ ad)
        x += alpha * d
        r -= alpha * ad
        rho_new = float(r @ r)
        d = r + (rho_new / rho) * d
        rho = rho_new
    achieved = np.sqrt(rho) / scale
    if achieved > tol:
        raise CGConvergenceError(
            f"conjugate gradients stalled at relative residual {achieved:.3e} "
            f"(target {tol:.1e})",
            achieved,
        )
    return x


def tikhonov_step(design, rhs, degree, lam, p, cg_tol=1e-10):
    """Solve the regularised real normal equations for the update coefficients.

    ``design`` is the complex stacked matrix A T, ``rhs`` the stacked complex
    residual b.  Since the update is real valued, the normal equations use
    Re/Im parts separately:  (G + lam I_p) x = g with
    G = Re(AT)^T Re(AT) + Im(AT)^T Im(AT).
    """
    if lam <= 0:
        raise ValueError("regularisation parameter must be positive")
    re_a, im_a = design.real, design.imag
    gram = re_a.T @ re_a + im_a.T @ im_a
    grad = re_a.T @ rhs.real + im_a.T @ rhs.imag
    gram = gram + lam * np.diag(sobolev_weights(degree, p))
    x = conjugate_gradient(gram, grad, tol=cg_tol, max_iter=4 * (2 * degree + 1))
    return TrigPolynomial.from_coefficient_vector(x, degree)


@dataclass(frozen=True)
class RegularizationConfig:
    """Knobs of the regularised update step."""

    degree: int = 3
    sobolev_p: float = 0.0
    lambda0: float = 0.65
    decay: float = 2.0 / 3.0
    max_iter: int = 15
    stop_tol: float = 1e-4

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("update degree must be >= 1")
        if self.lambda0 <= 0:
            raise ValueError("lambda0 must be positive")
        if not 0.0 < self.decay < 1.0:
            raise ValueError("decay must lie in (0, 1)")


@dataclass(frozen=True)
class IlluminationSet:
    """Far-field data for one or more incident directions."""

    params: PhysicalParams
    phis: tuple
    patterns: tuple

    def __post_init__(self):
        if len(self.phis) != len(self.patterns) or not self.phis:
            raise ValueError("need one pattern per incident direction")
        grids = {p.obs_angles.shape for p in self.patterns}
        if len(grids) != 1:
            raise ValueError("all patterns must share one observation grid")

    def __len__(self):
        return len(self.phis)


def illumination_angles(count, offset=0.0):
    """Polar angles 2 pi l / L (l = 1..L), shifted by ``offset`` grid fractions."""
    if count < 1:
        raise ValueError("need at least one illumination")
    return tuple((2.0 * np.pi * (l + offset) / count) % (2.0 * np.pi) for l in range(1, count + 1))


@dataclass
class IterationRecord:
    k: int
    radial: TrigPolynomial
    lambda_k: float
    misfit: float
    update_norm: float
    halvings: int = 0


@dataclass
class ReconstructionState:
    """Accepted iterates plus the densities of the final subsystem solve."""

    records: list = field(default_factory=list)
    densities: list = field(default_factory=list)
    converged: bool = False

    @property
    def final_radial(self):
        return self.records[-1].radial

    @property
    def misfit_history(self):
        return [rec.misfit for rec in self.records]


def _as_radial_polynomial(r0, degree):
    if isinstance(r0, TrigPolynomial):
        return r0.padded(max(degree, r0.degree))
    return TrigPolynomial.constant(float(r0)).padded(degree)


def _admissible_update(radial, update, t_fine, max_halvings=10):
    """Halve the update until the radius stays positive; purely a safeguard,
    converged iterations are never clipped."""
    halvings = 0
    while np.min((radial + update)(t_fine)) <= 0.0:
        if halvings >= max_halvings:
            raise RadiusPositivityError(
                "radial update keeps the radius non-positive even after "
                f"{max_halvings} halvings"
            )
        update = update.scaled(0.5)
        halvings += 1
    return update, halvings


def reconstruct(data: IlluminationSet, config: RegularizationConfig, r0, variant="combined", n=32):
    """Run the regularised two-step iteration and return its state history.

    ``variant`` selects how the linearised far-field rows are stacked:

    * ``combined`` / ``multi``: one row block per illumination, densities
      combined as zeta_e + zeta_h against eps_t0 e_inf + mu_t0 h_inf;
    * ``stacked_eh``: two row blocks per illumination, keeping the electric
      and magnetic far-field equations separate (overdetermined variant).
    """
    if variant not in ("combined", "multi", "stacked_eh"):
        raise ValueError(f"unknown variant {variant!r}")
    radial = _as_radial_polynomial(r0, config.degree)
    t_fine = grid_nodes(8 * n)
    state = ReconstructionState()
    for k in range(1, config.max_iter + 1):
        lam = config.lambda0 * config.decay ** (k - 1)
        curve = curve_from_radial(radial, n)
        s_inf, _ = farfield_matrices(curve, data.params.kappa0, data.patterns[0].obs_angles)
        rows = []
        rhs = []
        densities = []
        for phi, pattern in zip(data.phis, data.patterns):
            params_l = with_incidence(data.params, phi)
            trace = incident_trace(curve, params_l)
            dens = solve_subsystem(*assemble_subsystem(curve, params_l, trace))
            densities.append(dens)
            if variant == "stacked_eh":
                for zeta, target in (
                    (dens.zeta_e, data.params.eps_t0 * pattern.e_inf),
                    (dens.zeta_h, data.params.mu_t0 * pattern.h_inf),
                ):
                    rows.append(frechet_sample_matrix(curve, params_l, zeta, pattern.obs_angles))
                    rhs.append(target - s_inf @ zeta)
            else:
                zeta = dens.combined
                rows.append(frechet_sample_matrix(curve, params_l, zeta, pattern.obs_angles))
                rhs.append(combined_data(pattern, data.params) - s_inf @ zeta)
        design = np.vstack(rows) @ trig_basis_matrix(n, config.degree)
        residual = np.concatenate(rhs)
        update = tikhonov_step(design, residual, config.degree, lam, config.sobolev_p)
        update, halvings = _admissible_update(radial, update, t_fine)
        radial = radial + update
        update_norm = np.linalg.norm(update(t_fine)) / np.sqrt(t_fine.size)
        radial_norm = np.linalg.norm(radial(t_fine)) / np.sqrt(t_fine.size)
        state.records.append(
            IterationRecord(
                k=k,
                radial=radial,
                lambda_k=lam,
                misfit=float(np.linalg.norm(residual)),
                update_norm=float(update_norm),
                halvings=halvings,
            )
        )
        state.densities = densities
        if update_norm < config.stop_tol * radial_norm:
            state.converged = True
            break
    return state


def radial_error(radial, truth, n_fine=512):
    """(relative L2, sup) distance between a reconstructed radial and the truth."""
    t = grid_nodes(n_fine)
    rec = radial(t)
    ref = np.asarray(truth(t), dtype=float)
    l2 = np.linalg.norm(rec - ref) / np.linalg.norm(ref)
    return float(l2), float(np.max(np.abs(rec - ref)))
