"""Material and illumination constants with their derived quantities.

A transverse-magnetic plane wave hits the cylinder at angle theta to the
(negative) axis, with polar angle phi in the cross-section plane.  The
axial dependence separates out and the cross-section problem sees the
transverse wavenumbers

    k0 = omega sqrt(mu0 eps0),  beta = k0 cos(theta),
    kappa0 = k0 sin(theta),     kappa1^2 = mu1 eps1 omega^2 - beta^2,

plus the rescaled constants beta_j = beta / kappa_j^2,
eps_tj = eps_j / kappa_j^2 and mu_tj = mu_j / kappa_j^2 that enter the
transmission conditions.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .errors import EvanescentInteriorError


@dataclass(frozen=True)
class PhysicalParams:
    eps0: float
    mu0: float
    eps1: float
    mu1: float
    omega: float
    theta: float
    phi: float = 0.0

    @property
    def k0(self):
        return self.omega * math.sqrt(self.mu0 * self.eps0)

    @property
    def beta(self):
        return self.k0 * math.cos(self.theta)

    @property
    def kappa0(self):
        return self.k0 * math.sin(self.theta)

    @property
    def kappa1(self):
        return math.sqrt(self.mu1 * self.eps1 * self.omega**2 - self.beta**2)

    def kappa(self, j):
        return self.kappa0 if j == 0 else self.kappa1

    @property
    def beta0(self):
        return self.beta / self.kappa0**2

    @property
    def beta1(self):
        return self.beta / self.kappa1**2

    @property
    def eps_t0(self):
        return self.eps0 / self.kappa0**2

    @property
    def eps_t1(self):
        return self.eps1 / self.kappa1**2

    @property
    def mu_t0(self):
        return self.mu0 / self.kappa0**2

    @property
    def mu_t1(self):
        return self.mu1 / self.kappa1**2


def derive_params(eps0, mu0, eps1, mu1, omega, theta, phi=0.0):
    """Validate raw constants and return a :class:`PhysicalParams`.

    theta = pi/2 (normal incidence) is accepted; the axial coupling then
    vanishes and the magnetic field decouples.
    """
    for name, value in (("eps0", eps0), ("mu0", mu0), ("eps1", eps1), ("mu1", mu1), ("omega", omega)):
        if value <= 0.0:
            raise ValueError(f"{name} must be positive")
    if not 0.0 < theta < math.pi:
        raise ValueError("incidence angle theta must lie in (0, pi)")
    if mu1 * eps1 <= mu0 * eps0 * math.cos(theta) ** 2:
        raise EvanescentInteriorError(
            "mu1*eps1 must exceed mu0*eps0*cos(theta)^2 for a propagating interior field"
        )
    return PhysicalParams(eps0, mu0, eps1, mu1, omega, theta, phi)


def with_incidence(params, phi):
    """The same physics illuminated from polar angle phi."""
    return dataclasses.replace(params, phi=float(phi))
