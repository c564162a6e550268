"""Exception types raised by the solvers."""


class CylbieError(Exception):
    """Base class for all package-specific errors."""


class EvanescentInteriorError(CylbieError):
    """Interior transverse wavenumber squared is non-positive for the
    requested material contrast and incidence angle."""


class IrregularFrequencyError(CylbieError):
    """A boundary integral system became numerically singular, typically
    because the wavenumber sits near an interior eigenvalue."""


class SubsystemConditioningError(CylbieError):
    """The inverse-iteration density subsystem is too ill conditioned to
    solve reliably on the current curve."""


class CGConvergenceError(CylbieError):
    """Conjugate gradients failed to reach the requested residual."""

    def __init__(self, message, achieved_residual):
        super().__init__(message)
        self.achieved_residual = achieved_residual


class RadiusPositivityError(CylbieError):
    """A radial update could not be damped into the admissible (positive
    radius) set."""
