"""Exception hierarchy.

Numerical failures (quadrature, integration, singular parametrizations)
derive from :class:`NumericalError`; invariant violations while building a
no-transition Hamiltonian raise :class:`SynthesisError`. The CLI maps the two
families onto exit codes 2 and 3.
"""


class TwoLevelError(Exception):
    pass


class NormalizationError(TwoLevelError, ValueError):
    pass


class NumericalError(TwoLevelError):
    pass


class DegeneracyError(NumericalError):
    """Raised where Omega = |omega| = 0 and the eigenframe is undefined."""

    def __init__(self, t, message=None):
        self.t = t
        super().__init__(message or f"degenerate Hamiltonian (E+ = E- = 0) at t={t!r}")


class QuadratureError(NumericalError):
    def __init__(self, interval, error_estimate, message=None):
        self.interval = interval
        self.error_estimate = error_estimate
        super().__init__(
            message
            or f"quadrature did not reach tolerance on [{interval[0]:.6g}, {interval[1]:.6g}] "
            f"(error estimate {error_estimate:.3g})"
        )


class SingularityError(NumericalError):
    """Non-removable zero of a denominator (sin 2chi or x) at t* > 0."""

    def __init__(self, t_star, message=None):
        self.t_star = t_star
        super().__init__(message or f"non-removable singularity near t*={t_star:.6g}")


class GridTooCoarseError(NumericalError):
    def __init__(self, t, jump):
        self.t = t
        self.jump = jump
        super().__init__(f"angle jumps by {jump:.3g} rad near t={t:.6g}; refine the grid")


class IntegrationError(NumericalError):
    def __init__(self, interval, error_estimate):
        self.interval = interval
        self.error_estimate = error_estimate
        super().__init__(
            f"step-doubling control exhausted its halvings on "
            f"[{interval[0]:.6g}, {interval[1]:.6g}] (local error {error_estimate:.3g})"
        )


class SynthesisError(TwoLevelError):
    def __init__(self, message, t=None):
        self.t = t
        if t is not None:
            message = f"{message} (first at t={t:.6g})"
        super().__init__(message)
