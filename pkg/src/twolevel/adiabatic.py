"""Small-epsilon estimates for slow (x, y) trajectories.

epsilon = atan2(x'/(1+x^2), y) is the angle by which Theta falls short of
pi/2. Away from the initial transient it is small and the transition
amplitude reduces to three terms, each first order in the slow rates:

    A ~ p e^{i(pi/4 - phibar/2)} - q e^{i(pi/4 + phibar/2)} + r e^{-i(pi/4 + phibar/2)}

    p = x x' / (y (1+x^2)^2),  q = x'(0)^2 / (2 y'(0)),  r = x^2 phi_omega' / (y (1+x^2)^2)

Terms in d(epsilon)/dt are dropped, as in the derivation.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularityError, TwoLevelError
from .hamiltonian import h_dot_matrix_element
from .parametrization import SINGULAR_WINDOW

TRANSIENT_EPSILON = 0.1


def epsilon_at(s, t):
    """epsilon(t) = atan2(x'/(1+x^2), y) for a :class:`SlowParametrization`."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(s.x(t), dtype=float)
    y = np.asarray(s.y(t), dtype=float)
    both = (np.abs(x) < SINGULAR_WINDOW) & (np.abs(y) < SINGULAR_WINDOW) & (t > 0)
    if np.any(both):
        raise SingularityError(float(np.atleast_1d(t)[np.atleast_1d(both)][0]), "x = y = 0: epsilon undefined")
    return np.arctan2(s.xd(t) / (1 + x * x), y)


def _terms(s, t):
    t = np.asarray(t, dtype=float)
    zero = np.array(0.0)
    yd0 = float(s.yd(zero))
    if yd0 == 0.0:
        raise TwoLevelError("y'(0) = 0: the theta0 term of the approximate amplitude is undefined")
    x = np.asarray(s.x(t), dtype=float)
    y = np.asarray(s.y(t), dtype=float)
    if np.any(y <= 0):
        raise ValueError("approximate amplitude needs y(t) > 0")
    xd = s.xd(t)
    d = y * (1 + x * x) ** 2
    p = x * xd / d
    q = float(s.xd(zero)) ** 2 / (2 * yd0)
    r = x * x * s.phi_omega_rate(t) / d
    return p, q, r


def approx_amplitude(s, phibar, t):
    p, q, r = _terms(s, t)
    ph = np.asarray(phibar, dtype=float)
    return (
        p * np.exp(1j * (0.25 * np.pi - 0.5 * ph))
        - q * np.exp(1j * (0.25 * np.pi + 0.5 * ph))
        + r * np.exp(-1j * (0.25 * np.pi + 0.5 * ph))
    )


def approx_probability(s, phibar, t):
    """p^2 + q^2 + r^2 + 2 q (r sin(phibar) - p cos(phibar))."""
    p, q, r = _terms(s, t)
    ph = np.asarray(phibar, dtype=float)
    return p * p + q * q + r * r + 2 * q * (r * np.sin(ph) - p * np.cos(ph))


def tan_theta0_estimate(s):
    """-x'(0) / (eps'(0) + phi_omega'(0)/2) with eps'(0) ~ -y'(0)/x'(0)."""
    zero = np.array(0.0)
    xd0 = float(s.xd(zero))
    eps_d0 = -float(s.yd(zero)) / xd0
    return -xd0 / (eps_d0 + 0.5 * float(s.phi_omega_rate(zero)))


@dataclass
class AdiabaticEstimate:
    """Per-sample estimates. Inside the transient the approximate columns are nan."""

    t: np.ndarray
    epsilon: np.ndarray
    amp_approx: np.ndarray
    prob_approx: np.ndarray
    amp_exact: np.ndarray
    standard_criterion: np.ndarray
    in_transient: np.ndarray

    @property
    def prob_exact(self):
        return np.abs(self.amp_exact) ** 2

    def error(self):
        return np.abs(self.amp_exact - self.amp_approx)


def estimate(bundle):
    """Approximate vs exact amplitude along a scenario bundle."""
    s, t = bundle.slow, bundle.t
    eps = epsilon_at(s, t)
    transient = eps > TRANSIENT_EPSILON
    ok = ~transient
    amp = np.full(t.shape, complex(np.nan, np.nan))
    prob = np.full(t.shape, np.nan)
    amp[ok] = approx_amplitude(s, bundle.state.phibar[ok], t[ok])
    prob[ok] = approx_probability(s, bundle.state.phibar[ok], t[ok])
    crit = h_dot_matrix_element(bundle.hamiltonian, t)
    return AdiabaticEstimate(
        t=t,
        epsilon=eps,
        amp_approx=amp,
        prob_approx=prob,
        amp_exact=bundle.amplitude,
        standard_criterion=crit,
        in_transient=transient,
    )


@dataclass
class AdiabaticityReport:
    nu0T: float
    alpha_over_nu0: float
    max_phi_omega_rate_over_nu0: float
    max_standard_criterion: float
    max_probability: float


def adiabaticity_report(spec, bundle=None):
    """Dimensionless adiabaticity measures of a sine scenario."""
    from .scenarios import sine_scenario

    bundle = bundle or sine_scenario(spec)
    t = bundle.t
    rate = np.abs(bundle.slow.phi_omega_rate(t))
    crit = h_dot_matrix_element(bundle.hamiltonian, t)
    return AdiabaticityReport(
        nu0T=spec.nu0T,
        alpha_over_nu0=math.pi / (2 * spec.T * spec.nu0),
        max_phi_omega_rate_over_nu0=float(np.max(rate)) / spec.nu0,
        max_standard_criterion=float(np.max(crit)),
        max_probability=float(np.max(bundle.probability)),
    )
