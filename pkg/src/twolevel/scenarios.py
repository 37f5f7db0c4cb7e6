"""Built-in scenario families.

* ``sine_scenario``: x = sin(alpha t), y = nu0 sin(alpha t) with alpha T = pi/2.
  The field starts almost longitudinal (Omega(0) = hbar nu0, |omega(0)| = hbar alpha)
  and ends almost transverse.
* no-transition Hamiltonians: fields built so that the state prepared in |+>_0
  stays in |+>_t up to terms in the rate of change of the mixing angle.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import SynthesisError
from .evolution import parametrized_trajectory, transition_amplitude_formula, transition_amplitude_general
from .hamiltonian import as_function, derivative, eigenframe_at, tabulated_trajectory
from .oracle import IntegratorConfig, integrate
from .parametrization import SlowParametrization, from_slow_params
from .quadrature import cumulative_simpson

DEFAULT_SAMPLES = 4096


@dataclass
class ScenarioSpec:
    nu0: float
    T: float
    phi_omega: Callable = 0.0
    phi_omega_dot: Optional[Callable] = None
    samples: int = DEFAULT_SAMPLES
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.nu0 > 0 and self.T > 0):
            raise ValueError("nu0 and T must be positive")
        if self.samples < 4:
            raise ValueError("need at least 4 samples")

    @classmethod
    def from_product(cls, nu0T, nu0=1.0, **kwargs):
        """Scenario with the dimensionless product nu0*T fixed (time in units of 1/nu0)."""
        return cls(nu0=nu0, T=nu0T / nu0, **kwargs)

    @property
    def alpha(self):
        return math.pi / (2.0 * self.T)

    @property
    def nu0T(self):
        return self.nu0 * self.T

    def grid(self):
        return np.linspace(0.0, self.T, self.samples)

    def integrator_config(self, **kwargs):
        return IntegratorConfig.for_frequencies(self.nu0, self.alpha, **kwargs)


def sine_slow_params(spec):
    a, nu0 = spec.alpha, spec.nu0
    return SlowParametrization(
        x=lambda t: np.sin(a * t),
        y=lambda t: nu0 * np.sin(a * t),
        x_dot=lambda t: a * np.cos(a * t),
        y_dot=lambda t: nu0 * a * np.cos(a * t),
        x_ddot=lambda t: -a * a * np.sin(a * t),
        phi_omega=spec.phi_omega,
        phi_omega_dot=spec.phi_omega_dot,
    )


def sine_phibar(spec, t):
    """Closed form nu0 (6 alpha t - sin(2 alpha t)) / (4 alpha)."""
    a = spec.alpha
    t = np.asarray(t, dtype=float)
    return spec.nu0 * (6 * a * t - np.sin(2 * a * t)) / (4 * a)


@dataclass
class ScenarioBundle:
    spec: ScenarioSpec
    slow: SlowParametrization
    hamiltonian: object
    state: object
    propagator: object
    frames: object
    amplitude: np.ndarray
    Omega: np.ndarray
    omega_abs: np.ndarray

    @property
    def t(self):
        return self.state.t

    @property
    def probability(self):
        return np.abs(self.amplitude) ** 2

    @property
    def amplitude_matrix_element(self):
        return transition_amplitude_general(self.propagator, self.frames, self.frames[0])

    def endpoint_fields(self):
        """Closed-form endpoint values next to the sampled ones."""
        s, hb = self.spec, self.spec.hbar
        pw_dot_T = float(derivative(self.slow.phi_omega, np.array(s.T), self.slow.phi_omega_dot))
        return {
            "omega_abs_0": (float(self.omega_abs[0]), hb * s.alpha),
            "Omega_0": (float(self.Omega[0]), hb * s.nu0),
            "omega_abs_T": (float(self.omega_abs[-1]), hb * s.nu0),
            "Omega_T": (float(self.Omega[-1]), 0.5 * hb * (s.alpha**2 / (2 * s.nu0) - pw_dot_T)),
        }


def sine_scenario(spec):
    slow = sine_slow_params(spec)
    h, state = from_slow_params(slow, spec.grid(), hbar=spec.hbar)
    frames = eigenframe_at(h, state.t)
    Om, w, _ = h.fields(state.t)
    amp = transition_amplitude_formula(state, frames.theta, frames.theta[0])
    return ScenarioBundle(
        spec=spec,
        slow=slow,
        hamiltonian=h,
        state=state,
        propagator=parametrized_trajectory(state),
        frames=frames,
        amplitude=amp,
        Omega=Om,
        omega_abs=w,
    )


# --- no-transition Hamiltonians -------------------------------------------------


@dataclass
class NoTransitionSpec:
    """Inputs for the no-transition field family.

    ``x`` with ``x(0) = 0`` and its rate ``x_dot``; ``theta`` is the target
    mixing angle with ``theta(0) = theta0``; ``phi_omega`` is a constant phase
    (its rate is neglected by construction). ``x_dot`` is the rate at frozen
    c, i.e. without the contribution of d theta/dt.
    """

    x: Callable
    x_dot: Callable
    theta: Callable
    theta0: float
    phi_omega: float = 0.0
    T: Optional[float] = None

    def c(self, t):
        """c = (cos(theta)/cos(theta0) - 1)/2, so 1 + 2c = cos(theta)/cos(theta0)."""
        return 0.5 * (np.cos(self.theta(t)) / math.cos(self.theta0) - 1.0)


def _following_x(theta, theta0, zeta):
    # tan(chi) of the propagator that carries |+>_0 onto |+>_t with dynamical phase zeta
    s2 = 0.5 * (1 - np.cos(theta) * math.cos(theta0) - np.sin(theta) * math.sin(theta0) * np.cos(2 * zeta))
    s2 = np.clip(s2, 0.0, None)
    return np.sqrt(s2 / (1.0 - s2))


def _following_cos_phibar(theta, theta0, zeta):
    A = math.sin(theta0) * np.cos(theta) - math.cos(theta0) * np.sin(theta) * np.cos(2 * zeta)
    B = np.sin(theta) * np.sin(2 * zeta)
    r = np.hypot(A, B)
    return np.where(r > 0, B / np.where(r > 0, r, 1.0), 1.0)


def following_family(theta0, delta, T, nu=1.0, phi_omega=0.0):
    """No-transition inputs for theta(t) = theta0 + delta sin^2(pi t / 2T) at energy hbar*nu.

    x(t) is tan(chi) of the exactly adiabatic propagator with dynamical phase
    nu*t; its frozen-c rate is nu sin(theta0) (1 + x^2) cos(phibar). With
    ``delta = 0`` the signed branch is used so x can pass through zero.
    """
    if delta == 0:
        return trivial_family(theta0, nu=nu, T=T, phi_omega=phi_omega)

    def theta(t):
        return theta0 + delta * np.sin(np.pi * np.asarray(t) / (2 * T)) ** 2

    def x(t):
        return _following_x(theta(t), theta0, nu * np.asarray(t))

    def x_dot(t):
        th = theta(t)
        z = nu * np.asarray(t)
        xx = _following_x(th, theta0, z)
        return nu * math.sin(theta0) * (1 + xx * xx) * _following_cos_phibar(th, theta0, z)

    return NoTransitionSpec(x=x, x_dot=x_dot, theta=theta, theta0=theta0, phi_omega=phi_omega, T=T)


def trivial_family(theta0, nu=1.0, T=None, phi_omega=0.0):
    """c = 0: sin(phibar) = x / tan(theta0), x = tan(theta0) sin(phibar)."""
    st = math.sin(theta0)

    def x(t):
        s = np.sin(nu * np.asarray(t))
        return st * s / np.sqrt(1 - (st * s) ** 2)

    def x_dot(t):
        z = nu * np.asarray(t)
        s = np.sin(z)
        return nu * st * np.cos(z) / (1 - (st * s) ** 2) ** 1.5

    return NoTransitionSpec(
        x=x, x_dot=x_dot, theta=lambda t: np.full(np.shape(t), float(theta0)), theta0=theta0, phi_omega=phi_omega, T=T
    )


@dataclass
class SynthesisResult:
    hamiltonian: object
    t: np.ndarray
    x: np.ndarray
    c: np.ndarray
    phibar: np.ndarray
    zeta: np.ndarray
    Omega: np.ndarray
    omega_abs: np.ndarray
    zeta_residual: float
    zeta_mask: np.ndarray = field(repr=False, default=None)


# |cos phibar| below this: x' / cos(phibar) is an ill-conditioned 0/0 (cos from
# sin loses digits like 1/cos^2) and is bridged by a spline through the rest
TURNING_TOL = 1e-5
SIN_SLACK = 1e-10


def zeta_phibar(theta, theta0, zeta):
    """phibar (mod pi) from the integrated-energy relation

    tan(phibar) = cos(theta0)/sin(2 zeta) * (tan(theta0)/tan(theta) - cos(2 zeta)).
    """
    num = math.cos(theta0) * (math.tan(theta0) / np.tan(theta) - np.cos(2 * zeta))
    return np.arctan2(num, np.sin(2 * zeta))


def _wrap_pi(a):
    return (a + 0.5 * np.pi) % np.pi - 0.5 * np.pi


def synthesize_no_transition(spec, grid, hbar=1.0):
    """Sample Omega and |omega| of the no-transition family on ``grid``.

        sin(phibar) = x/tan(theta0) (1 + c (1 + x^2)/x^2)
        Omega   = hbar x' (1 + 2c) / ((1 + x^2) cos(phibar) tan(theta0))
        |omega| = hbar x' sqrt(1 - 4c(1+c)/tan^2(theta0)) / ((1 + x^2) cos(phibar))

    The branch of phibar follows the sign of x' (so |omega| >= 0) and is
    unwrapped; near x = 0 it can legitimately swing by pi between samples,
    while x'/cos(phibar) itself stays smooth. The returned trajectory is a cubic spline through the samples.
    """
    grid = np.asarray(grid, dtype=float)
    theta0 = float(spec.theta0)
    if abs(math.sin(theta0)) < 1e-12:
        raise SynthesisError("theta0 = 0 is the exceptional case and is not synthesized")
    if abs(math.cos(theta0)) < 1e-12:
        raise SynthesisError("theta0 = pi/2 leaves c undefined")
    tan0 = math.tan(theta0)

    x = np.asarray(spec.x(grid), dtype=float)
    xd = np.asarray(spec.x_dot(grid), dtype=float)
    c = spec.c(grid)
    if abs(x[0]) > 1e-12 or abs(c[0]) > 1e-12:
        raise SynthesisError("need x(0) = 0 and theta(0) = theta0")

    with np.errstate(divide="ignore", invalid="ignore"):
        corr = np.where(c == 0, 0.0, c * (1 + x * x) / x)
    sin_pb = (x + corr) / tan0
    bad = ~np.isfinite(sin_pb) | (np.abs(sin_pb) > 1 + SIN_SLACK)
    if np.any(bad):
        raise SynthesisError("|sin(phibar)| > 1", float(grid[bad][0]))
    sin_pb = np.clip(sin_pb, -1.0, 1.0)

    radicand = 1 - 4 * c * (1 + c) / tan0**2
    if np.any(radicand < -SIN_SLACK):
        raise SynthesisError("negative radicand 1 - 4c(1+c)/tan^2(theta0)", float(grid[radicand < -SIN_SLACK][0]))
    radicand = np.clip(radicand, 0.0, None)

    cos_abs = np.sqrt((1 - sin_pb) * (1 + sin_pb))
    sign = np.where(xd == 0, 0.0, np.sign(xd))
    # pick the branch whose cosine carries the sign of x'
    base = np.where(sign >= 0, np.arcsin(sin_pb), np.pi - np.arcsin(sin_pb))
    phibar = np.unwrap(base)
    cos_pb = sign * cos_abs

    turning = cos_abs < TURNING_TOL
    turning[0] = False
    ratio = np.empty_like(x)
    ok = ~turning
    ratio[ok] = xd[ok] / np.where(cos_pb[ok] == 0, 1.0, cos_pb[ok])
    if np.any(turning):
        ratio[turning] = CubicSpline(grid[ok], ratio[ok])(grid[turning])

    Om = hbar * ratio * (1 + 2 * c) / ((1 + x * x) * tan0)
    w = hbar * ratio * np.sqrt(radicand) / (1 + x * x)
    h = tabulated_trajectory(grid, Om, w, np.full_like(grid, float(spec.phi_omega)), hbar=hbar)

    zeta = cumulative_simpson(lambda t: np.hypot(h.Omega(t), h.omega_abs(t)) / hbar, grid, tol=1e-10)
    theta = np.asarray(spec.theta(grid), dtype=float)
    mask = (zeta > 0.1) & (np.abs(2 * x / (1 + x * x)) > 1e-6)
    resid = _wrap_pi(phibar - zeta_phibar(theta, theta0, zeta))
    zres = float(np.max(np.abs(resid[mask]))) if np.any(mask) else 0.0
    return SynthesisResult(
        hamiltonian=h,
        t=grid,
        x=x,
        c=c,
        phibar=phibar,
        zeta=zeta,
        Omega=Om,
        omega_abs=w,
        zeta_residual=zres,
        zeta_mask=mask,
    )


NO_TRANSITION_BOUND = 1e-2


@dataclass
class NoTransitionReport:
    t: np.ndarray
    amplitude: np.ndarray
    max_amplitude: float
    argmax_t: float
    unitarity_drift: float
    bound: float = NO_TRANSITION_BOUND

    @property
    def passed(self):
        return self.max_amplitude <= self.bound


def verify_no_transition(h, grid, cfg=None, bound=NO_TRANSITION_BOUND):
    """Max over the grid of |<-|_t U(t) |+>_0| with U from the oracle integrator."""
    grid = np.asarray(grid, dtype=float)
    traj = integrate(h, cfg=cfg, samples=grid)
    frames = eigenframe_at(h, grid)
    amp = transition_amplitude_general(traj.u, frames, frames[0])
    i = int(np.argmax(np.abs(amp)))
    return NoTransitionReport(
        t=grid,
        amplitude=amp,
        max_amplitude=float(np.abs(amp[i])),
        argmax_t=float(grid[i]),
        unitarity_drift=traj.unitarity_drift,
        bound=bound,
    )


def no_transition_ladder(theta0, delta, Ts, nu=1.0, samples=DEFAULT_SAMPLES, cfg=None):
    """Synthesize and verify the following family for each duration in ``Ts``."""
    rows = []
    for T in Ts:
        spec = following_family(theta0, delta, T, nu=nu)
        grid = np.linspace(0.0, T, samples)
        syn = synthesize_no_transition(spec, grid)
        rep = verify_no_transition(syn.hamiltonian, grid, cfg=cfg or IntegratorConfig.for_frequencies(nu))
        rows.append((T, syn, rep))
    return rows
