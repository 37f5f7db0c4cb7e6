"""Closed-form parametrization of the two-level propagator.

Given |omega|(t), phi_omega(t) and a free angle Theta(t) with Theta(0) = 0,

    chi(t) = int_0^t |omega|/hbar cos(Theta)
    phi(t) = int_0^t 2|omega|/hbar sin(Theta)/sin(2 chi) + phi_omega(0)
    Omega  = hbar/2 (dTheta/dt - dphi_omega/dt) + |omega| sin(Theta) cot(2 chi)

make U = [[a, b], [-b*, a*]] with
a = cos(chi) exp(-i/2 (Theta - phi_omega + phi)),
b = -i sin(chi) exp(-i/2 (Theta - phi_omega - phi))
the exact propagator. The same family is reachable through the slow
variables x = tan(chi), y = |omega| sin(Theta) / hbar.
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import GridTooCoarseError, SingularityError
from .hamiltonian import HamiltonianTrajectory, as_function, derivative
from .quadrature import CumulativeIntegral, cumulative_simpson

# below this |sin 2chi| the 0/0 ratios are replaced by their L'Hopital limits
SINGULAR_WINDOW = 1e-8
# a numerator this large at a vanishing denominator is a genuine pole
POLE_NUMERATOR = 1e-4
DEFAULT_TOL = 1e-10


@dataclass
class ParametrizationState:
    """Parametrization angles sampled on ``t`` (``t[0] == 0``)."""

    t: np.ndarray
    chi: np.ndarray
    Theta: np.ndarray
    phi: np.ndarray
    phi_omega: np.ndarray
    hbar: float = 1.0

    @property
    def phi_omega0(self):
        return float(self.phi_omega[0])

    @property
    def phibar(self):
        return self.phi - self.phi_omega0

    @property
    def phi_plus(self):
        return 0.5 * (self.Theta + self.phibar)

    @property
    def phi_minus(self):
        return 0.5 * (self.Theta - self.phibar)

    def axis_angle(self):
        """Rotation angle Phi and unit axis n of the compact form.

        cos(Phi) = cos(chi) cos(phi_+) and
        sin(Phi) n = (sin chi cos phi_-, sin chi sin phi_-, cos chi sin phi_+).
        Where sin(Phi) = 0 the axis is undefined and returned as (0, 0, 1).
        """
        c, s = np.cos(self.chi), np.sin(self.chi)
        v = np.stack(
            [s * np.cos(self.phi_minus), s * np.sin(self.phi_minus), c * np.sin(self.phi_plus)], axis=-1
        )
        vnorm = np.linalg.norm(v, axis=-1)
        Phi = np.arctan2(vnorm, c * np.cos(self.phi_plus))
        n = np.empty_like(v)
        ok = vnorm > 0
        n[ok] = v[ok] / vnorm[ok, None]
        n[~ok] = (0.0, 0.0, 1.0)
        return Phi, n

    @property
    def Phi(self):
        return self.axis_angle()[0]

    @property
    def n(self):
        return self.axis_angle()[1]

    def __len__(self):
        return len(self.t)


@dataclass
class SlowParametrization:
    """x(t) = tan chi and y(t) = |omega| sin(Theta)/hbar, both vanishing at t = 0.

    Missing derivatives fall back to central differences.
    """

    x: Callable
    y: Callable
    x_dot: Optional[Callable] = None
    y_dot: Optional[Callable] = None
    x_ddot: Optional[Callable] = None
    phi_omega: Callable = 0.0
    phi_omega_dot: Optional[Callable] = None

    def __post_init__(self):
        if not callable(self.phi_omega) and self.phi_omega_dot is None:
            self.phi_omega_dot = 0.0
        self.phi_omega = as_function(self.phi_omega)
        self.phi_omega_dot = as_function(self.phi_omega_dot)

    def xd(self, t):
        return derivative(self.x, t, self.x_dot)

    def yd(self, t):
        return derivative(self.y, t, self.y_dot)

    def xdd(self, t):
        return derivative(self.xd, t, self.x_ddot)

    def phi_omega_rate(self, t):
        return derivative(self.phi_omega, t, self.phi_omega_dot)


def _check_poles(t, denom, numer, what):
    """Reject sign changes / zeros of ``denom`` at t > 0 where ``numer`` stays finite."""
    t = np.asarray(t)
    near = (np.abs(denom) < SINGULAR_WINDOW) & (np.abs(numer) > POLE_NUMERATOR)
    near[0] = False
    if np.any(near):
        raise SingularityError(float(t[near][0]), f"{what} vanishes with non-zero numerator")
    sd = np.sign(denom)
    flips = np.nonzero((sd[1:-1] * sd[2:] < 0))[0] + 1
    for i in flips:
        if np.sign(numer[i]) == np.sign(numer[i + 1]) and max(abs(numer[i]), abs(numer[i + 1])) > POLE_NUMERATOR:
            frac = denom[i] / (denom[i] - denom[i + 1])
            raise SingularityError(
                float(t[i] + frac * (t[i + 1] - t[i])), f"{what} changes sign with non-zero numerator"
            )


def _unwrap_checked(t, angle, period):
    out = np.unwrap(angle, period=period)
    jumps = np.abs(np.diff(out))
    if jumps.size and jumps.max() > np.pi / 2:
        i = int(np.argmax(jumps))
        raise GridTooCoarseError(float(t[i]), float(jumps[i]))
    return out


def _sin_ratio(sin_theta, sin2chi, limit, t):
    """sin(Theta)/sin(2chi) with the joint zero replaced by ``limit``."""
    small = np.abs(sin2chi) < SINGULAR_WINDOW
    if np.any(small & (np.abs(sin_theta) > POLE_NUMERATOR)):
        bad = np.asarray(t)[small & (np.abs(sin_theta) > POLE_NUMERATOR)]
        raise SingularityError(float(np.ravel(bad)[0]))
    safe = np.where(small, 1.0, sin2chi)
    return np.where(small, limit, sin_theta / safe)


def compute_chi(h, Theta, grid, tol=DEFAULT_TOL):
    """chi on ``grid`` by cumulative quadrature of |omega| cos(Theta) / hbar."""
    grid = np.asarray(grid, dtype=float)
    if grid[0] != 0.0:
        raise ValueError("grid must start at t = 0")
    if abs(float(Theta(np.array(0.0)))) > 1e-12:
        raise ValueError("Theta(0) must vanish")

    def integrand(t):
        return np.asarray(h.omega_abs(t)) * np.cos(Theta(t)) / h.hbar

    return cumulative_simpson(integrand, grid, tol=tol)


def _chi_function(h, Theta, grid, chi):
    if callable(chi):
        return chi

    def integrand(t):
        return np.asarray(h.omega_abs(t)) * np.cos(Theta(t)) / h.hbar

    return CumulativeIntegral(integrand, grid, values=chi)


def compute_phi(h, Theta, chi, grid, Theta_dot=None, tol=DEFAULT_TOL):
    """phi on ``grid``; ``chi`` is either its grid samples or a callable.

    Near t = 0 both sin(Theta) and sin(2 chi) vanish; there the integrand is
    replaced by its limit dTheta/dt / cos(2 chi) (-> dTheta/dt(0)).
    """
    grid = np.asarray(grid, dtype=float)
    chi_fn = _chi_function(h, Theta, grid, chi)
    hbar = h.hbar

    chi_s = chi_fn(grid) if callable(chi) else np.asarray(chi)
    _check_poles(grid, np.sin(2 * chi_s), np.sin(Theta(grid)), "sin(2 chi)")

    def integrand(t):
        ch = chi_fn(t)
        th = Theta(t)
        limit = derivative(Theta, t, Theta_dot) / np.cos(2 * ch)
        ratio = _sin_ratio(np.sin(th), np.sin(2 * ch), limit, t)
        return 2.0 * np.asarray(h.omega_abs(t)) / hbar * ratio

    phi0 = float(h.phi_omega(np.array(0.0)))
    return cumulative_simpson(integrand, grid, tol=tol) + phi0


def synthesize_omega(t, omega_abs, Theta, chi, phi_omega=0.0, Theta_dot=None, phi_omega_dot=None, hbar=1.0):
    """Longitudinal field that makes the (Theta, chi, phi) propagator exact.

    ``chi`` is a callable or samples aligned with ``t``.
    """
    t = np.asarray(t, dtype=float)
    if phi_omega_dot is None and not callable(phi_omega):
        phi_omega_dot = 0.0
    phi_omega = as_function(phi_omega)
    ch = chi(t) if callable(chi) else np.asarray(chi, dtype=float)
    th = Theta(t)
    th_dot = derivative(Theta, t, Theta_dot)
    pw_dot = derivative(phi_omega, t, as_function(phi_omega_dot))
    w = np.asarray(omega_abs(t), dtype=float)
    # |omega| sin(Theta) cot(2chi) -> hbar dTheta/dt / 2 at the joint zero
    safe_w = np.where(w == 0, 1.0, w)
    ratio = _sin_ratio(np.sin(th), np.sin(2 * ch), hbar * th_dot / (2 * safe_w * np.cos(2 * ch)), t)
    return 0.5 * hbar * (th_dot - pw_dot) + w * np.cos(2 * ch) * ratio


def parametrize(omega_abs, Theta, grid, phi_omega=0.0, Theta_dot=None, phi_omega_dot=None, hbar=1.0, tol=DEFAULT_TOL):
    """Build ``(HamiltonianTrajectory, ParametrizationState)`` from |omega| and Theta.

    The returned trajectory's Omega is the synthesized longitudinal field;
    it can be evaluated anywhere in ``[grid[0], grid[-1]]``.
    """
    grid = np.asarray(grid, dtype=float)
    omega_abs = as_function(omega_abs)
    if not callable(phi_omega) and phi_omega_dot is None:
        phi_omega_dot = 0.0
    phi_omega = as_function(phi_omega)
    phi_omega_dot = as_function(phi_omega_dot)

    h = HamiltonianTrajectory(
        Omega=lambda t: synthesize_omega(t, omega_abs, Theta, chi_fn, phi_omega, Theta_dot, phi_omega_dot, hbar),
        omega_abs=omega_abs,
        phi_omega=phi_omega,
        phi_omega_dot=phi_omega_dot,
        hbar=hbar,
    )
    chi = compute_chi(h, Theta, grid, tol=tol)
    chi_fn = _chi_function(h, Theta, grid, chi)
    phi = compute_phi(h, Theta, chi_fn, grid, Theta_dot=Theta_dot, tol=tol)
    state = ParametrizationState(
        t=grid,
        chi=chi,
        Theta=np.asarray(Theta(grid), dtype=float),
        phi=phi,
        phi_omega=np.broadcast_to(np.asarray(phi_omega(grid), dtype=float), grid.shape).copy(),
        hbar=hbar,
    )
    h.domain = (float(grid[0]), float(grid[-1]))
    return h, state


class SlowFields:
    """Hamiltonian fields expressed through (x, y)."""

    def __init__(self, s, hbar):
        self.s = s
        self.hbar = hbar

    def y_over_x(self, t):
        x = np.asarray(self.s.x(t), dtype=float)
        y = np.asarray(self.s.y(t), dtype=float)
        small = np.abs(x) < 0.5 * SINGULAR_WINDOW
        limit = self.s.yd(t) / self.s.xd(t) if np.any(small) else 0.0
        return np.where(small, limit, y / np.where(small, 1.0, x))

    def Theta(self, t):
        x = self.s.x(t)
        return np.arctan2((1 + x * x) * self.s.y(t), self.s.xd(t))

    def Theta_dot(self, t):
        x, y = self.s.x(t), self.s.y(t)
        xd, yd, xdd = self.s.xd(t), self.s.yd(t), self.s.xdd(t)
        num = (1 + x * x) * y
        num_d = 2 * x * xd * y + (1 + x * x) * yd
        return (num_d * xd - num * xdd) / (num * num + xd * xd)

    def omega_abs(self, t):
        x = self.s.x(t)
        return self.hbar * np.hypot(self.s.y(t), self.s.xd(t) / (1 + x * x))

    def Omega(self, t):
        x = self.s.x(t)
        return 0.5 * self.hbar * (self.Theta_dot(t) - self.s.phi_omega_rate(t)) + 0.5 * self.hbar * self.y_over_x(
            t
        ) * (1 - x * x)

    def phi_rate(self, t):
        """d phi / dt = y (1/x + x)."""
        x = self.s.x(t)
        return self.y_over_x(t) * (1 + x * x)


def from_slow_params(s, grid, hbar=1.0, tol=DEFAULT_TOL):
    """Hamiltonian and parametrization state generated by slow variables (x, y).

    |omega| = hbar sqrt(y^2 + (x'/(1+x^2))^2), tan(Theta) = (1+x^2) y / x',
    dphi/dt = y (1/x + x).
    """
    grid = np.asarray(grid, dtype=float)
    if grid[0] != 0.0:
        raise ValueError("grid must start at t = 0")
    zero = np.array(0.0)
    if abs(float(s.x(zero))) > 1e-12 or abs(float(s.y(zero))) > 1e-12:
        raise ValueError("x(0) and y(0) must vanish")
    if float(s.xd(zero)) == 0.0:
        raise ValueError("dx/dt(0) must be non-zero for Theta(0) = 0")

    f = SlowFields(s, hbar)
    x = np.asarray(s.x(grid), dtype=float)
    y = np.asarray(s.y(grid), dtype=float)
    _check_poles(grid, x, y, "x")

    h = HamiltonianTrajectory(
        Omega=f.Omega,
        omega_abs=f.omega_abs,
        phi_omega=s.phi_omega,
        phi_omega_dot=s.phi_omega_dot,
        hbar=hbar,
    )
    chi = _unwrap_checked(grid, np.arctan(x), np.pi)
    Theta = _unwrap_checked(grid, f.Theta(grid), 2 * np.pi)
    phi_omega = np.broadcast_to(np.asarray(s.phi_omega(grid), dtype=float), grid.shape).copy()
    phi = cumulative_simpson(f.phi_rate, grid, tol=tol) + phi_omega[0]
    state = ParametrizationState(t=grid, chi=chi, Theta=Theta, phi=phi, phi_omega=phi_omega, hbar=hbar)
    return h, state
