"""Time-dependent two-level Hamiltonian and its instantaneous eigenframe.

    H(t) = [[Omega, omega], [conj(omega), -Omega]],   omega = |omega| exp(i phi_omega)

All time functions are expected to be vectorized (accept and return numpy
arrays). Plain numbers are accepted and treated as constants.
"""
import csv
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DegeneracyError
from .linalg import matrix_element

FD_REL_STEP = 1e-6
DEGENERACY_TOL = 1e-300
CSV_HEADER = ("t", "Omega", "omega_abs", "phi_omega")


def constant(value):
    value = float(value)

    def f(t):
        return np.full(np.shape(t), value)

    return f


def as_function(f):
    if f is None or callable(f):
        return f
    return constant(f)


def derivative(f, t, df=None):
    """Analytic derivative when ``df`` is given, else a central difference.

    The step is ``1e-6 * max(1, |t|)``.
    """
    if df is not None:
        return np.asarray(df(t), dtype=float)
    t = np.asarray(t, dtype=float)
    h = FD_REL_STEP * np.maximum(1.0, np.abs(t))
    return (np.asarray(f(t + h)) - np.asarray(f(t - h))) / (2.0 * h)


@dataclass
class HamiltonianTrajectory:
    """Omega(t), |omega|(t), phi_omega(t) plus optional analytic derivatives.

    ``domain`` (if set) is the closed interval on which the functions may be
    evaluated; tabulated trajectories set it to the data range.
    """

    Omega: Callable
    omega_abs: Callable
    phi_omega: Callable = 0.0
    Omega_dot: Optional[Callable] = None
    omega_abs_dot: Optional[Callable] = None
    phi_omega_dot: Optional[Callable] = None
    hbar: float = 1.0
    domain: Optional[tuple] = None

    def __post_init__(self):
        for name in ("Omega", "omega_abs", "phi_omega"):
            value = getattr(self, name)
            if not callable(value) and getattr(self, name + "_dot") is None:
                setattr(self, name + "_dot", constant(0.0))
        for name in ("Omega", "omega_abs", "phi_omega", "Omega_dot", "omega_abs_dot", "phi_omega_dot"):
            setattr(self, name, as_function(getattr(self, name)))
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")

    def check_domain(self, t):
        if self.domain is None:
            return
        t0, t1 = self.domain
        slack = 1e-9 * max(1.0, abs(t1 - t0))
        t = np.asarray(t)
        if np.any(t < t0 - slack) or np.any(t > t1 + slack):
            raise ValueError(f"t outside trajectory domain [{t0}, {t1}]")

    def fields(self, t):
        """Return ``(Omega, |omega|, phi_omega)`` sampled at ``t``."""
        self.check_domain(t)
        t = np.asarray(t, dtype=float)
        Om = np.broadcast_to(np.asarray(self.Omega(t), dtype=float), t.shape)
        w = np.broadcast_to(np.asarray(self.omega_abs(t), dtype=float), t.shape)
        p = np.broadcast_to(np.asarray(self.phi_omega(t), dtype=float), t.shape)
        return Om, w, p

    def field_derivatives(self, t):
        t = np.asarray(t, dtype=float)
        return (
            derivative(self.Omega, t, self.Omega_dot),
            derivative(self.omega_abs, t, self.omega_abs_dot),
            derivative(self.phi_omega, t, self.phi_omega_dot),
        )


def hamiltonian_matrix(h, t):
    """H(t) as a complex array of shape ``t.shape + (2, 2)``."""
    Om, w, p = h.fields(t)
    omega = w * np.exp(1j * p)
    out = np.empty(np.shape(Om) + (2, 2), dtype=complex)
    out[..., 0, 0] = Om
    out[..., 0, 1] = omega
    out[..., 1, 0] = np.conj(omega)
    out[..., 1, 1] = -Om
    return out


@dataclass
class Eigenframe:
    """Instantaneous eigen-decomposition; fields broadcast over sampled times."""

    e_plus: np.ndarray
    e_minus: np.ndarray
    theta: np.ndarray
    ket_plus: np.ndarray
    ket_minus: np.ndarray

    def __getitem__(self, idx):
        return Eigenframe(
            self.e_plus[idx], self.e_minus[idx], self.theta[idx], self.ket_plus[idx], self.ket_minus[idx]
        )

    def ket(self, sign):
        if sign in ("+", +1):
            return self.ket_plus
        if sign in ("-", -1):
            return self.ket_minus
        raise ValueError(f"unknown eigenstate label {sign!r}")


def eigenkets(theta, phi_omega):
    """Eigenvectors with the fixed phase convention

    |+> = (e^{i phi/2} cos(theta/2),  e^{-i phi/2} sin(theta/2))
    |-> = (e^{i phi/2} sin(theta/2), -e^{-i phi/2} cos(theta/2))
    """
    theta = np.asarray(theta, dtype=float)
    ep = np.exp(0.5j * np.asarray(phi_omega, dtype=float))
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    plus = np.stack([ep * c, np.conj(ep) * s], axis=-1)
    minus = np.stack([ep * s, -np.conj(ep) * c], axis=-1)
    return plus, minus


def eigenframe_at(h, t):
    Om, w, p = h.fields(t)
    energy = np.hypot(Om, w)
    bad = energy <= DEGENERACY_TOL
    if np.any(bad):
        raise DegeneracyError(np.asarray(t, dtype=float)[bad].flat[0] if np.ndim(t) else float(t))
    theta = np.arctan2(w, Om)
    plus, minus = eigenkets(theta, p)
    return Eigenframe(energy, -energy, theta, plus, minus)


def h_dot_matrix_element(h, t):
    """Standard adiabaticity criterion  hbar |<-|dH/dt|+>_t| / (E_- - E_+)^2."""
    frame = eigenframe_at(h, t)
    Om_d, w_d, p_d = h.field_derivatives(t)
    _, w, p = h.fields(t)
    omega_dot = (w_d + 1j * w * p_d) * np.exp(1j * p)
    hd = np.empty(np.shape(Om_d) + (2, 2), dtype=complex)
    hd[..., 0, 0] = Om_d
    hd[..., 0, 1] = omega_dot
    hd[..., 1, 0] = np.conj(omega_dot)
    hd[..., 1, 1] = -Om_d
    el = matrix_element(frame.ket_minus, hd, frame.ket_plus, check=False)
    return h.hbar * np.abs(el) / (frame.e_minus - frame.e_plus) ** 2


def tabulated_trajectory(t, Omega, omega_abs, phi_omega, hbar=1.0):
    """Cubic-spline trajectory through samples; derivatives come from the splines."""
    t = np.asarray(t, dtype=float)
    Omega, omega_abs, phi_omega = (np.asarray(a, dtype=float) for a in (Omega, omega_abs, phi_omega))
    if t.ndim != 1 or len(t) < 4:
        raise ValueError("need at least 4 samples")
    if np.any(np.diff(t) <= 0):
        raise ValueError("t must be strictly increasing")
    if np.any(omega_abs < 0):
        raise ValueError("omega_abs must be non-negative")
    if np.any(np.abs(np.diff(phi_omega)) >= np.pi):
        raise ValueError("phi_omega must be unwrapped (successive samples differ by < pi)")
    splines = [CubicSpline(t, a) for a in (Omega, omega_abs, phi_omega)]
    derivs = [s.derivative() for s in splines]
    return HamiltonianTrajectory(
        Omega=splines[0],
        omega_abs=splines[1],
        phi_omega=splines[2],
        Omega_dot=derivs[0],
        omega_abs_dot=derivs[1],
        phi_omega_dot=derivs[2],
        hbar=hbar,
        domain=(float(t[0]), float(t[-1])),
    )


def load_trajectory_csv(path, hbar=1.0):
    """Read a ``t,Omega,omega_abs,phi_omega`` CSV into a spline trajectory."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(col.strip() for col in next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"expected header {','.join(CSV_HEADER)}, got {','.join(header)}")
        rows = [[float(v) for v in row] for row in reader if row]
    data = np.array(rows, dtype=float)
    return tabulated_trajectory(data[:, 0], data[:, 1], data[:, 2], data[:, 3], hbar=hbar)


def write_trajectory_csv(path, h, t):
    Om, w, p = h.fields(t)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for row in zip(np.asarray(t, dtype=float), Om, w, p):
            writer.writerow([repr(float(v)) for v in row])
