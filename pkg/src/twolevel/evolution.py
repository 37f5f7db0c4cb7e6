"""Exact propagator from a parametrization state and eigenstate transition amplitudes."""
from dataclasses import dataclass

import numpy as np

from .linalg import matrix_element, su2_exp, z_phase


@dataclass
class PropagatorTrajectory:
    """U(t) sampled on ``t``; ``u`` has shape ``(len(t), 2, 2)``."""

    t: np.ndarray
    u: np.ndarray
    provenance: str = "parametrized"

    def __len__(self):
        return len(self.t)

    def __getitem__(self, idx):
        return self.u[idx]


def _select(state, index):
    if index is None:
        return slice(None)
    return index


def build_propagator(state, index=None):
    """U from (a, b) at ``index`` (all samples when ``None``)."""
    k = _select(state, index)
    chi = state.chi[k]
    Theta = state.Theta[k]
    phi = state.phi[k]
    pw = state.phi_omega[k]
    a = np.cos(chi) * np.exp(-0.5j * (Theta - pw + phi))
    b = -1j * np.sin(chi) * np.exp(-0.5j * (Theta - pw - phi))
    u = np.empty(np.shape(a) + (2, 2), dtype=complex)
    u[..., 0, 0] = a
    u[..., 0, 1] = b
    u[..., 1, 0] = -np.conj(b)
    u[..., 1, 1] = np.conj(a)
    return u


def compact_propagator(state, index=None):
    """U = exp(i/2 sigma_z phi_omega) exp(-i Phi n.sigma) exp(-i/2 sigma_z phi_omega(0))."""
    k = _select(state, index)
    Phi, n = state.axis_angle()
    core = su2_exp(Phi[k], n[k])
    return z_phase(state.phi_omega[k]) @ core @ z_phase(-state.phi_omega0)


def parametrized_trajectory(state):
    return PropagatorTrajectory(t=np.asarray(state.t), u=build_propagator(state), provenance="parametrized")


def transition_amplitude_formula(state, theta, theta0, index=None):
    """Closed-form amplitude  _t<-| U(t) |+>_0  in terms of chi, phi_+-, theta."""
    k = _select(state, index)
    chi = state.chi[k]
    pp = state.phi_plus[k]
    pm = state.phi_minus[k]
    d = 0.5 * (theta - theta0)
    s = 0.5 * (theta + theta0)
    re = np.cos(chi) * np.cos(pp) * np.sin(d) - np.sin(chi) * np.sin(pm) * np.cos(d)
    im = np.sin(chi) * np.cos(pm) * np.cos(s) - np.cos(chi) * np.sin(pp) * np.sin(s)
    return re + 1j * im


def transition_amplitude_general(u, frame_t, frame_0, frm="+", to="-"):
    """``<to|_t U |from>_0`` as an exact matrix element.

    ``u`` may be a single matrix or a stack aligned with ``frame_t``.
    """
    if isinstance(u, PropagatorTrajectory):
        u = u.u
    return matrix_element(frame_t.ket(to), u, frame_0.ket(frm), check=False)


def amplitude_table(u, frame_t, frame_0):
    """All four amplitudes keyed by ``(from, to)``."""
    return {
        (f, t): transition_amplitude_general(u, frame_t, frame_0, f, t) for f in "+-" for t in "+-"
    }

