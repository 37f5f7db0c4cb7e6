"""Brute-force propagator: i hbar dU/dt = H(t) U by classical RK4.

This path shares nothing with the closed-form parametrization except the
Hamiltonian it integrates, so agreement between the two is a real check.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import IntegrationError
from .evolution import PropagatorTrajectory, transition_amplitude_general
from .hamiltonian import eigenframe_at, hamiltonian_matrix
from .linalg import IDENTITY, frob_distance, project_unitary, unitarity_defect


@dataclass
class IntegratorConfig:
    """RK4 settings.

    ``step`` is the largest substep. With ``tol`` set, each output interval is
    checked by step doubling (one full step against two half steps) and its
    substep halved until the local discrepancy is below ``tol``, at most
    ``max_halvings`` times. ``tol=None`` gives plain fixed-step RK4.
    """

    step: float = 0.02
    tol: Optional[float] = 1e-11
    max_halvings: int = 12
    renormalize: bool = False

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be positive")

    @classmethod
    def for_frequencies(cls, *frequencies, **kwargs):
        """Step bounded by min(1/f)/50 over the characteristic frequencies."""
        step = min(1.0 / f for f in frequencies if f > 0) / 50.0
        kwargs.setdefault("step", step)
        kwargs["step"] = min(kwargs["step"], step)
        return cls(**kwargs)


@dataclass
class OracleTrajectory(PropagatorTrajectory):
    unitarity_drift: float = 0.0
    n_steps: int = 0


def _rk4(u, ha, hm, hb, dt, c):
    k1 = c * dt * (ha @ u)
    k2 = c * dt * (hm @ (u + 0.5 * k1))
    k3 = c * dt * (hm @ (u + 0.5 * k2))
    k4 = c * dt * (hb @ (u + k3))
    return u + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def _advance_fixed(h, u, t0, t1, m, c):
    dt = (t1 - t0) / m
    hs = hamiltonian_matrix(h, t0 + dt * np.arange(2 * m + 1) / 2.0)
    for j in range(m):
        u = _rk4(u, hs[2 * j], hs[2 * j + 1], hs[2 * j + 2], dt, c)
    return u


def _advance_doubling(h, u, t0, t1, m, c):
    dt = (t1 - t0) / m
    hs = hamiltonian_matrix(h, t0 + dt * np.arange(4 * m + 1) / 4.0)
    worst = 0.0
    for j in range(m):
        b = 4 * j
        full = _rk4(u, hs[b], hs[b + 2], hs[b + 4], dt, c)
        half = _rk4(u, hs[b], hs[b + 1], hs[b + 2], 0.5 * dt, c)
        half = _rk4(half, hs[b + 2], hs[b + 3], hs[b + 4], 0.5 * dt, c)
        err = np.sqrt(np.sum(np.abs(half - full) ** 2))
        worst = max(worst, err)
        u = half
    return u, worst


def integrate(h, t_end=None, cfg=None, samples=None):
    """Propagator sampled at ``samples`` (default 4096 points on [0, t_end]).

    Returns an :class:`OracleTrajectory` with U(0) = I and the largest
    ``||U^dagger U - I||_F`` seen on the samples as ``unitarity_drift``.
    """
    cfg = cfg or IntegratorConfig()
    if samples is None:
        if t_end is None:
            raise ValueError("need t_end or samples")
        samples = np.linspace(0.0, t_end, 4096)
    samples = np.asarray(samples, dtype=float)
    if samples[0] != 0.0 or np.any(np.diff(samples) <= 0):
        raise ValueError("samples must start at 0 and increase")
    c = -1j / h.hbar

    out = np.empty((len(samples), 2, 2), dtype=complex)
    out[0] = IDENTITY
    u = IDENTITY.copy()
    n_steps = 0
    for k in range(len(samples) - 1):
        t0, t1 = samples[k], samples[k + 1]
        m = max(1, math.ceil((t1 - t0) / cfg.step * (1 - 1e-12)))
        if cfg.tol is None:
            u = _advance_fixed(h, u, t0, t1, m, c)
        else:
            for _ in range(cfg.max_halvings + 1):
                trial, err = _advance_doubling(h, u, t0, t1, m, c)
                if err <= cfg.tol:
                    break
                m *= 2
            else:
                raise IntegrationError((t0, t1), err)
            u = trial
        n_steps += m
        if cfg.renormalize:
            u = project_unitary(u)
        out[k + 1] = u
    drift = float(np.max(unitarity_defect(out)))
    return OracleTrajectory(t=samples, u=out, provenance="oracle", unitarity_drift=drift, n_steps=n_steps)


@dataclass
class ComparisonReport:
    frob: np.ndarray
    max_frob: float
    argmax_t: float
    max_amp_discrepancy: Optional[float]


def compare_trajectories(a, b, h=None):
    """Per-sample Frobenius distance between two propagator trajectories.

    With the Hamiltonian ``h`` also reports max |<-|U_a|+> - <-|U_b|+>| over
    the instantaneous eigenframes.
    """
    if len(a.t) != len(b.t) or not np.allclose(a.t, b.t, rtol=0, atol=1e-12 * max(1.0, abs(a.t[-1]))):
        raise ValueError("trajectories are sampled on different grids")
    d = frob_distance(a.u, b.u)
    i = int(np.argmax(d))
    amp = None
    if h is not None:
        frames = eigenframe_at(h, a.t)
        f0 = frames[0]
        amp_a = transition_amplitude_general(a.u, frames, f0)
        amp_b = transition_amplitude_general(b.u, frames, f0)
        amp = float(np.max(np.abs(amp_a - amp_b)))
    return ComparisonReport(frob=d, max_frob=float(d[i]), argmax_t=float(a.t[i]), max_amp_discrepancy=amp)
