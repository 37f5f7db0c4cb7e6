"""Random smooth slow-variable trajectories for cross-checks."""
import numpy as np

from twolevel.parametrization import SlowParametrization


def random_slow(rng, T=5.0):
    """x = a t + b sin^2(w1 t) > 0,  y = x (c0 + c1 cos w2 t),  phi_omega = d0 + d1 sin(w3 t)."""
    a = rng.uniform(0.3, 1.5)
    b = rng.uniform(0.0, 0.8)
    w1 = rng.uniform(0.2, 1.2)
    c0 = rng.uniform(0.8, 3.0)
    c1 = rng.uniform(-0.5, 0.5) * c0
    w2 = rng.uniform(0.2, 2.0)
    d0 = rng.uniform(-np.pi, np.pi)
    d1 = rng.uniform(-0.5, 0.5)
    w3 = rng.uniform(0.1, 1.0)

    def x(t):
        return a * t + b * np.sin(w1 * t) ** 2

    def xd(t):
        return a + b * w1 * np.sin(2 * w1 * t)

    def xdd(t):
        return 2 * b * w1 * w1 * np.cos(2 * w1 * t)

    def g(t):
        return c0 + c1 * np.cos(w2 * t)

    def gd(t):
        return -c1 * w2 * np.sin(w2 * t)

    s = SlowParametrization(
        x=x,
        y=lambda t: x(t) * g(t),
        x_dot=xd,
        y_dot=lambda t: xd(t) * g(t) + x(t) * gd(t),
        x_ddot=xdd,
        phi_omega=lambda t: d0 + d1 * np.sin(w3 * t),
        phi_omega_dot=lambda t: d1 * w3 * np.cos(w3 * t),
    )
    return s, T
