"""Cumulative quadrature on a caller-supplied grid.

Each grid interval is integrated with composite Simpson; intervals whose
estimate has not settled are refined (panel count doubled) independently of
the others until ``|S_2m - S_m| / 15`` meets their share of the tolerance.
"""
import numpy as np

from .errors import QuadratureError

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def _simpson(f, a, h, m):
    # a, h: (K,) interval starts and widths; m even panel count
    nodes = a[:, None] + h[:, None] * (np.arange(m + 1) / m)
    vals = np.asarray(f(nodes.ravel()), dtype=float).reshape(nodes.shape)
    w = np.ones(m + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return (vals @ w) * h / (3.0 * m)


def interval_integrals(f, grid, tol=1e-10, max_level=14):
    """Integral of ``f`` over every ``[grid[i], grid[i+1]]``.

    ``tol`` is an absolute tolerance on the sum over the whole grid, split
    between intervals in proportion to their width.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing with at least two points")
    a = grid[:-1]
    h = np.diff(grid)
    local_tol = tol * h / (grid[-1] - grid[0])

    out = np.empty_like(h)
    active = np.arange(len(h))
    m = 2
    coarse = _simpson(f, a, h, m)
    for _ in range(max_level):
        fine = _simpson(f, a[active], h[active], 2 * m)
        err = np.abs(fine - coarse) / 15.0
        ok = err <= local_tol[active]
        bad_val = ~np.isfinite(fine)
        if np.any(bad_val):
            i = active[bad_val][0]
            raise QuadratureError((a[i], a[i] + h[i]), np.inf, "integrand not finite")
        out[active[ok]] = fine[ok]
        active = active[~ok]
        if active.size == 0:
            return out
        coarse = fine[~ok]
        m *= 2
    worst = int(np.argmax(err[~ok]))
    i = active[worst]
    raise QuadratureError((a[i], a[i] + h[i]), float(err[~ok][worst]))


def cumulative_simpson(f, grid, tol=1e-10, max_level=14):
    """``F(grid[k]) = int_{grid[0]}^{grid[k]} f``; ``F[0] = 0``."""
    pieces = interval_integrals(f, grid, tol=tol, max_level=max_level)
    return np.concatenate([[0.0], np.cumsum(pieces)])


class CumulativeIntegral:
    """Evaluate a cumulative integral anywhere inside its grid.

    Grid values come from :func:`cumulative_simpson`; between grid points the
    remainder ``int_{grid[i]}^{t} f`` is done with 12-point Gauss-Legendre,
    which is exact to rounding for the smooth sub-grid pieces we integrate.
    """

    def __init__(self, f, grid, values=None, tol=1e-10):
        self.f = f
        self.grid = np.asarray(grid, dtype=float)
        self.values = cumulative_simpson(f, self.grid, tol=tol) if values is None else np.asarray(values)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t).ravel()
        idx = np.clip(np.searchsorted(self.grid, flat, side="right") - 1, 0, len(self.grid) - 2)
        left = self.grid[idx]
        half = 0.5 * (flat - left)
        nodes = left[:, None] + half[:, None] * (_GL_NODES + 1.0)
        vals = np.asarray(self.f(nodes.ravel()), dtype=float).reshape(nodes.shape)
        out = self.values[idx] + half * (vals @ _GL_WEIGHTS)
        return out.reshape(t.shape)
