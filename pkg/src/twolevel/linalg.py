"""2x2 complex linear algebra used throughout the package.

States are complex arrays of shape ``(2,)`` and operators complex arrays of
shape ``(2, 2)``. Every function also accepts stacks (leading batch axes),
which is how trajectories sampled on a time grid are handled.
"""
import numpy as np

from .errors import NormalizationError

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

E0 = np.array([1, 0], dtype=complex)
E1 = np.array([0, 1], dtype=complex)

NORM_TOL = 1e-8


def _finite(*arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise ValueError("non-finite entries")


def mat_mul(a, b):
    """Matrix product, broadcasting over leading axes."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _finite(a, b)
    return np.matmul(a, b)


def dagger(m):
    return np.conj(np.swapaxes(np.asarray(m), -1, -2))


def frob_distance(a, b):
    """Frobenius norm of ``a - b`` (per matrix for stacks)."""
    d = np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex)
    _finite(d)
    return np.sqrt(np.sum(np.abs(d) ** 2, axis=(-2, -1)))


def unitarity_defect(u):
    """``||U^dagger U - I||_F``."""
    u = np.asarray(u, dtype=complex)
    return frob_distance(np.matmul(dagger(u), u), IDENTITY)


def is_unitary(u, tol=1e-10):
    return bool(np.all(unitarity_defect(u) <= tol))


def det(u):
    u = np.asarray(u, dtype=complex)
    return u[..., 0, 0] * u[..., 1, 1] - u[..., 0, 1] * u[..., 1, 0]


def norm2(psi):
    return np.sum(np.abs(np.asarray(psi)) ** 2, axis=-1)


def matrix_element(bra, m, ket, check=True):
    """Return ``<bra| m |ket>``; ``bra`` is conjugated here.

    Raises :class:`NormalizationError` when either state deviates from unit
    norm by more than 1e-8 (pass ``check=False`` to skip).
    """
    bra = np.asarray(bra, dtype=complex)
    ket = np.asarray(ket, dtype=complex)
    m = np.asarray(m, dtype=complex)
    _finite(bra, m, ket)
    if check:
        for name, v in (("bra", bra), ("ket", ket)):
            if np.any(np.abs(norm2(v) - 1.0) > NORM_TOL):
                raise NormalizationError(f"{name} is not normalized")
    mk = np.einsum("...ij,...j->...i", m, ket)
    return np.einsum("...i,...i->...", np.conj(bra), mk)


def su2_exp(angle, axis):
    """``exp(-i angle n.sigma) = cos(angle) I - i sin(angle) n.sigma`` for a unit ``axis``."""
    angle = np.asarray(angle, dtype=float)
    axis = np.asarray(axis, dtype=float)
    n_sigma = np.einsum("...k,kij->...ij", axis, PAULI)
    c = np.cos(angle)[..., None, None]
    s = np.sin(angle)[..., None, None]
    return c * IDENTITY - 1j * s * n_sigma


def z_phase(angle):
    """``exp(i angle sigma_z / 2)`` as a diagonal 2x2 (stackable)."""
    angle = np.asarray(angle, dtype=float)
    out = np.zeros(angle.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = np.exp(0.5j * angle)
    out[..., 1, 1] = np.exp(-0.5j * angle)
    return out


def project_unitary(u):
    """Nearest unitary in Frobenius norm (polar factor via SVD)."""
    w, _, vh = np.linalg.svd(np.asarray(u, dtype=complex))
    return np.matmul(w, vh)
