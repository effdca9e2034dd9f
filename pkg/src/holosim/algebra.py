"""Dense complex linear algebra for small operators (dimension <= 64).

Matrices are plain ``numpy`` complex arrays. The helpers here add the shape
checks and structural validation the rest of the package relies on.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from .errors import ShapeError, ValidationError

UNITARY_TOL = 1e-12
HERMITIAN_TOL = 1e-12
ORACLE_TOL = 1e-11
DENSITY_TRACE_TOL = 1e-10
DENSITY_EIG_TOL = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def basis_vector(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker product; ``a`` carries the slow (leftmost) index."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(*factors) -> np.ndarray:
    return reduce(kron, factors)


def is_hermitian(h, tol: float = HERMITIAN_TOL) -> bool:
    h = as_matrix(h)
    return h.shape[0] == h.shape[1] and float(np.max(np.abs(h - dagger(h)), initial=0.0)) < tol


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0])))) < tol


def is_density(rho, trace_tol: float = DENSITY_TRACE_TOL, eig_tol: float = DENSITY_EIG_TOL) -> bool:
    rho = as_matrix(rho)
    if not is_hermitian(rho, tol=HERMITIAN_TOL):
        return False
    if abs(np.trace(rho) - 1.0) > trace_tol:
        return False
    return float(np.min(np.linalg.eigvalsh((rho + dagger(rho)) / 2))) >= -eig_tol


def expm_generator(h, t: float) -> np.ndarray:
    """Return ``exp(-i h t)`` for Hermitian ``h`` and ``t >= 0``.

    Uses the Hermitian eigendecomposition, so the result is unitary to
    machine precision regardless of ``|h| t``.
    """
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise ShapeError(f"generator must be square, got {h.shape}")
    if not is_hermitian(h):
        dev = float(np.max(np.abs(h - dagger(h))))
        raise ValidationError(f"generator is not Hermitian (max |H - H^dag| = {dev:.3e})")
    if t < 0:
        raise ValidationError(f"propagation time must be non-negative, got {t}")
    w, v = np.linalg.eigh((h + dagger(h)) / 2)
    return (v * np.exp(-1j * w * t)) @ dagger(v)


def trace_fidelity(u_ideal, u_actual) -> float:
    """|Tr(U^dag U_e)| / |Tr(U^dag U)|, insensitive to global phase."""
    u_ideal, u_actual = as_matrix(u_ideal), as_matrix(u_actual)
    if u_ideal.shape != u_actual.shape or u_ideal.shape[0] != u_ideal.shape[1]:
        raise ShapeError(f"fidelity needs equal square shapes, got {u_ideal.shape} and {u_actual.shape}")
    num = abs(np.trace(dagger(u_ideal) @ u_actual))
    den = abs(np.trace(dagger(u_ideal) @ u_ideal))
    return float(min(num / den, 1.0))
