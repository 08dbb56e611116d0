"""Dense complex-matrix primitives used for small-N verification.

Operators are plain 2-d ``complex128`` numpy arrays. Every entry point checks
finiteness and the dense-size cap; hermiticity and unitarity are checked where
an operation depends on them.
"""

import numpy as np

from .errors import InvalidInputError

MAX_DENSE_DIM = 4096

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10


def as_operator(a):
    """Validate ``a`` as a finite square matrix and return it as complex128."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidInputError(f"operator must be a non-empty square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DENSE_DIM:
        raise InvalidInputError(
            f"dense operators are limited to dim <= {MAX_DENSE_DIM}, got {a.shape[0]}"
        )
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("operator has non-finite entries")
    return a


def is_hermitian(a, tol=HERMITIAN_TOL):
    a = np.asarray(a)
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


def is_unitary(a, tol=UNITARY_TOL):
    a = np.asarray(a)
    eye = np.eye(a.shape[0])
    return operator_norm(a.conj().T @ a - eye) <= tol


def operator_norm(a):
    """Largest singular value of ``a`` (LAPACK SVD)."""
    a = as_operator(a)
    return float(np.linalg.svd(a, compute_uv=False)[0])


def hermitian_expm(h, t):
    """Return ``exp(-i h t)`` for Hermitian ``h`` via its eigendecomposition."""
    h = as_operator(h)
    if not np.isfinite(t):
        raise InvalidInputError(f"time must be finite, got {t}")
    if not is_hermitian(h):
        raise InvalidInputError("hermitian_expm requires a Hermitian operator")
    # symmetrize so eigh sees exactly the matrix we validated
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def unitary_distance(a, b):
    """Operator-norm distance ``||a - b||``."""
    a = as_operator(a)
    b = as_operator(b)
    if a.shape != b.shape:
        raise InvalidInputError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return operator_norm(a - b)


def commutator(a, b):
    return a @ b - b @ a
