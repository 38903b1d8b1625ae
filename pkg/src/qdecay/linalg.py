"""Dense complex linear algebra substrate.

Qubit ordering is big-endian throughout the package: the basis index of
|n0 n1 .. n_{k-1}> is n0*2^(k-1) + n1*2^(k-2) + ... + n_{k-1}, so wire 0
is the most significant bit. All matrices are numpy complex128 arrays and
everything in scope fits comfortably below 64x64.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray

ComplexMatrix = NDArray[np.complex128]
StateVector = NDArray[np.complex128]

#: Default elementwise (Chebyshev) comparison tolerance.
DEFAULT_TOL = 1e-10

#: Hard cap on matrix dimension; nothing here needs more than 16.
MAX_DIM = 64


def as_matrix(data) -> ComplexMatrix:
    """Coerce input to a complex128 array without copying when possible."""
    return np.asarray(data, dtype=np.complex128)


def frozen(a: ComplexMatrix) -> ComplexMatrix:
    """Mark an array read-only and hand it back."""
    a.setflags(write=False)
    return a


def identity(dim: int) -> ComplexMatrix:
    return np.eye(dim, dtype=np.complex128)


def basis_state(dim: int, index: int) -> StateVector:
    """Computational basis ket |index> in the given dimension."""
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dimension {dim}")
    state = np.zeros(dim, dtype=np.complex128)
    state[index] = 1.0
    return state


def dagger(a: ComplexMatrix) -> ComplexMatrix:
    return as_matrix(a).conj().T


def kron(a, b, *rest) -> ComplexMatrix:
    """Tensor product of two or more matrices or vectors."""
    out = np.kron(as_matrix(a), as_matrix(b))
    for factor in rest:
        out = np.kron(out, as_matrix(factor))
    if max(out.shape) > MAX_DIM:
        raise ValueError(
            f"tensor product dimension {max(out.shape)} exceeds the supported maximum {MAX_DIM}"
        )
    return out


def max_abs(a) -> float:
    return float(np.max(np.abs(as_matrix(a))))


def max_abs_diff(a, b) -> float:
    """Chebyshev distance: max elementwise |a - b|."""
    return float(np.max(np.abs(as_matrix(a) - as_matrix(b))))


def is_unitary(u: ComplexMatrix, tol: float = DEFAULT_TOL) -> bool:
    """True iff u is square and max|U^dag U - I| <= tol."""
    u = as_matrix(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"unitarity check needs a square matrix, got shape {u.shape}")
    return max_abs_diff(dagger(u) @ u, identity(u.shape[0])) <= tol


def is_hermitian(a: ComplexMatrix, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return max_abs_diff(a, dagger(a)) <= tol


def is_density_matrix(rho: ComplexMatrix, tol: float = DEFAULT_TOL) -> bool:
    """Hermitian, unit trace, and positive semidefinite down to a -tol floor."""
    rho = as_matrix(rho)
    if not is_hermitian(rho, tol):
        return False
    if abs(complex(np.trace(rho)) - 1.0) > tol:
        return False
    return float(np.linalg.eigvalsh(rho).min()) >= -tol


def partial_trace(rho: ComplexMatrix, dims: Sequence[int], keep: Sequence[int]) -> ComplexMatrix:
    """Trace out every subsystem not listed in keep.

    dims lists the subsystem dimensions in tensor order; keep is a non-empty
    set of subsystem positions to retain. The result is ordered like the kept
    subsystems and has the same trace as the input.
    """
    rho = as_matrix(rho)
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    if rho.ndim != 2 or rho.shape != (total, total):
        raise ValueError(f"matrix shape {rho.shape} does not match subsystem dims {dims}")
    keep_set = sorted({int(k) for k in keep})
    if not keep_set or keep_set[0] < 0 or keep_set[-1] >= len(dims):
        raise ValueError(f"keep={keep!r} is not a valid non-empty subset of 0..{len(dims) - 1}")

    work = rho.reshape(dims + dims)
    # Trace the discarded subsystems highest-first so remaining axes keep
    # their positions.
    for sub in sorted((i for i in range(len(dims)) if i not in keep_set), reverse=True):
        half = work.ndim // 2
        work = np.trace(work, axis1=sub, axis2=sub + half)
    kept_dim = int(np.prod([dims[k] for k in keep_set]))
    return work.reshape(kept_dim, kept_dim)
