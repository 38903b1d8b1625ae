"""Two-qubit total-spin bookkeeping.

The spin basis is ordered so index 0 is the dark singlet and indices 1..3
run down the triplet from m = +1 to m = -1. Throughout the package the
one-qubit level |0> is the excited state and |1> the ground state, so the
all-excited product state |00> is the top of the triplet ladder.

Two different maps live here on purpose. The physical change of basis
rotates product-basis coordinates into singlet/triplet coordinates and is
used only to verify the spin operators. The relabeling map is the identity
on indices 0..3; the circuits and samplers work directly in that relabeled
computational basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    ComplexMatrix,
    StateVector,
    basis_state,
    dagger,
    frozen,
    kron,
)

_SQRT_HALF = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class SpinLabel:
    """Total-spin label |j, m>."""

    j: float
    m: float

    def __post_init__(self) -> None:
        if self.j < 0 or round(2 * self.j) != 2 * self.j:
            raise ValueError(f"j must be a non-negative half-integer, got {self.j}")
        if round(2 * self.m) != 2 * self.m or abs(self.m) > self.j:
            raise ValueError(f"m={self.m} is not a valid projection for j={self.j}")
        if round(self.j - self.m) != self.j - self.m:
            raise ValueError(f"j={self.j} and m={self.m} must differ by an integer")


#: Spin labels in basis order: singlet first, then the triplet top-down.
CHECK_ORDER: tuple[SpinLabel, ...] = (
    SpinLabel(0, 0),
    SpinLabel(1, 1),
    SpinLabel(1, 0),
    SpinLabel(1, -1),
)


@dataclass(frozen=True)
class BasisMap:
    """physical_change columns are the spin-basis vectors in product-basis
    coordinates; relabeling is the index identification used by the circuits
    (the identity permutation on 0..3)."""

    physical_change: ComplexMatrix
    relabeling: tuple[int, int, int, int]


def basis_map() -> BasisMap:
    change = np.zeros((4, 4), dtype=np.complex128)
    change[:, 0] = (0.0, _SQRT_HALF, -_SQRT_HALF, 0.0)  # singlet
    change[:, 1] = (1.0, 0.0, 0.0, 0.0)  # triplet m=+1
    change[:, 2] = (0.0, _SQRT_HALF, _SQRT_HALF, 0.0)  # triplet m=0
    change[:, 3] = (0.0, 0.0, 0.0, 1.0)  # triplet m=-1
    return BasisMap(physical_change=frozen(change), relabeling=(0, 1, 2, 3))


def relabel(index: int) -> int:
    """Product-basis index to spin-basis label; a pure identity relabeling."""
    if not 0 <= index <= 3:
        raise ValueError(f"two-qubit basis index must be 0..3, got {index}")
    return index


def spin_index(label: SpinLabel) -> int:
    """Position of a spin label in the basis order."""
    try:
        return CHECK_ORDER.index(label)
    except ValueError:
        raise ValueError(f"label {label} is not a two-qubit spin-basis label") from None


def spin_state(label: SpinLabel) -> StateVector:
    """Spin-basis coordinates of |j, m>: a computational basis vector."""
    return basis_state(4, spin_index(label))


def physical_state(label: SpinLabel) -> StateVector:
    """Product-basis coordinates of |j, m>."""
    return basis_map().physical_change[:, spin_index(label)].copy()


def total_spin_ops() -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]:
    """(J+, J-, Jz) in the spin basis.

    J- lowers the triplet ladder with amplitude sqrt(2) per rung and kills
    the singlet; Jz is diag(0, 1, 0, -1).
    """
    jminus = np.zeros((4, 4), dtype=np.complex128)
    jminus[2, 1] = math.sqrt(2.0)
    jminus[3, 2] = math.sqrt(2.0)
    jplus = dagger(jminus)
    jz = frozen(np.diag(np.array([0.0, 1.0, 0.0, -1.0], dtype=np.complex128)))
    return frozen(jplus.copy()), frozen(jminus), jz


def total_spin_squared() -> ComplexMatrix:
    """J^2 in the spin basis: built from the ladder operators and Jz."""
    jplus, jminus, jz = total_spin_ops()
    return frozen(jminus @ jplus + jz @ jz + jz)


def physical_spin_ops() -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]:
    """(J+, J-, Jz) in the product basis, assembled from one-qubit pieces.

    The one-qubit lowering operator maps the excited |0> to the ground |1>,
    and Jz is half the sum of the one-qubit Z operators.
    """
    lower = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=np.complex128)
    eye = np.eye(2, dtype=np.complex128)
    sz = np.diag(np.array([1.0, -1.0], dtype=np.complex128))
    jminus = kron(lower, eye) + kron(eye, lower)
    jplus = dagger(jminus)
    jz = (kron(sz, eye) + kron(eye, sz)) / 2.0
    return frozen(jplus.copy()), frozen(jminus), frozen(jz)


_BELL_AMPLITUDES = {
    "phi+": ((0, _SQRT_HALF), (3, _SQRT_HALF)),
    "phi-": ((0, _SQRT_HALF), (3, -_SQRT_HALF)),
    "psi+": ((1, _SQRT_HALF), (2, _SQRT_HALF)),
    "psi-": ((1, _SQRT_HALF), (2, -_SQRT_HALF)),
}


def bell_state(kind: str) -> StateVector:
    """Product-basis Bell state: kind is one of phi+, phi-, psi+, psi-."""
    try:
        entries = _BELL_AMPLITUDES[kind.lower()]
    except KeyError:
        raise ValueError(f"unknown Bell state {kind!r}; use phi+/phi-/psi+/psi-") from None
    state = np.zeros(4, dtype=np.complex128)
    for index, amp in entries:
        state[index] = amp
    return state
