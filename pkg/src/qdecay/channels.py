"""Amplitude-damping channel construction.

Single-qubit channel: system wire Q0 plus environment wire Q1. The
environment starts in |1> and flips to |0> exactly when the system decays
from the excited |0> to the ground |1>; the decay probability over a step
is Gamma = sin^2(theta/2).

Two-qubit collective channel: system wires Q0 Q1 and environment wires
Q2 Q3, all indexed in the relabeled spin basis where index 0 is the dark
singlet and 1..3 walk down the triplet. The environment starts in index 3
(|11>). Three controlled rotations with strengths Gamma_21, Gamma_32 and
Gamma_31 move population down the triplet ladder; the strengths are chosen
so the channel reproduces the collective master equation through second
order in gamma*t, which limits the construction to gamma*t <= 0.25.

Angle and strength triples are ordered (21, 32, 31) everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gates import (
    Circuit,
    GateSpec,
    c2ry_gates,
    c3ry_gates,
    cgate,
    tau_gates,
)
from .linalg import (
    ComplexMatrix,
    as_matrix,
    frozen,
    identity,
    is_density_matrix,
    is_unitary,
)

#: Upper edge of the collective channel's validity window in gamma*t.
GAMMA_T_MAX = 0.25

#: Environment outcome column used by Kraus extraction: the all-ones state.
ENV_START_SINGLE = 1
ENV_START_TWO = 3


@dataclass(frozen=True)
class Schedule:
    """Per-time rotation angles and decay strengths for one channel family.

    kind is "single" (scalar theta and Gamma per time) or "collective"
    (triples ordered (21, 32, 31) per time).
    """

    kind: str
    gamma: float
    times: tuple[float, ...]
    thetas: tuple
    strengths: tuple

    @classmethod
    def single_qubit(cls, gamma: float, times) -> "Schedule":
        """Schedule from a time grid for the one-qubit channel."""
        times = tuple(float(t) for t in times)
        thetas = tuple(theta_single(t, gamma) for t in times)
        strengths = tuple(math.sin(th / 2) ** 2 for th in thetas)
        return cls("single", float(gamma), times, thetas, strengths)

    @classmethod
    def single_qubit_from_angles(cls, gamma: float, angles) -> "Schedule":
        """Schedule from an angle grid; times are recovered by inversion."""
        thetas = tuple(float(a) for a in angles)
        times = tuple(time_from_theta_single(th, gamma) for th in thetas)
        strengths = tuple(math.sin(th / 2) ** 2 for th in thetas)
        return cls("single", float(gamma), times, thetas, strengths)

    @classmethod
    def collective(cls, gamma: float, times) -> "Schedule":
        """Schedule from a time grid for the two-qubit collective channel."""
        times = tuple(float(t) for t in times)
        thetas = tuple(thetas_two(t, gamma) for t in times)
        strengths = tuple(gammas_two(t, gamma) for t in times)
        return cls("collective", float(gamma), times, thetas, strengths)


def theta_single(t: float, gamma: float) -> float:
    """Rotation angle giving decay probability 1 - e^{-gamma t}.

    Monotone in t, approaching pi as t grows; inverse of
    time_from_theta_single.
    """
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    return 2.0 * math.acos(math.exp(-gamma * t / 2.0))


def time_from_theta_single(theta: float, gamma: float) -> float:
    """Time at which theta_single reaches the given angle: -2 ln cos(theta/2) / gamma."""
    if not 0 <= theta < math.pi:
        raise ValueError(f"angle must lie in [0, pi), got {theta}")
    if gamma <= 0:
        raise ValueError(f"gamma must be positive to invert the schedule, got {gamma}")
    # + 0.0 turns the negative zero at theta = 0 into a plain zero.
    return -2.0 * math.log(math.cos(theta / 2.0)) / gamma + 0.0


def gammas_two(t: float, gamma: float) -> tuple[float, float, float]:
    """Collective decay strengths (Gamma_21, Gamma_32, Gamma_31) at time t.

    Gamma_21 = 2x - 4x^2, Gamma_32 = 2x - 2x^2, Gamma_31 = 2x^2 with
    x = gamma*t. Valid only on 0 <= x <= 0.25; outside that window the
    quadratic construction is meaningless and a ValueError is raised.
    """
    x = gamma * t
    if x < 0 or x > GAMMA_T_MAX:
        raise ValueError(
            f"gamma*t = {x} lies outside the channel validity window [0, {GAMMA_T_MAX}]"
        )
    return (2 * x - 4 * x * x, 2 * x - 2 * x * x, 2 * x * x)


def thetas_two(t: float, gamma: float) -> tuple[float, float, float]:
    """Rotation angles (theta_21, theta_32, theta_31): 2 arcsin(sqrt(Gamma)) per channel."""
    return tuple(2.0 * math.asin(math.sqrt(g)) for g in gammas_two(t, gamma))


def u_ad_single(theta: float) -> ComplexMatrix:
    """Explicit 4x4 system+environment unitary for one damping step.

    A rotation in the span of |01> and |10>: |01> goes to
    cos(theta/2)|01> + sin(theta/2)|10>, while |00> and |11> are fixed.
    """
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    u = identity(4)
    u[1, 1] = c
    u[1, 2] = -s
    u[2, 1] = s
    u[2, 2] = c
    return frozen(u)


def u_ad_single_circuit(theta: float) -> Circuit:
    """Gate form of u_ad_single: CX[Q0;Q1], CRy(theta)[Q1;Q0], CX[Q0;Q1]."""
    gates = (
        cgate("X", 0, 1),
        cgate("Ry", 1, 0, theta),
        cgate("X", 0, 1),
    )
    return Circuit(2, gates)


#: Rotation planes of the three collective factors, as 0-based index pairs of
#: the 16-dimensional register (system index times 4 plus environment index).
_PAIRS_21 = ((6, 9), (7, 10))
_PAIRS_31 = ((7, 13),)
_PAIRS_32 = ((10, 13), (11, 14))


def _rotation_factor(pairs, theta: float) -> ComplexMatrix:
    u = identity(16)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    for i, j in pairs:
        u[i, i] = c
        u[i, j] = -s
        u[j, i] = s
        u[j, j] = c
    return u


def u_ad_two_explicit(thetas: tuple[float, float, float]) -> ComplexMatrix:
    """Explicit 16x16 unitary of the collective channel.

    Product of the 21, 31 and 32 rotation factors with the 32 factor acting
    first; only the rows and columns touched by the rotation planes deviate
    from the identity.
    """
    t21, t32, t31 = thetas
    u = (
        _rotation_factor(_PAIRS_21, t21)
        @ _rotation_factor(_PAIRS_31, t31)
        @ _rotation_factor(_PAIRS_32, t32)
    )
    return frozen(u)


def u_ad_two_circuit(thetas: tuple[float, float, float]) -> Circuit:
    """Gate decomposition of the collective channel on wires Q0..Q3.

    Each rotation factor is a multi-controlled Ry conjugated by
    interexchange circuits; blocks are emitted in application order
    (32 block, then 31, then 21), matching the explicit matrix.
    """
    t21, t32, t31 = thetas
    gates: list[GateSpec] = []

    # 32 block: doubly controlled Ry on (Q0, Q2) -> Q1 inside two swaps.
    gates += tau_gates(14, 16)
    gates += tau_gates(15, 16)
    gates += c2ry_gates(t32, (0, 2), 1)
    gates += tau_gates(15, 16)
    gates += tau_gates(14, 16)

    # 31 block: triply controlled Ry on (Q1, Q2, Q3) -> Q0.
    gates += tau_gates(14, 16)
    gates += c3ry_gates(t31, (1, 2, 3), 0)
    gates += tau_gates(14, 16)

    # 21 block: doubly controlled Ry on (Q1, Q2) -> Q0 inside three swaps.
    gates += tau_gates(11, 16)
    gates += tau_gates(10, 12)
    gates += tau_gates(12, 15)
    gates += c2ry_gates(t21, (1, 2), 0)
    gates += tau_gates(12, 15)
    gates += tau_gates(10, 12)
    gates += tau_gates(11, 16)

    return Circuit(4, tuple(gates))


@dataclass(frozen=True)
class KrausSet:
    """Kraus operators labeled by the environment outcome that produced them."""

    operators: tuple[ComplexMatrix, ...]
    outcomes: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "operators", tuple(frozen(np.array(m)) for m in self.operators))
        object.__setattr__(self, "outcomes", tuple(int(o) for o in self.outcomes))
        if len(self.operators) != len(self.outcomes):
            raise ValueError("need exactly one outcome label per operator")
        defect = self.completeness_defect()
        if defect > 1e-12:
            raise ValueError(f"Kraus set is not complete: max|sum M^dag M - I| = {defect:.3e}")

    def completeness_defect(self) -> float:
        dim = self.operators[0].shape[0]
        acc = np.zeros((dim, dim), dtype=np.complex128)
        for m in self.operators:
            acc += m.conj().T @ m
        return float(np.max(np.abs(acc - identity(dim))))

    def apply(self, rho: ComplexMatrix) -> ComplexMatrix:
        """Channel action sum_e M_e rho M_e^dag."""
        rho = as_matrix(rho)
        out = np.zeros_like(rho)
        for m in self.operators:
            out += m @ rho @ m.conj().T
        return out


def extract_kraus(u: ComplexMatrix, env_dim: int, env_initial_index: int) -> KrausSet:
    """Project a system+environment unitary onto environment outcomes.

    M_e[s, s'] = <s, e| U |s', env_initial>, one operator per environment
    outcome e. The register is ordered system-then-environment, so the row
    index of U is s*env_dim + e. Requires a unitary input, which guarantees
    the extracted set is complete.
    """
    u = as_matrix(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    dim = u.shape[0]
    if env_dim < 1 or dim % env_dim:
        raise ValueError(f"environment dimension {env_dim} does not divide {dim}")
    if not 0 <= env_initial_index < env_dim:
        raise ValueError(f"environment start index {env_initial_index} out of range")
    if not is_unitary(u, 1e-10):
        raise ValueError("Kraus extraction needs a unitary system+environment matrix")
    sys_dim = dim // env_dim
    blocks = u.reshape(sys_dim, env_dim, sys_dim, env_dim)
    operators = tuple(
        np.ascontiguousarray(blocks[:, e, :, env_initial_index]) for e in range(env_dim)
    )
    return KrausSet(operators=operators, outcomes=tuple(range(env_dim)))


def kraus_single(theta: float) -> KrausSet:
    """Kraus pair of the one-qubit channel, extracted from u_ad_single."""
    return extract_kraus(u_ad_single(theta), 2, ENV_START_SINGLE)


def kraus_two(thetas: tuple[float, float, float]) -> KrausSet:
    """Kraus quadruple of the collective channel, extracted from the explicit unitary."""
    return extract_kraus(u_ad_two_explicit(thetas), 4, ENV_START_TWO)


def rho_out_two(rho_in: ComplexMatrix, thetas: tuple[float, float, float]) -> ComplexMatrix:
    """Closed-form output of the collective channel in the spin basis.

    Elementwise map whose coefficients come from half-angle sines and
    cosines of the three rotation angles. The dark-state row and column pass
    through untouched, including the (0,3) coherence; population flows down
    the triplet and piles up in the bottom state, which keeps the trace at
    one. Identical to applying the extracted Kraus set.

    Raises ValueError if rho_in is not a valid density matrix.
    """
    r = as_matrix(rho_in)
    if r.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {r.shape}")
    if not is_density_matrix(r, 1e-8):
        raise ValueError("input is not a valid density matrix")
    t21, t32, t31 = thetas
    c21, s21 = math.cos(t21 / 2), math.sin(t21 / 2)
    c31, s31 = math.cos(t31 / 2), math.sin(t31 / 2)
    c32, s32 = math.cos(t32 / 2), math.sin(t32 / 2)

    keep1 = c21 * c31  # amplitude survival of the m=+1 state
    keep2 = c32  # amplitude survival of the m=0 state
    drop21 = s21 * c31  # amplitude for the 1 -> 2 rung
    drop32 = s32  # amplitude for the 2 -> 3 rung
    drop31 = s31  # amplitude for the direct 1 -> 3 drop

    out = np.empty((4, 4), dtype=np.complex128)
    out[0, 0] = r[0, 0]
    out[0, 1] = keep1 * r[0, 1]
    out[0, 2] = keep2 * r[0, 2]
    out[0, 3] = r[0, 3]
    out[1, 1] = keep1 * keep1 * r[1, 1]
    out[1, 2] = keep1 * keep2 * r[1, 2]
    out[1, 3] = keep1 * r[1, 3]
    out[2, 2] = keep2 * keep2 * r[2, 2] + drop21 * drop21 * r[1, 1]
    out[2, 3] = keep2 * r[2, 3] + drop21 * drop32 * r[1, 2]
    out[3, 3] = r[3, 3] + drop32 * drop32 * r[2, 2] + drop31 * drop31 * r[1, 1]
    for i in range(4):
        for j in range(i):
            out[i, j] = out[j, i].conjugate()
    return out
