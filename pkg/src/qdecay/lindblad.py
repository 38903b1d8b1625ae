"""Master-equation oracle: analytic solutions and an RK4 integrator.

Everything here is independent of the circuit construction so it can act
as a cross-check. The analytic maps solve the damping master equation in
closed form; the integrator solves the same equation numerically for an
arbitrary set of jump operators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import ComplexMatrix, as_matrix, is_density_matrix


@dataclass(frozen=True)
class LindbladProblem:
    """Dissipative evolution d rho/dt = sum_k rate_k D[L_k](rho), no Hamiltonian."""

    dimension: int
    jump_ops: tuple[ComplexMatrix, ...]
    rates: tuple[float, ...]
    rho0: ComplexMatrix

    def __post_init__(self) -> None:
        d = self.dimension
        ops = tuple(as_matrix(op) for op in self.jump_ops)
        object.__setattr__(self, "jump_ops", ops)
        object.__setattr__(self, "rates", tuple(float(r) for r in self.rates))
        object.__setattr__(self, "rho0", as_matrix(self.rho0))
        if len(ops) != len(self.rates):
            raise ValueError("need one rate per jump operator")
        for op in ops:
            if op.shape != (d, d):
                raise ValueError(f"jump operator shape {op.shape} does not match dimension {d}")
        if any(r < 0 for r in self.rates):
            raise ValueError("rates must be non-negative")
        if self.rho0.shape != (d, d):
            raise ValueError(f"initial state shape {self.rho0.shape} does not match dimension {d}")
        if not is_density_matrix(self.rho0, 1e-10):
            raise ValueError("initial state is not a valid density matrix")


def analytic_single(rho_in: ComplexMatrix, t: float, gamma: float) -> ComplexMatrix:
    """Closed-form one-qubit amplitude damping at time t.

    Excited population decays as e^{-gamma t}, the coherence as
    e^{-gamma t / 2}, and the ground population absorbs the difference.
    """
    r = as_matrix(rho_in)
    e = math.exp(-gamma * t)
    h = math.exp(-gamma * t / 2)
    out = np.empty((2, 2), dtype=np.complex128)
    out[0, 0] = e * r[0, 0]
    out[0, 1] = h * r[0, 1]
    out[1, 0] = out[0, 1].conjugate()
    out[1, 1] = r[1, 1] + (1 - e) * r[0, 0]
    return out


def analytic_two(rho_in: ComplexMatrix, t: float, gamma: float) -> ComplexMatrix:
    """Closed-form collective damping of two qubits in the spin basis.

    The dark state (index 0) is frozen: its population and its coherence
    with the bottom state never move. Triplet populations cascade
    downward with rate 2*gamma and the secular 2*gamma*t*e^{-2 gamma t}
    feeding term; coherences pick up the matching half-rates. Exact for
    all t, unlike the circuit construction.
    """
    r = as_matrix(rho_in)
    x = gamma * t
    e1 = math.exp(-x)  # single-quantum coherence factor
    e2 = math.exp(-2 * x)  # triplet population factor
    out = np.empty((4, 4), dtype=np.complex128)
    out[0, 0] = r[0, 0]
    out[0, 1] = e1 * r[0, 1]
    out[0, 2] = e1 * r[0, 2]
    out[0, 3] = r[0, 3]
    out[1, 1] = e2 * r[1, 1]
    out[1, 2] = e2 * r[1, 2]
    out[1, 3] = e1 * r[1, 3]
    out[2, 2] = e2 * r[2, 2] + 2 * x * e2 * r[1, 1]
    out[2, 3] = e1 * r[2, 3] + 2 * e1 * (1 - e1) * r[1, 2]
    out[3, 3] = 1 - out[0, 0] - out[1, 1] - out[2, 2]
    for i in range(4):
        for j in range(i):
            out[i, j] = out[j, i].conjugate()
    return out


def _superoperator(problem: LindbladProblem) -> ComplexMatrix:
    """Matrix acting on row-major vec(rho) that implements the dissipator."""
    d = problem.dimension
    eye = np.eye(d, dtype=np.complex128)
    s = np.zeros((d * d, d * d), dtype=np.complex128)
    for op, rate in zip(problem.jump_ops, problem.rates):
        ldl = op.conj().T @ op
        s += rate * (
            np.kron(op, op.conj())
            - 0.5 * np.kron(ldl, eye)
            - 0.5 * np.kron(eye, ldl.T)
        )
    return s


def rk4_integrate(
    problem: LindbladProblem,
    t_end: float,
    dt: float = 1e-4,
    check_every: int = 1000,
) -> ComplexMatrix:
    """Fixed-step RK4 solution of the master equation at time t_end.

    t_end must be an integer number of steps. The state is re-Hermitized
    after every step, and trace and positivity are checked every
    check_every steps and at the end; a drifting trace (beyond 1e-10) or a
    significantly negative eigenvalue (below -1e-6) raises RuntimeError
    with the offending step in the message.
    """
    if t_end < 0:
        raise ValueError(f"t_end must be non-negative, got {t_end}")
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    n_steps = round(t_end / dt)
    if abs(n_steps * dt - t_end) > 1e-9 * max(1.0, abs(t_end)):
        raise ValueError(f"t_end = {t_end} is not an integer multiple of dt = {dt}")

    d = problem.dimension
    s = _superoperator(problem)
    vec = problem.rho0.reshape(-1).astype(np.complex128)

    def _check(step: int) -> None:
        rho = vec.reshape(d, d)
        trace = float(np.real(np.trace(rho)))
        if abs(trace - 1.0) > 1e-10:
            raise RuntimeError(
                f"trace drifted to {trace!r} after step {step} (dt={dt}); "
                "the integrator is not trustworthy at this step size"
            )
        min_eig = float(np.linalg.eigvalsh(rho).min())
        if min_eig < -1e-6:
            raise RuntimeError(
                f"state lost positivity after step {step}: min eigenvalue {min_eig:.3e}"
            )

    for step in range(1, n_steps + 1):
        k1 = s @ vec
        k2 = s @ (vec + 0.5 * dt * k1)
        k3 = s @ (vec + 0.5 * dt * k2)
        k4 = s @ (vec + dt * k3)
        vec = vec + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        rho = vec.reshape(d, d)
        rho = 0.5 * (rho + rho.conj().T)
        vec = rho.reshape(-1)
        if check_every and step % check_every == 0:
            _check(step)
    _check(n_steps)
    return vec.reshape(d, d)


def jz_expectation_single(rho: ComplexMatrix) -> float:
    """<Jz> of one qubit: half the population imbalance, excited minus ground."""
    r = as_matrix(rho)
    return 0.5 * float(np.real(r[0, 0] - r[1, 1]))


def jz_expectation_two(rho: ComplexMatrix) -> float:
    """<Jz> of the pair in the spin basis: +1 on index 1, -1 on index 3."""
    r = as_matrix(rho)
    return float(np.real(r[1, 1] - r[3, 3]))
