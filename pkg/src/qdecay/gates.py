"""Gate inventory, controlled-unitary embedding, multi-controlled rotation
decompositions, basis-row interexchange circuits, and a product verifier.

A Circuit stores gates in application order: the first entry acts on the
state first, so the matrix of the whole circuit is the product of the gate
embeddings taken right to left.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    ComplexMatrix,
    StateVector,
    as_matrix,
    dagger,
    frozen,
    identity,
    is_unitary,
)


def _mat(*rows) -> ComplexMatrix:
    return frozen(np.array(rows, dtype=np.complex128))


def _phase(phi: float) -> ComplexMatrix:
    return _mat((1.0, 0.0), (0.0, complex(math.cos(phi), math.sin(phi))))


def _rx(theta: float) -> ComplexMatrix:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return _mat((c, -1j * s), (-1j * s, c))


def _ry(theta: float) -> ComplexMatrix:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return _mat((c, -s), (s, c))


def _rz(theta: float) -> ComplexMatrix:
    half = complex(math.cos(theta / 2), math.sin(theta / 2))
    return _mat((half.conjugate(), 0.0), (0.0, half))


_SQRT_HALF = 1.0 / math.sqrt(2.0)

_FIXED: dict[str, ComplexMatrix] = {
    "I": _mat((1, 0), (0, 1)),
    "X": _mat((0, 1), (1, 0)),
    "Y": _mat((0, -1j), (1j, 0)),
    "Z": _mat((1, 0), (0, -1)),
    "H": _mat((_SQRT_HALF, _SQRT_HALF), (_SQRT_HALF, -_SQRT_HALF)),
    "S": _phase(math.pi / 2),
    "T": _phase(math.pi / 4),
}
_FIXED["X^{1/2}"] = frozen(_FIXED["H"] @ _FIXED["S"] @ _FIXED["H"])
_FIXED["X^{1/4}"] = frozen(_FIXED["H"] @ _FIXED["T"] @ _FIXED["H"])

_PARAMETRIC = {"P": _phase, "Rx": _rx, "Ry": _ry, "Rz": _rz}

#: Two-qubit swap in big-endian basis order.
SWAP = _mat((1, 0, 0, 0), (0, 0, 1, 0), (0, 1, 0, 0), (0, 0, 0, 1))


def single_gate(name: str, param: float | None = None) -> ComplexMatrix:
    """Return the 2x2 matrix of a named one-qubit gate.

    Fixed gates: I, X, Y, Z, H, S, T, X^{1/2}, X^{1/4}. Parametric gates,
    which require an angle in radians: P, Rx, Ry, Rz. The fractional-X gates
    are built as H P(pi/2) H and H P(pi/4) H, so (X^{1/2})^2 = X up to a
    global phase-free identity.
    """
    if name in _PARAMETRIC:
        if param is None:
            raise ValueError(f"gate {name} needs an angle parameter")
        return _PARAMETRIC[name](param)
    if name in _FIXED:
        if param is not None:
            raise ValueError(f"gate {name} takes no parameter")
        return _FIXED[name]
    raise ValueError(f"unsupported gate name: {name!r}")


@dataclass(frozen=True)
class GateSpec:
    """One gate application: a base matrix on target wires plus control wires."""

    name: str
    matrix: ComplexMatrix
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    params: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", tuple(int(w) for w in self.targets))
        object.__setattr__(self, "controls", tuple(int(w) for w in self.controls))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        wires = self.targets + self.controls
        if len(set(wires)) != len(wires):
            raise ValueError(f"gate {self.name}: control and target wires must be distinct")
        if not self.targets:
            raise ValueError(f"gate {self.name}: at least one target wire required")
        m = np.array(self.matrix, dtype=np.complex128)
        want = 2 ** len(self.targets)
        if m.shape != (want, want):
            raise ValueError(
                f"gate {self.name}: matrix shape {m.shape} does not match "
                f"{len(self.targets)} target wire(s)"
            )
        object.__setattr__(self, "matrix", frozen(m))


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over an n-wire register, applied left to right."""

    n_wires: int
    gates: tuple[GateSpec, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n_wires < 1:
            raise ValueError("a circuit needs at least one wire")
        for g in self.gates:
            for w in g.targets + g.controls:
                if not 0 <= w < self.n_wires:
                    raise ValueError(
                        f"gate {g.name} uses wire {w} outside a {self.n_wires}-wire register"
                    )

    def __len__(self) -> int:
        return len(self.gates)


def gate(name: str, target: int, angle: float | None = None) -> GateSpec:
    """Uncontrolled one-qubit gate on the given wire."""
    params = () if angle is None else (angle,)
    return GateSpec(name, single_gate(name, angle), (target,), (), params)


def cgate(
    name: str,
    control: int,
    target: int,
    angle: float | None = None,
    *,
    inverse: bool = False,
) -> GateSpec:
    """Singly controlled one-qubit gate; inverse=True daggers the base matrix."""
    m = single_gate(name, angle)
    label = name
    if inverse:
        m = dagger(m)
        label = name + "^dag"
    params = () if angle is None else (angle,)
    return GateSpec(label, m, (target,), (control,), params)


def swap_gate(a: int, b: int) -> GateSpec:
    return GateSpec("SWAP", SWAP, (a, b))


def controlled_unitary(n_wires, controls, targets, u) -> ComplexMatrix:
    """Embed u on the target wires, applied when every control wire reads 1.

    Big-endian wire order (wire 0 is the most significant index bit). With no
    controls this reduces to the plain tensor embedding of u.
    """
    controls = tuple(int(c) for c in controls)
    targets = tuple(int(t) for t in targets)
    wires = controls + targets
    if len(set(wires)) != len(wires):
        raise ValueError("control and target wires must be distinct")
    if any(not 0 <= w < n_wires for w in wires):
        raise ValueError(f"wire index out of range for a {n_wires}-wire register")
    u = as_matrix(u)
    k = len(targets)
    if u.shape != (2**k, 2**k):
        raise ValueError(f"matrix shape {u.shape} does not match {k} target wire(s)")
    if not is_unitary(u, DEFAULT_TOL):
        raise ValueError("embedded matrix must be unitary")

    dim = 1 << n_wires
    full = np.zeros((dim, dim), dtype=np.complex128)
    for col in range(dim):
        bits = [(col >> (n_wires - 1 - w)) & 1 for w in range(n_wires)]
        if all(bits[c] for c in controls):
            tcol = 0
            for w in targets:
                tcol = (tcol << 1) | bits[w]
            for trow in range(1 << k):
                new_bits = list(bits)
                for pos, w in enumerate(targets):
                    new_bits[w] = (trow >> (k - 1 - pos)) & 1
                row = 0
                for b in new_bits:
                    row = (row << 1) | b
                full[row, col] = u[trow, tcol]
        else:
            full[col, col] = 1.0
    return full


@functools.lru_cache(maxsize=4096)
def _embed_cached(
    n_wires: int,
    controls: tuple[int, ...],
    targets: tuple[int, ...],
    matrix_bytes: bytes,
) -> ComplexMatrix:
    dim = 2 ** len(targets)
    u = np.frombuffer(matrix_bytes, dtype=np.complex128).reshape(dim, dim)
    return frozen(controlled_unitary(n_wires, controls, targets, u))


def gate_unitary(g: GateSpec, n_wires: int) -> ComplexMatrix:
    """Full-register matrix of a single gate application."""
    return _embed_cached(n_wires, g.controls, g.targets, g.matrix.tobytes())


def circuit_unitary(circuit: Circuit) -> ComplexMatrix:
    """Product of the gate embeddings, rightmost factor = first gate applied."""
    out = identity(1 << circuit.n_wires)
    for g in circuit.gates:
        out = gate_unitary(g, circuit.n_wires) @ out
    return out


def apply_circuit(circuit: Circuit, state: StateVector) -> StateVector:
    """Run the circuit on a state vector, gate by gate."""
    vec = np.asarray(state, dtype=np.complex128)
    if vec.shape != (1 << circuit.n_wires,):
        raise ValueError(
            f"state dimension {vec.shape} does not match a {circuit.n_wires}-wire register"
        )
    for g in circuit.gates:
        vec = gate_unitary(g, circuit.n_wires) @ vec
    return vec


def c2ry_gates(angle: float, controls: tuple[int, int], target: int) -> list[GateSpec]:
    """Gate list (application order) for a doubly controlled Ry."""
    a, b = controls
    return [
        cgate("Ry", a, target, angle / 2),
        cgate("X", b, a),
        cgate("Ry", a, target, -angle / 2),
        cgate("X", b, a),
        cgate("Ry", b, target, angle / 2),
    ]


def ladder_gates(v_name: str, controls: tuple[int, int], target: int) -> list[GateSpec]:
    """Two-control ladder whose product is the doubly controlled square of V.

    With v_name "X^{1/2}" the product is a Toffoli; with "X^{1/4}" it is a
    doubly controlled X^{1/2}.
    """
    p, q = controls
    return [
        cgate(v_name, q, target),
        cgate("X", p, q),
        cgate(v_name, q, target, inverse=True),
        cgate("X", p, q),
        cgate(v_name, p, target),
    ]


def c3ry_gates(angle: float, controls: tuple[int, int, int], target: int) -> list[GateSpec]:
    """Gate list for a triply controlled Ry, Toffoli blocks fully expanded."""
    a, b, c = controls
    gates = [cgate("Ry", a, target, angle / 2)]
    gates += ladder_gates("X^{1/2}", (b, c), a)
    gates.append(cgate("Ry", a, target, -angle / 2))
    gates += ladder_gates("X^{1/2}", (b, c), a)
    gates += c2ry_gates(angle / 2, (b, c), target)
    return gates


def c3x_gates(first: int, pair: tuple[int, int], target: int) -> list[GateSpec]:
    """Gate list for a triply controlled X with controls (first, pair)."""
    gates = [cgate("X^{1/2}", first, target)]
    gates += ladder_gates("X^{1/2}", pair, first)
    gates.append(cgate("X^{1/2}", first, target, inverse=True))
    gates += ladder_gates("X^{1/2}", pair, first)
    gates += ladder_gates("X^{1/4}", pair, target)
    return gates


def decompose_c2ry(
    angle: float, controls: tuple[int, int], target: int, n_wires: int = 4
) -> Circuit:
    """Doubly controlled Ry as five singly controlled gates.

    Application order: CRy(angle/2)[a;t], CX[b;a], CRy(-angle/2)[a;t],
    CX[b;a], CRy(angle/2)[b;t] for controls (a, b) and target t.
    """
    return Circuit(n_wires, tuple(c2ry_gates(angle, tuple(controls), target)))


def decompose_c3ry(
    angle: float, controls: tuple[int, int, int], target: int, n_wires: int = 4
) -> Circuit:
    """Triply controlled Ry via the half-angle recursion.

    Application order: CRy(angle/2)[a;t], Toffoli[(b,c);a] as a square-root-X
    ladder, CRy(-angle/2)[a;t], the same Toffoli ladder, then the doubly
    controlled Ry(angle/2)[(b,c);t] five-gate pattern.
    """
    return Circuit(n_wires, tuple(c3ry_gates(angle, tuple(controls), target)))


def decompose_ccv(v_name: str, controls: tuple[int, int], target: int, n_wires: int = 4) -> Circuit:
    """Ladder circuit for the doubly controlled square of the named V gate."""
    if v_name not in ("X^{1/2}", "X^{1/4}"):
        raise ValueError(f"no ladder defined for base gate {v_name!r}")
    return Circuit(n_wires, tuple(ladder_gates(v_name, tuple(controls), target)))


#: Wiring of the directly built interexchange circuits, keyed by the
#: 1-based basis-row pair they swap: (first control, control pair, target).
_TAU_C3X_WIRING: dict[tuple[int, int], tuple[int, tuple[int, int], int]] = {
    (15, 16): (2, (0, 1), 3),
    (14, 16): (3, (0, 1), 2),
    (12, 16): (0, (2, 3), 1),
}

TAU_PAIRS = ((15, 16), (14, 16), (12, 16), (10, 12), (12, 15), (11, 16))


def tau_gates(i: int, j: int) -> list[GateSpec]:
    """Gate list for the interexchange circuit swapping 1-based rows i and j."""
    pair = (i, j)
    if pair in _TAU_C3X_WIRING:
        first, ctrl_pair, target = _TAU_C3X_WIRING[pair]
        return c3x_gates(first, ctrl_pair, target)
    if pair == (10, 12):
        return tau_gates(14, 16) + ladder_gates("X^{1/2}", (0, 3), 2)
    if pair == (12, 15):
        return tau_gates(12, 16) + tau_gates(15, 16) + tau_gates(12, 16)
    if pair == (11, 16):
        return (
            tau_gates(15, 16)
            + tau_gates(12, 16)
            + ladder_gates("X^{1/2}", (0, 2), 1)
            + tau_gates(15, 16)
        )
    raise ValueError(f"no interexchange circuit defined for row pair {pair}")


def build_tau(i: int, j: int) -> Circuit:
    """Four-wire circuit exchanging computational-basis rows i and j (1-based).

    Supported pairs: (15,16), (14,16), (12,16) built directly from triply
    controlled X patterns, plus the composites (10,12), (12,15), (11,16).
    """
    return Circuit(4, tuple(tau_gates(i, j)))


def tau_target(i: int, j: int) -> ComplexMatrix:
    """The 16x16 permutation matrix exchanging 1-based rows i and j."""
    perm = identity(16)
    perm[[i - 1, j - 1]] = perm[[j - 1, i - 1]]
    return frozen(perm)


@dataclass(frozen=True)
class DecompositionReport:
    """Chebyshev comparison of a circuit product against a target matrix."""

    max_diff: float
    tol: float
    passed: bool
    worst_row: int
    worst_col: int
    built_entry: complex
    target_entry: complex

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (
            f"{status}: max |diff| = {self.max_diff:.3e} (tol {self.tol:.1e}) "
            f"at entry ({self.worst_row}, {self.worst_col}): "
            f"built {self.built_entry:.6g}, target {self.target_entry:.6g}"
        )


def verify_decomposition(
    circuit: Circuit, target: ComplexMatrix, tol: float = DEFAULT_TOL
) -> DecompositionReport:
    """Multiply the circuit out and diff it against the target matrix."""
    target = as_matrix(target)
    dim = 1 << circuit.n_wires
    if target.shape != (dim, dim):
        raise ValueError(
            f"target shape {target.shape} does not match a {circuit.n_wires}-wire circuit"
        )
    built = circuit_unitary(circuit)
    diff = np.abs(built - target)
    worst_row, worst_col = np.unravel_index(int(np.argmax(diff)), diff.shape)
    max_diff = float(diff[worst_row, worst_col])
    return DecompositionReport(
        max_diff=max_diff,
        tol=tol,
        passed=max_diff <= tol,
        worst_row=int(worst_row),
        worst_col=int(worst_col),
        built_entry=complex(built[worst_row, worst_col]),
        target_entry=complex(target[worst_row, worst_col]),
    )
