"""Acceptance criteria, one test per criterion.

Each test prints a [ACCEPTANCE] line with the measured worst case once its
assertions pass, so a verbose run doubles as the acceptance report.
"""

import math
import time

import numpy as np
import pytest

from qdecay.channels import (
    kraus_single,
    kraus_two,
    rho_out_two,
    thetas_two,
    u_ad_single,
    u_ad_single_circuit,
    u_ad_two_circuit,
    u_ad_two_explicit,
)
from qdecay.experiment import (
    ExperimentConfig,
    collective_times,
    prepare_initial,
    run_collective,
    run_single,
    single_angles,
)
from qdecay.gates import (
    Circuit,
    TAU_PAIRS,
    apply_circuit,
    build_tau,
    c2ry_gates,
    c3ry_gates,
    c3x_gates,
    circuit_unitary,
    controlled_unitary,
    ladder_gates,
    single_gate,
    tau_gates,
    tau_target,
)
from qdecay.linalg import basis_state, identity, kron, max_abs_diff, partial_trace
from qdecay.lindblad import (
    LindbladProblem,
    analytic_single,
    analytic_two,
    jz_expectation_two,
    rk4_integrate,
)
from qdecay.spin import total_spin_ops

from helpers import random_density_matrix


def _report(name: str, detail: str) -> None:
    print(f"[ACCEPTANCE] {name}: PASS ({detail})")


def test_kraus_completeness_on_every_grid_point():
    start = time.perf_counter()
    defects = [kraus_single(theta).completeness_defect() for theta in single_angles()]
    defects += [
        kraus_two(thetas_two(t, 1.0)).completeness_defect() for t in collective_times()
    ]
    elapsed = time.perf_counter() - start
    worst = max(defects)
    assert worst <= 1e-12
    assert elapsed < 1.0
    _report("Kraus completeness", f"worst defect {worst:.3e}, {elapsed:.3f}s")


def test_decomposition_corpus_matches_direct_targets():
    start = time.perf_counter()
    rng = np.random.default_rng(777)
    angles = rng.uniform(0.0, 2 * math.pi, size=20)
    worst = 0.0

    ry = lambda th: single_gate("Ry", th)  # noqa: E731
    for theta in angles:
        for controls, target in (((0, 2), 1), ((1, 2), 0)):
            built = circuit_unitary(Circuit(4, tuple(c2ry_gates(theta, controls, target))))
            direct = controlled_unitary(4, controls, (target,), ry(theta))
            worst = max(worst, max_abs_diff(built, direct))
        built = circuit_unitary(Circuit(4, tuple(c3ry_gates(theta, (1, 2, 3), 0))))
        direct = controlled_unitary(4, (1, 2, 3), (0,), ry(theta))
        worst = max(worst, max_abs_diff(built, direct))

    for v_name in ("X^{1/2}", "X^{1/4}"):
        v = single_gate(v_name)
        for controls, target in (((0, 3), 2), ((0, 2), 1), ((0, 1), 2), ((2, 3), 0)):
            built = circuit_unitary(Circuit(4, tuple(ladder_gates(v_name, controls, target))))
            worst = max(
                worst, max_abs_diff(built, controlled_unitary(4, controls, (target,), v @ v))
            )
    for first, pair, target in ((2, (0, 1), 3), (3, (0, 1), 2), (0, (2, 3), 1)):
        built = circuit_unitary(Circuit(4, tuple(c3x_gates(first, pair, target))))
        direct = controlled_unitary(4, (first,) + pair, (target,), single_gate("X"))
        worst = max(worst, max_abs_diff(built, direct))

    for pair in TAU_PAIRS:
        worst = max(worst, max_abs_diff(circuit_unitary(build_tau(*pair)), tau_target(*pair)))
    alt = tau_gates(15, 16) + tau_gates(12, 16) + tau_gates(15, 16)
    worst = max(
        worst, max_abs_diff(circuit_unitary(Circuit(4, tuple(alt))), tau_target(12, 15))
    )

    elapsed = time.perf_counter() - start
    assert worst <= 1e-10
    assert elapsed < 5.0
    _report("decomposition corpus", f"worst diff {worst:.3e}, {elapsed:.3f}s")


def test_circuit_kraus_explicit_agreement():
    worst_unitary = max(
        max_abs_diff(
            circuit_unitary(u_ad_two_circuit(thetas_two(t, 1.0))),
            u_ad_two_explicit(thetas_two(t, 1.0)),
        )
        for t in collective_times()
    )
    assert worst_unitary <= 1e-9

    rng = np.random.default_rng(4242)
    env = np.zeros((4, 4), dtype=complex)
    env[3, 3] = 1.0
    worst_state = 0.0
    for _ in range(50):
        rho = random_density_matrix(rng, 4)
        thetas = thetas_two(float(rng.uniform(0.0, 0.045)), 1.0)
        u = circuit_unitary(u_ad_two_circuit(thetas))
        total = u @ kron(rho, env) @ u.conj().T
        reduced = partial_trace(total, (4, 4), (0,))
        worst_state = max(worst_state, max_abs_diff(reduced, rho_out_two(rho, thetas)))
    assert worst_state <= 1e-9
    _report(
        "circuit vs Kraus vs explicit",
        f"unitary diff {worst_unitary:.3e}, traced-state diff {worst_state:.3e}",
    )


def test_kraus_channel_tracks_master_equation():
    start = time.perf_counter()
    worst = 0.0
    for initial in range(1, 7):
        vec = apply_circuit(prepare_initial(initial), basis_state(4, 0))
        rho0 = np.outer(vec, vec.conj())
        for t in collective_times():
            via_kraus = jz_expectation_two(kraus_two(thetas_two(t, 1.0)).apply(rho0))
            via_me = jz_expectation_two(analytic_two(rho0, t, 1.0))
            worst = max(worst, abs(via_kraus - via_me))
    elapsed = time.perf_counter() - start
    assert worst <= 5e-4
    assert elapsed < 1.0
    _report("Kraus vs Lindblad", f"worst gap {worst:.4e}, {elapsed:.3f}s")


def test_rk4_oracle_matches_analytic_solutions():
    start = time.perf_counter()
    sigma_minus = np.array([[0, 0], [1, 0]], dtype=complex)
    rho0_single = np.array([[0.65, 0.25 - 0.15j], [0.25 + 0.15j, 0.35]], dtype=complex)
    single = rk4_integrate(
        LindbladProblem(2, (sigma_minus,), (1.0,), rho0_single), 0.5, dt=1e-4
    )
    diff_single = max_abs_diff(single, analytic_single(rho0_single, 0.5, 1.0))
    assert diff_single <= 1e-8

    _, jminus, _ = total_spin_ops()
    rho0_two = random_density_matrix(np.random.default_rng(99), 4)
    two = rk4_integrate(LindbladProblem(4, (jminus,), (1.0,), rho0_two), 0.5, dt=1e-5)
    diff_two = max_abs_diff(two, analytic_two(rho0_two, 0.5, 1.0))
    assert diff_two <= 1e-8
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    _report(
        "RK4 oracle", f"single diff {diff_single:.3e}, two diff {diff_two:.3e}, {elapsed:.2f}s"
    )


def test_single_qubit_shot_reproduction():
    start = time.perf_counter()
    result = run_single(ExperimentConfig("single"))
    assert result.n_shots == 2**14 and result.n_ave == 25
    worst_gap, worst_var = 0.0, 0.0
    for point in result.points:
        band = 5 * math.sqrt(point.jz_variance) + 1e-6
        gap = abs(point.jz_mean - point.jz_exact)
        assert gap <= band
        assert point.jz_variance <= 1e-4
        worst_gap, worst_var = max(worst_gap, gap), max(worst_var, point.jz_variance)
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    _report(
        "single-qubit shot reproduction",
        f"worst gap {worst_gap:.3e}, worst variance {worst_var:.2e}, {elapsed:.2f}s",
    )


def test_collective_shot_reproduction():
    start = time.perf_counter()

    for initial, outcome in ((1, "0011"), (2, "1111")):
        result = run_collective(ExperimentConfig("collective", initial=initial))
        assert result.observed_outcomes == (outcome,)

    supports = {3: {"0111", "1010", "1101"}, 4: {"1011", "1110"}}
    ratios = {}
    for initial in (3, 4, 5, 6):
        runs = {}
        for shots in (2**10, 2**18):
            result = run_collective(
                ExperimentConfig("collective", initial=initial, n_shots=shots, n_ave=50)
            )
            runs[shots] = result
            for point in result.points:
                band = 5 * math.sqrt(point.jz_variance) + 5e-4
                assert abs(point.jz_mean - point.jz_exact) <= band
            if initial in supports:
                assert set(result.observed_outcomes) <= supports[initial]
        mean_var_low = sum(p.jz_variance for p in runs[2**10].points) / 10
        mean_var_high = sum(p.jz_variance for p in runs[2**18].points) / 10
        ratio = mean_var_low / mean_var_high
        assert 2**6 <= ratio <= 2**10
        ratios[initial] = ratio

    elapsed = time.perf_counter() - start
    assert elapsed < 600.0
    pretty = ", ".join(f"l={k}: 2^{math.log2(v):.1f}" for k, v in ratios.items())
    _report("collective shot reproduction", f"variance ratios {pretty}, {elapsed:.2f}s")


def test_bell_like_exact_curves_are_degenerate():
    worst = 0.0
    for initial_a, initial_b in ((5, 6),):
        vec_a = apply_circuit(prepare_initial(initial_a), basis_state(4, 0))
        vec_b = apply_circuit(prepare_initial(initial_b), basis_state(4, 0))
        rho_a = np.outer(vec_a, vec_a.conj())
        rho_b = np.outer(vec_b, vec_b.conj())
        for t in collective_times():
            gap = abs(
                jz_expectation_two(analytic_two(rho_a, t, 1.0))
                - jz_expectation_two(analytic_two(rho_b, t, 1.0))
            )
            worst = max(worst, gap)
    assert worst <= 1e-12
    _report("Bell-like degeneracy", f"worst exact-curve gap {worst:.3e}")
