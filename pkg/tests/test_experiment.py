"""Experiment sweeps, verification report, serialization, and the CLI."""

import json
import math

import numpy as np
import pytest

from qdecay.channels import rho_out_two, thetas_two
from qdecay.cli import main
from qdecay.experiment import (
    COLLECTIVE_DEFAULT_AVE,
    COLLECTIVE_DEFAULT_SHOTS,
    CSV_COLUMNS,
    ExperimentConfig,
    SINGLE_DEFAULT_AVE,
    SINGLE_DEFAULT_SHOTS,
    collective_times,
    prepare_initial,
    result_to_csv,
    result_to_json,
    run_collective,
    run_single,
    run_verify,
    single_angles,
    write_output,
)
from qdecay.gates import apply_circuit
from qdecay.linalg import basis_state, max_abs_diff

SQRT_HALF = 1 / math.sqrt(2)


def _small_single(**kw):
    return ExperimentConfig("single", n_shots=kw.pop("n_shots", 256), n_ave=kw.pop("n_ave", 5), **kw)


def _small_collective(initial, **kw):
    return ExperimentConfig(
        "collective",
        initial=initial,
        n_shots=kw.pop("n_shots", 512),
        n_ave=kw.pop("n_ave", 10),
        **kw,
    )


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("both")
    with pytest.raises(ValueError):
        ExperimentConfig("single", format="xml")
    with pytest.raises(ValueError):
        ExperimentConfig("collective")
    with pytest.raises(ValueError):
        ExperimentConfig("collective", initial=7)
    with pytest.raises(ValueError):
        ExperimentConfig("single", initial=3)
    with pytest.raises(ValueError):
        ExperimentConfig("single", gamma=0.0)
    with pytest.raises(ValueError):
        ExperimentConfig("collective", initial=3, gamma=6.0)
    with pytest.raises(ValueError):
        ExperimentConfig("single", n_shots=0)
    with pytest.raises(ValueError):
        ExperimentConfig("single", n_ave=0)


def test_config_default_resolution():
    single = ExperimentConfig("single")
    assert (single.resolved_shots, single.resolved_ave) == (
        SINGLE_DEFAULT_SHOTS,
        SINGLE_DEFAULT_AVE,
    )
    coll = ExperimentConfig("collective", initial=1)
    assert (coll.resolved_shots, coll.resolved_ave) == (
        COLLECTIVE_DEFAULT_SHOTS,
        COLLECTIVE_DEFAULT_AVE,
    )
    assert ExperimentConfig("single", n_shots=64, n_ave=2).resolved_shots == 64


def test_grids():
    angles = single_angles()
    assert len(angles) == 10 and angles[0] == 0.0
    assert angles[5] == pytest.approx(math.pi / 2)
    times = collective_times()
    assert len(times) == 10 and times[-1] == pytest.approx(0.045)


@pytest.mark.parametrize(
    "initial,expected",
    [
        (1, [1, 0, 0, 0]),
        (2, [0, 0, 0, 1]),
        (3, [0, 1, 0, 0]),
        (4, [0, 0, 1, 0]),
        (5, [0, SQRT_HALF, 0, SQRT_HALF]),
        (6, [0, SQRT_HALF, 0, -SQRT_HALF]),
    ],
)
def test_prepare_initial_states(initial, expected):
    state = apply_circuit(prepare_initial(initial), basis_state(4, 0))
    assert max_abs_diff(state.reshape(1, -1), np.array([expected])) < 1e-15


def test_prepare_initial_rejects_out_of_range():
    for bad in (0, 7):
        with pytest.raises(ValueError):
            prepare_initial(bad)


def test_run_single_exact_mode_matches_closed_form():
    result = run_single(ExperimentConfig("single", exact=True))
    assert result.mode == "single" and result.exact
    for point, theta in zip(result.points, single_angles()):
        expected = math.cos(theta / 2) ** 2 - 0.5
        assert point.jz_mean == pytest.approx(expected, abs=1e-12)
        assert point.jz_exact == pytest.approx(expected, abs=1e-12)
        assert point.jz_variance == 0.0
        assert math.fsum(point.weights) == pytest.approx(1.0, abs=1e-12)
    assert set(result.observed_outcomes) == {"01", "10"}


def test_run_single_counts_mode():
    result = run_single(_small_single())
    first = result.points[0]
    assert first.jz_mean == 0.5 and first.jz_variance == 0.0
    total = 256 * 5
    for point in result.points:
        assert sum(point.weight_counts) == total
        assert math.fsum(point.weights) == pytest.approx(1.0, abs=1e-12)
        band = 5 * math.sqrt(point.jz_variance) + 5e-4
        assert abs(point.jz_mean - point.jz_exact) <= band


def test_run_single_is_deterministic():
    a = result_to_csv(run_single(_small_single()))
    b = result_to_csv(run_single(_small_single()))
    assert a == b
    c = result_to_csv(run_single(_small_single(seed=43)))
    assert a != c


def test_run_single_rejects_mismatched_config():
    with pytest.raises(ValueError):
        run_single(ExperimentConfig("collective", initial=3))
    with pytest.raises(ValueError):
        run_collective(ExperimentConfig("single"))


def test_run_collective_no_decay_conditions():
    dark = run_collective(_small_collective(1))
    assert dark.observed_outcomes == ("0011",)
    assert all(p.jz_mean == 0.0 and p.jz_variance == 0.0 for p in dark.points)
    assert all(p.weights[0] == 1.0 for p in dark.points)

    bottom = run_collective(_small_collective(2))
    assert bottom.observed_outcomes == ("1111",)
    assert all(p.jz_mean == -1.0 for p in bottom.points)


def test_run_collective_outcome_supports():
    top = run_collective(_small_collective(3))
    assert set(top.observed_outcomes) <= {"0111", "1010", "1101"}
    middle = run_collective(_small_collective(4))
    assert set(middle.observed_outcomes) <= {"1011", "1110"}


def test_run_collective_rows_stay_inside_statistical_band():
    for initial in (3, 4, 5, 6):
        result = run_collective(_small_collective(initial, n_shots=1024, n_ave=10))
        for point in result.points:
            band = 5 * math.sqrt(point.jz_variance) + 5e-4
            assert abs(point.jz_mean - point.jz_exact) <= band


def test_run_collective_exact_mode_matches_kraus_route():
    result = run_collective(ExperimentConfig("collective", initial=5, exact=True))
    prep = prepare_initial(5)
    vec = apply_circuit(prep, basis_state(4, 0))
    rho0 = np.outer(vec, vec.conj())
    for point, t in zip(result.points, collective_times()):
        out = rho_out_two(rho0, thetas_two(t, 1.0))
        expected = float(np.real(out[1, 1] - out[3, 3]))
        assert point.jz_mean == pytest.approx(expected, abs=1e-12)
        assert math.fsum(point.weights) == pytest.approx(1.0, abs=1e-12)


def test_bell_like_initials_share_the_exact_curve():
    a = run_collective(ExperimentConfig("collective", initial=5, exact=True))
    b = run_collective(ExperimentConfig("collective", initial=6, exact=True))
    for pa, pb in zip(a.points, b.points):
        assert abs(pa.jz_exact - pb.jz_exact) <= 1e-12


def test_run_verify_reports_all_green():
    report = run_verify()
    assert report.ok
    names = [c.name for c in report.checks]
    assert len(names) == len(set(names))
    probe = [c for c in report.checks if "probe" in c.name]
    assert len(probe) == 1 and probe[0].passed and probe[0].max_diff > 1.0
    assert report.lines()[-1].endswith("all passed")


def test_csv_header_and_shape():
    text = result_to_csv(run_single(_small_single()))
    lines = text.split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[0] == (
        "t,theta21,theta32,theta31,w0,w1,w2,w3,jz_mean,jz_var,jz_exact_me,n_shots,n_ave,seed"
    )
    assert len(lines) == 12 and lines[-1] == ""
    assert "\r" not in text


def test_csv_single_rows_repeat_theta_and_blank_high_weights():
    result = run_single(_small_single())
    rows = result_to_csv(result).strip().split("\n")[1:]
    for row, point in zip(rows, result.points):
        fields = row.split(",")
        assert len(fields) == len(CSV_COLUMNS)
        assert fields[1] == fields[2] == fields[3] == format(point.thetas[0], ".17g")
        assert fields[6] == "" and fields[7] == ""
        assert fields[8] == format(point.jz_mean, ".17g")
        assert fields[11:] == ["256", "5", "42"]


def test_csv_collective_rows_fill_all_columns():
    result = run_collective(_small_collective(3))
    rows = result_to_csv(result).strip().split("\n")[1:]
    assert len(rows) == 10
    for row, point in zip(rows, result.points):
        fields = row.split(",")
        assert fields[0] == format(point.time, ".17g")
        assert fields[1] == format(point.thetas[0], ".17g")
        assert fields[2] == format(point.thetas[1], ".17g")
        assert fields[3] == format(point.thetas[2], ".17g")
        assert all(fields[4:8])


def test_json_round_trip():
    result = run_collective(_small_collective(4))
    text = result_to_json(result)
    assert text.endswith("\n")
    payload = json.loads(text)
    assert payload["mode"] == "collective"
    assert payload["initial"] == 4
    assert len(payload["points"]) == 10
    assert payload["points"][3]["jz_mean"] == result.points[3].jz_mean
    assert payload["observed_outcomes"] == list(result.observed_outcomes)


def test_write_output_uses_lf_and_utf8(tmp_path):
    target = tmp_path / "out.csv"
    write_output("a,b\n1,2\n", str(target))
    assert target.read_bytes() == b"a,b\n1,2\n"


def test_cli_verify_exits_zero(capsys):
    assert main(["--experiment", "verify"]) == 0
    out = capsys.readouterr().out
    assert "all passed" in out


def test_cli_config_error_exits_two(capsys):
    assert main(["--experiment", "collective"]) == 2
    assert "initial" in capsys.readouterr().err


def test_cli_rejects_unknown_experiment():
    with pytest.raises(SystemExit) as excinfo:
        main(["--experiment", "both"])
    assert excinfo.value.code == 2


def test_cli_stdout_is_byte_identical_between_runs(capsys):
    args = ["--experiment", "single", "--shots", "128", "--ave", "3"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    second = capsys.readouterr().out
    assert first == second
    assert first.startswith("t,theta21")


def test_cli_writes_requested_file(tmp_path):
    out = tmp_path / "run.json"
    code = main(
        [
            "--experiment",
            "collective",
            "--initial",
            "2",
            "--shots",
            "64",
            "--ave",
            "2",
            "--format",
            "json",
            "--out",
            str(out),
            "--exact",
        ]
    )
    assert code == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["exact"] is True
    assert payload["points"][0]["jz_exact_me"] == -1.0
