"""Tests for the command-line entry point."""

import json
import math

import pytest

from poisson_lebesgue import __version__
from poisson_lebesgue.__main__ import main
from poisson_lebesgue.harness import CSV_COLUMNS, write_coefficients
from poisson_lebesgue.trig import TrigPoly


@pytest.fixture(autouse=True)
def _no_progress(monkeypatch):
    monkeypatch.setenv("POISSON_LEBESGUE_NO_PROGRESS", "1")


def _stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


def test_version(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_missing_required_flag():
    with pytest.raises(SystemExit) as excinfo:
        main(["n0", "--r", "0.5"])
    assert excinfo.value.code == 2


def test_option_prefixes_are_not_expanded():
    with pytest.raises(SystemExit) as excinfo:
        main(["--verb", "n0", "--alpha", "1", "--r", "0.5", "--p", "1"])
    assert excinfo.value.code == 2


def test_is_integral_v_flag_is_not_taken_for_top_level_option(capsys):
    assert main(["-v", "is-integral", "--s", "inf", "--v", "3"]) == 0
    assert _stdout_json(capsys) == pytest.approx(1.0)


def test_n0(capsys):
    assert main(["n0", "--alpha", "1", "--r", "0.5", "--p", "1"]) == 0
    assert _stdout_json(capsys) == 1225


def test_hyp2f1(capsys):
    assert main(["hyp2f1", "--a", "0.5", "--b", "0.5", "--c", "1.5"]) == 0
    assert _stdout_json(capsys) == pytest.approx(math.pi / 2.0, abs=1e-10)


def test_hyp2f1_series(capsys):
    assert main(["hyp2f1", "--a", "0.5", "--b", "0.5", "--c", "1.5", "--series"]) == 0
    assert _stdout_json(capsys) == pytest.approx(math.pi / 2.0, rel=1e-8)


def test_domain_error_payload(capsys):
    assert main(["hyp2f1", "--a", "1", "--b", "1", "--c", "2"]) == 3
    captured = capsys.readouterr()
    payload = json.loads(captured.err.strip().splitlines()[-1])
    assert payload["error"] == "DivergenceError"
    assert payload["context"] == {}
    assert captured.out == ""


@pytest.mark.parametrize(
    "argv",
    [
        ["is-integral", "--s", "0.5", "--v", "2"],
        ["rhs", "--alpha", "1", "--r", "0.5", "--p", "0.5", "--n", "10"],
        ["kernel-norm", "--alpha", "1", "--r", "0.5", "--n", "10", "--s", "fast"],
    ],
)
def test_invalid_index_is_a_domain_error(argv, capsys):
    assert main(argv) == 3
    payload = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert payload["error"] == "DomainError"
    assert "index" in payload["message"]


def test_negative_upper_limit(capsys):
    assert main(["is-integral", "--s", "2", "--v", "-1"]) == 3
    assert "DomainError" in capsys.readouterr().err


def test_is_integral(capsys):
    assert main(["is-integral", "--s", "2", "--v", "1"]) == 0
    assert _stdout_json(capsys) == pytest.approx(math.sqrt(math.pi / 4.0), rel=1e-9)


def test_rhs(capsys):
    assert main(["rhs", "--alpha", "1", "--r", "0.5", "--p", "2", "--n", "100", "--en", "0.5", "--gamma", "0"]) == 0
    out = _stdout_json(capsys)
    assert set(out) == {"mantissa", "log_scale", "value"}
    assert out["log_scale"] < -5.0


def test_kernel_norm(capsys):
    argv = ["kernel-norm", "--alpha", "1", "--r", "0.5", "--n", "100", "--s", "2", "--envelope"]
    assert main(argv) == 0
    out = _stdout_json(capsys)
    assert out["s"] == 2.0
    assert out["n"] == 100
    assert out["envelope"]["log_scale"] == pytest.approx(out["norm"]["log_scale"], abs=1.0)


def test_kernel_norm_csv(capsys):
    argv = ["kernel-norm", "--alpha", "1", "--r", "0.5", "--n", "100", "--s", "inf", "--format", "csv"]
    assert main(argv) == 0
    header, row = capsys.readouterr().out.splitlines()
    assert "norm.log_scale" in header.split(",")
    assert len(header.split(",")) == len(row.split(","))


def test_best_approx(tmp_path, capsys):
    path = tmp_path / "f.json"
    write_coefficients(path, TrigPoly.cosine(6))
    assert main(["best-approx", "--p", "1", "--n", "6", str(path)]) == 0
    out = _stdout_json(capsys)
    assert out["upper"] == pytest.approx(4.0, rel=1e-9)
    assert "argmin" not in out


def test_best_approx_with_argmin(tmp_path, capsys):
    path = tmp_path / "f.json"
    write_coefficients(path, TrigPoly.cosine(3) + TrigPoly.sine(1))
    assert main(["best-approx", "--p", "2", "--n", "2", "--argmin", str(path)]) == 0
    out = _stdout_json(capsys)
    assert out["argmin"]["sin"] == [1.0]


def test_best_approx_accuracy_error(tmp_path, capsys):
    path = tmp_path / "f.json"
    f = TrigPoly(0.0, [0.1, 0.2, -0.3, 0.15, 1.0, 0.4, 0.0, 0.0, 0.0], [0.0, 0.1, 0.0, -0.2, 0.3, 0.0, 0.3, 0.0, 0.25])
    write_coefficients(path, f)
    argv = ["best-approx", "--p", "1.5", "--n", "5", "--tol", "1e-12", "--max-iter", "1", str(path)]
    assert main(argv) == 4
    payload = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert payload["error"] == "AccuracyError"
    assert payload["context"]["lower"] <= payload["context"]["upper"]


def test_missing_coefficient_file(tmp_path, capsys):
    assert main(["best-approx", "--p", "1", "--n", "2", str(tmp_path / "absent.json")]) == 1
    assert "FileNotFoundError" in capsys.readouterr().err


def test_verify_with_phi_files(tmp_path, capsys):
    paths = []
    for k in (3, 6):
        path = tmp_path / f"phi{k}.json"
        write_coefficients(path, TrigPoly.cosine(k, 0.5))
        paths.append(str(path))
    argv = ["verify", "--alpha", "1", "--r", "0.5", "--p", "2", "--n", "4", "--phi", *paths]
    assert main(argv) == 0
    out = _stdout_json(capsys)
    assert out["errors"] == []
    assert [r["degenerate"] for r in out["reports"]] == [True, False]
    assert all(r["passed"] for r in out["reports"])


def test_verify_contract_error_sets_exit_code(tmp_path, capsys):
    path = tmp_path / "phi.json"
    write_coefficients(path, TrigPoly(1.0, [0.1], [0.0]))
    argv = ["verify", "--alpha", "1", "--r", "0.5", "--p", "2", "--n", "1", "--phi", str(path)]
    assert main(argv) == 3
    assert len(_stdout_json(capsys)["errors"]) == 1


def test_verify_sampled_csv(capsys):
    argv = [
        "verify", "--alpha", "1", "--r", "0.5", "--p", "2", "--n", "4",
        "--samples", "3", "--degree-cap", "16", "--seed", "3", "--format", "csv",
    ]
    assert main(argv) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 4


def test_verify_sampled_to_file(tmp_path, capsys):
    out = tmp_path / "runs" / "result.json"
    out.parent.mkdir()
    argv = [
        "verify", "--alpha", "1", "--r", "0.5", "--p", "2", "--n", "4",
        "--samples", "2", "--degree-cap", "16", "--out", str(out),
    ]
    assert main(argv) == 0
    summary = json.loads(capsys.readouterr().err)
    assert summary["samples"] == 2
    assert len(json.loads(out.read_text(encoding="utf-8"))["reports"]) == 2


def test_sharpness(capsys):
    argv = ["sharpness", "--alpha", "1", "--r", "0.5", "--p", "2", "--n", "64"]
    assert main(argv) == 0
    assert _stdout_json(capsys)["ratio"] == pytest.approx(1.0, abs=1e-3)


def test_check_asymptotics(capsys):
    argv = ["check-asymptotics", "--alpha", "1", "--r", "0.5", "--n", "1225", "--s", "2"]
    assert main(argv) == 0
    out = _stdout_json(capsys)
    # the s = 2 threshold lies far above n = 1225
    assert out["kernel_norm"]["in_regime"] is False
    assert out["kernel_norm"]["trunc_k"] >= 1225
    assert abs(out["is_estimate"]["implied_theta"]) < 2.0
