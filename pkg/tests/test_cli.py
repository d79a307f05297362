import csv
import io
import json
from math import pi, sin, sqrt

import pytest

from svetbound import cli, svetlichny


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bound_at_tau_half(capsys):
    code, out, _ = run(capsys, "bound", "--family", "gghz", "--n", "5", "--tau", "0.5")
    report = json.loads(out)
    assert code == 0
    assert abs(report["analytic_max"] - 16) <= 1e-12
    assert report["violates"] is False


def test_bound_ms_biseparable(capsys):
    code, out, _ = run(capsys, "bound", "--family", "ms", "--n", "4", "--alpha", "0")
    assert code == 0 and json.loads(out)["analytic_max"] == 8 and not json.loads(out)["violates"]


def test_bound_ghz(capsys):
    _, out, _ = run(capsys, "bound", "--family", "gghz", "--n", "3", "--alpha", "0.7853981634")
    assert abs(json.loads(out)["analytic_max"] - 4 * sqrt(2)) <= 1e-9


def test_bound_fields(capsys):
    _, out, _ = run(capsys, "bound", "--family", "ms", "--n", "5", "--alpha", "0.3")
    assert set(json.loads(out)) == {
        "family", "num_qubits", "alpha", "variant_best", "lhv_bound",
        "algebraic_cap", "analytic_max", "tangle", "violates", "numeric_max",
    }


@pytest.mark.parametrize(
    "argv",
    [
        ["bound", "--family", "gghz", "--n", "3", "--alpha", "0.1", "--tau", "0.2"],
        ["bound", "--family", "gghz", "--n", "3"],
        ["bound", "--family", "gghz", "--n", "3", "--alpha", "2.0"],
        ["bound", "--family", "ms", "--n", "2", "--alpha", "0.1"],
        ["bound", "--family", "ms", "--n", "5", "--tau", "0.3"],
        ["bound", "--family", "xyz", "--n", "3", "--alpha", "0.1"],
        ["optimize", "--family", "gghz", "--n", "15", "--alpha", "0.1"],
        ["sweep", "--family", "gghz", "--n", "4", "--count", "1"],
        ["sweep", "--family", "gghz", "--n", "4-x"],
        ["verify", "--level", "huge"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_thread_env_validated(capsys, monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "zero")
    assert run(capsys, "sweep", "--family", "ms", "--n", "3", "--count", "3")[0] == 2


@pytest.mark.parametrize(
    "family, n, alpha, expected",
    [("gghz", "3", repr(pi / 4), 4 * sqrt(2)), ("ms", "5", repr(pi / 3), 16 * sqrt(1.75)), ("gghz", "4", "0", 4.0)],
)
def test_optimize(capsys, family, n, alpha, expected):
    code, out, _ = run(capsys, "optimize", "--family", family, "--n", n, "--alpha", alpha, "--restarts", "16")
    result = json.loads(out)
    assert code == 0
    assert abs(result["best_value"] - expected) <= 1e-6
    assert len(result["best_settings"]) == int(n)
    assert set(result["best_settings"][0]) == {"theta0", "phi0", "theta1", "phi1"}
    assert result["variant"] in ("plus", "minus")
    assert result["stationarity_residual"] <= 1e-4


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_header_and_optimizer(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "gghz", "--n", "4", "--count", "25", "--optimize", "--restarts", "16")
    assert code == 0
    assert out.splitlines()[0] == ",".join(cli.SWEEP_COLUMNS)
    rows = parse_csv(out)
    assert len(rows) == 25
    for row in rows:
        assert abs(float(row["numeric_max"]) - float(row["analytic_max"])) <= 1e-5
        assert 0 <= int(row["optimizer_restarts_converged"]) <= 16


def test_sweep_ms_analytic_column(capsys):
    rows = parse_csv(run(capsys, "sweep", "--family", "ms", "--n", "3", "--count", "11")[1])
    for row in rows:
        assert abs(float(row["analytic_max"]) - 4 * sqrt(1 + sin(float(row["alpha"])) ** 2)) <= 1e-12
        assert row["numeric_max"] == "" and row["optimizer_restarts_converged"] == ""


@pytest.mark.parametrize("n", ["3", "6", "9"])
def test_tau_sweep_flips_once(capsys, n):
    rows = parse_csv(run(capsys, "sweep", "--family", "gghz", "--n", n, "--tau-range", "0.2", "0.9", "--count", "36")[1])
    flags = [r["violates"] == "true" for r in rows]
    assert sum(a != b for a, b in zip(flags, flags[1:])) == 1
    assert not flags[0] and flags[-1]


def test_sweep_round_trip(capsys, tmp_path):
    from svetbound import bounds
    from svetbound.states import FamilyParameter

    path = tmp_path / "sweep.csv"
    assert run(capsys, "sweep", "--family", "gghz", "--n", "3-6", "--count", "9", "--out", str(path))[0] == 0
    rows = parse_csv(path.read_text())
    assert [int(r["N"]) for r in rows] == [n for n in range(3, 7) for _ in range(9)]
    for row in rows:
        param = FamilyParameter(row["family"], int(row["N"]), float(row["alpha"]))
        assert abs(bounds.analytic_max(param) - float(row["analytic_max"])) <= 1e-12


def test_sweep_threads_keep_grid_order(capsys, monkeypatch):
    serial = run(capsys, "sweep", "--family", "ms", "--n", "3-5", "--count", "5")[1]
    monkeypatch.setenv(cli.THREADS_ENV, "4")
    assert run(capsys, "sweep", "--family", "ms", "--n", "3-5", "--count", "5")[1] == serial


def test_sweep_json(capsys):
    rows = json.loads(run(capsys, "sweep", "--family", "ms", "--n", "4", "--count", "3", "--format", "json")[1])
    assert [list(r) for r in rows] == [list(cli.SWEEP_COLUMNS)] * 3


def test_full_precision_numbers(capsys):
    rows = parse_csv(run(capsys, "sweep", "--family", "gghz", "--n", "5", "--count", "4")[1])
    assert float(rows[1]["alpha"]) == pi / 6
    assert rows[1]["alpha"] == repr(pi / 6)


def test_io_error(capsys, tmp_path):
    target = tmp_path / "missing" / "out.csv"
    assert run(capsys, "sweep", "--family", "ms", "--n", "3", "--count", "3", "--out", str(target))[0] == 3


def test_nu_table(capsys):
    code, out, _ = run(capsys, "nu-table")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "w,nu_plus,nu_minus" and len(lines) == 17
    assert lines[1:5] == ["0,1,1", "1,-1,1", "2,-1,-1", "3,1,-1"]


def test_verify_quick(capsys):
    code, out, _ = run(capsys, "verify", "--level", "quick")
    assert code == 0
    assert "FAIL" not in out


def test_verify_catches_flipped_nu(capsys, monkeypatch):
    original = svetlichny.nu
    monkeypatch.setattr(svetlichny, "nu", lambda w, v: -original(w, v))
    code, out, _ = run(capsys, "verify", "--level", "quick")
    assert code == 1
    assert any(line.startswith("FAIL") and "nu decomposition" in line for line in out.splitlines())
