import json
import math

import pytest

from wavestab.cli import run, to_json
from wavestab.waves import Model


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_threshold_json(capsys):
    code, out, _ = _run(capsys, "threshold", "--model", "boussinesq3", "--period", "10")
    assert code == 0
    d = json.loads(out)
    assert 0 < d["c_T"] < 1
    assert d["kappa_T"] == pytest.approx(0.99810, abs=1e-5)


def test_threshold_by_modulus(capsys):
    code, out, _ = _run(capsys, "threshold", "--model", "b2", "--kappa", "0.5")
    d = json.loads(out)
    assert code == 0 and set(d) == {"model", "kappa", "c_star", "T_star"}


def test_figure_5_csv(capsys):
    code, out, _ = _run(capsys, "figures", "--id", "5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "kappa,value"
    last = float(lines[-1].split(",")[1])
    assert 0.5 < last < math.sqrt(0.5) + 0.05


def test_failing_figure_claim_exits_2(capsys):
    code, out, _ = _run(capsys, "figures", "--id", "10", "--format", "json")
    assert code == 2
    assert json.loads(out)["claims"][0]["holds"] is False


def test_figure_plot(tmp_path, capsys):
    png = tmp_path / "fig1.png"
    code, _, _ = _run(capsys, "figures", "--id", "1", "--plot", str(png))
    assert code == 0
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_validate_single_point(capsys):
    code, out, _ = _run(capsys, "validate", "--model", "kgz", "--kappa", "0.96", "--w", "1")
    assert code == 0
    d = json.loads(out)
    assert d["rel_err"] <= 1e-4 and d["passed"] is True


@pytest.mark.parametrize("model,T,c", [("boussinesq2", 9.0, 0.3), ("boussinesq3", 10.0, -0.4), ("kgz", 6.0, 0.6)])
def test_wave_round_trip(capsys, model, T, c):
    code, out, _ = _run(capsys, "wave", "--model", model, "--period", str(T), "--c", str(c))
    assert code == 0
    d = json.loads(out)
    assert d["T"] == pytest.approx(T, rel=1e-10)
    assert d["c"] == pytest.approx(c, abs=1e-10)
    code, out2, _ = _run(capsys, "wave", "--model", model, "--kappa", repr(d["kappa"]), "--w", repr(d["w"]))
    assert json.loads(out2)["T"] == pytest.approx(T, rel=1e-10)


def test_wave_profile_csv_to_file(tmp_path, capsys):
    path = tmp_path / "wave.csv"
    code, out, _ = _run(capsys, "wave", "--model", "kgz", "--kappa", "0.5", "--w", "1",
                        "--format", "csv", "--grid-n", "64", "--out", str(path))
    assert code == 0 and out == ""
    data = path.read_bytes()
    assert b"\r" not in data
    lines = data.decode().splitlines()
    assert lines[0] == "x,phi,psi" and len(lines) == 65


def test_output_is_deterministic(capsys):
    a = _run(capsys, "index", "--model", "b3", "--kappa", "0.7", "--w", "0.5")[1]
    b = _run(capsys, "index", "--model", "b3", "--kappa", "0.7", "--w", "0.5")[1]
    assert a == b


def test_index_csv(capsys):
    code, out, _ = _run(capsys, "index", "--model", "kgz", "--kappa", "0.9", "--w", "1", "--format", "csv")
    header, row = out.splitlines()
    assert header.startswith("model,kappa,w,index_closed")
    assert row.startswith("kgz,0.90000000000000002,1")


def test_spectrum(capsys):
    code, out, _ = _run(capsys, "spectrum", "--model", "b2", "--kappa", "0.6", "--w", "1", "--grid-n", "128")
    d = json.loads(out)
    assert code == 0 and d["n_negative"] == 1 and d["verified"] is True


def test_pencil_single_speed(capsys):
    code, out, _ = _run(capsys, "pencil", "--model", "b3", "--period", "10", "--c", "0.8", "--grid-n", "64", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["stable"] is True and d["predicted_stable"] is True


@pytest.mark.parametrize("argv", [
    ["wave", "--model", "kgz", "--kappa", "0.5", "--c", "0.3"],
    ["wave", "--model", "kgz", "--kappa", "0.5"],
    ["wave", "--kappa", "0.5", "--w", "1"],
    ["wave", "--model", "kdv", "--kappa", "0.5", "--w", "1"],
    ["wave", "--model", "kgz", "--kappa", "1.5", "--w", "1"],
    ["wave", "--model", "kgz", "--kappa", "0.5", "--w", "1", "--grid-n", "63"],
    ["threshold", "--model", "b3", "--period", "1"],
    ["figures", "--id", "12"],
    ["nosuch"],
    [],
])
def test_usage_errors_exit_1_with_ranges(capsys, argv):
    code, out, err = _run(capsys, *argv)
    assert code == 1
    assert out == ""
    assert "admissible ranges" in err


def test_json_serialization_conventions():
    text = to_json({"a": 0.1, "b": math.inf, "c": [math.nan, 1], "m": str(Model.KGZ)})
    d = json.loads(text)
    assert d == {"a": 0.1, "b": None, "c": [None, 1], "m": "kgz"}
    assert "0.10000000000000001" in text
