import json
import math
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from soliton_metrology.cli import (Table, format_cell, main, parse_cell, parse_grid,
                                   parse_int_list, parse_real, read_table, render_csv,
                                   render_json)

COMMANDS = {
    "dynamics": ["dynamics", "--lambda", "2.0", "--p0", "0.6", "--theta0", "0", "--t-end", "20"],
    "stationary": ["stationary", "--lambda-grid", "0:2.6:27"],
    "catsize": ["catsize", "--N", "10,100", "--p0-grid", "0:1:11", "--exact"],
    "mzi-sweep": ["mzi-sweep", "--state", "noon", "--N", "4", "--lambda", "0.5", "--oracle",
                  "--phi-grid", "-pi:pi:21"],
    "sensitivity": ["sensitivity", "--N-max", "20"],
    "theta-sweep": ["theta-sweep", "--N", "1,2,3,4"],
    "verify": ["verify", "--N-max", "3"],
}


def run(tmp_path, argv, name="out", fmt="csv"):
    path = tmp_path / f"{name}.{fmt}"
    code = main(argv + ["--out", str(path), "--format", fmt])
    return code, path


def test_format_cell():
    assert format_cell(None) == "NA"
    assert format_cell(True) == "true"
    assert format_cell(3) == "3"
    assert format_cell(2.0) == "2.0"
    assert format_cell(0.1) == "0.10000000000000001"
    assert format_cell(math.inf) == "inf"


@given(st.floats(allow_nan=False))
def test_float_cells_round_trip(x):
    assert parse_cell(format_cell(x)) == x
    assert isinstance(parse_cell(format_cell(x)), float)


@pytest.mark.parametrize("text, value", [
    ("pi", math.pi), ("-pi/2", -math.pi / 2), ("0.5pi", math.pi / 2), ("2*pi", 2 * math.pi),
    ("1.25", 1.25)])
def test_parse_real(text, value):
    assert parse_real(text) == pytest.approx(value, rel=1e-15)


def test_parse_grid_and_lists():
    g = parse_grid("-pi:pi:5")
    assert len(g) == 5 and g[0] == -math.pi and g[-1] == math.pi
    assert list(parse_grid("0.1,0.5")) == [0.1, 0.5]
    assert parse_int_list("1,2,3") == [1, 2, 3]
    for bad in ("0:1:0", "1:0", ""):
        with pytest.raises(ValueError):
            parse_grid(bad)


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_render_round_trip(fmt):
    t = Table(["a", "b", "c", "d"], [[1, 0.1, None, True], [2, -math.inf, "x", False]],
              {"k": [1, 2]})
    text = render_csv(t) if fmt == "csv" else render_json(t)
    back = read_table(text, fmt)
    assert back.columns == t.columns and back.rows == t.rows and back.metadata == t.metadata


@pytest.mark.parametrize("name", sorted(COMMANDS))
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_commands_deterministic_and_round_trip(tmp_path, name, fmt):
    code1, p1 = run(tmp_path, COMMANDS[name], "a", fmt)
    code2, p2 = run(tmp_path, COMMANDS[name], "b", fmt)
    assert code1 == code2 == 0
    assert p1.read_bytes() == p2.read_bytes()
    text = p1.read_text()
    table = read_table(text, fmt)
    assert table.rows
    rendered = render_csv(table) if fmt == "csv" else render_json(table)
    assert rendered == text


def test_threads_do_not_change_output(tmp_path):
    argv = ["catsize", "--N", "10,100", "--p0-grid", "0:1:21", "--exact"]
    _, a = run(tmp_path, argv, "a")
    _, b = run(tmp_path, argv + ["--threads", "4"], "b")
    assert a.read_bytes() == b.read_bytes()


def test_dynamics_output(tmp_path):
    argv = ["dynamics", "--lambda", "2.0", "--p0", "0.6", "--theta0", "0", "--t-end", "100"]
    code, path = run(tmp_path, argv)
    assert code == 0
    t = read_table(path.read_text())
    assert t.columns[:3] == ["t_prime", "p", "theta"]
    assert t.metadata["max_energy_drift"] <= 1e-9
    drift = t.columns.index("energy_drift")
    assert max(r[drift] for r in t.rows) <= 1e-9


def test_dynamics_from_microscopic_parameters(tmp_path):
    code, path = run(tmp_path, ["dynamics", "--U", "1", "--kappa", "1", "--N", "4", "--p0", "0.2",
                                "--t-end", "5"])
    assert code == 0
    assert read_table(path.read_text()).metadata["lambda"] == 1.0


@pytest.mark.parametrize("argv", [
    ["dynamics", "--lambda", "-1", "--p0", "0.5"],
    ["dynamics", "--lambda", "1", "--p0", "1.2"],
    ["dynamics", "--lambda", "1", "--U", "1", "--kappa", "1", "--N", "4", "--p0", "0.1"],
    ["dynamics", "--p0", "0.1"],
    ["catsize", "--p0-grid", "0:1:0"],
    ["theta-sweep", "--N", "0"],
    ["verify", "--N-max", "0"],
    ["catsize", "--threads", "0"],
    ["mzi-sweep", "--state", "scs", "--N", "4"],
    ["mzi-sweep", "--state", "noon", "--N", "4", "--lambda", "3.0"],
    ["dynamics", "--lambda", "1", "--p0", "0.1", "--rel-tol", "0"],
])
def test_configuration_errors_exit_2(tmp_path, argv):
    out = tmp_path / "x.csv"
    assert main(argv + ["--out", str(out)]) == 2
    assert not out.exists()


def test_argument_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 2


def test_numerical_failure_exit_3(tmp_path):
    # a quadrature budget too small to converge the exact overlap
    code = main(["catsize", "--N", "10", "--p0-grid", "0.5", "--exact", "--rel-tol", "1e-15",
                 "--abs-tol", "1e-300", "--out", str(tmp_path / "x.csv")])
    assert code == 3


def test_stationary_table(tmp_path):
    code, path = run(tmp_path, ["stationary", "--lambda", "2.0", "--branch", "set1"])
    t = read_table(path.read_text())
    assert code == 0
    p0 = sorted(r[t.columns.index("p0")] for r in t.rows)
    assert p0 == pytest.approx([-math.sqrt(0.5), math.sqrt(0.5)], rel=1e-14)


def test_catsize_table(tmp_path):
    code, path = run(tmp_path, ["catsize", "--N", "100", "--p0-grid", "0:1:3"])
    t = read_table(path.read_text())
    col = {c: i for i, c in enumerate(t.columns)}
    rows = {r[col["p0"]]: r for r in t.rows}
    assert rows[0.0][col["cat_size"]] == 1.0
    assert rows[0.5][col["cat_size"]] == pytest.approx(6.9e14, rel=0.01)
    assert rows[1.0][col["cat_size"]] == math.inf
    assert rows[0.5][col["X_exact"]] is None


def test_sensitivity_noon_column(tmp_path):
    code, path = run(tmp_path, ["sensitivity", "--state", "noon", "--N-max", "100"])
    t = read_table(path.read_text())
    col = {c: i for i, c in enumerate(t.columns)}
    noon = [r for r in t.rows if r[col["series"]] == "noon"]
    assert len(noon) == 100
    for r in noon:
        assert r[col["sqrtN_sigma_phi"]] == pytest.approx(1 / math.sqrt(r[col["N"]]), rel=1e-14)


def test_theta_sweep_table(tmp_path):
    code, path = run(tmp_path, ["theta-sweep", "--N", "1,2,3,4"])
    t = read_table(path.read_text())
    col = {c: i for i, c in enumerate(t.columns)}
    for n in (1, 2, 3, 4):
        rows = [r for r in t.rows if r[col["N"]] == n]
        assert all(r[col["Theta_max"]] == pytest.approx(1.58 / n ** 2) for r in rows)
        inside = [r for r in rows if r[col["sigma_theta"]] is not None]
        outside = [r for r in rows if r[col["sigma_theta"]] is None]
        assert all(r[col["Theta"]] <= r[col["Theta_max"]] * (1 + 1e-12) for r in inside)
        assert all(r[col["Theta"]] > r[col["Theta_max"]] for r in outside)
        edge = [r for r in rows if r[col["at_boundary"]]]
        assert len(edge) == 1 and edge[0][col["sigma_theta"]] == 0.0


def test_mzi_sweep_oracle_columns(tmp_path):
    code, path = run(tmp_path, COMMANDS["mzi-sweep"])
    t = read_table(path.read_text())
    col = {c: i for i, c in enumerate(t.columns)}
    oracle = [c for c in t.columns if "oracle" in c]
    assert oracle
    for r in t.rows:
        assert abs(r[col["mean"]] - r[col[oracle[0]]]) <= 1e-10


def test_verify_pass_and_fault_injection(capsys):
    assert main(["verify", "--N-max", "1"]) == 0
    assert "ALL PASS" in capsys.readouterr().out
    assert main(["verify", "--N-max", "4", "--alpha", "0.3"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "stationary_points" in out


def test_verify_default_n12(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") >= 10


def test_stdout_default(capsys):
    assert main(["stationary", "--lambda", "0.79"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# version")
    t = read_table(out)
    assert len(t.rows) == 2


def test_module_entry_point(tmp_path):
    path = tmp_path / "s.json"
    proc = subprocess.run([sys.executable, "-m", "soliton_metrology", "stationary", "--lambda",
                           "2.0", "--format", "json", "--out", str(path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(path.read_text())
    assert doc["metadata"]["command"] == "stationary"
