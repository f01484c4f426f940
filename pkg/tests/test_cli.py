"""Command-line interface: outputs, formats, exit codes, reproducibility."""

import json

import pytest

from cmgiant.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ----------------------------------------------------------------------
# solve


def test_solve_inline(capsys):
    code, out, _ = run(capsys, "solve", "--pmf", "1:0.5,3:0.5")
    assert code == 0
    payload = json.loads(out)
    assert payload == {"mu": 2.0, "nu": 1.5, "z_tilde": 0.333333, "xi": 0.814815}


def test_solve_point_mass(capsys):
    code, out, _ = run(capsys, "solve", "--pmf", "3:1.0")
    payload = json.loads(out)
    assert code == 0 and payload["z_tilde"] == 0.0 and payload["xi"] == 1.0


def test_solve_two_regular_exits_2(capsys):
    code, _, err = run(capsys, "solve", "--pmf", "2:1.0")
    assert code == 2 and "DegenerateTwoRegular" in err


def test_solve_bad_pmf_exits_2(capsys):
    code, _, err = run(capsys, "solve", "--pmf", "1:0.5,3:0.4")
    assert code == 2 and "SumNotOne" in err


def test_solve_json_errors_flag(capsys):
    code, _, err = run(capsys, "solve", "--pmf", "2:1.0", "--json-errors")
    assert code == 2
    payload = json.loads(err)
    assert payload["error"] == "DegenerateTwoRegular"


def test_solve_requires_one_input_source(capsys):
    code, _, err = run(capsys, "solve")
    assert code == 2
    code, _, err = run(capsys, "solve", "--pmf", "3:1.0", "--pmf-file", "x.json")
    assert code == 2


def test_solve_from_text_file(tmp_path, capsys):
    path = tmp_path / "dist.txt"
    path.write_text("# comment\n1\t0.5\n3\t0.5\n")
    code, out, _ = run(capsys, "solve", "--pmf-file", str(path))
    assert code == 0 and json.loads(out)["xi"] == 0.814815


def test_solve_from_json_file(tmp_path, capsys):
    path = tmp_path / "dist.json"
    path.write_text(json.dumps({"probs": [[1, 0.5], [3, 0.5]]}))
    code, out, _ = run(capsys, "solve", "--pmf-file", str(path))
    assert code == 0 and json.loads(out)["nu"] == 1.5


def test_solve_csv_format(capsys):
    code, out, _ = run(capsys, "solve", "--pmf", "1:0.5,3:0.5", "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[0] == "mu,nu,z_tilde,xi"
    assert lines[1].split(",")[3] == "0.814815"


# ----------------------------------------------------------------------
# bounds and table1


def test_bounds_json(capsys):
    code, out, _ = run(capsys, "bounds", "--prefix", "0.31,0.31,0.21", "--mu", "3")
    assert code == 0
    payload = json.loads(out)
    assert payload["feasible"] is True
    assert abs(payload["kappa"] - 1.44 / 0.17) < 1e-9
    assert payload["cond_a"] and payload["cond_b"]


def test_bounds_infeasible_reported_not_fatal(capsys):
    code, out, _ = run(capsys, "bounds", "--prefix", "0.1,0.1", "--mu", "1.0")
    assert code == 0
    assert json.loads(out)["feasible"] is False


def test_table1_csv(capsys):
    code, out, _ = run(capsys, "table1")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 7
    first = lines[1].split(",")
    assert first[4:] == ["0.9140", "0.9504", "0.9508"]
    last = lines[6].split(",")
    assert last[4:] == ["0.7047", "0.8836", "0.8851"]


def test_table1_to_file_byte_identical(tmp_path, capsys):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "table1", "--output", str(p1))[0] == 0
    assert run(capsys, "table1", "--output", str(p2))[0] == 0
    assert p1.read_bytes() == p2.read_bytes()


# ----------------------------------------------------------------------
# maxgap and figures


def test_maxgap_small_grid(tmp_path, capsys):
    fig3 = tmp_path / "fig3.csv"
    png = tmp_path / "fig3.png"
    code, out, _ = run(
        capsys, "maxgap", "--L", "2", "--mu-lo", "2.0", "--mu-hi", "2.4",
        "--mu-step", "0.2", "--step", "0.1",
        "--figure3-output", str(fig3), "--plot", str(png),
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "L,max_gap,prefix,mu,lower_thm_a,upper_thm_b"
    assert len(lines) == 2
    assert fig3.read_text().splitlines()[0] == "mu,max_gap,best_L"
    assert png.stat().st_size > 0


def test_maxgap_json_format(capsys):
    code, out, _ = run(
        capsys, "maxgap", "--L", "2", "--mu-lo", "2.0", "--mu-hi", "2.0",
        "--mu-step", "0.2", "--step", "0.5", "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert "per_L" in payload and "2" in payload["per_L"]


def test_figures_1a_csv_and_plot(tmp_path, capsys):
    png = tmp_path / "fig1a.png"
    code, out, _ = run(capsys, "figures", "--which", "1a", "--plot", str(png))
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "control,xi,nu"
    assert len(lines) == 47
    assert png.stat().st_size > 0


def test_figures_unknown_exits_2(capsys):
    code, _, err = run(capsys, "figures", "--which", "nope")
    assert code == 2


# ----------------------------------------------------------------------
# simulate


def test_simulate_deterministic_json(capsys):
    args = ("simulate", "--pmf", "3:1.0", "--n", "10000", "--reps", "2",
            "--seed", "7")
    code, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["n"] == 10000 and len(payload["fractions"]) == 2
    assert payload["mean_fraction"] > 0.99


def test_simulate_csv_rows(capsys):
    code, out, _ = run(capsys, "simulate", "--pmf", "1:0.5,3:0.5", "--n", "1000",
                       "--reps", "3", "--seed", "1", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "replica,fraction"
    assert len(lines) == 4


def test_simulate_requires_seed(capsys):
    code, _, err = run(capsys, "simulate", "--pmf", "3:1.0", "--n", "100",
                       "--reps", "1")
    assert code == 2 and "seed" in err


# ----------------------------------------------------------------------
# config file


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"pmf": "1:0.5,3:0.5"}))
    code, out, _ = run(capsys, "solve", "--config", str(cfg))
    assert code == 0 and json.loads(out)["xi"] == 0.814815


def test_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"pmf": "1:0.5,3:0.5", "format": "csv"}))
    code, out, _ = run(capsys, "solve", "--config", str(cfg), "--pmf", "3:1.0")
    assert code == 0
    assert out.splitlines()[1].split(",")[3] == "1.0"


def test_missing_config_file_exits_2(capsys):
    code, _, err = run(capsys, "solve", "--pmf", "3:1.0", "--config", "/no/such.json")
    assert code == 2
