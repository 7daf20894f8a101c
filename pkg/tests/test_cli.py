import json

import numpy as np
import pytest

from csv_io import assert_floats_round_trip, column, read_table
from lorenz_vqls.cli import main


def run_cli(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def last_json(stdout):
    lines = [ln for ln in stdout.strip().splitlines() if ln.strip()]
    return json.loads(lines[-1])


def test_simulate_zero_start(tmp_path, capsys):
    out = tmp_path / "zero.csv"
    code, stdout, _ = run_cli(
        capsys, "simulate", "--start", "0,0,0", "--steps", "5", "--h", "0.01",
        "--solver", "explicit", "--out", str(out),
    )
    assert code == 0
    header, rows, comments = read_table(out)
    assert header == ["step", "t", "x", "y", "z"]
    assert len(rows) == 6 and not comments
    for row in rows:
        assert row[2:] == ["0", "0", "0"]
    summary = last_json(stdout)
    assert summary["command"] == "simulate" and summary["diverged_at"] is None


def test_simulate_attractor_preset(tmp_path, capsys):
    out = tmp_path / "attractor.csv"
    code, stdout, _ = run_cli(capsys, "simulate", "--preset", "attractor", "--out", str(out))
    assert code == 0
    header, rows, _ = read_table(out)
    assert len(rows) == 2001
    for row in rows[:50]:
        assert_floats_round_trip(row[1:])
    assert last_json(stdout)["rows"] == 2001


def test_simulate_divergence_marker(tmp_path, capsys):
    out = tmp_path / "blowup.csv"
    code, stdout, _ = run_cli(
        capsys, "simulate", "--start", "30,-40,10", "--h", "0.4", "--steps", "100",
        "--solver", "explicit", "--out", str(out),
    )
    assert code == 2
    header, rows, comments = read_table(out)
    summary = last_json(stdout)
    n = summary["diverged_at"]
    assert isinstance(n, int) and 1 <= n <= 100
    assert comments == [f"# diverged at step {n}"]
    assert len(rows) == n  # states before the failed step are retained


def test_simulate_vqls_columns(tmp_path, capsys):
    out = tmp_path / "vq.csv"
    code, stdout, _ = run_cli(
        capsys, "simulate", "--solver", "vqls", "--steps", "2", "--h", "0.005",
        "--seed", "0", "--out", str(out),
    )
    assert code == 0
    header, rows, _ = read_table(out)
    assert header == ["step", "t", "x", "y", "z", "cost", "iterations", "residual"]
    assert rows[0][5:] == ["", "", ""]
    assert all(field != "" for field in rows[1][5:])
    assert float(rows[1][7]) <= 1e-3


def test_simulate_vqls_requires_seed(tmp_path, capsys):
    out = tmp_path / "x.csv"
    code, _, err = run_cli(
        capsys, "simulate", "--solver", "vqls", "--steps", "1", "--out", str(out)
    )
    assert code == 1
    assert "seed" in err


def test_compare_self_mode(tmp_path, capsys):
    out = tmp_path / "self.csv"
    code, stdout, _ = run_cli(
        capsys, "compare", "--self-compare", "--steps", "50", "--h", "0.001",
        "--out", str(out),
    )
    assert code == 0
    header, rows, _ = read_table(out)
    assert header == [
        "step", "t", "x_c", "y_c", "z_c", "x_q", "y_q", "z_q",
        "rel_err", "cost", "residual",
    ]
    assert all(float(v) <= 1e-9 for v in column(header, rows, "rel_err"))
    assert last_json(stdout)["mean_rel_err"] <= 1e-9


def test_compare_missing_out(capsys):
    code, _, err = run_cli(capsys, "compare", "--steps", "10")
    assert code == 1
    assert "output" in err


def test_compare_small_vqls_run(tmp_path, capsys):
    out = tmp_path / "cmp.csv"
    code, stdout, _ = run_cli(
        capsys, "compare", "--steps", "3", "--h", "0.001", "--seed", "0",
        "--out", str(out),
    )
    assert code == 0
    header, rows, _ = read_table(out)
    assert len(rows) == 4
    summary = last_json(stdout)
    assert summary["mean_rel_err"] <= 0.05
    costs = column(header, rows, "cost")
    assert costs[0] == "" and all(c != "" for c in costs[1:])


def test_richardson_origin_is_flat(tmp_path, capsys):
    out = tmp_path / "rich.csv"
    code, stdout, _ = run_cli(
        capsys, "richardson", "--start", "0,0,0", "--h-list", "0.001",
        "--steps", "5", "--out", str(out),
    )
    assert code == 0
    header, rows, _ = read_table(out)
    assert header == ["step", "h", "e_x", "e_y", "e_z", "total"]
    assert all(v == "0" for v in column(header, rows, "total"))
    assert last_json(stdout)["mean_total"]["0.001"] == 0.0


def test_richardson_halving_ratio(tmp_path, capsys):
    out = tmp_path / "rich2.csv"
    code, stdout, _ = run_cli(
        capsys, "richardson", "--start", "1,-2,4", "--h-list", "0.001,0.0005",
        "--steps", "200", "--solver", "direct", "--out", str(out),
    )
    assert code == 0
    means = last_json(stdout)["mean_total"]
    ratio = means["0.001"] / means["0.0005"]
    assert 1.5 <= ratio <= 2.5


def test_richardson_malformed_h_list(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "richardson", "--h-list", "1e-3;5e-4", "--out", str(tmp_path / "x.csv")
    )
    assert code == 1


def test_cond_sweep_bound(tmp_path, capsys):
    out = tmp_path / "cond.csv"
    code, stdout, _ = run_cli(
        capsys, "cond-sweep", "--h-min", "0.001", "--h-max", "0.1",
        "--count", "100", "--out", str(out),
    )
    assert code == 0
    header, rows, _ = read_table(out)
    assert header == ["h", "kappa_A", "kappa_dilation"]
    assert len(rows) == 100
    assert last_json(stdout)["max_kappa_A"] <= 70.0


def test_cond_sweep_single_point_matches_oracle(tmp_path, capsys):
    out = tmp_path / "cond1.csv"
    code, stdout, _ = run_cli(
        capsys, "cond-sweep", "--h-min", "0.01", "--h-max", "0.1",
        "--count", "1", "--out", str(out),
    )
    assert code == 0
    header, rows, _ = read_table(out)
    from lorenz_vqls import LorenzParams, build_nonlinear_system, hermitian_dilation

    oracle = np.linalg.cond(hermitian_dilation(build_nonlinear_system(LorenzParams(), 0.01)))
    assert float(rows[0][2]) == pytest.approx(oracle, rel=1e-10)


def test_cond_sweep_bad_range(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "cond-sweep", "--h-min", "0.1", "--h-max", "0.01",
        "--out", str(tmp_path / "x.csv"),
    )
    assert code == 1


def test_decompose_identity_file(tmp_path, capsys):
    src = tmp_path / "eye.txt"
    src.write_text("1 0\n0 1\n")
    out = tmp_path / "eye.pauli"
    code, stdout, _ = run_cli(capsys, "decompose", str(src), "--out", str(out))
    assert code == 0
    assert out.read_text() == "I 1 0\n"
    assert last_json(stdout)["round_trip_error"] <= 1e-12


def test_decompose_three_by_three_padding(tmp_path, capsys):
    src = tmp_path / "m3.txt"
    src.write_text("1 2 0\n2 3 1\n0 1 5\n")
    out = tmp_path / "m3.pauli"
    code, _, err = run_cli(capsys, "decompose", str(src), "--out", str(out))
    assert code == 1
    code, stdout, _ = run_cli(capsys, "decompose", str(src), "--pad", "--out", str(out))
    assert code == 0
    labels = [line.split()[0] for line in out.read_text().splitlines()]
    assert all(len(label) == 2 for label in labels)
    assert labels == sorted(labels)
    assert last_json(stdout)["padded_to"] == 4


def test_decompose_complex_entries(tmp_path, capsys):
    src = tmp_path / "c.txt"
    src.write_text("1 1-2j\n1+2j 3\n")
    out = tmp_path / "c.pauli"
    code, stdout, _ = run_cli(capsys, "decompose", str(src), "--out", str(out))
    assert code == 0
    assert last_json(stdout)["round_trip_error"] <= 1e-12


def test_decompose_lorenz_cost_hamiltonian(tmp_path, capsys):
    out = tmp_path / "hg.pauli"
    code, stdout, _ = run_cli(
        capsys, "decompose", "lorenz-HG", "--h", "0.01", "--start", "1,-2,4",
        "--out", str(out),
    )
    assert code == 0
    summary = last_json(stdout)
    assert summary["round_trip_error"] <= 1e-12
    lines = out.read_text().splitlines()
    assert lines == sorted(lines)


def test_decompose_unreadable_file(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "decompose", str(tmp_path / "missing.txt"), "--out", str(tmp_path / "x")
    )
    assert code == 1


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "preset = attractor\n"
        "steps = 7\n"
        "h = 0.002  # overrides the preset value\n"
    )
    out = tmp_path / "cfg.csv"
    code, stdout, _ = run_cli(
        capsys, "simulate", "--config", str(cfg), "--steps", "4", "--out", str(out)
    )
    assert code == 0
    header, rows, _ = read_table(out)
    assert len(rows) == 5  # flag --steps 4 beats config steps 7
    assert float(rows[1][1]) == pytest.approx(0.002)  # config h beats preset h
    # preset start (1, -2, 4) survives where nothing overrides it
    assert float(rows[0][2]) == 1.0 and float(rows[0][3]) == -2.0


def test_config_file_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("wibble = 3\n")
    code, _, err = run_cli(
        capsys, "simulate", "--config", str(cfg), "--out", str(tmp_path / "x.csv")
    )
    assert code == 1
    assert "wibble" in err


def test_byte_identical_reruns(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["simulate", "--start", "1,-2,4", "--h", "0.005", "--steps", "50",
            "--solver", "direct"]
    assert run_cli(capsys, *args, "--out", str(a))[0] == 0
    assert run_cli(capsys, *args, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_byte_identical_vqls_reruns(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["simulate", "--solver", "vqls", "--steps", "2", "--h", "0.005",
            "--seed", "3"]
    assert run_cli(capsys, *args, "--out", str(a))[0] == 0
    assert run_cli(capsys, *args, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_byte_identical_across_thread_counts(tmp_path, capsys):
    a, b = tmp_path / "t1.csv", tmp_path / "t4.csv"
    args = ["cond-sweep", "--h-min", "0.001", "--h-max", "0.1", "--count", "60"]
    assert run_cli(capsys, *args, "--threads", "1", "--out", str(a))[0] == 0
    assert run_cli(capsys, *args, "--threads", "4", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_usage_errors_exit_one(capsys):
    assert run_cli(capsys, "simulate", "--no-such-flag")[0] == 1
    assert run_cli(capsys, "frobnicate")[0] == 1
    assert run_cli(capsys, "simulate", "--start", "1,2", "--out", "/tmp/x.csv")[0] == 1
    assert run_cli(capsys, "simulate", "--solver", "cheating", "--out", "/tmp/x.csv")[0] == 1


def test_unwritable_output_exits_one(capsys):
    code, _, err = run_cli(
        capsys, "simulate", "--steps", "2", "--out", "/proc/definitely/not/writable.csv"
    )
    assert code == 1
