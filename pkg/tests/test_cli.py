"""End-to-end tests of the command-line interface."""

import json

import numpy as np
import pytest

from entwit.cli import main, parse_grid
from entwit.cli import CliError
from entwit.fileio import save_state, save_unitary_pair
from entwit.qstate import BipartiteDims, DensityMatrix, haar_random_unitary
from entwit.zoo import max_entangled


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_grid_forms():
    assert parse_grid("0.5", "--f") == [0.5]
    grid = parse_grid("0:1:0.25", "--f")
    assert np.allclose(grid, [0.0, 0.25, 0.5, 0.75, 1.0])
    grid = parse_grid("-1:1:0.5", "--f")
    assert np.allclose(grid, [-1.0, -0.5, 0.0, 0.5, 1.0])
    with pytest.raises(CliError):
        parse_grid("1:0:0.1", "--f")
    with pytest.raises(CliError):
        parse_grid("0:1:-0.1", "--f")
    with pytest.raises(CliError):
        parse_grid("a:b:c", "--f")


def test_eval_bell(capsys):
    code, out, _ = run(capsys, "eval", "--family", "max_entangled", "--n", "2")
    assert code == 0
    obj = json.loads(out)
    assert obj["dims"] == {"m": 2, "n": 2}
    assert abs(obj["w_val"] + 1.0 / 64.0) < 1e-12
    assert obj["violated"] is True


def test_eval_isotropic_h(capsys):
    code, out, _ = run(
        capsys, "eval", "--family", "isotropic", "--n", "2", "--f", "0.7")
    assert code == 0
    obj = json.loads(out)
    assert abs(obj["h_val"] - 0.1) < 1e-12
    assert obj["violated"] is False


def test_eval_missing_state(capsys):
    code, _, err = run(capsys, "eval")
    assert code == 2
    assert "--family or --input" in err


def test_eval_rejects_family_and_input(capsys, tmp_path):
    path = tmp_path / "s.json"
    save_state(str(path), max_entangled(2).density())
    code, _, err = run(
        capsys, "eval", "--family", "werner", "--input", str(path))
    assert code == 2


def test_eval_invalid_state_exit_two(capsys, tmp_path):
    bad = DensityMatrix(BipartiteDims(2, 2), np.diag([0.8, 0.4, 0.0, -0.2]))
    path = tmp_path / "bad.json"
    save_state(str(path), bad)
    code, _, err = run(capsys, "eval", "--input", str(path))
    assert code == 2
    assert "POSITIVITY" in err


def test_eval_unitaries_round_trip(capsys, tmp_path):
    rng = np.random.default_rng(23)
    u = haar_random_unitary(2, rng)
    v = haar_random_unitary(2, rng)
    path = tmp_path / "frames.json"
    save_unitary_pair(str(path), u, v)
    code, out, _ = run(
        capsys, "eval", "--family", "max_entangled", "--n", "2",
        "--unitaries", str(path))
    assert code == 0
    json.loads(out)


def test_eval_frame_dims_mismatch(capsys, tmp_path):
    path = tmp_path / "frames.json"
    save_unitary_pair(str(path), np.eye(3), np.eye(3))
    code, _, err = run(
        capsys, "eval", "--family", "max_entangled", "--n", "2",
        "--unitaries", str(path))
    assert code == 2
    assert "do not match" in err


def test_eval_random_frame_seeded(capsys):
    _, out1, _ = run(capsys, "eval", "--family", "max_entangled", "--n", "3",
                     "--random-frame", "--seed", "11")
    _, out2, _ = run(capsys, "eval", "--family", "max_entangled", "--n", "3",
                     "--random-frame", "--seed", "11")
    assert out1 == out2


def test_scan_csv_shape_and_determinism(capsys, tmp_path):
    argv = ("scan", "--family", "horodecki", "--alpha", "2:5:0.5")
    code, out1, _ = run(capsys, *argv)
    assert code == 0
    lines = out1.rstrip("\n").split("\n")
    assert lines[0].startswith("family,param,h_val")
    assert len(lines) == 8  # header + 7 grid points
    _, out2, _ = run(capsys, *argv)
    assert out1 == out2


def test_scan_json_matches_csv_count(capsys):
    code, out, _ = run(
        capsys, "scan", "--family", "isotropic", "--n", "2", "3",
        "--f", "0:1:0.25", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 10
    assert {row["family"] for row in rows} == {"isotropic:n=2", "isotropic:n=3"}


def test_scan_weighted_columns(capsys):
    code, out, _ = run(
        capsys, "scan", "--family", "horodecki", "--alpha", "3.9:4.1:0.1",
        "--weighted", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    flags = [row["aux_violated"] for row in rows]
    assert flags == [False, False, True]


def test_scan_weighted_wrong_family(capsys):
    code, _, err = run(
        capsys, "scan", "--family", "werner", "--n", "2", "--f", "0:1:0.5",
        "--weighted")
    assert code == 2
    assert "horodecki" in err


def test_scan_example4_note_and_rows(capsys):
    code, out, err = run(
        capsys, "scan", "--family", "example4", "--p", "0.2:1:0.2")
    assert code == 0
    assert "not positive semidefinite" in err
    assert len(out.rstrip("\n").split("\n")) == 6


def test_scan_plot_writes_png(capsys, tmp_path):
    csv_path = tmp_path / "scan.csv"
    code, _, _ = run(
        capsys, "scan", "--family", "werner", "--n", "2", "--f=-1:1:0.25",
        "--output", str(csv_path), "--plot")
    assert code == 0
    png = tmp_path / "scan.png"
    assert png.exists()
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_scan_plot_needs_path_or_output(capsys):
    code, _, err = run(
        capsys, "scan", "--family", "werner", "--n", "2", "--f", "0:1:0.5",
        "--plot")
    assert code == 2
    assert "--plot" in err


def test_scan_output_file_deterministic(capsys, tmp_path):
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    for path in (p1, p2):
        code, _, _ = run(
            capsys, "scan", "--family", "isotropic", "--n", "2",
            "--f", "0:1:0.1", "--optimize", "--restarts", "4",
            "--output", str(path))
        assert code == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_max_violation_report(capsys):
    code, out, _ = run(
        capsys, "max-violation", "--family", "max_entangled", "--n", "2",
        "--restarts", "4")
    assert code == 0
    obj = json.loads(out)
    assert obj["f_value"] >= 1.0 / 64.0 - 1e-8
    assert obj["violated"] is True
    assert obj["restarts_run"] == 4
    assert obj["best_u"]["d"] == 2
    # The reported frames must reproduce the reported value.
    from entwit.fileio import dict_to_unitary
    from entwit.witness import evaluate_witness

    u = dict_to_unitary(obj["best_u"])
    v = dict_to_unitary(obj["best_v"])
    ev = evaluate_witness(max_entangled(2).density(), u, v)
    assert abs(-ev.w_val - obj["f_value"]) < 1e-10


def test_distill_example4_fixed_demo(capsys):
    code, out, _ = run(capsys, "distill", "--example4", "--p", "0.5")
    assert code == 0
    obj = json.loads(out)
    assert obj["distillable_evidence"] is False
    assert obj["projected_ppt"]["is_npt"] is True
    assert abs(obj["eval"]["w_val"] - 134.0 / 5184.0) < 1e-12
    assert obj["projected_dims"] == {"m": 2, "n": 3}


def test_distill_search_bell(capsys):
    code, out, _ = run(
        capsys, "distill", "--family", "max_entangled", "--n", "2",
        "--restarts", "3")
    assert code == 0
    obj = json.loads(out)
    assert obj["distillable_evidence"] is True
    assert obj["eval"]["kind"] == "search"


def test_distill_copy_cap_exit_two(capsys):
    code, _, err = run(
        capsys, "distill", "--family", "max_entangled", "--n", "2",
        "--copies", "5")
    assert code == 2
    assert "CAP_EXCEEDED" in err


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "consistent" in out
    assert "MISMATCH" not in out


def test_verify_json_report(capsys, tmp_path):
    path = tmp_path / "verify.json"
    code, out, _ = run(capsys, "verify", "--format", "json",
                       "--output", str(path))
    assert code == 0
    obj = json.loads(path.read_text())
    assert obj["all_match"] is True
    statuses = {c["status"] for c in obj["checks"]}
    assert statuses == {"PASS", "DISCREPANCY", "INFO"}


def test_unknown_subcommand_exits_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
