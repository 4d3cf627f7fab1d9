import json

import pytest

import laurentnet.cli.pipeline as pipeline_module
from laurentnet import __version__
from laurentnet.cli.main import main
from laurentnet.core.construction import build_construction
from laurentnet.core.pointgen import load_points
from laurentnet.storage.artifacts import read_json, read_lattice


def run_cli(capsys, *argv):
    code = main(["--plain-logs", *argv])
    return code, capsys.readouterr().out


def last_json(out):
    return json.loads(out.strip().splitlines()[-1])


def test_worked_pipeline(tmp_path, capsys):
    out_dir = tmp_path / "run"
    code, out = run_cli(
        capsys, "pipeline", "--b", "2", "--n", "1", "--shrink", "x^3", "--scan-degree", "3", "--out-dir", str(out_dir)
    )
    assert code == 0
    summary = last_json(out)
    assert (summary["m"], summary["t"], summary["delta"]) == (6, 0, 7)
    for name in ("lattice.json", "roots.json", "points.csv", "report.json", "discrepancy.json"):
        assert (out_dir / name).exists()

    report = read_json(out_dir / "report.json")
    assert report["predicted"] == {"m": 6, "t_bound": 0, "deg_det_b": 0, "t_admissibility": 0}
    assert report["admissibility"]["exact"] is True
    assert report["cardinality_ok"] is True
    assert report["quadrature_weight"] == "1/64"
    assert report["net"]["duality_consistent"] is True
    assert report["net"]["nrt_lower_bound"] == 7
    assert report["admissibility"]["m_hat"] == -1
    assert "created_at" in report["metadata"]
    assert load_points(str(out_dir / "points.csv")).size == 64


def test_pipeline_from_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"b": 2, "n": 1, "shrink": "x^2", "output_dir": str(tmp_path / "a")}))
    code, out = run_cli(capsys, "pipeline", "--config", str(cfg), "--out-dir", str(tmp_path / "b"), "--no-discrepancy")
    assert code == 0
    assert last_json(out)["m"] == 4
    assert (tmp_path / "b" / "report.json").exists()
    assert not (tmp_path / "b" / "discrepancy.json").exists()
    assert not (tmp_path / "a").exists()


def test_pipeline_rejects_non_prime(tmp_path, capsys):
    out_dir = tmp_path / "never"
    code, out = run_cli(capsys, "pipeline", "--b", "4", "--n", "1", "--shrink", "x", "--out-dir", str(out_dir))
    assert code == 3
    payload = last_json(out)
    assert payload["code"] == "invalid_modulus"
    assert payload["stage"] == "pipeline"
    assert not out_dir.exists()


def test_pipeline_with_unit_shrink(tmp_path, capsys):
    code, out = run_cli(capsys, "pipeline", "--b", "2", "--n", "1", "--shrink", "1", "--out-dir", str(tmp_path))
    assert code == 0
    summary = last_json(out)
    assert summary["m"] == 0
    assert summary["t"] == 0
    assert summary["delta"] == 1


def test_pipeline_needs_a_source(tmp_path, capsys):
    code, out = run_cli(capsys, "pipeline", "--b", "2", "--shrink", "x", "--out-dir", str(tmp_path))
    assert code == 2
    assert last_json(out)["code"] == "config_invalid"


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["construct", "--b", "2"], ["pipeline", "--method", "random"]])
def test_usage_errors(argv):
    assert main(argv) == 64


def test_version(capsys):
    assert main(["--version"]) == 0
    out = capsys.readouterr().out
    assert out.startswith(f"laurentnet {__version__}\n")
    assert '"scan_budget"' in out


def test_subcommand_flow(tmp_path, capsys):
    lattice = tmp_path / "lattice.json"
    points = tmp_path / "points.csv"

    code, _ = run_cli(capsys, "construct", "--b", "2", "--n", "1", "--prec", "64", "--out", str(lattice))
    assert code == 0
    document = read_json(lattice)
    assert sorted(document) == ["audit", "lattice", "metadata", "roots"]
    assert document["audit"]["deg_det_b"] == document["audit"]["deg_det_b_closed_form"] == 0

    code, out = run_cli(capsys, "points", "--lattice", str(lattice), "--shrink", "x^3", "--out", str(points))
    assert code == 0
    assert last_json(out)["points"] == 64

    code, out = run_cli(capsys, "verify", "--points", str(points), "--t-bound", "0", "--t", "0")
    assert code == 0
    report = json.loads(out)
    assert (report["exact_t"], report["delta"], report["strength"]) == (0, 7, 6)
    assert report["is_net_at_t"] == {"0": True}

    code, out = run_cli(capsys, "scan", "--lattice", str(lattice), "--degree", "3")
    assert code == 0
    scan = json.loads(out)
    assert scan["m_hat"] == -1
    assert scan["witness"] == ["0", "1"]
    assert scan["witness_degrees"] == [-1, 0]
    assert len(scan["witness_dual_point"]) == 2

    code, out = run_cli(capsys, "discrepancy", "--points", str(points), "--t", "0")
    assert code == 0
    result = json.loads(out)
    assert result["n_points"] == 64
    assert 0 < result["value"] < 6 / 64
    assert result["bound"] == pytest.approx(6 / 64)


def test_points_to_stdout(capsys):
    code, out = run_cli(capsys, "points", "--b", "2", "--n", "1", "--shrink", "1", "--format", "rational")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# b=2 d=2 m=0 depth=8 format=rational"
    assert lines[1:] == ["0/256,0/256"]


def test_points_rejects_unknown_format(capsys):
    code, out = run_cli(capsys, "points", "--b", "2", "--n", "1", "--shrink", "x", "--format", "hex")
    assert code == 2
    assert last_json(out)["stage"] == "points"


def test_integrate_constant(capsys):
    code, out = run_cli(capsys, "integrate", "--construct", "2,1", "--shrink-range", "1..3", "--integrand", "constant")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "integrand,r,N,estimate,exact,abs_error"
    assert [line.split(",")[2] for line in lines[1:]] == ["4", "16", "64"]


def test_integrate_bad_range(capsys):
    code, out = run_cli(capsys, "integrate", "--construct", "2,1", "--shrink-range", "3..1")
    assert code == 2


def test_missing_points_file_is_an_io_error(tmp_path, capsys):
    code, out = run_cli(capsys, "verify", "--points", str(tmp_path / "missing.csv"))
    assert code == 18
    assert last_json(out)["code"] == "io_error"


def test_integrate_json(tmp_path, capsys):
    target = tmp_path / "decay.json"
    code, _ = run_cli(
        capsys, "integrate", "--construct", "2,1", "--shrink-range", "1..2", "--integrand", "linear",
        "--format", "json", "--out", str(target),
    )
    assert code == 0
    document = read_json(target)
    assert document["integrand"] == "linear"
    assert [row["n_points"] for row in document["rows"]] == [4, 16]


def test_output_path_must_not_be_a_directory(tmp_path, capsys):
    code, out = run_cli(capsys, "construct", "--b", "2", "--n", "1", "--prec", "32", "--out", str(tmp_path))
    assert code == 2
    assert last_json(out)["code"] == "config_invalid"


def test_pipeline_target_dimension(tmp_path, capsys):
    code, out = run_cli(
        capsys, "pipeline", "--b", "2", "--d", "3", "--shrink", "x", "--out-dir", str(tmp_path), "--no-discrepancy"
    )
    assert code == 0
    assert last_json(out)["m"] == 8
    report = read_json(tmp_path / "report.json")
    assert (report["config"]["n"], report["config"]["project_to"]) == (2, 3)
    assert report["net"]["d"] == 3
    assert report["net"]["exact_t"] <= report["predicted"]["t_admissibility"] == 4
    points = load_points(str(tmp_path / "points.csv"))
    assert (points.d, points.size) == (3, 256)


def test_construct_and_points_by_dimension(tmp_path, capsys):
    lattice = tmp_path / "lattice.json"
    code, _ = run_cli(capsys, "construct", "--b", "3", "--d", "2", "--out", str(lattice))
    assert code == 0
    assert read_json(lattice)["lattice"]["label"] == "pd-roots(b=3,n=1)"

    code, out = run_cli(capsys, "points", "--b", "3", "--d", "2", "--shrink", "x", "--format", "rational")
    assert code == 0
    header = out.splitlines()[0]
    assert header.startswith("# b=3 d=2 m=3 ")
    assert len(out.splitlines()) == 1 + 27

    assert main(["construct", "--b", "2", "--n", "1", "--d", "2"]) == 64


def test_pipeline_writes_the_lattice_that_made_the_points(tmp_path, capsys, monkeypatch):
    original = pipeline_module.explicit_net

    def rebuilt(b, n, f, depth, prec, method):
        return original(b, n, f, depth, 2 * prec, method)

    monkeypatch.setattr(pipeline_module, "explicit_net", rebuilt)
    code, _ = run_cli(
        capsys, "pipeline", "--b", "2", "--n", "1", "--shrink", "x^2", "--precision", "40",
        "--out-dir", str(tmp_path), "--no-discrepancy",
    )
    assert code == 0
    stored = read_lattice(str(tmp_path / "lattice.json"))
    assert stored.precision == build_construction(2, 1, 80).lattice.precision
    assert stored.generator == build_construction(2, 1, 80).lattice.generator


def test_pipeline_checks_the_dual_weight_bound(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(pipeline_module, "nrt_lower_bound", lambda degrees, m, d: 100)
    code, out = run_cli(
        capsys, "pipeline", "--b", "2", "--n", "1", "--shrink", "x^2", "--out-dir", str(tmp_path), "--no-discrepancy"
    )
    assert code == 16
    payload = last_json(out)
    assert payload["code"] == "inconsistent_report"
    assert payload["stage"] == "verify"
