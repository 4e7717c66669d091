import json
import math
import os

import pytest

from reslab.cli import main
from reslab.polygon import load_polygon, rectangle, save_polygon
from reslab.potential import load_potential, make_potential, save_potential


@pytest.fixture()
def workdir(tmp_path, capsys):
    save_polygon(rectangle(-5.0, -5.0, 5.0, 5.0), str(tmp_path / "sq.json"))
    save_potential(
        make_potential(2, [0.0, 1.0], 5.0), str(tmp_path / "v.json")
    )
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    report = json.loads(out) if out.strip() else None
    return code, report


def test_potential_report(workdir, capsys):
    code, rep = run(capsys, "potential", "--wcoeffs", "0,2,1", "--radius", "0.9")
    assert code == 0
    assert rep["is_sp"] is True


def test_usage_error_exit_64(workdir, capsys):
    assert main(["no-such-command"]) == 64


def test_missing_file_exit_65(workdir, capsys):
    code, rep = run(
        capsys, "periods", "--potential", str(workdir / "absent.json"),
        "--thetas", "1",
    )
    assert code == 65
    assert "error" in rep


def test_invalid_potential_data_exit_65(workdir, capsys):
    bad = workdir / "bad.json"
    bad.write_text('{"m": 2, "w_coeffs": [0.1, 1.0], "domain_bound": 1.0}')
    code, rep = run(
        capsys, "periods", "--potential", str(bad), "--thetas", "1"
    )
    assert code == 65


def test_periods_values(workdir, capsys):
    code, rep = run(
        capsys, "periods", "--potential", str(workdir / "v.json"),
        "--thetas", "0.5,2.0",
    )
    assert code == 0
    for row in rep["values"]:
        assert row["value"] == pytest.approx(
            math.pi / (2 * math.sqrt(2)), abs=1e-12
        )


def test_resonance_pair_exit_codes(workdir, capsys):
    sq = str(workdir / "sq.json")
    v = str(workdir / "v.json")
    code, rep = run(
        capsys, "resonance", "pair", "--polygon", sq, "--v1", v, "--v2", v,
        "--e", "1", "--theta", "0.37",
    )
    assert code == 0
    assert rep["status"] == "ResonantFound"
    irr = str(workdir / "virr.json")
    save_potential(make_potential(2, [0.0, math.sqrt(2.0)], 5.0), irr)
    code, rep = run(
        capsys, "resonance", "pair", "--polygon", sq, "--v1", v, "--v2", irr,
        "--e", "1", "--theta", "0.37", "--relation-bound", "20",
    )
    assert code == 1
    assert rep["status"] == "NoRelationFoundWithinBounds"


def test_construct_even_writes_pair(workdir, capsys):
    code, rep = run(
        capsys, "--out", str(workdir), "construct", "even",
        "--pcoeffs", "0,1", "--e", "1", "--auto-d",
    )
    assert code == 0
    assert rep["quarter_match_residual"] <= 1e-10
    V1 = load_potential(rep["v1"])
    V2 = load_potential(rep["v2"])
    assert V1.m == V2.m == 2


def test_simulate_run_writes_csv(workdir, capsys):
    code, rep = run(
        capsys, "--out", str(workdir), "simulate", "run",
        "--polygon", str(workdir / "sq.json"),
        "--v1", str(workdir / "v.json"), "--v2", str(workdir / "v.json"),
        "--state", "0.3,-0.2,0.7,0.4", "--t-end", "3", "--samples", "20",
    )
    assert code == 0
    assert rep["max_drift"] <= 1e-8
    with open(rep["csv"]) as fh:
        lines = fh.read().strip().splitlines()
    assert lines[0] == "t,x,y,px,py"
    assert len(lines) == 21


def test_render_deterministic(workdir, capsys):
    out1 = workdir / "a.svg"
    out2 = workdir / "b.svg"
    for out in (out1, out2):
        code, _ = run(
            capsys, "render", "--polygon", str(workdir / "sq.json"),
            "--svg", str(out), "--mark-corners",
        )
        assert code == 0
    assert out1.read_text() == out2.read_text()
    assert out1.read_text().startswith("<svg")


def test_reports_independent_of_threads(workdir, capsys, monkeypatch):
    sq, v = str(workdir / "sq.json"), str(workdir / "v.json")
    outs = []
    for n in ("1", "4"):
        monkeypatch.setenv("RESLAB_THREADS", n)
        code = main([
            "resonance", "scan", "--polygon", sq, "--v1", v, "--v2", v,
            "--e", "1", "--grid-size", "7", "--length-bound", "20",
        ])
        assert code == 0
        rep = json.loads(capsys.readouterr().out)
        rep.pop("threads")
        outs.append(json.dumps(rep, sort_keys=True))
    assert outs[0] == outs[1]


def test_qp_subcommand(workdir, capsys):
    code, rep = run(capsys, "qp", "rho", "--xi", "1", "--k", "0",
                    "--thetas", "1")
    assert code == 0
    assert rep["values"][0]["re"] == pytest.approx(3.2213959583686558, abs=1e-9)
    coeffs = workdir / "fd.json"
    coeffs.write_text('{"xi": 1.0, "coeffs": [[0, 1.0, 0.0]]}')
    code, rep = run(capsys, "qp", "obstruction", "--coeffs", str(coeffs),
                    "--side", "neg")
    assert code == 0
    assert rep["value"] == pytest.approx(1.0)


def test_report_file_written(workdir, capsys):
    rp = workdir / "report.json"
    code, rep = run(
        capsys, "--report", str(rp), "potential",
        "--wcoeffs", "0,1", "--radius", "1",
    )
    assert code == 0
    assert json.loads(rp.read_text())["is_sp"] is True
