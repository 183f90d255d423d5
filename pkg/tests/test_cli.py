import json
import os

import pytest

from ssflow.cli import main, parse_grid, read_config


FLAG_ARGS = ["--n", "3", "--gamma", "12", "--lambda", "0.02",
             "--isentropic"]


def test_parse_grid():
    g = parse_grid("0.1:0.9:9")
    assert len(g) == 9
    assert g[0] == pytest.approx(0.1)
    assert g[-1] == pytest.approx(0.9)
    with pytest.raises(Exception):
        parse_grid("0.1:0.9")


def test_critical_points_command(tmp_path):
    rc = main(["critical-points", *FLAG_ARGS, "--out", str(tmp_path)])
    assert rc == 0
    text = (tmp_path / "critical_points.csv").read_text()
    assert text.splitlines()[0] == "id,V,C,line,kind"
    assert "P8" in text and "P-inf" in text


def test_construct_artifacts(tmp_path):
    rc = main(["construct", *FLAG_ARGS, "--out", str(tmp_path)])
    assert rc == 0
    for name in ("solution.csv", "summary.json", "portrait.svg"):
        assert (tmp_path / name).exists(), name
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["x8"] == -1.0
    assert summary["shock_detected"] is False
    assert summary["A8"] < 0.0
    assert summary["params"]["lambda"] == 0.02
    assert "version" in summary and "tolerances" in summary
    head = (tmp_path / "solution.csv").read_text().splitlines()[0]
    assert head == "x,V,C,R"


def test_construct_rerun_is_byte_identical(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    for d in (a, b):
        d.mkdir()
        rc = main(["construct", *FLAG_ARGS, "--no-svg",
                   "--out", str(d)])
        assert rc == 0
    for name in ("solution.csv", "summary.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name
    assert not (a / "portrait.svg").exists()


def test_flow_command(tmp_path):
    rc = main(["flow", *FLAG_ARGS, "--t", "0,-1",
               "--grid", "1e-2:1:20", "--out", str(tmp_path)])
    assert rc == 0
    lines = (tmp_path / "flow.csv").read_text().splitlines()
    assert lines[0] == "t,r,rho,u,c,p"
    assert len(lines) > 20


def test_gamma3_command(tmp_path):
    rc = main(["gamma3", "--n", "3", "--grid", "0.01:0.05:3",
               "--out", str(tmp_path)])
    assert rc == 0
    lines = (tmp_path / "gamma3.csv").read_text().splitlines()
    assert lines[0] == "lambda,gamma3"
    assert len(lines) == 4


def test_probe_command(tmp_path):
    rc = main(["guderley-probe", "--grid", "0.3:0.7:3",
               "--gammas", "1.4,3", "--n", "3", "--out", str(tmp_path)])
    assert rc == 0
    lines = (tmp_path / "probe.csv").read_text().splitlines()
    assert lines[0] == "n,gamma,lambda,V_cross,V8,reached"
    assert len(lines) == 7
    assert all(row.endswith("false") for row in lines[1:])


def test_config_file_and_override(tmp_path):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text(
        "# flagship parameters\n"
        "n = 3\n"
        "gamma = 12\n"
        "lambda = 0.02\n"
        "isentropic = true\n")
    cfg = read_config(str(cfgfile))
    assert cfg["lam"] == "0.02"
    out = tmp_path / "out"
    out.mkdir()
    rc = main(["critical-points", "--config", str(cfgfile),
               "--gamma", "12", "--out", str(out)])
    assert rc == 0


def test_exit_code_invalid_config(tmp_path, capsys):
    # gamma <= 1 is rejected
    assert main(["critical-points", "--n", "3", "--gamma", "0.9",
                 "--lambda", "0.5", "--kappa", "0",
                 "--out", str(tmp_path)]) == 2
    # missing lambda
    assert main(["critical-points", "--n", "3", "--gamma", "1.4",
                 "--out", str(tmp_path)]) == 2
    # construct without the isentropic closure
    assert main(["construct", "--n", "3", "--gamma", "12",
                 "--lambda", "0.02", "--kappa", "0.3",
                 "--out", str(tmp_path)]) == 2


def test_exit_code_construction_failure(tmp_path):
    # outside the node regime the inflow curve cannot be built
    rc = main(["construct", "--n", "3", "--gamma", "5",
               "--lambda", "0.02", "--isentropic",
               "--out", str(tmp_path)])
    assert rc == 3
