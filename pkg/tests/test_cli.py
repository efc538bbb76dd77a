import json

import numpy as np
import pytest

from sixvertex.cli import main
from sixvertex.model_core import MONOMIAL, Curve
from sixvertex.report import fmt_complex, fmt_float

from conftest import table_curves


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_fmt_float():
    assert fmt_float(0.1 + 0.2) == "0.3"
    assert fmt_float(1 / 3) == "0.333333333333"
    assert fmt_float(-0.0) == "0.0"
    assert fmt_float(1.5e-20) == "1.5e-20"
    assert fmt_complex(0.5 - 1e-3j) == "0.5-0.001i"


def test_spectrum_table_rows(capsys):
    code, out = run(capsys, "spectrum", "--family", "rational", "--L", "3", "--phi1", "1", "--phi2", "1",
                    "--sector", "1")
    assert code == 0
    d = json.loads(out.out)
    assert d["sector"] == 1 and len(d["curves"]) == 3
    curves = [Curve(MONOMIAL, [complex(*z) for z in c["coeffs"]]) for c in d["curves"]]
    for t in table_curves(3):
        assert min(c.distance(t) for c in curves) < 1e-8


@pytest.mark.parametrize("argv", [["spectrum", "--family", "rational", "--L", "0"],
                                  ["spectrum", "--family", "rational", "--L", "3", "--sector", "5"],
                                  ["verify", "--L", "3"],
                                  ["spectrum", "--family", "rational", "--L", "x"],
                                  ["cycles", "--family", "trigonometric", "--gamma", "0.3", "--L", "4"],
                                  ["symmetry", "--family", "rational", "--L", "3", "--sector", "3"],
                                  ["spectrum", "--family", "rational", "--L", "2", "--mu", "0,0,0"],
                                  ["bogus"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_verify_trig_l4(capsys, tmp_path):
    out = tmp_path / "v.json"
    code, _ = run(capsys, "verify", "--family", "trigonometric", "--gamma", "0.3+0.1i", "--phi1", "1.1",
                  "--phi2", "0.8", "--mu", "0.05+0.02i,-0.03+0.04i,0.01-0.06i,-0.07+0.01i", "--out", str(out))
    d = json.loads(out.read_text())
    assert code == 0 and d["passed"]
    assert max(d["max"].values()) < 1e-6


def test_verify_unreachable_tol(capsys):
    code, out = run(capsys, "verify", "--family", "trigonometric", "--gamma", "0.3+0.1i", "--L", "3",
                    "--tol", "1e-30")
    assert code == 1
    assert json.loads(out.out)["passed"] is False


def test_cycles_l3(capsys):
    code, out = run(capsys, "cycles", "--family", "rational", "--L", "3")
    assert code == 0
    edges = [l for l in out.out.splitlines() if "->" in l]
    loops = [l for l in edges if l.split("->")[0].strip() == l.split("->")[1].split("[")[0].strip()]
    assert len(edges) == 3 and len(loops) == 1


def test_cycles_l4_files(capsys, tmp_path):
    out = tmp_path / "g.dot"
    code, _ = run(capsys, "cycles", "--family", "rational", "--L", "4", "--out", str(out))
    assert code == 0
    dot = out.read_text()
    assert dot.count("->") == 7
    d = json.loads((tmp_path / "g.json").read_text())
    assert len(d["nodes"]) == 4 and len(d["edges"]) == 7


def test_symmetry_sector1(capsys):
    code, out = run(capsys, "symmetry", "--family", "rational", "--L", "3", "--phi1", "1.1", "--phi2", "0.8",
                    "--sector", "1")
    d = json.loads(out.out)
    assert code == 0 and d["verdict"] == "sl2" and d["closure_residual"] < 1e-9


def test_symmetry_sector2(capsys):
    code, out = run(capsys, "symmetry", "--family", "rational", "--L", "3", "--phi1", "1.1", "--phi2", "0.8",
                    "--mu", "0.05,0.02i,-0.03", "--sector", "2", "--u1", "0.7+0.2i")
    d = json.loads(out.out)
    assert code == 0 and d["verdict"] == "sl2"
    assert d["closed_form_check"]["passed"] is False


def test_zeroes_command(capsys):
    code, out = run(capsys, "zeroes", "--family", "trigonometric", "--gamma", "0.3+0.1i", "--L", "3",
                    "--sector", "2")
    d = json.loads(out.out)
    assert code == 0
    assert all(s["converged"] and s["oracle_distance"] < 1e-8 for s in d["solves"])


def test_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"family": "rational", "L": 4, "phi1": 1, "phi2": 1, "sector": 1}))
    code, out = run(capsys, "spectrum", "--config", str(cfg))
    assert code == 0 and len(json.loads(out.out)["curves"]) == 4
    code, out = run(capsys, "spectrum", "--config", str(cfg), "--L", "3")
    assert code == 0 and len(json.loads(out.out)["curves"]) == 3


def test_bad_config(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"family": "rational", "L": 3, "colour": "red"}))
    assert run(capsys, "spectrum", "--config", str(cfg))[0] == 2


def test_outputs_byte_identical(capsys, tmp_path):
    args = ["spectrum", "--family", "trigonometric", "--gamma", "0.3+0.1i", "--L", "3"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, *args, "--out", str(a))[0] == 0
    assert run(capsys, *args, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
