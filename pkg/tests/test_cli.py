import json
import subprocess
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from conftest import lv
from lextrop import LexComplex, ParseError, trop_hypersurface
from lextrop import cli, serialize
from lextrop.cli import JobSpec, main
from lextrop.suites import SuiteResult, two_cycle_fixture

GOLDEN = Path(__file__).parent / "golden"
LINE = GOLDEN / "line.json"


def run_cli(*argv):
    return main([str(a) for a in argv])


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj), encoding="utf-8")
    return path


def test_trop_golden(tmp_path):
    out = tmp_path / "trop.json"
    assert run_cli("trop", "--in", LINE, "--out", out, "--rank", 2, "--dim", 2) == 0
    assert out.read_text() == (GOLDEN / "line_trop.json").read_text()
    assert len(json.loads(out.read_text())["cells"]) == 3


def test_closure_golden(tmp_path):
    out = tmp_path / "closure.json"
    assert run_cli("closure", "--in", LINE, "--out", out) == 0
    assert out.read_text() == (GOLDEN / "line_closure.json").read_text()


def test_output_is_deterministic(tmp_path):
    texts = []
    for i in range(2):
        out = tmp_path / f"run{i}.json"
        run_cli("trop", "--in", LINE, "--out", out)
        texts.append(out.read_bytes())
    assert texts[0] == texts[1]


def test_trivial_path_certificate(tmp_path, capsys):
    job = write(tmp_path, "job.json", {"polynomial": json.loads(LINE.read_text()),
                                       "from": ["(0,0)", "(0,4)"], "to": ["(0,0)", "(0,4)"]})
    assert run_cli("path", "--in", job) == 0
    cert = json.loads(capsys.readouterr().out)
    assert cert["path"]["segments"] == []
    assert cert["path"]["orientation"] == "ascending unless flagged"


def test_path_then_verify(tmp_path, capsys):
    job = write(tmp_path, "job.json", {"polynomial": json.loads(LINE.read_text()),
                                       "from": ["(0,0)", "(3,2)"], "to": ["(-1,0)", "(-1,0)"]})
    cert = tmp_path / "cert.json"
    assert run_cli("path", "--in", job, "--out", cert) == 0
    data = json.loads(cert.read_text())
    assert len(data["path"]["segments"]) == 2
    assert run_cli("verify", "--in", cert) == 0
    assert json.loads(capsys.readouterr().out)["ok"] is True
    data["path"]["segments"][1]["start"] = ["(0,1)", "(0,0)"]
    bad = write(tmp_path, "bad.json", data)
    assert run_cli("verify", "--in", bad) == 3
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] is False and report["segment"] == 1


def test_path_from_stored_complex(tmp_path):
    complex_json = json.loads((GOLDEN / "line_trop.json").read_text())
    job = write(tmp_path, "job.json", {"complex": complex_json, "from": ["(0,0)", "(1,0)"], "to": ["(2,0)", "(0,0)"]})
    assert run_cli("path", "--in", job, "--out", tmp_path / "c.json") == 0


def test_check_seed_seven(capsys):
    assert run_cli("check", "--seed", 7) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "seed 7"
    assert sum(line.startswith("PASS ") for line in out) == 6
    assert out[-1] == "all suites passed"


def test_check_is_reproducible(capsys):
    run_cli("check", "--seed", 1, "--samples", 2)
    first = capsys.readouterr().out
    run_cli("check", "--seed", 1, "--samples", 2)
    assert capsys.readouterr().out == first


def test_check_failure_exit_code(monkeypatch, capsys):
    def broken(seed, limit=None):
        return [SuiteResult("always fails", 1, ["boom"])]

    monkeypatch.setattr(cli, "run_all", broken)
    assert run_cli("check") == 3
    assert "FAIL always fails" in capsys.readouterr().out


def test_parse_errors_exit_one(tmp_path, capsys):
    assert run_cli("trop", "--in", tmp_path / "missing.json") == 1
    assert run_cli("trop", "--in", write(tmp_path, "a.json", '{"1,0": "(0,0)",')) == 1
    assert run_cli("trop", "--in", write(tmp_path, "b.json", {"1,x": "(0,0)"})) == 1
    assert run_cli("trop", "--in", write(tmp_path, "c.json", {"1,0": "(0,0"})) == 1
    err = capsys.readouterr().err
    assert "offset" in err


def test_precondition_errors_exit_two(tmp_path, capsys):
    assert run_cli("trop", "--in", LINE, "--rank", 3) == 2
    diag = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert diag["error"] == "rank-mismatch"
    job = write(tmp_path, "job.json", {"polynomial": json.loads(LINE.read_text()),
                                       "from": ["(1,0)", "(2,0)"], "to": ["(0,0)", "(0,0)"]})
    assert run_cli("path", "--in", job) == 2
    diag = json.loads(capsys.readouterr().err)
    assert diag["error"] == "PointNotInComplex"
    assert run_cli("render", "--in", write(tmp_path, "r.json", {"1,0,0": "(0,0)", "0,0,0": "(0,0)"})) == 2
    assert run_cli("trop", "--rank", 0, "--in", LINE) == 2


def test_render_svg(tmp_path):
    out = tmp_path / "line.svg"
    assert run_cli("render", "--in", LINE, "--out", out, "--bbox", 3) == 0
    root = ET.fromstring(out.read_text())
    assert root.tag.endswith("svg") and root.get("version") == "1.1"
    groups = [g for g in root if g.tag.endswith("g")]
    assert len(groups) == 2
    assert 'stroke-dasharray' in out.read_text()
    closure = tmp_path / "closure.json"
    run_cli("closure", "--in", LINE, "--out", closure)
    assert run_cli("render", "--in", closure, "--out", tmp_path / "closure.svg") == 0
    ET.fromstring((tmp_path / "closure.svg").read_text())


def test_skeleton_command(tmp_path, capsys):
    G, charts = two_cycle_fixture()
    data = serialize.graph_to_json(G, charts)
    data["points"] = [{"edge": 0, "param": "(1/2,0)"}]
    job = write(tmp_path, "graph.json", data)
    assert run_cli("skeleton", "--in", job, "--samples", 4) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["injective"] is True and out["samples"] == 8
    assert out["valuations"][0]["values"]["x0"] == "(1/2,0)"
    data["functions"] = ["x1", "y1"]
    assert run_cli("skeleton", "--in", write(tmp_path, "deg.json", data)) == 0
    assert json.loads(capsys.readouterr().out)["injective"] is False
    data["functions"] = ["nope"]
    assert run_cli("skeleton", "--in", write(tmp_path, "bad.json", data)) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lextrop", "trop", "--in", str(LINE)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "line_trop.json").read_text()


def test_jobspec_validation():
    with pytest.raises(ValueError):
        JobSpec("explode")
    with pytest.raises(ValueError):
        JobSpec("trop", dim=0)
    assert JobSpec("check").seed == cli.DEFAULT_SEED


# round trips --------------------------------------------------------------------------


def test_polynomial_round_trip():
    data = json.loads(LINE.read_text())
    p = serialize.parse_polynomial(data)
    assert serialize.parse_polynomial(serialize.polynomial_to_json(p)) == p
    assert serialize.polynomial_to_json(p) == {"0,0": "(0,0)", "0,1": "(0,0)", "1,0": "(0,0)"}
    hahn = serialize.parse_polynomial({"1,0": "3*t^(0,1)+t^(1,0)", "0,0": "(0,2)"})
    assert hahn.valuation((1, 0)) == lv("(0,1)")
    again = serialize.parse_polynomial(serialize.polynomial_to_json(hahn))
    assert again == hahn and again.coefficients == hahn.coefficients


def test_complex_and_pieces_round_trip():
    C = trop_hypersurface(serialize.parse_polynomial(LINE.read_text()))
    data = serialize.complex_to_json(C)
    assert serialize.complex_from_json(data) == C
    assert isinstance(serialize.complex_from_json(data, check=True), LexComplex)
    pieces = json.loads((GOLDEN / "line_closure.json").read_text())
    assert serialize.pieces_to_json(serialize.pieces_from_json(pieces), 2, 2) == pieces


def test_graph_round_trip():
    G, charts = two_cycle_fixture()
    G2, charts2 = serialize.graph_from_json(json.loads(serialize.dumps(serialize.graph_to_json(G, charts))))
    assert G2 == G and charts2 == charts


def test_point_round_trip():
    w = serialize.parse_point(["(0,1)", "inf"])
    assert serialize.point_to_json(w) == ["(0,1)", "inf"]
    with pytest.raises(ParseError):
        serialize.parse_point("(0,1)")
