from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from surforbit import cli, corpus
from surforbit import groupexpr as gx
from surforbit import reebmodel as rm
from surforbit import seqcalc as sc

import golden_models as gm


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(cli.parse_args(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def model_file(tmp_path):
    def write(model, name="m.json"):
        p = tmp_path / name
        p.write_text(json.dumps(rm.to_dict(model)))
        return str(p)
    return write


def test_group_beta1():
    code, out, _ = run(["group", "Z x (1 wr[3] Z)", "--beta1", "--json"])
    assert code == 0 and json.loads(out)["beta1"] == 2
    code, out, _ = run(["group", "Z x (1 wr[3] Z)", "--beta1"])
    assert "beta1" in out and out.split()[-1] == "2"


def test_group_torsion_ops_report_codes():
    code, out, _ = run(["group", "Z_2 wr Z_3", "--json"])
    d = json.loads(out)
    assert code == 0 and d["order"] == 24 and d["beta1"].startswith("n/a (E_FAMILY")


def test_classify_poly():
    code, out, _ = run(["classify-poly", "x^4+y^4", "--json"])
    d = json.loads(out)
    assert code == 0 and d["m"] == 4 and d["dihedral"] is True
    code, _, err = run(["classify-poly", "x^2 y"])
    assert code == 1 and "E_SQUAREFREE" in err


def test_orbit_boundary(model_file):
    path = model_file(gm.disk_deg_extreme(4))
    code, out, _ = run(["orbit", "--in", path, "--X", "boundary", "--json", "--trace"])
    d = json.loads(out)
    assert code == 0
    assert sc.from_json(d["seq"]).triple == sc.z(4).triple
    assert d["pi1"] == "Z" and d["betti1"] == 1 and d["trace"]
    code, out, _ = run(["orbit", "--in", path, "--X", "empty", "--json"])
    assert json.loads(out)["seq"]["middle"] == "Z_4"


def test_orbit_invalid_model(model_file):
    path = model_file(gm.disk_with_cycle())
    code, out, err = run(["orbit", "--in", path])
    assert code == 1 and out == "" and "CYCLE_ON_TREE_SURFACE" in err
    code, _, err = run(["orbit", "--in", path, "--json"])
    assert any(json.loads(line)["code"] == "CYCLE_ON_TREE_SURFACE" for line in err.splitlines())


def test_orbit_unsupported(model_file):
    code, _, err = run(["orbit", "--in", model_file(gm.disk_one_saddle()), "--X", "b", "x1"])
    assert code == 1 and "E_UNSUPPORTED_X" in err


def test_bad_json_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _, err = run(["orbit", "--in", str(p)])
    assert code == 1 and "E_IO" in err


def test_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as ei:
        cli.parse_args(["orbit", "--in", str(tmp_path / "missing.json")])
    assert ei.value.code == 2
    with pytest.raises(SystemExit) as ei:
        cli.parse_args(["group", "Z", "--frobnicate"])
    assert ei.value.code == 2
    with pytest.raises(SystemExit) as ei:
        cli.parse_args(["enumerate", "--family", "ccB", "--depth", "-1"])
    assert ei.value.code == 2


def test_enumerate_dedup():
    code, out, _ = run(["enumerate", "--family", "clsGt", "--depth", "2", "--json"])
    d = json.loads(out)
    names = [row["expr"] for row in d["items"]]
    assert code == 0 and len(names) == len(set(names)) == d["count"]
    assert "(Z_2 wr Z_2)" in names
    code, out, _ = run(["enumerate", "--family", "ssZBtPt", "--depth", "2", "--json", "--report"])
    d = json.loads(out)
    assert d["count"] == 8 and all("ssZBtPt" in row["families"] for row in d["items"])


def test_dot(model_file):
    code, out, _ = run(["dot", "--in", model_file(gm.disk_deg_extreme(2, dihedral=True)),
                        "--enhanced"])
    assert code == 0 and out.startswith("graph") and out.count("--") == 5


def test_seq_command_round_trip():
    for script in ["wr(z(2), 3)", "garside(wr(triv, 2))", "diag(wr(triv, 2), wr(z1, 3))",
                   "prod(z(2), wr2(triv, 2, 3))", "bottom(z(5))"]:
        code, out, _ = run(["seq", script, "--json"])
        d = json.loads(out)
        assert code == 0
        s = sc.parse_seq(f"{d['kernel']} -> {d['middle']} ->> {d['quotient']} [build: {d['script']}]")
        assert s.triple == sc.evaluate_script(script).triple
    code, _, err = run(["seq", "wr(triv"])
    assert code == 1 and "E_PARSE" in err


def test_machine_output_valid_json_on_corpus(model_file):
    rng = corpus.default_rng(31)
    models = [corpus.arbitrary_model(rng) for _ in range(15)] + [
        gm.torus_fibration(2), gm.torus_one_saddle(), gm.pants()]
    for i, m in enumerate(models):
        path = model_file(m, f"m{i}.json")
        for argv in (["orbit", "--in", path, "--json"], ["dot", "--in", path, "--json"]):
            code, out, err = run(argv)
            assert code == 0, err
            d = json.loads(out)
            if argv[0] == "orbit":
                assert gx.parse(d["pi1"]) == gx.normalize(gx.parse(d["pi1"]))
                assert sc.from_json(d["seq"]).triple == sc.parse_seq(
                    f"{d['seq']['kernel']} -> {d['seq']['middle']} ->> {d['seq']['quotient']}"
                    f" [build: {d['seq']['script']}]").triple


def test_console_entry_points(tmp_path):
    p = subprocess.run([sys.executable, "-m", "surforbit", "group", "(Z wr[2] Z)", "--center"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.split()[-1] == "2"
    p = subprocess.run([sys.executable, "-m", "surforbit", "orbit", "--in",
                        str(tmp_path / "nope.json")], capture_output=True, text=True)
    assert p.returncode == 2


def test_seed_environment(monkeypatch):
    monkeypatch.setenv("ORBITCALC_SEED", "77")
    a = corpus.generic_morse_disk(corpus.default_rng())
    b = corpus.generic_morse_disk(corpus.default_rng())
    assert a == b
