import json
import subprocess
import sys
from pathlib import Path

import pytest

from foliate import zoo
from foliate.cli import main

ROOT = Path(__file__).resolve().parent.parent
MAPS = ROOT / "data" / "maps"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_signature_cp2(capsys):
    code, out, _ = run(capsys, "signature", "--model", "zoo:cp2_cdga", "--format", "doc")
    assert code == 0
    assert json.loads(out)["sigma"] == 1


def test_twisted_betti_carriere(capsys):
    code, out, _ = run(capsys, "twisted-betti", "--model", "zoo:carriere_sol3", "--format", "doc")
    assert code == 0
    assert json.loads(out)["dims"] == [0, 0, 0]


def test_twisted_betti_rejects_explicit_theta(capsys):
    code, _, err = run(capsys, "twisted-betti", "--model", "zoo:carriere_sol3", "--theta", "kappa_b")
    assert code == 2
    assert "error[parse]" in err


def test_betti_at_kappa_b_carriere(capsys):
    code, out, _ = run(capsys, "betti", "--model", "zoo:carriere_sol3", "--theta", "kappa_b", "--format", "doc")
    assert code == 0
    assert json.loads(out)["dims"] == [0, 1, 1]


def test_duality_table_carriere(capsys):
    code, out, _ = run(capsys, "duality", "--model", "zoo:carriere_sol3", "--theta", "0")
    assert code == 0
    rows = [line.split() for line in out.splitlines()[2:]]
    assert rows == [["0", "1", "1"], ["1", "1", "1"], ["2", "0", "0"]]


def test_theta_tokens_and_expressions(capsys):
    _, a, _ = run(capsys, "betti", "--model", "zoo:carriere_sol3", "--theta", "kappa_b", "--format", "doc")
    _, b, _ = run(capsys, "betti", "--model", "zoo:carriere_sol3", "--theta", "e{3}", "--format", "doc")
    assert json.loads(a)["dims"] == json.loads(b)["dims"] == [0, 1, 1]
    _, c, _ = run(capsys, "betti", "--model", "zoo:carriere_sol3", "--theta", "minus_half_kappa_b",
                  "--format", "doc")
    assert json.loads(c)["theta_form"] == "-1/2 * e{3}"


def test_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "betti", "--model", "zoo:nope")
    assert code == 2 and err.startswith("error[parse]:")
    code, _, err = run(capsys, "frobnicate")
    assert code == 2 and err.startswith("error[parse]:")
    code, _, err = run(capsys, "betti", "--model", "zoo:carriere_sol3", "--theta", "e{1}")
    assert code == 3 and err.startswith("error[validation]:")
    bad = tmp_path / "bad.yaml"
    bad.write_text("kind: lie\ndim: 2\nstructure_constants: [[1, 2, 2, 1]]\nleaf: [1]\n")
    code, _, err = run(capsys, "inspect", "--model", str(bad))
    assert code == 3 and err.startswith("error[validation]:")
    code, _, err = run(capsys, "sweep-metric", "--model", "zoo:torus2_point", "--samples", "0,1/2,x")
    assert code == 2


def test_failed_certificate_exits_4(capsys, tmp_path):
    doc = (MAPS / "carriere_flip_e2.yaml").read_text().replace("backward_deg1:\n  - [1, 0, 0]\n  - [0, -1, 0]",
                                                               "backward_deg1:\n  - [1, 0, 0]\n  - [0, 2, 0]")
    p = tmp_path / "m.yaml"
    p.write_text(doc)
    code, _, err = run(capsys, "map-check", "--map", str(p))
    assert code == 4 and err.startswith("error[assertion]:")


@pytest.mark.parametrize("name", ["carriere_flip_e2.yaml", "cp2_negate_x.yaml", "unit_function_phi.yaml",
                                  "torus3_to_carriere.yaml"])
def test_map_files(capsys, name):
    code, out, _ = run(capsys, "map-check", "--map", str(MAPS / name), "--format", "doc")
    assert code == 0
    doc = json.loads(out)
    assert doc["valid"]
    if name == "torus3_to_carriere.yaml":
        assert doc["alvarez_pullback"] is False
    if "equivalence" in doc:
        assert doc["equivalence"]["ok"]


def test_sweep_rows(capsys):
    code, out, _ = run(capsys, "sweep-metric", "--model", "zoo:carriere_sol3", "--samples", "0,1/4,1/2,3/4,1",
                       "--format", "doc")
    doc = json.loads(out)
    assert code == 0 and doc["constant"] and len(doc["rows"]) == 5
    assert [r["t"] for r in doc["rows"]] == ["0", "1/4", "1/2", "3/4", "1"]


def test_zoo_listing_and_export(capsys):
    code, out, _ = run(capsys, "zoo", "--format", "doc")
    assert [e["name"] for e in json.loads(out)["entries"]] == list(zoo.NAMES)
    code, out, _ = run(capsys, "zoo", "--model", "zoo:hopf_su2")
    assert code == 0 and out == (ROOT / "data" / "models" / "hopf_su2.yaml").read_text()


def test_console_entry_point_runs():
    r = subprocess.run([sys.executable, "-m", "foliate.cli", "signature", "--model", "zoo:torus4_point"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "3,3,0" in r.stdout
