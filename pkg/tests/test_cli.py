import json
import shutil
import subprocess
import sys

import pytest

from fusionkit import catalog
from fusionkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None, out


def test_catalog_list(capsys):
    code, doc, _ = run(capsys, "catalog", "list")
    assert code == 0
    assert [e["name"] for e in doc["entries"]] == catalog.CATALOG_NAMES


def test_catalog_show(capsys):
    code, doc, _ = run(capsys, "catalog", "show", "su2:l=3")
    assert code == 0
    assert doc["summary"]["order"] == 16
    assert doc["expected"]["aut_W"] == 24


@pytest.mark.parametrize("axioms", ["std", "alt"])
def test_check_passes(capsys, axioms):
    code, doc, _ = run(capsys, "check", "so3:l=3", "--axioms", axioms)
    assert code == 0 and doc["report"]["verdict"] == "pass"


def test_check_fails_with_witness(capsys, tmp_path):
    path = tmp_path / "neg.json"
    path.write_text(json.dumps(catalog.system_to_json(catalog.build_negative_control())))
    code, doc, _ = run(capsys, "check", str(path))
    assert code == 1
    bad = [a for a in doc["report"]["axioms"] if not a["pass"]]
    assert bad[0]["tag"] == "I" and "witness" in bad[0]


def test_sat1_with_names(capsys):
    code, doc, _ = run(capsys, "check", "su2:l=3", "--axioms", "sat1", "--x", "t1")
    assert code == 0
    code, doc, _ = run(capsys, "check", "su2:l=3", "--axioms", "sat1", "--x", "bogus")
    assert code == 2 and doc["error"] == "precondition"


def test_output_is_byte_stable(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["--output", str(a), "check", "su2:l=3"]) == 0
    assert main(["--output", str(b), "check", "su2:l=3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["report"]["millis"] == 0


def test_analyze(capsys):
    code, doc, _ = run(capsys, "analyze", "su2:l=3", "--ops", "center,hyperfocal,component,irreducible")
    assert code == 0
    r = doc["results"]
    assert r["center"]["order"] == 2
    assert r["hyperfocal"]["order"] == 16
    assert r["component"]["shape"] == "su2"
    assert r["irreducible"]["irreducible"] is True
    code, doc, _ = run(capsys, "analyze", "su2:l=3", "--ops", "nope")
    assert code == 2


def test_quotient_default_comparison(capsys):
    code, doc, _ = run(capsys, "quotient", "su2:l=3", "--by", "t1")
    assert code == 0
    assert doc["isomorphism"]["with"] == "so3:l=2" and doc["isomorphism"]["found"]
    assert doc["saturation"] == "pass"


def test_quotient_trivial_and_non_normal(capsys):
    code, doc, _ = run(capsys, "quotient", "so3:l=3", "--by", "0")
    assert code == 0 and "echo" in doc
    code, doc, _ = run(capsys, "quotient", "so3:l=3", "--by", "x")
    assert code == 2


def test_budget_exit_code(capsys):
    code, doc, _ = run(capsys, "--budget", "5", "analyze", "so3:l=3")
    assert code == 3 and doc["error"] == "budget"


def test_missing_file(capsys):
    code, doc, _ = run(capsys, "check", "does/not/exist.json")
    assert code == 2


def test_transporter_command(capsys):
    code, doc, _ = run(capsys, "transporter", "sigma4")
    assert code == 0 and doc["morphisms"] == 88


def test_stability_command(capsys):
    code, doc, _ = run(capsys, "stability", "so3", "--level", "2", "--probe", "t1+x")
    assert code == 0 and doc["report"]["stable"]


def test_suite_subset(capsys):
    code = main(["suite", "--only", "3,7"])
    cap = capsys.readouterr()
    doc = json.loads(cap.out)
    assert code == 0 and doc["pass"]
    assert "criterion  3 PASS" in cap.err and "criterion  7 PASS" in cap.err


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main(["check"])
    assert exc.value.code == 2


@pytest.mark.skipif(shutil.which("fusionkit") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["fusionkit", "catalog", "list"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["command"] == "catalog list"
    res = subprocess.run([sys.executable, "-m", "fusionkit.cli", "catalog", "show", "nosuch"],
                         capture_output=True, text=True)
    assert res.returncode == 2
