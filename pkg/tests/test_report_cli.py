import json
import shutil

import pytest

from hecke import cli, report
from hecke.catalog import catalog_dir


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_all_is_deterministic():
    a = report.run_all().dumps()
    b = report.run_all().dumps()
    assert a == b
    data = json.loads(a)
    assert report.VerificationReport.from_json(data).dumps() == a
    names = [c["check"] for c in data["checks"]]
    assert names == sorted(names)


def test_statuses():
    rep = report.run_all()
    status = {c.check: c.status for c in rep.checks}
    assert status["premise"] == "premise"
    # the printed r^T entry of the conjugation table does not hold; everything else does
    assert rep.failed == ["a1-table"]
    assert rep.exit_code == 1
    assert rep.verdict.startswith("undetermined")


def test_only_single_check(capsys):
    code, out, _ = run(capsys, "verify", "all", "--only", "eq51", "--json")
    data = json.loads(out)
    assert code == 0
    assert [c["check"] for c in data["checks"]] == ["eq51"]


def test_verify_named_check(capsys):
    code, out, _ = run(capsys, "verify", "lemma-a1")
    assert code == 0 and "PASS" in out


def test_corrupted_catalog_fails(tmp_path, capsys):
    work = tmp_path / "cat"
    shutil.copytree(catalog_dir(), work, ignore=shutil.ignore_patterns("__pycache__", "*.py"))
    (work / "pentagon.hfs").write_text("q=5;\nvertices=-oo,0,-1+1L,1,0+1L,oo;\npairings=even,even,even,even,odd;\n")
    code, out, _ = run(capsys, "verify", "pentagon", "--catalog", str(work), "--json")
    data = json.loads(out)
    assert code == 1
    assert data["checks"][0]["status"] == "fail"


def test_explain(capsys):
    code, out, _ = run(capsys, "explain", "lemma-a1")
    assert code == 0 and "candidates: 64, invariant: 2" in out
    code, out, _ = run(capsys, "explain", "eq31")
    assert '"d": 2' in out and '"vq": 2' in out
    code, _, err = run(capsys, "explain", "nosuch")
    assert code == 2 and "unknown check" in err


def test_hfs_commands(capsys, tmp_path):
    f = tmp_path / "eq31.hfs"
    f.write_text("q=5; vertices=-oo,0,oo; pairings=odd,odd")
    assert run(capsys, "hfs", "validate", str(f))[0] == 0
    code, out, _ = run(capsys, "hfs", "invariants", str(f), "--json")
    assert json.loads(out)["d"] == 2
    code, out, _ = run(capsys, "hfs", "generators", str(f))
    assert out.count("odd") == 2
    f.write_text("q=5; vertices=-oo,0,oo; pairings=odd")
    code, _, err = run(capsys, "hfs", "validate", str(f))
    assert code == 2 and "line 1" in err


def test_fp_commands(capsys, tmp_path):
    f = tmp_path / "words.txt"
    f.write_text("# index-5 power subgroup\nS\nStSTS\nTSTStSt\nStSttStSt\nTSt\n")
    code, out, _ = run(capsys, "fp", "index", "--subgroup-words", str(f))
    assert code == 0 and out.strip() == "5"
    f.write_text("y\nxyx\n")
    code, out, _ = run(capsys, "fp", "index", "--subgroup-words", str(f), "--alphabet", "xy")
    assert out.strip() == "2"
    code, out, _ = run(capsys, "fp", "low-index", "--max", "4", "--q", "5", "--json")
    assert sorted({t["index"] for t in json.loads(out)}) == [1, 2]


def test_quotient_and_decompose(capsys):
    assert run(capsys, "quotient", "order", "--modulus", "2+1L")[1].strip() == "60"
    assert run(capsys, "quotient", "order", "--modulus", "5")[1].strip() == "7500"
    code, out, _ = run(capsys, "decompose", "--matrix", "[[0,1],[-1,0]]")
    assert code == 0 and out.strip() == "S"
    code, _, err = run(capsys, "decompose", "--matrix", "[[1,1],[0,1]]")
    assert code == 1 and "not in G_5" in err


def test_prop52_command(capsys):
    code, out, _ = run(capsys, "prop52", "--json")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "not congruence"
    assert {l["check"]: l["status"] for l in data["legs"]}["premise"] == "premise"
