import json
import subprocess
import sys

import pytest

from groupcert.cli import corpus_dir, main

S4_GROUP = {"backend": "perm", "degree": 4, "generators": {"a": "(1 2)", "b": "(1 2 3 4)"}}


@pytest.fixture
def s4_file(tmp_path):
    p = tmp_path / "s4.json"
    p.write_text(json.dumps(S4_GROUP), encoding="utf-8")
    return str(p)


def corrupted(tmp_path, old: bytes, new: bytes):
    src = (corpus_dir() / "s4_v4_normalizer.json").read_bytes()
    assert src.count(old) == 1
    p = tmp_path / "corrupt.json"
    p.write_bytes(src.replace(old, new))
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_corpus_passes(capsys):
    code, out, err = run(["corpus", "--jobs", "1"], capsys)
    assert code == 0
    records = [json.loads(x) for x in out.splitlines()]
    summaries = [r for r in records if "id" not in r]
    assert len(summaries) == len(list(corpus_dir().glob("*.json")))
    assert all(r["status"] == "pass" for r in records)
    assert "certificates passed" in err


def test_corpus_list(capsys):
    code, out, _ = run(["corpus", "--list"], capsys)
    assert code == 0 and len(out.splitlines()) >= 12


def test_corrupted_witness_names_the_check(tmp_path, capsys):
    for new in (b'"b z"', b'"b b"'):
        path = corrupted(tmp_path, b'"b a"', new)
        code, out, err = run(["verify", path], capsys)
        assert code == 1
        bad = [json.loads(x) for x in out.splitlines()]
        assert [r["id"] for r in bad if "id" in r and r["status"] != "pass"] == ["pure"]
        assert "[pure]" in err


def test_malformed_json_exits_2(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text('{"schema": "groupcert/1", "group": [}', encoding="utf-8")
    code, out, err = run(["verify", str(p)], capsys)
    assert code == 2 and "line 1" in err and "column" in err
    code, _, _ = run(["verify", corrupted(tmp_path, b'"checks"', b'"chekcs"')], capsys)
    assert code == 2


def test_schema_error_outranks_failure(tmp_path, capsys):
    bad = tmp_path / "x.json"
    bad.write_text("[]", encoding="utf-8")
    fail = corrupted(tmp_path, b'"b a"', b'"b b"')
    code, _, _ = run(["verify", "--jobs", "1", fail, str(bad)], capsys)
    assert code == 2


def test_order_examples(capsys):
    for shape, n in (("41:40", 1640), ("59:29", 1711), ("3^{2+5+10}:(M11 x 2.S4)", 3**17 * 7920 * 48)):
        code, out, _ = run(["order", shape], capsys)
        assert code == 0 and int(out) == n
    code, out, err = run(["order", "--tree", "41:40"], capsys)
    assert "[1640]" in err
    code, _, err = run(["order", "M23 x 2"], capsys)
    assert code == 2 and "M24" in err


def test_oracle_queries(s4_file, capsys):
    code, out, _ = run(["oracle", s4_file, "normalizer", "(1 2 3 4)"], capsys)
    assert code == 0 and json.loads(out)["result"] == 8
    code, out, _ = run(["oracle", s4_file, "classes"], capsys)
    assert json.loads(out)["result"] == 5
    code, out, _ = run(["oracle", s4_file, "centralizer", "a"], capsys)
    assert json.loads(out)["result"] == 4
    code, _, err = run(["oracle", "--cap", "5", s4_file, "order"], capsys)
    assert code == 3 and "cap" in err


def test_search_commands(s4_file, capsys):
    code, out, _ = run(["search", s4_file, "order", "4", "--seed", "2"], capsys)
    assert code == 0 and json.loads(out)["status"] == "found"
    code, out, _ = run(["search", s4_file, "order", "5", "--draws", "50"], capsys)
    assert code == 1 and json.loads(out)["status"] == "inconclusive"
    code, out, _ = run(["search", s4_file, "conjugator", "(1 2)", "(3 4)"], capsys)
    assert code == 0
    code, _, _ = run(["search", s4_file, "order", "4", "5"], capsys)
    assert code == 2


def test_report_file_and_determinism(tmp_path):
    outs = []
    for i in range(2):
        report = tmp_path / f"r{i}.ndjson"
        proc = subprocess.run([sys.executable, "-m", "groupcert.cli", "corpus", "--report", str(report)],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        assert proc.stdout == ""
        outs.append(report.read_bytes())
    assert outs[0] == outs[1] and outs[0]
