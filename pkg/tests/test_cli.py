import io
import json
import subprocess
import sys

import pytest

from cdcongruence.cli import EXIT_NO, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_decide_yes():
    code, out = call("decide", "--d", "3", "--cofactor", "7")
    assert code == EXIT_OK
    verdict, doc = out.splitlines()
    assert verdict == "YES"
    assert json.loads(doc)["pairs"] == [{"block": [3], "b": 3, "p": 7, "f": 1}]


def test_decide_merged_block_exact_output():
    code, out = call("decide", "--d", "15", "--cofactor", "32")
    assert code == EXIT_OK
    assert out == 'YES\n{"pairs":[{"block":[3,5],"b":15,"p":2,"f":4}],"d":15,"cofactor":32}\n'


def test_decide_no():
    assert call("decide", "--d", "5", "--cofactor", "9") == (EXIT_NO, "NO\n")


def test_hypothesis_gate(capsys):
    code, out = call("decide", "--d", "12", "--cofactor", "35")
    assert code == EXIT_USAGE and out == ""
    assert "d_not_square_free" in capsys.readouterr().err
    code, out = call("decide", "--d", "12", "--cofactor", "35", "--force")
    assert code == EXIT_OK
    assert json.loads(out.splitlines()[1])["flags"] == ["d_not_square_free"]
    assert "warning" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["decide", "--d", "abc", "--cofactor", "7"],
        ["decide", "--d", "0", "--cofactor", "7"],
        ["decide", "--d", "3"],
        ["scan", "--e", "9..2", "--d-max", "10"],
        ["crt", "1-3"],
        ["bogus"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    code, out = call(*argv)
    assert code == EXIT_USAGE
    assert out == ""


def test_witness_lists_canonical_witnesses():
    code, out = call("witness", "--d", "6", "--cofactor", str(5 * 7 * 13), "--limit", "5")
    assert code == EXIT_OK
    docs = [json.loads(line) for line in out.splitlines()]
    assert len(docs) >= 2
    assert docs[0]["pairs"][0]["block"] == [2]


def test_construct():
    code, out = call("construct", "--d", "15", "--cofactor", "32")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["abelian"] == [2]
    assert doc["degrees"] == {"1": "30", "15": "2"}
    assert doc["report"] == {
        "order": True,
        "sum_of_squares": True,
        "frobenius_congruence": True,
        "d_in_degrees": True,
        "ok": True,
    }
    assert call("construct", "--d", "5", "--cofactor", "9")[0] == EXIT_NO


def test_verify_round_trip(tmp_path):
    for d, cof in [(3, 7), (15, 32), (6, 35), (1, 9), (30, 7 * 11 * 31)]:
        _, out = call("decide", "--d", str(d), "--cofactor", str(cof))
        path = tmp_path / f"w{d}.txt"
        path.write_text(out)
        code, report = call("verify", "--witness", str(path))
        assert code == EXIT_OK, report
        assert json.loads(report)["ok"]

    _, out = call("witness", "--d", "6", "--cofactor", str(5 * 7 * 13), "--limit", "20")
    path = tmp_path / "many.jsonl"
    path.write_text(out)
    code, report = call("verify", "--witness", str(path))
    assert code == EXIT_OK
    assert len(report.splitlines()) == len(out.splitlines())


def test_verify_rejects_bad_witness(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"pairs":[{"block":[3],"b":3,"p":7,"f":2}],"d":3,"cofactor":7}')
    code, report = call("verify", "--witness", str(path))
    assert code == EXIT_VERIFY
    assert json.loads(report)["failures"][0].startswith("divisibility")


def test_verify_file_errors(tmp_path, capsys):
    code, _ = call("verify", "--witness", str(tmp_path / "missing.json"))
    assert code == EXIT_USAGE
    assert "cannot read" in capsys.readouterr().err
    bad = tmp_path / "garbage.json"
    bad.write_text("{not json")
    code, _ = call("verify", "--witness", str(bad))
    assert code == EXIT_USAGE
    assert "malformed" in capsys.readouterr().err


def test_scan_csv_and_jsonl(tmp_path):
    code, out = call("scan", "--e", "17", "--d-max", "20", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "d,e,order,verdict,witness,bound_ok"
    assert '15,17,480,YES,"{3,5}:2^4",true' in out.splitlines()
    target = tmp_path / "scan.jsonl"
    code, out = call("scan", "--e", "2..6", "--d-max", "30", "--format", "jsonl", "--output", str(target))
    assert code == EXIT_OK and out == ""
    docs = [json.loads(x) for x in target.read_text().splitlines()]
    assert {"d", "e", "order", "verdict", "witness", "blueprint_ok", "bound_ok"} <= set(docs[0])


def test_scan_cross_check_and_jobs_env(monkeypatch):
    monkeypatch.setenv("CDCONGRUENCE_JOBS", "2")
    code, out = call("scan", "--e", "2..10", "--d-max", "60", "--cross-check", "1000000")
    assert code == EXIT_OK
    monkeypatch.setenv("CDCONGRUENCE_JOBS", "1")
    assert call("scan", "--e", "2..10", "--d-max", "60")[1] == out


def test_scan_max_records():
    code, out = call("scan", "--e", "2..10", "--d-max", "60", "--max-records", "3")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "# truncated after 3 records"
    assert len(out.splitlines()) == 5


def test_arith_subcommands():
    assert call("factor", "360") == (EXIT_OK, '{"n":360,"factors":[[2,3],[3,2],[5,1]]}\n')
    assert call("order", "2", "15") == (EXIT_OK, "4\n")
    assert call("crt", "2:3", "3:5") == (EXIT_OK, '{"solution":8,"modulus":15}\n')
    assert call("crt") == (EXIT_OK, '{"solution":0,"modulus":1}\n')
    assert call("order", "6", "9")[0] == EXIT_USAGE
    assert call("crt", "1:6", "1:4")[0] == EXIT_USAGE


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cdcongruence", "decide", "--d", "5", "--cofactor", "9"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1
    assert proc.stdout == "NO\n"
    assert proc.stderr == ""
