import json

import pytest

from cbpv.cli import main


@pytest.fixture
def write(tmp_path):
    def go(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return go


OMEGA_APP = "(sapp (slam x bool strue) (sapp (srec f bool bool x (sapp f x)) sfalse))"


def test_eval(write, capsys):
    assert main(["eval", write("m.cbpv", "(or (return true) (return false))")]) == 0
    assert capsys.readouterr().out.split("\n")[:2] == ["(return false)", "(return true)"]
    assert main(["eval", "--sig", "div", "--fuel", "50",
                 write("r.cbpv", "(rec x (F bool) (force x))")]) == 0
    assert "exhausted" in capsys.readouterr().out


def test_translate_each_strategy(write, capsys):
    src = write("e.src", OMEGA_APP)
    assert main(["translate", "--strategy", "cbn", src]) == 0
    out = capsys.readouterr().out
    assert out.startswith("(push (thunk")
    assert main(["translate", "--strategy", "cbv", src]) == 0
    assert capsys.readouterr().out.startswith("(to ")
    assert main(["translate", "--strategy", "rtl", "--ctx", "((x bool))", write("x.src", "x")]) == 0
    assert capsys.readouterr().out.strip() == "(return x)"


def test_galois_term_and_rhs(write, capsys):
    assert main(["galois-term", "--dir", "toname", "--type", "bool", write("m", "(return true)")]) == 0
    assert capsys.readouterr().out.strip() == "(to (return true) x#1 (return x#1))"
    ctx = write("ctx", "((x bool))")
    assert main(["rhs", "--ctx", ctx, write("e", "x")]) == 0
    assert capsys.readouterr().out.strip() == "(force (thunk (return x)))"


def test_denote(write, capsys):
    assert main(["denote", "--model", "downset", write("m", "(or (return true) (return false))")]) == 0
    assert capsys.readouterr().out.strip().startswith("*\t")


def test_suite_and_repro(write, tmp_path, capsys):
    out = tmp_path / "w.jsonl"
    code = main(["suite", "--model", "writer", "--types", "(-> bool bool)", "--count", "5",
                 "--json", str(out)])
    assert code == 1
    records = [json.loads(line) for line in out.read_text().splitlines()]
    bad = next(r for r in records if r["name"].startswith("galois") and r["verdict"] == "fail")
    assert main(["repro", "--witness", write("bad.json", json.dumps(bad))]) == 1
    assert json.loads(capsys.readouterr().out)["verdict"] == "fail"


def test_errors_exit_with_two(write, capsys):
    assert main(["eval", write("bad", "(return x)")]) == 2
    assert "error" in capsys.readouterr().err
