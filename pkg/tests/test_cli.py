import json

import pytest

from pru.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


@pytest.mark.parametrize("term,inputs,expected", [
    ("s", "3", "4"),
    ("(comp z (comp (pi 2 1) (pair s s)))", "7", "0"),
    ("(rec (pi 1 1) (comp s (pi 2 2)))", "2,3", "5"),
    ("(tw 1 2)", "1,2,3", "2,3,1"),
])
def test_eval(capsys, term, inputs, expected):
    assert run(capsys, "eval", term, "--in", inputs)[:2] == (0, expected)


def test_eval_json(capsys):
    code, out, _ = run(capsys, "eval", "s", "--in", "3", "--format", "json")
    assert json.loads(out)["output"] == [4]


def test_eval_from_file(capsys, tmp_path):
    f = tmp_path / "add.pr"
    f.write_text("(rec (pi 1 1)\n  (comp s (pi 2 2)))\n")
    assert run(capsys, "eval", f"@{f}", "--in", "4,4")[:2] == (0, "8")


def test_eval_errors(capsys):
    assert run(capsys, "eval", "(comp s", "--in", "1")[0] == 2
    assert run(capsys, "eval", "(comp z (pair s s))", "--in", "1")[0] == 2
    assert run(capsys, "eval", "s", "--in", "1,2")[0] == 2
    assert run(capsys, "eval", "s", "--in", "x")[0] == 2
    assert run(capsys, "--steps", "10", "eval", "(rec (pi 1 1) (comp s (pi 2 2)))", "--in", "0,50")[0] == 3
    assert run(capsys, "eval", "(rec (pi 1 1) (comp s (pi 2 2)))", "--in", "0,50", "--steps", "10")[0] == 3


def test_check(capsys):
    code, out, _ = run(capsys, "check", "(comp s (comp s z))", "(comp (comp s s) z)", "-u", "C")
    assert code == 0 and out.startswith("equal")
    code, out, _ = run(capsys, "check", "s", "z", "-u", "Func")
    assert code == 1 and out.startswith("notequal")
    nno = ("(rec (pi 1 1) (pi 2 2))", "(comp (pi 1 1) (pi 2 1))")
    code, out, _ = run(capsys, "check", *nno, "-u", "CatN", "--caps-size", "1", "--caps-count", "1")
    assert code == 4 and out.startswith("unknown")
    assert run(capsys, "check", "s", "(pi 2 1)", "-u", "C")[0] == 2


def test_check_witness(capsys):
    code, out, _ = run(capsys, "check", "(rec (pi 1 1) (pi 2 2))", "(comp (pi 1 1) (pi 2 1))",
                       "-u", "CatN", "--witness", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["replayed"] and data["witness"][0]["rule"] == "nno-id"
    assert set(data) >= {"verdict", "witness", "universe", "caps"}


def test_normalize(capsys):
    assert run(capsys, "normalize", "(comp s (comp s z))", "-u", "C")[:2] == (0, "(comp (comp s s) z)")
    assert run(capsys, "normalize", "(comp (id 1) s)", "-u", "I")[:2] == (0, "s")
    once = run(capsys, "normalize", "(comp (pair s z) (comp s s))", "-u", "CatX")[1]
    assert run(capsys, "normalize", once, "-u", "CatX")[1] == once
    code, _, err = run(capsys, "normalize", "s", "-u", "CatN")
    assert code == 2 and "CatN" in err


def test_unknown_universe_is_usage_error(capsys):
    assert run(capsys, "check", "s", "s", "-u", "Nope")[0] == 2


def test_enum(capsys):
    code, out, _ = run(capsys, "enum", "--max-size", "1")
    assert code == 0 and out.splitlines()[:4] == ["# 1->1: 3 terms", "s", "z", "(pi 1 1)"]
    code, out, _ = run(capsys, "enum", "--max-size", "3", "--no-rec", "--format", "json")
    data = json.loads(out)
    assert data["homsets"] == {"1->1": 12, "1->2": 9, "2->1": 8, "2->2": 4}
    assert run(capsys, "enum", "--max-size", "21", "--max-width", "3")[0] == 5


def test_galois(capsys):
    code, out, _ = run(capsys, "galois", "--max-size", "3", "--universes", "Desc,C,Cat",
                       "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["ok"]
    assert set(data["partitions"]) == {"Desc", "C", "Cat"}
    assert data["semantic_basis"] == "fingerprint"


def test_galois_rigidity(capsys):
    code, out, _ = run(capsys, "galois", "--ops", "comp,rec,pair", "--fix-initials",
                       "--universes", "Desc", "--samples", "2")
    assert code == 0 and "order 1" in out.splitlines()[-2]


def test_lattice(capsys):
    code, out, _ = run(capsys, "lattice", "--max-size", "3", "--universes", "Desc,C,Cat")
    assert code == 0
    assert "Desc -> C: refines" in out and "C -> Cat: refines" in out


def test_fuzz(capsys):
    code, out, err = run(capsys, "fuzz", "--count", "50", "--rule-instances", "10", "--seed", "4")
    assert code == 0 and "0 failures" in out and "seed 4" in err


def test_config_file(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"format": "json", "universe": "C"}))
    monkeypatch.setenv("PRU_CONFIG", str(cfg))
    code, out, _ = run(capsys, "normalize", "(comp s (comp s z))")
    assert code == 0 and json.loads(out)["normal_form"] == "(comp (comp s s) z)"
    # flags override the file
    assert run(capsys, "normalize", "(comp s (comp s z))", "--format", "text")[1] == "(comp (comp s s) z)"
    cfg.write_text(json.dumps({"colour": "red"}))
    assert run(capsys, "eval", "s", "--in", "1")[0] == 2
