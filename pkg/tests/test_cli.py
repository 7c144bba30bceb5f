import json

import pytest

from foxtangle.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_invariants_text(capsys):
    code, out, _ = run(capsys, "invariants", "--ring", "z", "1,7,-5,-11")
    assert code == 0
    assert out.strip() == "Δ=0 d=6 k=1 M=[1,1,7,7]@mod12"


def test_invariants_json_is_stable(capsys):
    _, first, _ = run(capsys, "invariants", "--json", "-3, 4,5,0")
    _, second, _ = run(capsys, "invariants", "--json", "-3, 4,5,0")
    assert first == second
    assert json.loads(first)["d"] == 1


def test_realizable_trace(capsys):
    code, out, _ = run(capsys, "realizable", "--ring", "z", "2,6,10,2", "--trace")
    assert code == 1
    assert out.splitlines()[0].startswith("no")
    assert "(0,1,2,0)" in out


def test_realizable_variants(capsys):
    assert run(capsys, "realizable", "0,3,3,2")[0] == 0
    assert run(capsys, "realizable", "0,3,3,2", "--classical")[0] == 1
    assert run(capsys, "realizable", "0,7", "--loops")[0] == 1
    assert run(capsys, "realizable", "1,7", "--loops")[0] == 0
    assert run(capsys, "realizable", "--ring", "zp", "--p", "9", "0,7")[0] == 0


def test_realize_then_verify(capsys, tmp_path):
    out_dir = tmp_path / "w"
    code, _, _ = run(capsys, "realize", "--ring", "zp", "--p", "3", "0,2", "--out", str(out_dir))
    assert code == 0
    code, out, _ = run(capsys, "verify", str(out_dir / "diagram.json"), str(out_dir / "coloring.json"),
                       "--expect", "0,2")
    assert code == 0 and "matches" in out


@pytest.mark.parametrize("argv", [
    ["0,3,3,2"],
    ["-1,4,2,-5,0,0"],
    ["1,7", "--loops"],
    ["--ring", "zp", "--p", "9", "1,2,3,4"],
    ["0,-5,-1,4", "--classical"],
])
def test_realize_round_trips(capsys, tmp_path, argv):
    out_dir = tmp_path / "w"
    code, _, _ = run(capsys, "realize", *argv, "--out", str(out_dir), "--json")
    assert code == 0
    vec = next(a for a in argv if "," in a)
    code, out, _ = run(capsys, "verify", str(out_dir / "diagram.json"), str(out_dir / "coloring.json"),
                       "--expect", vec, "--json")
    assert code == 0 and json.loads(out)["matches"] is True
    code, out, _ = run(capsys, "solve", str(out_dir / "diagram.json"), "--json")
    assert code == 0 and json.loads(out)["rank"] >= 1


def test_realize_refuses(capsys, tmp_path):
    code, _, err = run(capsys, "realize", "2,6,10,2", "--out", str(tmp_path / "x"))
    assert code == 1 and "no" in err


def test_verify_detects_bad_coloring(capsys, tmp_path):
    out_dir = tmp_path / "w"
    run(capsys, "realize", "0,3,3,2", "--out", str(out_dir))
    data = json.loads((out_dir / "coloring.json").read_text())
    key = next(iter(data["coloring"]))
    data["coloring"][key] += 1
    (out_dir / "bad.json").write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", str(out_dir / "diagram.json"), str(out_dir / "bad.json"))
    assert code == 1 and out.startswith("invalid")


def test_hurwitz_commands(capsys):
    code, out, _ = run(capsys, "hurwitz", "act", "0,1,2,3", "s1")
    assert code == 0 and out.strip() == "(1,2,2,3)"
    assert run(capsys, "hurwitz", "equiv", "0,1,2,3", "0,3,2,1")[0] == 0
    assert run(capsys, "hurwitz", "equiv", "0,1,2,3", "0,1,2,5")[0] == 1
    code, out, _ = run(capsys, "hurwitz", "connect", "0,1,2,3", "0,3,2,1", "--json")
    assert code == 0
    word = json.loads(out)["word"]
    code, out, _ = run(capsys, "hurwitz", "act", "0,1,2,3", word)
    assert out.strip() == "(0,3,2,1)"
    assert run(capsys, "hurwitz", "connect", "0,1,2,3", "0,1,2,5")[0] == 1


def test_usage_and_input_errors(capsys, tmp_path):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "invariants", "1,2,3")[0] == 2
    assert run(capsys, "invariants", "--ring", "zp", "1,2")[0] == 2
    assert run(capsys, "invariants", "--ring", "zp", "--p", "4", "1,2")[0] == 2
    assert run(capsys, "verify", str(tmp_path / "missing.json"), str(tmp_path / "c.json"))[0] == 2
    assert run(capsys, "hurwitz", "act", "0,1", "s5")[0] == 2
