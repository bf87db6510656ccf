import json

import pytest

from latpair.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def pair_file(tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(json.dumps({"gamma1": "3/5,1;0,5/3", "gamma2": "1,0;0,1"}))
    return str(path)


def test_check_witness_pass(capsys, pair_file, tmp_path):
    w = tmp_path / "w.txt"
    w.write_text("0,1;1,5/3\n")
    code, out, _ = run(capsys, "check-witness", "--pair", pair_file, "--witness", str(w))
    assert code == 0
    assert json.loads(out) == {"verdict": "pass", "failed_condition": "none"}


def test_check_witness_fail(capsys, pair_file):
    code, out, _ = run(capsys, "check-witness", "--pair", pair_file, "--witness", "1,0;0,1", "--all-failures")
    report = json.loads(out)
    assert code == 1 and report["verdict"] == "fail"
    assert report["failures"]


def test_check_single_quadratic(capsys):
    code, out, _ = run(capsys, "check-single", "--lattice", "sqrt(2),0;0,1/2*sqrt(2)", "--witness", "1,0;0,1", "--radicand", "2")
    assert code == 1
    assert json.loads(out)["image"] == ["0", "1/2*sqrt(2)"]


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "check-single", "--lattice", "1,;2", "--witness", "1")
    assert code == 2 and "row 1" in err


def test_construct(capsys):
    code, out, _ = run(capsys, "construct", "--family", "cascade", "--p", "2,3")
    obj = json.loads(out)
    assert code == 0 and obj["family"] == "cascade"
    assert obj["pair"]["gamma1"]["rows"][2][2] == "1/6"
    code, out, _ = run(capsys, "construct", "--family", "tensor", "--base", '{"family": "coprime2", "m": 3, "n": 5}', "--N", "0,1;-1,0")
    assert code == 0 and json.loads(out)["pair"]["gamma1"]["dim"] == 4
    code, out, _ = run(
        capsys, "construct", "--family", "direct_sum",
        "--a", '{"family": "unipotent", "t": "1,1/2;0,1"}', "--b", '{"family": "diagonal", "m": "2,3"}',
    )
    assert code == 0 and json.loads(out)["witness"]["dim"] == 5
    code, _, _ = run(capsys, "construct", "--family", "coprime2", "--m", "4", "--n", "6")
    assert code == 2


def test_construct_output_feeds_check(capsys, tmp_path):
    _, out, _ = run(capsys, "construct", "--family", "coprime2", "--m", "3", "--n", "5")
    obj = json.loads(out)
    (tmp_path / "pair.json").write_text(json.dumps(obj["pair"]))
    (tmp_path / "w.json").write_text(json.dumps(obj["witness"]))
    code, _, _ = run(capsys, "check-witness", "--pair", str(tmp_path / "pair.json"), "--witness", str(tmp_path / "w.json"))
    assert code == 0


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--lattice", "1,0;0,1", "--box", "2,0;0,1/2")
    assert code == 0 and out.splitlines() == ["-1,0", "0,0", "1,0"]
    code, out, _ = run(capsys, "enumerate", "--lattice", "1,0;0,1", "--box", "1,0;0,1", "--topology", "closed_pm1", "--json")
    assert len(json.loads(out)["points"]) == 9
    code, _, err = run(capsys, "enumerate", "--lattice", "1,0;0,1", "--box", "1000,0;0,1000", "--max-cells", "10")
    assert code == 2 and "BoxTooLarge" in err


def test_verify_mc(capsys):
    code, out, _ = run(capsys, "verify-mc", "--witness", "1,7/3;0,1", "--lattice", "1,0;0,1", "--samples", "100")
    assert code == 0 and json.loads(out)["details"]["samples_checked"] == 100
    code, out, _ = run(capsys, "verify-mc", "--witness", "2,0;0,1/2", "--lattice", "1,0;0,1", "--samples", "100")
    assert code == 1


def test_notgood_scan(capsys):
    code, out, _ = run(capsys, "notgood-scan", "--r", "3", "--count", "10", "--pretty")
    assert code == 0 and json.loads(out)["details"]["passing_witnesses"] == []
    code, _, _ = run(capsys, "notgood-scan", "--r", "4")
    assert code == 2


def test_equal_lattices(capsys):
    assert run(capsys, "equal-lattices", "--a", "2,1;1,1", "--b", "1,0;0,1")[0] == 0
    assert run(capsys, "equal-lattices", "--a", "2,0;0,1", "--b", "1,0;0,1")[0] == 1


def test_emit_svg(capsys, tmp_path):
    out_file = tmp_path / "t.svg"
    code, _, _ = run(capsys, "emit-svg", "--witness", "1,0;0,1", "--lattice", "1,0;0,1", "--out", str(out_file))
    assert code == 0 and out_file.read_text().count("<polygon") == 25
    code, out, _ = run(capsys, "emit-svg", "--witness", "1,0,0;0,1,0;0,0,1", "--lattice", "1,0,0;0,1,0;0,0,1")
    assert code == 2


def test_repeat_invocations_identical(capsys, pair_file):
    first = run(capsys, "check-witness", "--pair", pair_file, "--witness", "1,0;0,1")
    run(capsys, "construct", "--family", "cascade", "--p", "5")
    second = run(capsys, "check-witness", "--pair", pair_file, "--witness", "1,0;0,1")
    assert first == second
