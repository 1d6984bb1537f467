import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

import pytest

from lchkit.cli import main, parse_homology, parse_window, poincare
from lchkit.selftest import FIXTURE_DIR


def fx(name):
    return str(FIXTURE_DIR / name)


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = call(capsys, *argv)
    return code, json.loads(out), err


# -- helpers -----------------------------------------------------------------


def test_poincare_strings():
    assert poincare({0: 2, 1: 1}) == "2 + t"
    assert poincare({-1: 1}) == "t^-1"
    assert poincare({}) == "0"


def test_homology_and_window_parsers():
    assert parse_homology("0:1,1:2") == {0: 1, 1: 2}
    assert parse_window("-1..2") == (-1, 2)


# -- exit code 0 -----------------------------------------------------------


@pytest.mark.parametrize(
    "argv,status",
    [
        (("check", "trefoil.lch"), "pass"),
        (("augs", "trefoil.lch"), "pass"),
        (("lch", "trefoil.lch"), "pass"),
        (("e1", "trefoil.lch"), "pass"),
        (("sft-e1", "unknot.lch"), "pass"),
        (("two-copy", "unknot_disk.lch"), "pass"),
        (("two-copy", "trefoil_genus1.lch"), "pass"),
        (("duality", "unknot_duality.lch"), "pass"),
        (("diagram", "unknot_diagram.lch"), "pass"),
        (("moves", "unknot_disk.lch"), "pass"),
    ],
)
def test_passing_commands(capsys, argv, status):
    code, rep, _ = report(capsys, argv[0], fx(argv[1]))
    assert code == 0
    assert rep["status"] == status
    assert rep["command"] == argv[0]
    assert len(rep["input"]["sha256"]) == 64


def test_augs_on_stabilized_is_zero_not_error(capsys):
    code, rep, _ = report(capsys, "augs", fx("stabilized.lch"))
    assert code == 0
    assert rep["result"]["summary"] == "0 augmentations"
    assert rep["result"]["augmentations"] == []


def test_augs_trefoil_listing(capsys):
    _, rep, _ = report(capsys, "augs", fx("trefoil.lch"))
    assert rep["result"]["augmentations"] == ["001", "011", "100", "110", "111"]
    (entry,) = rep["result"]["poincare"]
    assert entry["count"] == 5 and entry["poincare"] == "2 + t"


def test_fill_check_unknot_disk(capsys):
    code, rep, _ = report(capsys, "fill-check", fx("unknot.lch"), "--homology", "0:1")
    assert code == 0 and rep["status"] == "consistent"


def test_two_copy_reports_assumptions(capsys):
    _, rep, _ = report(capsys, "two-copy", fx("unknot_disk.lch"))
    assert rep["assumptions"] and rep["assumptions"][0].startswith("two-copy correspondences assumed")
    assert all(rep["result"]["identities"].values())


def test_e1_without_constants_is_uncertified(capsys):
    text = (FIXTURE_DIR / "unknot.lch").read_text().replace("mono C0 0 C1 1\n", "")
    code, rep, _ = _tmp_report(capsys, text, "e1")
    assert code == 0 and rep["status"] == "uncertified"
    assert rep["result"]["certified"] is False


def test_moves_slide_and_cancel(capsys):
    code, rep, _ = report(capsys, "moves", fx("trefoil_genus1.lch"), "--cancel", "b1'", "a1'")
    assert code == 0
    (move,) = rep["result"]["moves"]
    assert move["ranks_preserved"] and move["homotopy_square"]
    code, rep, _ = report(capsys, "moves", fx("trefoil_genus1.lch"), "--slide", "x1", "x2")
    assert code == 0 and rep["result"]["moves"][0]["chain_map"]


def test_cancel_across_blocks_refused(capsys):
    code, rep, _ = report(capsys, "moves", fx("unknot_disk.lch"), "--cancel", "x", "m")
    assert code == 2 and rep["error"]["type"] == "MovePrecondition"


# -- exit code 1 -----------------------------------------------------------


@pytest.mark.parametrize(
    "argv,status",
    [
        (("fill-check", "trefoil.lch", "--homology", "0:1"), "obstructed"),
        (("fill-check", "stabilized.lch", "--homology", "0:1"), "obstructed"),
        (("lch", "stabilized.lch"), "no_augmentation"),
        (("e1", "stabilized.lch"), "no_augmentation"),
    ],
)
def test_mathematical_failures(capsys, argv, status):
    code, rep, err = report(capsys, argv[0], fx(argv[1]), *argv[2:])
    assert code == 1
    assert rep["status"] == status
    assert err == ""


def test_bad_dga_fails_check(capsys):
    code, rep, _ = _tmp_report(capsys, "ambient n 2\ngen a deg 1 action 1\ngen b deg 0 action 2\nd a = b\n", "check")
    assert code == 1 and rep["status"] == "fail"
    assert rep["result"]["checks"]["action"] is False


def test_not_acyclic_duality_is_exit_1(capsys):
    text = "ambient n 4\ngen a deg 1 action 1\n[block q]\ncell a deg 1\n[block p]\ncell p deg 0\npair a p\n"
    code, rep, _ = _tmp_report(capsys, text, "duality")
    assert code == 1 and rep["status"] == "not_acyclic"


# -- exit code 2 -----------------------------------------------------------


def test_refusal_is_input_error(capsys):
    code, rep, _ = report(capsys, "e1", fx("unknot.lch"), "--c0", "5", "--c1", "1")
    assert code == 2 and rep["status"] == "refused"
    assert rep["result"]["refused_chords"] == ["a"]


def test_negative_values_reach_the_flags(capsys):
    code, rep, _ = report(capsys, "e1", fx("trefoil.lch"), "--c0", "-1/2", "--c1", "1/3", "--degrees", "-1..2")
    assert code == 0
    assert rep["result"]["window"] == [-1, 2]
    assert rep["result"]["constants"] == {"C0": "-1/2", "C1": "1/3"}


def test_half_constants_rejected(capsys):
    code, rep, err = report(capsys, "e1", fx("trefoil.lch"), "--c0", "1")
    assert code == 2 and rep["error"]["type"] == "InputError"
    assert err.startswith("lchkit: ")


def test_missing_file(capsys, tmp_path):
    code, rep, err = report(capsys, "check", str(tmp_path / "nope.lch"))
    assert code == 2 and rep["error"]["type"] == "ParseError"
    assert "cannot read file" in err


def test_parse_error_position(capsys):
    code, rep, err = _tmp_report(capsys, "ambient n 2\ngen a deg 1 action 0\n", "check")
    assert code == 2
    assert ":2:20: action must be positive" in rep["error"]["message"]


@pytest.mark.parametrize("cmd", ["two-copy", "duality", "diagram"])
def test_missing_sections(capsys, cmd):
    code, rep, _ = report(capsys, cmd, fx("unknot.lch"))
    assert code == 2 and rep["status"] == "error"


def test_bad_aug_bits(capsys):
    code, rep, _ = report(capsys, "lch", fx("trefoil.lch"), "--aug", "000")
    assert code == 2 and rep["error"]["type"] == "InputError"
    code, rep, _ = report(capsys, "lch", fx("trefoil.lch"), "--aug", "01")
    assert code == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["fill-check", fx("unknot.lch")])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


# -- output ----------------------------------------------------------------


def test_json_is_sorted_and_deterministic(capsys):
    _, a, _ = call(capsys, "two-copy", fx("trefoil_genus1.lch"))
    _, b, _ = call(capsys, "two-copy", fx("trefoil_genus1.lch"))
    assert a == b
    assert a == json.dumps(json.loads(a), indent=2, sort_keys=True) + "\n"


def test_pretty_output(capsys):
    code, out, _ = call(capsys, "augs", fx("trefoil.lch"), "--pretty")
    assert code == 0
    assert "5 augmentations" in out
    with pytest.raises(ValueError):
        json.loads(out)


def test_selftest_byte_identical(capsys):
    code, a, _ = call(capsys, "selftest")
    assert code == 0
    _, b, _ = call(capsys, "selftest")
    assert a == b
    rep = json.loads(a)
    assert rep["status"] == "pass" and rep["result"]["summary"]["suite_failures"] == []


def test_selftest_seed_override(capsys):
    code, rep, _ = report(capsys, "selftest", "--seed", "7")
    assert code == 0 and rep["result"]["seed"] == 7


def test_selftest_corrupt_fixtures(capsys, tmp_path):
    bad = tmp_path / "fx"
    shutil.copytree(FIXTURE_DIR, bad)
    (bad / "trefoil.lch").write_text("ambient n 2\ngen a1 deg 1 action\n")
    code, rep, _ = report(capsys, "selftest", "--fixtures", str(bad))
    assert code == 2 and rep["error"]["type"] == "FixtureError"
    code, rep, _ = report(capsys, "selftest", "--fixtures", str(tmp_path / "missing"))
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "lchkit", "check", fx("unknot.lch")], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "pass"


def _tmp_report(capsys, text, *argv):
    with tempfile.TemporaryDirectory() as d:
        p = Path(d) / "in.lch"
        p.write_text(text)
        return report(capsys, argv[0], str(p), *argv[1:])
