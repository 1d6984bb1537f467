from fractions import Fraction

import pytest

from lchkit.parsing import ParseError, parse, parse_text

from conftest import FIXTURES, load

HEAD = "ambient n 2\n"


def err(text):
    with pytest.raises(ParseError) as info:
        parse_text(text, "t.lch")
    return info.value


def test_unknot_has_one_generator():
    ws = load("unknot.lch")
    assert ws.ambient_n == 2
    assert [g.name for g in ws.dga.generators] == ["a"]
    assert ws.dga.generators[0].action == Fraction(1, 2)


@pytest.mark.parametrize("name", FIXTURES)
def test_every_fixture_parses(name):
    ws = load(name)
    assert ws.sha256 and len(ws.sha256) == 64


def test_both_header_forms():
    a = parse_text("ambient n 3\ngen a deg 1 action 1\n")
    b = parse_text("ambient 3\ngen a deg 1 action 1\n")
    assert a.ambient_n == b.ambient_n == 3


def test_empty_file():
    e = err("")
    assert e.message == "missing ambient header"
    assert "missing ambient header" in err("# only a comment\n\n").message


def test_header_must_come_first():
    e = err("gen a deg 1 action 1\nambient n 2\n")
    assert e.message == "missing ambient header" and e.line == 1


@pytest.mark.parametrize("text", ["ambient n 0\n", "ambient n -2\n"])
def test_nonpositive_dimension(text):
    assert err(text).message == "ambient dimension must be positive"


def test_nonpositive_action_has_position():
    e = err(HEAD + "gen a deg 1 action 0\n")
    assert e.message == "action must be positive"
    assert (e.line, e.col) == (2, 20)
    assert str(e).startswith("t.lch:2:20: ")


def test_bad_rational_reports_column():
    e = err(HEAD + "gen a deg 1 action 1/x\n")
    assert e.message == "bad rational '1/x'"
    assert (e.line, e.col) == (2, 20)
    e = err(HEAD + "gen a deg 1 action 3/0\n")
    assert "zero denominator" in e.message


def test_unknown_section_and_directive():
    assert err(HEAD + "[morse moon]\n").message == "unknown section [morse moon]"
    e = err(HEAD + "frob a\n")
    assert e.message.startswith("unknown directive 'frob'")
    e = err(HEAD + "[block c]\ngen a deg 1 action 1\n")
    assert e.message.startswith("unknown directive 'gen'")


def test_duplicate_section_and_names():
    e = err(HEAD + "[diagram]\n[diagram]\n")
    assert e.message == "section [diagram] appears twice" and e.line == 3
    e = err(HEAD + "gen a deg 1 action 1\ngen a deg 0 action 1\n")
    assert e.message.startswith("duplicate name 'a'")
    e = err(HEAD + "gen a deg 1 action 1\nd a = 1\nd a = 1\n")
    assert e.message == "second differential for 'a'"


def test_unknown_generator_in_differential():
    e = err(HEAD + "gen a deg 1 action 1\nd a = b\n")
    assert e.message == "unknown generator 'b'"
    assert (e.line, e.col) == (3, 7)


def test_sum_syntax():
    assert err(HEAD + "gen a deg 1 action 1\nd a = 1 +\n").message == "dangling '+'"
    assert err(HEAD + "gen a deg 1 action 2\ngen b deg 0 action 1\nd a = 1 b\n").message == (
        "the unit must stand alone in a term"
    )


def test_differential_words_and_unit():
    ws = load("trefoil.lch")
    words = ws.dga.d("a1").words
    assert () in words and ("b1", "b2", "b3") in words


DISK = HEAD + "gen a deg 1 action 1\n\n[morse lambda]\ncrit m index 0\ncrit M index 1\n\n[morse filling]\ncrit x index 0\n"


def test_chord_tags_accepted():
    ws = parse_text(DISK + "\n[connect rho]\nrow x = m!short\n\n[connect short]\nrow M = a'!long\n")
    assert ws.connect["short"]["M"] == ["a'"]
    assert ws.connect["rho"]["x"] == ["m"]


def test_chord_tags_checked():
    e = err(DISK + "\n[connect short]\nrow M = a'!short\n")
    assert e.message == "\"a'\" is not a short chord"
    e = err(DISK + "\n[connect rho]\nrow x = m!long\n")
    assert e.message == "'m' is not a long chord"
    e = err(DISK + "\n[connect rho]\nrow x = m!tall\n")
    assert e.message == "unknown chord tag '!tall'"


def test_crit_options():
    ws = parse_text(HEAD + "gen a deg 1 action 1\n[morse lambda]\ncrit m index 0 deg -3 action 1/4\n")
    (pt,) = ws.crit["lambda"]
    assert (pt.index, pt.degree, pt.action) == (0, -3, Fraction(1, 4))
    assert err(HEAD + "[morse lambda]\ncrit m index 0 weight 2\n").message == "unexpected 'weight'"


def test_mono_and_aug():
    ws = load("trefoil_genus1.lch")
    assert ws.mono.C0 == Fraction(-1, 2) and ws.mono.C1 == Fraction(1, 3)
    assert ws.augmentation().ones == frozenset({"b3"})
    assert err(HEAD + "mono C0 0 C1 0\n").message == "C1 must be positive"
    e = err(HEAD + "gen b deg 0 action 1\naug b\naug b\n")
    assert e.message == "only one aug line is allowed"


def test_sections_detected():
    assert not load("unknot.lch").has_two_copy
    assert load("unknot_disk.lch").has_two_copy
    ws = load("unknot_diagram.lch")
    assert ws.has_two_copy and ws.has_duality and ws.matches


def test_missing_file(tmp_path):
    with pytest.raises(ParseError) as info:
        parse(tmp_path / "absent.lch")
    assert "cannot read file" in str(info.value)
    assert ":0:0" not in str(info.value)


def test_sha256_tracks_bytes(tmp_path):
    p = tmp_path / "x.lch"
    p.write_text("ambient n 2\n")
    h1 = parse(p).sha256
    p.write_text("ambient n 2\n# comment\n")
    assert parse(p).sha256 != h1
