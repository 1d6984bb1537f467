import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lchkit import oracles
from lchkit.duality import (
    DualityError,
    assemble_duality,
    diagram_check,
    duality_sequence,
    h_maps_iso_check,
    q_matches_linearized,
)
from lchkit.gf2_core import ChainComplex, homology
from lchkit.parsing import parse_text
from lchkit.randomgen import random_duality
from lchkit.selftest import FIXTURE_DIR

from conftest import load


def cx(degrees, diff=None):
    return ChainComplex.from_differential(degrees, diff or {}, direction=-1)


def bundled():
    return load("unknot_duality.lch").duality()


def test_bundled_splitting_shape():
    ds = bundled()
    assert (len(ds.q_labels), len(ds.p_labels)) == (1, 1)
    assert homology(ds.c).nonzero_ranks() == {-1: 1, 0: 1}
    assert homology(ds.total).nonzero_ranks() == {} == oracles.homology_ranks(ds.total)
    lin = load("unknot_duality.lch").q_block()[0]
    assert q_matches_linearized(ds, lin)


def test_bundled_sequence_and_pairing():
    seq = duality_sequence(bundled())
    assert seq.sequence.is_exact()
    assert oracles.sequence_exact([t.dim for t in seq.sequence.terms], seq.sequence.maps) == []
    assert seq.pairing_ok and seq.adjoint and seq.pd_nondegenerate
    assert seq.pairing_checks and all(c["holds"] for c in seq.pairing_checks)
    # both circle classes enter the sequence
    ranks = {(t.name, t.degree): t.dim for t in seq.sequence.terms if t.dim}
    assert sorted(d for (name, d), r in ranks.items() if name == "H(C)") == [-1, 0]


def test_h_maps_are_isomorphisms():
    rep = h_maps_iso_check(bundled())
    assert rep["pass"] and not rep["failures"]


def test_transposed_pairing_fails_p_dual():
    q = cx({"a": 1, "b": 0}, {"a": ["b"]})
    p = cx({"pa": -2, "pb": -1}, {"pb": ["pa"]})
    with pytest.raises(DualityError) as err:
        assemble_duality(q, cx({}), p, {}, {}, {}, {"a": "pb", "b": "pa"}, 2)
    assert err.value.code == "p_dual"
    # a wrong P differential with the right pairing
    p_bad = cx({"pa": -2, "pb": -1})
    with pytest.raises(DualityError) as err:
        assemble_duality(q, cx({}), p_bad, {}, {}, {}, {"a": "pa", "b": "pb"}, 2)
    assert err.value.code == "p_dual"


def test_square_error_is_distinct():
    q = cx({"a": 1})
    c = cx({"u": 0, "v": -1})
    p = cx({"pa": 0})
    # n = 4 puts pa in degree 0; u -> v -> nothing, a -> u, u -> v gives d^2 a = v
    with pytest.raises(DualityError) as err:
        assemble_duality(q, cx({"u": 0, "v": -1}, {"u": ["v"]}), p, {"a": ["u"]}, {}, {}, {"a": "pa"}, 4)
    assert err.value.code == "square"


def n4_pair(eta):
    q, p = cx({"a": 1}), cx({"p": 0})
    return assemble_duality(q, cx({}), p, {}, {}, eta, {"a": "p"}, 4)


def test_eta_mutation_breaks_acyclicity():
    ds = n4_pair({"a": ["p"]})
    assert homology(ds.total).nonzero_ranks() == {}
    with pytest.raises(DualityError) as err:
        n4_pair({})
    assert err.value.code == "not_acyclic"


def test_zero_eta_sigma_iso_rho_zero():
    # sigma identifies C with P shifted by one; the total complex is acyclic iff Q is
    def build(qc):
        q = cx(*qc)
        pairing = {g: "p" + g for g in q.labels()}
        p = cx(
            {pairing[g]: -1 - q.degree_of(g) for g in q.labels()},
            {pairing[g]: [pairing[h] for h in q.labels() if g in q.differential_of(h)] for g in q.labels()},
        )
        c = cx({"c" + g: p.degree_of(g) + 1 for g in p.labels()}, {"c" + g: ["c" + t for t in p.differential_of(g)] for g in p.labels()})
        sigma = {"c" + g: [g] for g in p.labels()}
        return q, c, p, sigma, pairing

    q, c, p, sigma, pairing = build(({"a": 1, "b": 0}, {"a": ["b"]}))
    ds = assemble_duality(q, c, p, {}, sigma, {}, pairing, 2)
    assert duality_sequence(ds).sequence.is_exact()
    q, c, p, sigma, pairing = build(({"a": 1}, {}))
    with pytest.raises(DualityError) as err:
        assemble_duality(q, c, p, {}, sigma, {}, pairing, 2)
    assert err.value.code == "not_acyclic"


def test_zero_map_degenerate_instance():
    q = cx({"a": 1, "b": 0}, {"a": ["b"]})
    p = cx({"pa": -2, "pb": -1}, {"pb": ["pa"]})
    c = cx({"u": 0, "v": -1}, {"u": ["v"]})
    ds = assemble_duality(q, c, p, {}, {}, {}, {"a": "pa", "b": "pb"}, 2)
    seq = duality_sequence(ds)
    assert seq.sequence.is_exact()
    assert all(t.dim == 0 for t in seq.sequence.terms)


def test_not_acyclic_refused_upstream_and_in_sequence():
    ds = assemble_duality(cx({"a": 1}), cx({}), cx({"p": 0}), {}, {}, {}, {"a": "p"}, 4, require_acyclic=False)
    with pytest.raises(DualityError) as err:
        duality_sequence(ds)
    assert err.value.code == "not_acyclic"


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_splittings(seed):
    ds = random_duality(random.Random(seed))
    assert oracles.homology_ranks(ds.total) == {}
    seq = duality_sequence(ds)
    assert seq.sequence.is_exact()
    assert oracles.sequence_exact([t.dim for t in seq.sequence.terms], seq.sequence.maps) == []
    assert h_maps_iso_check(ds)["pass"]
    # random splittings carry no Poincare pairing, so C homology cannot be paired
    has_c = bool(homology(ds.c).nonzero_ranks())
    assert seq.pd_nondegenerate is (not has_c)


# -- diagram ----------------------------------------------------------------


def test_bundled_diagram_commutes():
    ws = load("unknot_diagram.lch")
    rep = diagram_check(ws.duality(), ws.two_copy(), ws.matches)
    assert rep.ok
    assert all(rep.vertical_isomorphisms.values())
    assert all(rep.chain_level.values())


def test_chain_level_break_still_commutes_on_homology():
    text = (FIXTURE_DIR / "unknot_diagram.lch").read_text()
    text = text.replace("crit M index 1\n", "crit M index 1\ncrit z index 0 deg -2\ncrit w index 1 deg -1\nd z = w\n")
    text = text.replace("row x = m\n", "row x = m + w\n")
    text = text.replace("pd m M\n", "cell zc deg 1\ncell wc deg 0\nd zc = wc\npd m M\n")
    text = text.replace("match M m\n", "match M m\nmatch z zc\nmatch w wc\n")
    ws = parse_text(text)
    tc = ws.two_copy()
    assert not oracles.homology_ranks(tc.complex)
    rep = diagram_check(ws.duality(), tc, ws.matches)
    assert rep.ok
    assert rep.chain_level["C"] is False


def test_diagram_basis_mismatch():
    ws = load("unknot_diagram.lch")
    bad = dict(ws.matches)
    bad["m"] = "nowhere"
    with pytest.raises(DualityError) as err:
        diagram_check(ws.duality(), ws.two_copy(), bad)
    assert err.value.code == "basis"
