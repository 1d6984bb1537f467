import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lchkit import oracles
from lchkit.augmentations import (
    Augmentation,
    HomotopyWitness,
    NotAnAugmentation,
    conjugate,
    dualize,
    enumerate_augmentations,
    homology_ranks_dual,
    homotopy_check,
    is_augmentation,
    linearized_complex,
    poincare_multiset,
    validate_witness,
)
from lchkit.dga import DgaError, DgaPresentation, Generator, Gf2Sum
from lchkit.gf2_core import homology
from lchkit.randomgen import random_dga

from conftest import FIXTURES, load

F = Fraction


def dga(gens, diff=None):
    return DgaPresentation(
        tuple(Generator(n, d, F(a)) for n, d, a in gens),
        {k: Gf2Sum(v) for k, v in (diff or {}).items()},
    )


CB = dga([("c", 1, 2), ("b", 0, 1)], {"c": [(), ("b",)]})


def test_unknot_style_has_only_the_zero_augmentation():
    augs = enumerate_augmentations(dga([("a", 1, 1)]))
    assert [a.ones for a in augs] == [frozenset()]


def test_unit_plus_b_forces_b():
    assert [a.ones for a in enumerate_augmentations(CB)] == [frozenset({"b"})]


def test_unit_differential_has_no_augmentation():
    assert enumerate_augmentations(dga([("c", 1, 1)], {"c": [()]})) == []


def test_enumeration_order_is_lexicographic():
    d = load("trefoil.lch").dga
    names = [g.name for g in d.generators if g.degree == 0]
    bits = [a.bitstring(names) for a in enumerate_augmentations(d)]
    assert bits == sorted(bits)
    assert bits == ["001", "011", "100", "110", "111"]


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_augmentations_match_exhaustive_search(name):
    d = load(name).dga
    assert {a.ones for a in enumerate_augmentations(d)} == set(oracles.augmentations(d))


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_random_augmentations_match_exhaustive_search(seed):
    d = random_dga(random.Random(seed))
    augs = enumerate_augmentations(d)
    assert {a.ones for a in augs} == set(oracles.augmentations(d))
    for eps in augs:
        assert all(eps.evaluate(d.d(c)) == 0 for c in d.names)


def test_ungraded_mode_may_use_any_generator():
    d = dga([("a", 1, 2), ("x", 2, 3)], {"x": [("a",)]})
    # eps(d x) = eps(a) forces a to 0 and leaves x free
    assert [a.ones for a in enumerate_augmentations(d, graded=False)] == [frozenset(), frozenset({"x"})]
    d2 = dga([("a", 1, 2), ("x", 1, 3)])
    assert len(enumerate_augmentations(d2, graded=False)) == 4
    assert len(enumerate_augmentations(d2)) == 1


# -- conjugation and linearization ------------------------------------------


def test_zero_augmentation_conjugates_trivially():
    d = dga([("c", 1, 3), ("b", 0, 1), ("e", 0, 1)], {"c": [("b", "e")]})
    assert conjugate(d, Augmentation.from_ones([])) == {n: d.d(n) for n in d.names}
    stab = load("stabilized.lch").dga
    got = conjugate(stab, Augmentation.from_ones([]), strict=False)
    assert got == {n: stab.d(n) for n in stab.names}


def test_conjugate_unit_plus_b():
    assert conjugate(CB, Augmentation.from_ones(["b"]))["c"] == Gf2Sum.word("b")


def test_conjugate_be_plus_e():
    d = dga([("c", 1, 3), ("b", 0, 1), ("e", 0, 1)], {"c": [("b", "e"), ("e",)]})
    assert conjugate(d, Augmentation.from_ones(["b"]))["c"] == Gf2Sum.word("b", "e")


def test_conjugate_rejects_non_augmentation():
    with pytest.raises(NotAnAugmentation):
        conjugate(CB, Augmentation.from_ones([]))


@pytest.mark.parametrize("name", ["trefoil.lch", "unknot.lch"])
def test_conjugation_is_an_involution(name):
    d = load(name).dga
    for eps in enumerate_augmentations(d):
        once = conjugate(d, eps)
        again = DgaPresentation(d.generators, once, d.ambient_n)
        assert conjugate(again, eps, strict=False) == {n: d.d(n) for n in d.names}


def test_linearized_unknot_and_unit_plus_b():
    lin = linearized_complex(load("unknot.lch").dga, Augmentation.from_ones([]))
    assert homology(lin.complex).nonzero_ranks() == {1: 1}
    lin = linearized_complex(CB, Augmentation.from_ones(["b"]))
    assert homology(lin.complex).nonzero_ranks() == {}


def test_linearization_needs_degree_zero_support():
    with pytest.raises(DgaError):
        linearized_complex(CB, Augmentation.from_ones(["c"], graded=False))


@pytest.mark.parametrize("name", FIXTURES)
def test_linearized_ranks_match_oracle_and_duality(name):
    d = load(name).dga
    for eps in enumerate_augmentations(d):
        lin = linearized_complex(d, eps)
        c = lin.complex
        for g in c.labels():
            acc = set()
            for t in c.differential_of(g):
                acc ^= set(c.differential_of(t))
            assert not acc
        ranks = homology(c).nonzero_ranks()
        assert ranks == oracles.linearized_ranks(d, eps.ones)
        assert homology_ranks_dual(lin) == ranks
        assert dualize(dualize(lin)) == c


def test_trefoil_poincare_multiset():
    d = load("trefoil.lch").dga
    assert poincare_multiset(d, enumerate_augmentations(d)) == [{"ranks": {"0": 2, "1": 1}, "count": 5}]


# -- homotopies -------------------------------------------------------------


def test_equal_augmentations_with_zero_witness():
    d = load("trefoil.lch").dga
    eps = enumerate_augmentations(d)[0]
    assert homotopy_check(d, eps, eps, HomotopyWitness.of([]))


def test_hand_expanded_witness_example():
    d = dga([("c", 1, 3), ("b", 0, 1), ("b2", 0, 1)], {"c": [(), ("b",), ("b2",)]})
    em, ep = Augmentation.from_ones(["b"]), Augmentation.from_ones(["b2"])
    assert is_augmentation(d, em) and is_augmentation(d, ep)
    # on c both sides vanish: K(b) + K(b2) = 0; on b and b2 the left side is 1 and d = 0
    res = homotopy_check(d, em, ep, HomotopyWitness.of(["b", "b2"]))
    assert not res
    assert res.failures == ["b", "b2"]


def test_witness_off_every_differential_cannot_help():
    d = dga([("c", 1, 3), ("b", 0, 1), ("b2", 0, 1), ("z", -1, 1)], {"c": [(), ("b",), ("b2",)]})
    em, ep = Augmentation.from_ones(["b"]), Augmentation.from_ones(["b2"])
    res = homotopy_check(d, em, ep, HomotopyWitness.of(["z"]))
    assert not res
    assert validate_witness(d, HomotopyWitness.of(["z", "b"])) == ["b"]


def test_witness_connecting_two_augmentations():
    # d x = b z + 1 + b with |z| = -1: K(z) = 1 links eps(b) = 0 and eps(b) = 1
    d = dga([("x", 0, 3), ("b", 0, 1), ("z", -1, 1)], {"b": [("z",)]})
    em, ep = Augmentation.from_ones([]), Augmentation.from_ones(["b"])
    assert homotopy_check(d, em, ep, HomotopyWitness.of(["z"]))
