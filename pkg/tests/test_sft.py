import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lchkit import oracles
from lchkit.augmentations import Augmentation, NotAnAugmentation, enumerate_augmentations, homology_ranks_dual, linearized_complex
from lchkit.dga import DgaPresentation, Generator, Gf2Sum, MonotonicityConstants
from lchkit.gf2_core import homology, verify_chain_map
from lchkit.randomgen import random_dga
from lchkit.sft import (
    MonotonicityError,
    TruncationTower,
    build_sft,
    build_tower,
    e1_limit,
    lch_sft_check,
    tower_samples,
    truncate,
)

from conftest import FIXTURES, load

F = Fraction


def test_unknot_zero_differential():
    d = load("unknot.lch").dga
    sft = build_sft(d, Augmentation.from_ones([]))
    assert sft.complex.differential_of("a") == []
    assert homology(sft.complex).nonzero_ranks() == {1: 1}


def test_single_entry_transpose():
    d = DgaPresentation((Generator("c", 1, F(2)), Generator("b", 0, F(1))), {"c": Gf2Sum([(), ("b",)])})
    sft = build_sft(d, Augmentation.from_ones(["b"]))
    assert sft.complex.differential_of("b") == ["c"]
    assert sft.complex.differential_of("c") == []


def test_non_augmentation_is_rejected():
    d = load("trefoil.lch").dga
    with pytest.raises(NotAnAugmentation):
        build_sft(d, Augmentation.from_ones([]))
    with pytest.raises(NotAnAugmentation):
        lch_sft_check(d, Augmentation.from_ones([]), MonotonicityConstants(F(-1, 2), F(1, 3)))


@pytest.mark.parametrize("name", FIXTURES)
def test_sft_homology_is_linearized_cohomology(name):
    d = load(name).dga
    for eps in enumerate_augmentations(d):
        sft = build_sft(d, eps)
        assert homology(sft.complex).nonzero_ranks() == homology_ranks_dual(linearized_complex(d, eps))
        assert homology(sft.complex).nonzero_ranks() == oracles.homology_ranks(sft.complex)
        for c in sft.complex.labels():
            assert all(sft.action[b] > sft.action[c] for b in sft.complex.differential_of(c))
            assert all(sft.complex.degree_of(b) == sft.complex.degree_of(c) + 1 for b in sft.complex.differential_of(c))


def test_truncation_extremes():
    d = load("trefoil.lch").dga
    sft = build_sft(d, enumerate_augmentations(d)[0])
    assert truncate(sft, F(1, 2)).labels() == []
    assert truncate(sft, 100) == sft.complex
    with pytest.raises(ValueError):
        truncate(sft, 0)


def test_intermediate_truncation_matches_matrix_surgery():
    d = load("trefoil.lch").dga
    sft = build_sft(d, enumerate_augmentations(d)[0])
    level = truncate(sft, 2)
    assert sorted(level.labels()) == ["b1", "b2", "b3"]
    # deleting the rows and columns of a1, a2 leaves the zero differential
    assert all(level.differential_of(b) == [] for b in level.labels())
    assert homology(level).nonzero_ranks() == oracles.homology_ranks(level) == {0: 3}


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_projections_are_functorial_chain_maps(seed):
    d = random_dga(random.Random(seed))
    augs = enumerate_augmentations(d)
    if not augs:
        return
    sft = build_sft(d, augs[0])
    tower = TruncationTower(sft, tower_samples(sft))
    ts = tower.thresholds
    for a in ts:
        assert tower.levels[a].check_square() is None
    for i in range(len(ts)):
        for j in range(i):
            assert verify_chain_map(tower.projection(ts[i], ts[j]))
            for k in range(j):
                composed = tower.projection(ts[j], ts[k]).compose(tower.projection(ts[i], ts[j]))
                assert composed.images() == tower.projection(ts[i], ts[k]).images()


def test_unknot_stabilizes_beyond_two():
    d = load("unknot.lch").dga
    mono = MonotonicityConstants(F(0), F(1))
    sft = build_sft(d, Augmentation.from_ones([]))
    tower = build_tower(sft, mono, (1, 1))
    (row,) = e1_limit(tower, mono, (1, 1))
    assert row.threshold == 2
    assert row.rank == 1 and row.certified
    assert all(r == 1 for a, r in tower.ranks(1) if a > 2)


def test_e1_refuses_without_monotonicity():
    d = load("unknot.lch").dga
    mono = MonotonicityConstants(F(5), F(1))
    sft = build_sft(d, Augmentation.from_ones([]))
    with pytest.raises(MonotonicityError) as err:
        e1_limit(build_tower(sft), mono, (0, 1))
    assert err.value.chords == ["a"]


@pytest.mark.parametrize("name", ["unknot.lch", "trefoil.lch", "stabilized.lch", "trefoil_genus1.lch"])
def test_bundled_constants_pass(name):
    ws = load(name)
    for eps in enumerate_augmentations(ws.dga):
        rep = lch_sft_check(ws.dga, eps, ws.mono)
        assert rep.passed, rep.to_dict()
        assert rep.chain_map and rep.transpose_equal


def test_corrupted_action_is_a_refusal():
    ws = load("trefoil.lch")
    d = ws.dga.with_generator(Generator("a1", 1, F(9)))
    rep = lch_sft_check(d, enumerate_augmentations(d)[0], ws.mono)
    assert rep.status == "refused"
    assert rep.refused_chords == ["a1"]
