"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

The lines are printed in the terminal summary (see conftest.py).  Criterion 1
has two parts; the literal claim that every single-word mutation is caught
cannot hold, because some mutations produce another valid DGA.  That part is
kept as a strict xfail so it keeps reporting FAIL rather than disappearing.
"""

import json
import random

import pytest

from lchkit import oracles
from lchkit.augmentations import dualize, enumerate_augmentations, homology_ranks_dual, linearized_complex
from lchkit.cli import main
from lchkit.dga import check_dga
from lchkit.duality import check_pairing, diagram_check, duality_sequence
from lchkit.floer2copy import (
    birth_death_move,
    two_copy_sequence,
    handle_slide_move,
    homotopy_from_images,
    homotopy_square_check,
    single_entry_mutations,
)
from lchkit.gf2_core import ChainComplex, ChainMap, FilteredComplex, homology, spectral_sequence, verify_chain_map
from lchkit.randomgen import random_complex, random_filtered
from lchkit.selftest import fill_verdict, mutation_census
from lchkit.sft import build_sft, build_tower, lch_sft_check

from conftest import FIXTURES, load

RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")


def test_criterion_1_dga_axioms():
    axioms = all(check_dga(load(n).dga).ok and oracles.dga_axioms_hold(load(n).dga) for n in FIXTURES)
    totals = {"total": 0, "caught": 0, "misclassified": 0}
    for n in FIXTURES:
        c = mutation_census(load(n).dga)
        for k in totals:
            totals[k] += c[k]
    every_caught = totals["caught"] == totals["total"]
    detail = (
        f"axioms hold on {len(FIXTURES)} fixtures; {totals['caught']}/{totals['total']} mutations caught, "
        f"the other {totals['total'] - totals['caught']} are valid DGAs per the oracle"
    )
    record(1, axioms and every_caught, detail)
    # the attainable part: axioms hold, and every mutation that breaks an axiom is flagged
    assert axioms
    assert totals["misclassified"] == 0


@pytest.mark.xfail(strict=True, reason="some single-word mutations yield valid DGAs, which no axiom check can flag")
def test_criterion_1_every_mutation_caught_literal():
    for n in FIXTURES:
        c = mutation_census(load(n).dga)
        assert c["caught"] == c["total"], f"{n}: {c['still_valid'][:3]}"


def test_criterion_2_augmentation_oracle():
    checked = 0
    ok = True
    for n in FIXTURES:
        dga = load(n).dga
        k = sum(1 for g in dga.generators if g.degree == 0)
        if k > 12:
            continue
        checked += 1
        got = [a.ones for a in enumerate_augmentations(dga)]
        ok &= len(got) == len(set(got)) and set(got) == set(oracles.augmentations(dga))
    empty = enumerate_augmentations(load("stabilized.lch").dga) == []
    record(2, ok and empty and checked == len(FIXTURES), f"{checked} fixtures, zero-augmentation fixture empty: {empty}")
    assert ok and empty


def test_criterion_3_linearization():
    pairs = 0
    ok = True
    for n in FIXTURES:
        dga = load(n).dga
        for eps in enumerate_augmentations(dga):
            pairs += 1
            c = linearized_complex(dga, eps).complex
            square = all(c.square_defect(d).is_zero() for d in c.degrees)
            lower = homology(c).nonzero_ranks()
            ok &= square
            ok &= lower == oracles.linearized_ranks(dga, eps.ones)
            ok &= homology_ranks_dual(linearized_complex(dga, eps)) == lower
    record(3, ok and pairs > 0, f"{pairs} (fixture, augmentation) pairs")
    assert ok


def test_criterion_4_linearized_cohomology_vs_sft_tower():
    runs = 0
    ok = True
    for n in FIXTURES:
        ws = load(n)
        if ws.mono is None:
            continue
        for eps in enumerate_augmentations(ws.dga):
            runs += 1
            rep = lch_sft_check(ws.dga, eps, ws.mono)
            ok &= rep.passed and rep.chain_map and rep.transpose_equal
            # second pipeline: oracle ranks of the dual of an independently built linearized complex
            degrees = {g.name: g.degree for g in ws.dga.generators}
            lin = ChainComplex.from_differential(degrees, oracles.linearized_differential(ws.dga, eps.ones), direction=-1)
            want = oracles.homology_ranks(dualize(lin))
            sft = build_sft(ws.dga, eps)
            lo = min(r["degree"] for r in rep.rows)
            hi = max(r["degree"] for r in rep.rows)
            tower = build_tower(sft, ws.mono, (lo, hi))
            for row in rep.rows:
                r = row["degree"]
                ok &= row["rank"] == want.get(r, 0)
                bound = ws.mono.threshold(r)
                ok &= all(rank == want.get(r, 0) for a, rank in tower.ranks(r) if a > bound)
    record(4, ok and runs > 0, f"{runs} (fixture, augmentation) pairs with bundled constants")
    assert ok


def test_criterion_5_spectral_sequences():
    rng = random.Random("acceptance-5")
    ok = True
    for _ in range(100):
        fc = random_filtered(rng, max_gens=10, max_levels=3)
        ss = spectral_sequence(fc)
        ok &= {d: r for d, r in ss.total_ranks().items() if r} == oracles.homology_ranks(fc.complex)
    single = 0
    for _ in range(20):
        c = random_complex(rng, max_gens=8).complex
        ss = spectral_sequence(FilteredComplex(c, {g: 1 for g in c.labels()}))
        single += ss.total_ranks(ss.pages[1]) == oracles.homology_ranks(c)
    ok &= single == 20
    record(5, ok, "100 random filtered complexes, 20 single-level complexes")
    assert ok


def test_criterion_6_two_copy():
    ok = True
    assembled = [n for n in FIXTURES if load(n).has_two_copy]
    for n in assembled:
        ident = load(n).two_copy().identities()
        ok &= set(ident) == {"d_inf^2 = 0", "d_0^2 = 0", "d_inf rho + rho d_0 = 0"} and all(ident.values())
    tc = load("unknot_disk.lch").two_copy()
    seq = two_copy_sequence(tc)
    acyclic = not oracles.homology_ranks(tc.complex) and seq.acyclic
    disk = fill_verdict(load("unknot.lch"), {0: 1})["verdict"]
    genus = fill_verdict(load("trefoil.lch"), {0: 1})["verdict"]
    noaug = fill_verdict(load("stabilized.lch"), {0: 1})["verdict"]
    ok &= acyclic and seq.delta_isomorphism and disk == "consistent"
    ok &= genus == noaug == "obstructed"
    record(6, ok, f"{len(assembled)} two-copy fixtures; disk {disk}, genus mismatch {genus}, no augmentation {noaug}")
    assert ok


def _all_flips_fail(phi_minus, phi_plus, psi, K) -> bool:
    flips = list(single_entry_mutations(K))
    return bool(flips) and not any(homotopy_square_check(phi_minus, phi_plus, psi, K2) for _, K2 in flips)


def test_criterion_7_moves():
    rng = random.Random("acceptance-7")
    ok = True
    slides = cancels = 0
    while slides < 100 or cancels < 100:
        c = random_complex(rng, max_gens=8, min_gens=2).complex
        before = oracles.homology_ranks(c)
        same = [(x, y) for d in c.degrees for x in c.basis(d) for y in c.basis(d) if x != y]
        if same:
            new, phi = handle_slide_move(c, *rng.choice(same))
            slides += 1
            ok &= oracles.homology_ranks(new) == before and bool(verify_chain_map(phi))
        pairs = [(x, y) for x in c.labels() for y in c.differential_of(x)]
        if pairs:
            bd = birth_death_move(c, *rng.choice(pairs))
            cancels += 1
            ok &= oracles.homology_ranks(bd.reduced) == before
            ok &= bool(verify_chain_map(bd.Phi)) and bool(verify_chain_map(bd.Psi))

    sq = ChainComplex.from_differential({"w": 1, "x": 1, "v": 0, "y": 0}, {"x": ["v", "y"], "w": ["v"]}, direction=-1)
    ident = ChainMap.identity(sq)
    # cancellation square: Psi Phi + id = K d + d K with K(y) = x
    bd = birth_death_move(sq, "x", "y")
    K = homotopy_from_images(sq, sq, {"y": ["x"]})
    ok &= bool(homotopy_square_check(bd.Phi, ident, bd.Psi, K)) and _all_flips_fail(bd.Phi, ident, bd.Psi, K)
    # handle slide square: sliding twice is the identity, with K = 0
    slid, phi = handle_slide_move(sq, "w", "x")
    back, psi = handle_slide_move(slid, "w", "x")
    Z = homotopy_from_images(sq, back, {})
    direct = ChainMap.by_labels(sq, back)
    ok &= bool(homotopy_square_check(phi, direct, psi, Z)) and _all_flips_fail(phi, direct, psi, Z)
    record(7, ok and slides >= 100 and cancels >= 100, f"{slides} slides, {cancels} cancellations, 2 constructed squares")
    assert ok


def test_criterion_8_duality():
    ws = load("unknot_duality.lch")
    ds = ws.duality()
    ok = not oracles.homology_ranks(ds.total)
    check_pairing(ds.q, ds.p, ds.pairing, ds.ambient_n)
    seq = duality_sequence(ds)
    ok &= seq.sequence.is_exact()
    ok &= oracles.sequence_exact([t.dim for t in seq.sequence.terms], seq.sequence.maps) == []
    ok &= bool(seq.pairing_checks) and seq.pairing_ok
    dw = load("unknot_diagram.lch")
    diagram = diagram_check(dw.duality(), dw.two_copy(), dw.matches)
    ok &= diagram.ok
    record(8, ok, f"paired classes checked: {len(seq.pairing_checks)}; diagram commutes on homology: {diagram.ok}")
    assert ok


def test_criterion_9_determinism(capsys):
    assert main(["selftest"]) == 0
    first = capsys.readouterr().out
    assert main(["selftest"]) == 0
    second = capsys.readouterr().out
    ok = first == second and json.loads(first)["status"] == "pass"
    record(9, ok, f"two default-seed reports, {len(first)} bytes each")
    assert ok
