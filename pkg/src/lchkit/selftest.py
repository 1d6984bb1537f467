"""Fixture pipelines and seeded randomized oracle suites.

Everything in the report is a pure function of the fixture directory and
the seed, so two runs produce identical bytes.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from . import oracles
from .augmentations import enumerate_augmentations, homology_ranks_dual, linearized_complex
from .dga import check_dga
from .duality import diagram_check, duality_sequence, h_maps_iso_check
from .floer2copy import (
    birth_death_move,
    two_copy_sequence,
    fillability_check,
    handle_slide_move,
    homotopy_from_images,
    homotopy_square_check,
)
from .gf2_core import ChainMap, homology, mapping_cone, spectral_sequence, verify_chain_map
from .parsing import ParseError, parse
from .randomgen import (
    random_chain_map,
    random_complex,
    random_dga,
    random_duality,
    random_filtered,
    random_two_copy,
    single_word_mutations,
)
from .sft import lch_sft_check

DEFAULT_SEED = 20240607
FIXTURE_DIR = Path(__file__).resolve().parent / "fixtures"


class FixtureError(Exception):
    """The fixture directory is missing or unreadable."""


def _str_ranks(r: dict[int, int]) -> dict[str, int]:
    return {str(d): v for d, v in sorted(r.items())}


def load_manifest(directory: Path) -> dict:
    path = directory / "manifest.json"
    try:
        data = json.loads(path.read_text())
    except (OSError, ValueError) as exc:
        raise FixtureError(f"cannot read {path.name}: {exc}") from None
    if not isinstance(data, dict) or "fixtures" not in data:
        raise FixtureError("manifest.json has no fixtures table")
    return data


def fixture_checks(directory: Path) -> list[dict]:
    """Every applicable pipeline on every fixture, compared with the manifest."""
    try:
        return _fixture_checks(directory, load_manifest(directory))
    except ParseError as exc:
        raise FixtureError(str(exc)) from None
    except (KeyError, TypeError, AttributeError) as exc:
        raise FixtureError(f"malformed manifest entry: {exc!r}") from None


def _fixture_checks(directory: Path, manifest: dict) -> list[dict]:
    out = []
    for name in sorted(manifest["fixtures"]):
        expected = manifest["fixtures"][name]
        ws = parse(directory / name)
        checks: dict[str, bool] = {}
        dga = ws.dga
        checks["dga_axioms"] = check_dga(dga).ok
        census = mutation_census(dga)
        checks["mutations_classified"] = census["misclassified"] == 0
        augs = enumerate_augmentations(dga)
        checks["augmentations_match_oracle"] = {a.ones for a in augs} == set(oracles.augmentations(dga))
        checks["augmentation_count"] = len(augs) == expected["augmentations"]
        lin_ok = True
        for eps, ranks in zip(augs, expected["lch_ranks"]):
            lin = linearized_complex(dga, eps)
            got = homology(lin.complex).nonzero_ranks()
            lin_ok &= _str_ranks(got) == ranks and homology_ranks_dual(lin) == got
        checks["linearized_ranks"] = lin_ok and len(augs) == len(expected["lch_ranks"])
        if ws.mono is not None and augs:
            checks["sft_e1_matches_lch"] = all(lch_sft_check(dga, eps, ws.mono).passed for eps in augs)
        if ws.has_two_copy:
            tc = ws.two_copy()
            seq = two_copy_sequence(tc)
            checks["two_copy_identities"] = all(tc.identities().values())
            got = _str_ranks(homology(tc.complex).nonzero_ranks())
            checks["two_copy_homology"] = got == expected["two_copy"]["homology"]
            checks["two_copy_sequence_exact"] = seq.sequence.is_exact()
            if seq.acyclic:
                checks["connecting_isomorphism"] = seq.delta_isomorphism
        if ws.has_duality:
            ds = ws.duality()
            dseq = duality_sequence(ds)
            checks["duality_acyclic"] = expected["duality"]["total_homology"] == {}
            checks["duality_sequence_exact"] = dseq.sequence.is_exact()
            checks["duality_pairing"] = dseq.pairing_ok
            checks["h_maps_iso"] = h_maps_iso_check(ds)["pass"]
            _, same = ws.q_block()
            checks["q_matches_linearized"] = same is not False
            if ws.matches:
                checks["diagram"] = diagram_check(ds, ws.two_copy(), ws.matches).ok
        out.append(
            {
                "fixture": name,
                "checks": dict(sorted(checks.items())),
                "mutations": census,
                "pass": all(checks.values()),
            }
        )
    for case in manifest.get("fill_cases", []):
        ws = parse(directory / case["file"])
        cand = {int(k): v for k, v in case["homology"].items()}
        verdict = fill_verdict(ws, cand)["verdict"]
        out.append(
            {
                "fixture": case["file"],
                "fill_case": case["label"],
                "checks": {"fill_verdict": verdict == case["expected"]},
                "verdict": verdict,
                "pass": verdict == case["expected"],
            }
        )
    return out


def mutation_census(dga) -> dict:
    """Run check_dga on every single-word mutation and compare with the axiom oracle."""
    total = caught = misclassified = 0
    undetectable = []
    for label, mut in single_word_mutations(dga):
        total += 1
        flagged = not check_dga(mut).ok
        valid = oracles.dga_axioms_hold(mut)
        caught += flagged
        if flagged == valid:
            misclassified += 1
        if not flagged:
            undetectable.append(label)
    return {
        "total": total,
        "caught": caught,
        "misclassified": misclassified,
        "still_valid": undetectable,
    }


def fill_verdict(ws, candidate: dict[int, int]) -> dict:
    """Consistent if some augmentation's linearized cohomology matches the candidate."""
    augs = enumerate_augmentations(ws.dga)
    if not augs:
        return fillability_check(None, candidate, ws.ambient_n).to_dict() | {"augmentation": None}
    first = None
    for eps in augs:
        v = fillability_check(linearized_complex(ws.dga, eps), candidate, ws.ambient_n)
        names = [g.name for g in ws.dga.generators if g.degree == 0]
        rep = v.to_dict() | {"augmentation": eps.bitstring(names)}
        if v.verdict == "consistent":
            return rep
        first = first or rep
    return first


# ----------------------------------------------------------------------------
# randomized suites


def suite_homology(rng: random.Random, count: int) -> dict:
    fails = 0
    for _ in range(count):
        rc = random_complex(rng)
        ranks = homology(rc.complex).nonzero_ranks()
        if not (ranks == oracles.homology_ranks(rc.complex) == rc.free_ranks):
            fails += 1
    return {"instances": count, "failures": fails}


def suite_spectral(rng: random.Random, count: int) -> dict:
    fails = 0
    for _ in range(count):
        fc = random_filtered(rng, max_gens=10, max_levels=3)
        ss = spectral_sequence(fc)
        total = {d: r for d, r in ss.total_ranks().items() if r}
        if total != oracles.homology_ranks(fc.complex):
            fails += 1
    return {"instances": count, "failures": fails}


def suite_cone(rng: random.Random, count: int) -> dict:
    fails = 0
    for _ in range(count):
        t = random_complex(rng, max_gens=6).complex
        f = random_chain_map(rng, t, max_gens=6)
        cone = mapping_cone(f)
        seq = cone.sequence
        dims = [x.dim for x in seq.terms]
        if not (verify_chain_map(f) and seq.is_exact() and not oracles.sequence_exact(dims, seq.maps)):
            fails += 1
    return {"instances": count, "failures": fails}


def suite_moves(rng: random.Random, count: int) -> dict:
    fails = 0
    done = {"slides": 0, "cancellations": 0}
    for _ in range(count):
        c = random_complex(rng, max_gens=8, min_gens=2).complex
        before = oracles.homology_ranks(c)
        same = [(x, y) for d in c.degrees for x in c.basis(d) for y in c.basis(d) if x != y]
        if same:
            x, y = rng.choice(same)
            new, phi = handle_slide_move(c, x, y)
            done["slides"] += 1
            if oracles.homology_ranks(new) != before or not verify_chain_map(phi):
                fails += 1
        pairs = [(x, y) for x in c.labels() for y in c.differential_of(x)]
        if pairs:
            x, y = rng.choice(pairs)
            bd = birth_death_move(c, x, y)
            done["cancellations"] += 1
            K = homotopy_from_images(c, c, {y: [x]})
            ok = (
                oracles.homology_ranks(bd.reduced) == before
                and verify_chain_map(bd.Phi)
                and verify_chain_map(bd.Psi)
                and homotopy_square_check(bd.Phi, ChainMap.identity(c), bd.Psi, K).ok
            )
            if not ok:
                fails += 1
    return {"instances": count, "failures": fails, **done}


def suite_two_copy(rng: random.Random, count: int) -> dict:
    fails = 0
    for _ in range(count):
        tc = random_two_copy(rng)
        seq = two_copy_sequence(tc)
        dims = [x.dim for x in seq.sequence.terms]
        if not (all(tc.identities().values()) and seq.sequence.is_exact()):
            fails += 1
        elif oracles.sequence_exact(dims, seq.sequence.maps):
            fails += 1
    return {"instances": count, "failures": fails}


def suite_duality(rng: random.Random, count: int) -> dict:
    fails = 0
    for _ in range(count):
        ds = random_duality(rng)
        seq = duality_sequence(ds).sequence
        dims = [x.dim for x in seq.terms]
        if not (seq.is_exact() and h_maps_iso_check(ds)["pass"] and not oracles.sequence_exact(dims, seq.maps)):
            fails += 1
    return {"instances": count, "failures": fails}


def suite_augmentations(rng: random.Random, count: int) -> dict:
    fails = 0
    pairs = 0
    for _ in range(count):
        dga = random_dga(rng)
        augs = enumerate_augmentations(dga)
        if {a.ones for a in augs} != set(oracles.augmentations(dga)) or not check_dga(dga).ok:
            fails += 1
            continue
        for eps in augs:
            pairs += 1
            lin = linearized_complex(dga, eps)
            if homology(lin.complex).nonzero_ranks() != oracles.linearized_ranks(dga, eps.ones):
                fails += 1
    return {"instances": count, "failures": fails, "linearizations": pairs}


SUITES = [
    ("homology", suite_homology, 100),
    ("spectral_sequence", suite_spectral, 100),
    ("mapping_cone", suite_cone, 50),
    ("moves", suite_moves, 100),
    ("two_copy", suite_two_copy, 50),
    ("duality", suite_duality, 20),
    ("augmentations", suite_augmentations, 50),
]


def run_selftest(seed: int = DEFAULT_SEED, fixtures: Path | None = None) -> dict:
    directory = Path(fixtures) if fixtures is not None else FIXTURE_DIR
    if not directory.is_dir():
        raise FixtureError(f"fixture directory {directory.name!r} not found")
    fx = fixture_checks(directory)
    suites = {}
    for name, fn, count in SUITES:
        rng = random.Random(f"{seed}:{name}")
        res = fn(rng, count)
        suites[name] = res | {"pass": res["failures"] == 0}
    ok = all(f["pass"] for f in fx) and all(s["pass"] for s in suites.values())
    return {
        "seed": seed,
        "fixtures": fx,
        "suites": suites,
        "pass": ok,
        "summary": {
            "fixture_checks": sum(len(f["checks"]) for f in fx),
            "fixture_failures": sum(1 for f in fx if not f["pass"]),
            "random_instances": sum(s["instances"] for s in suites.values()),
            "suite_failures": sorted(n for n, s in suites.items() if not s["pass"]),
        },
    }
