#!/usr/bin/env python3
"""Write the bundled fixtures and their manifest.

Fixture texts are defined here.  Every expected value in manifest.json is
computed by the exhaustive oracles in ``lchkit.oracles``, never typed in.
The genus one trefoil two-copy data is the first acyclic candidate of a
small search.

    python tools/make_fixtures.py           # write src/lchkit/fixtures
    python tools/make_fixtures.py --check   # exit 1 if anything is stale
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

from lchkit import oracles
from lchkit.parsing import parse_text

OUT = Path(__file__).resolve().parent.parent / "src" / "lchkit" / "fixtures"

UNKNOT = """\
# max tb unknot: a single chord of degree 1
ambient n 2
gen a deg 1 action 1/2
mono C0 0 C1 1
"""

TREFOIL = """\
# right handed trefoil, two degree 1 and three degree 0 chords
ambient n 2
gen a1 deg 1 action 4
gen a2 deg 1 action 4
gen b1 deg 0 action 1
gen b2 deg 0 action 1
gen b3 deg 0 action 1
d a1 = 1 + b1 + b3 + b1 b2 b3
d a2 = 1 + b1 + b3 + b3 b2 b1
mono C0 -1/2 C1 1/3
"""

STABILIZED = """\
# d a = 1 rules out every augmentation
ambient n 2
gen a deg 1 action 1
gen y deg 0 action 1
gen x deg 1 action 3
d a = 1
d x = y y
mono C0 -1/2 C1 1/4
"""

UNKNOT_DISK = UNKNOT + """\

[morse lambda]
crit m index 0
crit M index 1

[morse filling]
crit x index 0

[connect rho]
row x = m

[connect short]
row M = a'
"""

DUALITY_BLOCKS = """\

[block c]
cell m deg -1
cell M deg 0
pd m M

[block p]
cell p deg -2
pair a p

[map rho]
row a = M

[map sigma]
row m = p
"""

UNKNOT_DUALITY = UNKNOT + DUALITY_BLOCKS

UNKNOT_DIAGRAM = (
    UNKNOT_DISK
    + """
[block q]
cell a deg 1
"""
    + DUALITY_BLOCKS
    + """
[diagram]
match a' p
match m M
match M m
"""
)


def trefoil_genus1_search() -> str:
    """First acyclic two-copy complex for the trefoil with a genus one filling.

    The filling carries one index 0 and two index 1 critical points with
    zero Morse differential; the search runs over the connecting blocks.
    """
    base = TREFOIL + "aug b3\n"
    longs0 = ["a1'", "a2'"]
    longs_b = ["b1'", "b2'", "b3'"]

    def subsets(items):
        for k in range(len(items) + 1):
            yield from itertools.combinations(items, k)

    for sM, sm, r0, r1, r2 in itertools.product(
        subsets(longs0), subsets(longs_b), subsets(["m"]), subsets(["M"] + longs_b), subsets(["M"] + longs_b)
    ):
        rows_short = [f"row M = {' + '.join(sM)}" if sM else None, f"row m = {' + '.join(sm)}" if sm else None]
        rows_rho = [
            f"row {x} = {' + '.join(t)}" for x, t in (("x0", r0), ("x1", r1), ("x2", r2)) if t
        ]
        text = (
            base
            + "\n[morse lambda]\ncrit m index 0\ncrit M index 1\n"
            + "\n[morse filling]\ncrit x0 index 0\ncrit x1 index 1\ncrit x2 index 1\n"
            + "\n[connect rho]\n"
            + "".join(r + "\n" for r in rows_rho)
            + "\n[connect short]\n"
            + "".join(r + "\n" for r in rows_short if r)
        )
        try:
            tc = parse_text(text).two_copy()
        except ValueError:
            continue
        if not oracles.homology_ranks(tc.complex):
            return "# trefoil with a genus one filling; connecting data found by search\n" + text
    raise RuntimeError("no acyclic candidate")


def fixture_texts() -> dict[str, str]:
    return {
        "unknot.lch": UNKNOT,
        "trefoil.lch": TREFOIL,
        "stabilized.lch": STABILIZED,
        "unknot_disk.lch": UNKNOT_DISK,
        "unknot_duality.lch": UNKNOT_DUALITY,
        "unknot_diagram.lch": UNKNOT_DIAGRAM,
        "trefoil_genus1.lch": trefoil_genus1_search(),
    }


FILL_CASES = [
    ("unknot.lch", {0: 1}, "disk"),
    ("trefoil.lch", {0: 1, 1: 2}, "genus one surface"),
    ("trefoil.lch", {0: 1}, "disk (genus mismatch)"),
    ("stabilized.lch", {0: 1}, "disk (no augmentation)"),
]


def _ranks(c) -> dict[str, int]:
    return {str(d): r for d, r in sorted(oracles.homology_ranks(c).items())}


def manifest(texts: dict[str, str]) -> dict:
    out: dict = {"fixtures": {}, "fill_cases": []}
    lch: dict[str, list] = {}
    for name, text in sorted(texts.items()):
        ws = parse_text(text, name)
        dga = ws.dga
        augs = sorted(oracles.augmentations(dga), key=lambda s: [g.name in s for g in dga.generators if g.degree == 0])
        polys = []
        for ones in augs:
            polys.append({str(d): r for d, r in sorted(oracles.linearized_ranks(dga, ones).items())})
        lch[name] = polys
        entry = {
            "generators": len(dga.generators),
            "ambient_n": ws.ambient_n,
            "augmentations": len(augs),
            "augmentation_ones": [sorted(s) for s in augs],
            "lch_ranks": polys,
            "monotonicity": None
            if ws.mono is None
            else {"C0": str(ws.mono.C0), "C1": str(ws.mono.C1)},
        }
        if ws.has_two_copy:
            tc = ws.two_copy()
            entry["two_copy"] = {
                "homology": {str(d): r for d, r in sorted(oracles.homology_ranks(tc.complex).items())},
                "generators": len(tc.complex.labels()),
                "long_homology": _ranks(tc.complex.restrict(tc.long)),
                "quotient_homology": _ranks(tc.complex.restrict(tc.short + tc.inter)),
            }
        if ws.has_duality:
            ds = ws.duality(require_acyclic=False)
            entry["duality"] = {
                "total_homology": {str(d): r for d, r in sorted(oracles.homology_ranks(ds.total).items())},
                "c_homology": {str(d): r for d, r in sorted(oracles.homology_ranks(ds.c).items())},
                "q_homology": {str(d): r for d, r in sorted(oracles.homology_ranks(ds.q).items())},
            }
        out["fixtures"][name] = entry
    for name, cand, label in FILL_CASES:
        n = out["fixtures"][name]["ambient_n"]
        polys = lch[name]
        # homological ranks agree with cohomological ones over GF(2); LCH^k pairs with H_{n-k-1}
        ok = bool(polys) and any(
            all(int(p.get(str(k), 0)) == cand.get(n - k - 1, 0) for k in range(-n - 4, n + 6)) for p in polys
        )
        out["fill_cases"].append(
            {
                "file": name,
                "homology": {str(k): v for k, v in sorted(cand.items())},
                "label": label,
                "expected": "consistent" if ok else "obstructed",
            }
        )
    return out


def render() -> dict[str, str]:
    texts = fixture_texts()
    files = dict(texts)
    files["manifest.json"] = json.dumps(manifest(texts), indent=2, sort_keys=True) + "\n"
    return files


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="compare with the files on disk instead of writing")
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args(argv)
    files = render()
    if args.check:
        stale = [n for n, body in files.items() if not (args.out / n).exists() or (args.out / n).read_text() != body]
        for n in stale:
            print(f"stale: {n}")
        return 1 if stale else 0
    args.out.mkdir(parents=True, exist_ok=True)
    for n, body in files.items():
        (args.out / n).write_text(body)
        print(f"wrote {args.out / n}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
