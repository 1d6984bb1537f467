"""Command line front end.

Every command prints one report, JSON by default (``--pretty`` for a plain
text rendering), and exits with 0 when the checks pass, 1 when a
mathematical check fails and 2 when the input is unusable.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .augmentations import (
    Augmentation,
    enumerate_augmentations,
    homology_ranks_dual,
    is_augmentation,
    linearized_complex,
    poincare_multiset,
    variables,
)
from .dga import DgaError, MonotonicityConstants, check_dga
from .duality import DualityError, diagram_check, duality_sequence, h_maps_iso_check
from .floer2copy import (
    ASSUMPTIONS,
    TwoCopyComplex,
    birth_death_move,
    two_copy_sequence,
    fillability_check,
    handle_slide_move,
    homotopy_from_images,
    homotopy_square_check,
)
from .gf2_core import ChainMap, ComplexError, homology, verify_chain_map
from .parsing import ParseError, Workspace, parse
from .selftest import DEFAULT_SEED, FixtureError, fill_verdict, run_selftest
from .sft import build_sft, default_window, lch_sft_check, tower_ranks

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Options or file contents that no command can work with."""


# ----------------------------------------------------------------------------
# formatting helpers


def poincare(ranks: dict[int, int]) -> str:
    """``{0: 1, 1: 2}`` -> ``"1 + 2t"``; negative degrees print as ``t^-1``."""
    terms = []
    for d, r in sorted(ranks.items()):
        if not r:
            continue
        mono = "" if d == 0 else "t" if d == 1 else f"t^{d}"
        coef = str(r) if r != 1 or not mono else ""
        terms.append(coef + mono)
    return " + ".join(terms) or "0"


def rank_table(ranks: dict[int, int]) -> dict:
    return {"ranks": {str(d): r for d, r in sorted(ranks.items()) if r}, "poincare": poincare(ranks)}


def parse_homology(text: str) -> dict[int, int]:
    out: dict[int, int] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        m = re.fullmatch(r"(-?\d+):(\d+)", part)
        if not m:
            raise InputError(f"bad --homology entry {part!r}; expected <degree>:<rank>")
        d = int(m.group(1))
        if d in out:
            raise InputError(f"degree {d} given twice in --homology")
        out[d] = int(m.group(2))
    return out


def parse_window(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", text)
    if not m or int(m.group(1)) > int(m.group(2)):
        raise InputError(f"bad --degrees {text!r}; expected <lo>..<hi> with lo <= hi")
    return int(m.group(1)), int(m.group(2))


def parse_rational(text: str, flag: str) -> Fraction:
    if not re.fullmatch(r"-?\d+(/[1-9]\d*)?", text):
        raise InputError(f"bad rational for {flag}: {text!r}")
    return Fraction(text)


def _rows(items: list[dict]) -> list[str]:
    keys = sorted({k for it in items for k in it})
    cells = [[str(it.get(k, "")) for k in keys] for it in items]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    out = ["  ".join(k.ljust(w) for k, w in zip(keys, widths))]
    out += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells]
    return out


def render_pretty(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            flat_list = isinstance(v, list) and v and all(
                isinstance(x, dict) and all(not isinstance(y, (dict, list)) for y in x.values()) for x in v
            )
            if isinstance(v, list) and v and all(not isinstance(x, (dict, list)) for x in v):
                lines.append(f"{pad}{k}: {', '.join(_scalar(x) for x in v)}")
            elif flat_list:
                lines.append(f"{pad}{k}:")
                lines += [pad + "  " + r for r in _rows(v)]
            elif isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines += render_pretty(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines += render_pretty(v, indent + 1)
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (dict, list)):
        return "(none)"
    return str(v)


# ----------------------------------------------------------------------------
# shared steps


def _workspace(args) -> Workspace:
    return parse(args.file)


def _augmentation(ws: Workspace, bits: str | None) -> Augmentation | None:
    """``--aug`` is a bit string over the degree 0 generators in file order."""
    if bits is None:
        return ws.augmentation()
    names = variables(ws.dga)
    if not re.fullmatch(r"[01]*", bits) or len(bits) != len(names):
        raise InputError(f"--aug needs {len(names)} bits over {' '.join(names) or '(no degree 0 generators)'}")
    eps = Augmentation.from_ones(n for n, b in zip(names, bits) if b == "1")
    if not is_augmentation(ws.dga, eps):
        raise InputError(f"--aug {bits} is not an augmentation")
    return eps


def _eps_info(ws: Workspace, eps: Augmentation | None) -> dict | None:
    if eps is None:
        return None
    names = variables(ws.dga)
    return {"bits": eps.bitstring(names), "over": names, "ones": sorted(eps.ones)}


# ----------------------------------------------------------------------------
# commands; each returns (exit code, status, result)


def cmd_check(ws: Workspace, args):
    rep = check_dga(ws.dga)
    result = {
        "generators": len(ws.dga.generators),
        "ambient_n": ws.ambient_n,
        "sections": list(ws.sections),
        "checks": {c: c not in rep.failed_checks() for c in ("square", "degree", "action")},
        "violations": [v.to_dict() for v in rep.violations],
    }
    return (EXIT_PASS, "pass", result) if rep.ok else (EXIT_FAIL, "fail", result)


def cmd_augs(ws: Workspace, args):
    graded = not args.ungraded
    names = variables(ws.dga, graded)
    augs = enumerate_augmentations(ws.dga, graded)
    result = {
        "graded": graded,
        "variables": names,
        "count": len(augs),
        "summary": f"{len(augs)} augmentation{'' if len(augs) == 1 else 's'}",
        "augmentations": [a.bitstring(names) for a in augs],
    }
    if graded:
        result["poincare"] = [
            p | {"poincare": poincare({int(d): r for d, r in p["ranks"].items()})}
            for p in poincare_multiset(ws.dga, augs)
        ]
    return EXIT_PASS, "pass", result


def cmd_lch(ws: Workspace, args):
    eps = _augmentation(ws, args.aug)
    if eps is None:
        return EXIT_FAIL, "no_augmentation", {"detail": "the DGA has no graded augmentation"}
    lin = linearized_complex(ws.dga, eps)
    c = lin.complex
    lower = homology(c).nonzero_ranks()
    upper = homology_ranks_dual(lin)
    square_zero = all(_square_zero(c, g) for g in c.labels())
    result = {
        "augmentation": _eps_info(ws, eps),
        "differential": {g: c.differential_of(g) for g in c.labels()},
        "homology": rank_table(lower),
        "cohomology": rank_table(upper),
        "duality_equal": lower == upper,
        "square_zero": square_zero,
    }
    ok = square_zero and lower == upper
    return (EXIT_PASS, "pass", result) if ok else (EXIT_FAIL, "fail", result)


def _square_zero(c, g) -> bool:
    acc: set = set()
    for t in c.differential_of(g):
        acc ^= set(c.differential_of(t))
    return not acc


def cmd_e1(ws: Workspace, args):
    eps = _augmentation(ws, args.aug)
    if eps is None:
        return EXIT_FAIL, "no_augmentation", {"detail": "the DGA has no graded augmentation"}
    mono = ws.mono
    if args.c0 is not None or args.c1 is not None:
        if args.c0 is None or args.c1 is None:
            raise InputError("--c0 and --c1 must be given together")
        mono = MonotonicityConstants(parse_rational(args.c0, "--c0"), parse_rational(args.c1, "--c1"))
    sft = build_sft(ws.dga, eps)
    window = parse_window(args.degrees) if args.degrees else default_window(sft)
    base = {"augmentation": _eps_info(ws, eps), "window": list(window)}
    if mono is None:
        # without constants there is nothing to certify; report the raw tower
        base |= {"constants": None, "tower": tower_ranks(sft, window), "certified": False}
        return EXIT_PASS, "uncertified", base
    rep = lch_sft_check(ws.dga, eps, mono, window)
    base |= {"constants": {"C0": str(mono.C0), "C1": str(mono.C1)}}
    base |= rep.to_dict()
    if rep.status == "refused":
        return EXIT_INPUT, "refused", base
    return (EXIT_PASS, "pass", base) if rep.passed else (EXIT_FAIL, "fail", base)


def _two_copy(ws: Workspace, args) -> TwoCopyComplex:
    if not ws.has_two_copy:
        raise InputError("the file has no [morse lambda] or [morse filling] section")
    eps = _augmentation(ws, args.aug)
    if eps is None:
        raise InputError("the two-copy complex needs an augmentation and the DGA has none")
    return ws.two_copy(eps)


def cmd_two_copy(ws: Workspace, args):
    tc = _two_copy(ws, args)
    seq = two_copy_sequence(tc)
    ident = tc.identities()
    result = {
        "augmentation": _eps_info(ws, _augmentation(ws, args.aug)),
        "generators": {"long": list(tc.long), "short": list(tc.short), "intersection": list(tc.inter)},
        "identities": dict(sorted(ident.items())),
        "homology": rank_table(homology(tc.complex).nonzero_ranks()),
        "sequence": seq.to_dict(),
    }
    ok = all(ident.values()) and seq.sequence.is_exact() and seq.acyclic and seq.delta_isomorphism
    status = "pass" if ok else ("not_acyclic" if not seq.acyclic else "fail")
    return (EXIT_PASS if ok else EXIT_FAIL), status, result


def cmd_fill_check(ws: Workspace, args):
    cand = parse_homology(args.homology)
    if args.aug is not None:
        eps = _augmentation(ws, args.aug)
        rep = fillability_check(linearized_complex(ws.dga, eps), cand, ws.ambient_n).to_dict()
        rep["augmentation"] = eps.bitstring(variables(ws.dga))
    else:
        rep = fill_verdict(ws, cand)
    rep["candidate"] = rank_table(cand)
    code = EXIT_PASS if rep["verdict"] == "consistent" else EXIT_FAIL
    return code, rep["verdict"], rep


def cmd_duality(ws: Workspace, args):
    if not ws.has_duality:
        raise InputError("the file has no [block ...] or [map ...] sections")
    ds = ws.duality(_augmentation(ws, args.aug))
    seq = duality_sequence(ds)
    hmaps = h_maps_iso_check(ds)
    _, same = ws.q_block(_augmentation(ws, args.aug))
    result = {
        "blocks": {
            name: rank_table(homology(block).nonzero_ranks()) | {"generators": block.labels()}
            for name, block in (("q", ds.q), ("c", ds.c), ("p", ds.p))
        },
        "total_homology": rank_table(homology(ds.total).nonzero_ranks()),
        "sequence": seq.to_dict(),
        "h_maps": hmaps,
        "q_matches_linearized": same,
    }
    ok = seq.sequence.is_exact() and seq.pairing_ok and hmaps["pass"] and same is not False
    return (EXIT_PASS, "pass", result) if ok else (EXIT_FAIL, "fail", result)


def cmd_diagram(ws: Workspace, args):
    if not ws.matches:
        raise InputError("the file has no [diagram] section")
    if not ws.has_duality:
        raise InputError("the diagram needs [block ...] sections")
    eps = _augmentation(ws, args.aug)
    tc = _two_copy(ws, args)
    rep = diagram_check(ws.duality(eps), tc, ws.matches)
    result = rep.to_dict() | {"assumptions": list(tc.assumptions)}
    return (EXIT_PASS, "pass", result) if rep.ok else (EXIT_FAIL, "fail", result)


def _move_target(ws: Workspace, args):
    if ws.has_two_copy:
        tc = _two_copy(ws, args)
        return tc, tc.complex, "two-copy"
    eps = _augmentation(ws, args.aug)
    if eps is None:
        raise InputError("no two-copy data and no augmentation to linearize with")
    c = linearized_complex(ws.dga, eps).complex
    return c, c, "linearized"


def _slide(obj, c, x, y) -> dict:
    new, phi = handle_slide_move(obj, x, y)
    new_c = new.complex if isinstance(new, TwoCopyComplex) else new
    before, after = homology(c).nonzero_ranks(), homology(new_c).nonzero_ranks()
    return {
        "move": "slide",
        "x": x,
        "y": y,
        "chain_map": bool(verify_chain_map(phi)),
        "ranks_preserved": before == after,
    }


def _cancel(obj, c, x, y) -> dict:
    bd = birth_death_move(obj, x, y)
    red = bd.reduced.complex if isinstance(bd.reduced, TwoCopyComplex) else bd.reduced
    K = homotopy_from_images(c, c, {y: [x]})
    return {
        "move": "cancel",
        "x": x,
        "y": y,
        "chain_map": bool(verify_chain_map(bd.Phi)) and bool(verify_chain_map(bd.Psi)),
        "ranks_preserved": homology(c).nonzero_ranks() == homology(red).nonzero_ranks(),
        "homotopy_square": homotopy_square_check(bd.Phi, ChainMap.identity(c), bd.Psi, K).ok,
    }


def cmd_moves(ws: Workspace, args):
    obj, c, on = _move_target(ws, args)
    moves = []
    if args.slide:
        moves.append(_slide(obj, c, *args.slide))
    if args.cancel:
        moves.append(_cancel(obj, c, *args.cancel))
    if not (args.slide or args.cancel):
        same_block = (lambda x, y: obj.kind(x) == obj.kind(y)) if isinstance(obj, TwoCopyComplex) else None
        for x in c.labels():
            for y in c.labels():
                if x == y or c.degree_of(x) != c.degree_of(y):
                    continue
                if same_block and not same_block(x, y):
                    continue
                moves.append(_slide(obj, c, x, y))
        for x in c.labels():
            for y in c.differential_of(x):
                if same_block and not same_block(x, y):
                    continue
                moves.append(_cancel(obj, c, x, y))
    ok = all(all(v for k, v in m.items() if isinstance(v, bool)) for m in moves)
    result = {"complex": on, "homology": rank_table(homology(c).nonzero_ranks()), "moves": moves}
    return (EXIT_PASS, "pass", result) if ok else (EXIT_FAIL, "fail", result)


FILE_COMMANDS = {
    "check": cmd_check,
    "augs": cmd_augs,
    "lch": cmd_lch,
    "sft-e1": cmd_e1,
    "e1": cmd_e1,
    "two-copy": cmd_two_copy,
    "fill-check": cmd_fill_check,
    "duality": cmd_duality,
    "diagram": cmd_diagram,
    "moves": cmd_moves,
}


# ----------------------------------------------------------------------------
# entry points


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="plain text instead of JSON")
    with_file = argparse.ArgumentParser(add_help=False, parents=[common])
    with_file.add_argument("file", type=Path, help="input .lch file")
    with_aug = argparse.ArgumentParser(add_help=False)
    with_aug.add_argument("--aug", metavar="BITS", help="augmentation as bits over the degree 0 generators")

    ap = argparse.ArgumentParser(prog="lchkit", description="GF(2) Legendrian contact homology toolkit")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    sub.add_parser("check", parents=[with_file], help="verify the DGA axioms")
    p = sub.add_parser("augs", parents=[with_file], help="enumerate augmentations")
    p.add_argument("--ungraded", action="store_true", help="allow nonzero values on every generator")
    sub.add_parser("lch", parents=[with_file, with_aug], help="linearized homology and cohomology")
    for name in ("sft-e1", "e1"):
        p = sub.add_parser(name, parents=[with_file, with_aug], help="truncation tower against linearized cohomology")
        p.add_argument("--c0", help="monotonicity constant C0 (rational)")
        p.add_argument("--c1", help="monotonicity constant C1 (rational)")
        p.add_argument("--degrees", metavar="LO..HI", help="degree window")
    sub.add_parser("two-copy", parents=[with_file, with_aug], help="assemble the two-copy complex")
    p = sub.add_parser("fill-check", parents=[with_file, with_aug], help="compare LCH with a candidate filling")
    p.add_argument("--homology", required=True, metavar="D:R,...", help="ranks of the candidate filling")
    sub.add_parser("duality", parents=[with_file, with_aug], help="duality splitting and its exact sequence")
    sub.add_parser("diagram", parents=[with_file, with_aug], help="compare the two exact sequences")
    p = sub.add_parser("moves", parents=[with_file, with_aug], help="chain-level moves")
    p.add_argument("--slide", nargs=2, metavar=("X", "Y"), help="handle slide x -> x + y")
    p.add_argument("--cancel", nargs=2, metavar=("X", "Y"), help="cancel x against y")
    p = sub.add_parser("selftest", parents=[common], help="fixtures and randomized oracle suites")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--fixtures", type=Path, default=None, help="fixture directory (default: bundled)")
    return ap


def _options(args) -> dict:
    skip = {"command", "file", "pretty", "fixtures"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v not in (None, False)}


def run(args) -> tuple[int, dict]:
    """Execute a parsed command; returns the exit code and the report."""
    report: dict = {"command": args.command, "options": _options(args), "version": __version__}
    try:
        if args.command == "selftest":
            res = run_selftest(args.seed, args.fixtures)
            report["input"] = {"fixtures": "bundled" if args.fixtures is None else Path(args.fixtures).name}
            code, status = (EXIT_PASS, "pass") if res["pass"] else (EXIT_FAIL, "fail")
            report |= {"status": status, "result": res}
            return code, report
        ws = _workspace(args)
        report["input"] = {"file": ws.source, "sha256": ws.sha256}
        code, status, result = FILE_COMMANDS[args.command](ws, args)
        report |= {"status": status, "result": result}
        if args.command in ("two-copy", "diagram"):
            report["assumptions"] = list(ASSUMPTIONS)
        return code, report
    except DualityError as exc:
        if exc.code == "not_acyclic":
            report |= {"status": "not_acyclic", "result": {"detail": str(exc)}}
            return EXIT_FAIL, report
        return EXIT_INPUT, report | _error(exc)
    except (ParseError, InputError, FixtureError, DgaError, ComplexError) as exc:
        return EXIT_INPUT, report | _error(exc)


def _error(exc: Exception) -> dict:
    return {"status": "error", "error": {"type": type(exc).__name__, "message": str(exc)}}


def render(report: dict, pretty: bool) -> str:
    if pretty:
        return "\n".join(render_pretty(report)) + "\n"
    return json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"


VALUE_FLAGS = ("--c0", "--c1", "--degrees", "--homology", "--seed")


def _attach_negatives(argv: list[str]) -> list[str]:
    """Rewrite ``--c0 -1/2`` as ``--c0=-1/2`` so argparse does not read a flag."""
    out: list[str] = []
    it = iter(argv)
    for a in it:
        if a in VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and nxt[1:2].isdigit():
                out.append(f"{a}={nxt}")
                continue
            out.append(a)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(a)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_negatives(argv))
    code, report = run(args)
    sys.stdout.write(render(report, args.pretty))
    if code == EXIT_INPUT and "error" in report:
        print(f"lchkit: {report['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
