"""Seeded random instances for the property suites.

Complexes are generated in normal form (cancelling pairs plus free
generators) and then scrambled by elementary basis changes, so their
homology is known by construction as well as by the exhaustive oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .dga import DgaPresentation, Generator, Gf2Sum
from .gf2_core import ChainComplex, ChainMap, FilteredComplex, Gf2Matrix, kernel_basis


@dataclass
class RandomComplex:
    complex: ChainComplex
    free_ranks: dict[int, int]  # homology by construction


def _scramble(
    rng: random.Random,
    basis: dict[int, list[str]],
    boundary: dict[int, Gf2Matrix],
    direction: int,
    steps: int,
    allowed=None,
    maps_in: dict[int, Gf2Matrix] | None = None,
) -> tuple[dict[int, Gf2Matrix], dict[int, Gf2Matrix]]:
    """Apply ``steps`` random changes ``g_j -> g_j + g_i`` within a degree.

    ``allowed(i_label, j_label)`` restricts the moves (filtrations);
    ``maps_in`` are matrices out of this complex, updated alongside.
    """
    boundary = dict(boundary)
    maps_in = dict(maps_in or {})
    degs = [d for d, labs in basis.items() if len(labs) > 1]
    for _ in range(steps if degs else 0):
        d = rng.choice(degs)
        n = len(basis[d])
        i, j = rng.sample(range(n), 2)
        if allowed and not allowed(basis[d][i], basis[d][j]):
            continue
        e = Gf2Matrix.identity(n).flip(i, j)  # its own inverse
        out = boundary.get(d, Gf2Matrix.zero(len(basis.get(d + direction, [])), n))
        boundary[d] = out @ e
        src = d - direction
        if src in boundary:
            boundary[src] = e @ boundary[src]
        if d in maps_in:
            maps_in[d] = maps_in[d] @ e
    return boundary, maps_in


def random_complex(
    rng: random.Random,
    max_gens: int = 8,
    degree_range: tuple[int, int] = (-1, 2),
    direction: int = -1,
    prefix: str = "g",
    min_gens: int = 0,
    steps: int = 12,
) -> RandomComplex:
    n = rng.randint(min_gens, max_gens)
    lo, hi = degree_range
    basis: dict[int, list[str]] = {}
    free: dict[int, int] = {}
    pairs: list[tuple[str, str]] = []
    k = 0
    while k < n:
        d = rng.randint(lo, hi)
        tgt = d + direction
        if k + 1 < n and lo <= tgt <= hi and rng.random() < 0.6:
            x, y = f"{prefix}{k}", f"{prefix}{k + 1}"
            basis.setdefault(d, []).append(x)
            basis.setdefault(tgt, []).append(y)
            pairs.append((x, y))
            k += 2
        else:
            basis.setdefault(d, []).append(f"{prefix}{k}")
            free[d] = free.get(d, 0) + 1
            k += 1
    degree = {lab: d for d, labs in basis.items() for lab in labs}
    c0 = ChainComplex.from_differential(degree, {x: [y] for x, y in pairs}, direction)
    boundary = {d: c0.boundary(d) for d in c0.degrees}
    boundary, _ = _scramble(rng, basis, boundary, direction, steps)
    c = ChainComplex(basis, {d: m for d, m in boundary.items() if d in basis}, direction)
    return RandomComplex(c, {d: r for d, r in free.items() if r})


def random_filtered(
    rng: random.Random,
    max_gens: int = 10,
    max_levels: int = 3,
    degree_range: tuple[int, int] = (-1, 2),
    direction: int = -1,
    steps: int = 15,
) -> FilteredComplex:
    """Filtration-preserving complex: every boundary lands in levels at least as high."""
    k = rng.randint(1, max_levels)
    n = rng.randint(0, max_gens)
    lo, hi = degree_range
    basis: dict[int, list[str]] = {}
    level: dict[str, int] = {}
    diff: dict[str, list[str]] = {}
    i = 0
    while i < n:
        d = rng.randint(lo, hi)
        lx = rng.randint(1, k)
        basis.setdefault(d, []).append(f"g{i}")
        level[f"g{i}"] = lx
        if i + 1 < n and lo <= d + direction <= hi and rng.random() < 0.6:
            y = f"g{i + 1}"
            basis.setdefault(d + direction, []).append(y)
            level[y] = rng.randint(lx, k)
            diff[f"g{i}"] = [y]
            i += 2
        else:
            i += 1
    degree = {lab: d for d, labs in basis.items() for lab in labs}
    c0 = ChainComplex.from_differential(degree, diff, direction)
    boundary = {d: c0.boundary(d) for d in c0.degrees}
    # g_j -> g_j + g_i keeps the filtration when g_i sits at least as deep
    boundary, _ = _scramble(rng, basis, boundary, direction, steps, lambda a, b: level[a] >= level[b])
    c = ChainComplex(basis, {d: m for d, m in boundary.items() if d in basis}, direction)
    return FilteredComplex(c, level)


def random_cycle(rng: random.Random, c: ChainComplex, d: int) -> int:
    v = 0
    for z in kernel_basis(c.boundary(d)):
        if rng.random() < 0.5:
            v ^= z
    return v


def random_chain_map(rng: random.Random, target: ChainComplex, max_gens: int = 6, steps: int = 10) -> ChainMap:
    """A chain map from a fresh random complex into ``target``.

    In the normal-form basis of the source, free generators go to random
    cycles and a pair ``dx = y`` goes to ``(u, du)`` for random ``u``.
    """
    lo, hi = target.degree_window()
    step = target.direction
    n = rng.randint(0, max_gens)
    basis: dict[int, list[str]] = {}
    cols: dict[int, list[int]] = {}
    diff: dict[str, list[str]] = {}
    k = 0
    while k < n:
        d = rng.randint(lo, hi)
        if k + 1 < n and lo <= d + step <= hi and rng.random() < 0.5:
            x, y = f"s{k}", f"s{k + 1}"
            u = rng.getrandbits(target.dim(d)) if target.dim(d) else 0
            basis.setdefault(d, []).append(x)
            cols.setdefault(d, []).append(u)
            basis.setdefault(d + step, []).append(y)
            cols.setdefault(d + step, []).append(target.boundary(d).apply(u))
            diff[x] = [y]
            k += 2
        else:
            basis.setdefault(d, []).append(f"s{k}")
            cols.setdefault(d, []).append(random_cycle(rng, target, d))
            k += 1
    degree = {lab: d for d, labs in basis.items() for lab in labs}
    s0 = ChainComplex.from_differential(degree, diff, step)
    comps = {d: Gf2Matrix.from_columns(target.dim(d), cols[d]) for d in basis}
    boundary = {d: s0.boundary(d) for d in s0.degrees}
    boundary, comps = _scramble(rng, basis, boundary, step, steps, maps_in=comps)
    source = ChainComplex(basis, {d: m for d, m in boundary.items() if d in basis}, step)
    return ChainMap(source, target, comps)


# ----------------------------------------------------------------------------
# two-copy and duality instances


def random_two_copy(rng: random.Random, max_gens: int = 8, ambient_n: int = 2):
    """Block triangular cohomological complex with long, short and intersection blocks."""
    from .floer2copy import make_two_copy

    fc = random_filtered(rng, max_gens=max_gens, max_levels=3, direction=1)
    c = fc.complex
    # level 3 = long chords, 2 = short chords, 1 = intersection points
    long = tuple(x for x in c.labels() if fc.level[x] == 3)
    short = tuple(x for x in c.labels() if fc.level[x] == 2)
    inter = tuple(x for x in c.labels() if fc.level[x] == 1)
    action = {x: {3: Fraction(2), 2: Fraction(1), 1: Fraction(0)}[fc.level[x]] for x in c.labels()}
    return make_two_copy(c, long, short, inter, action, ambient_n)


def random_duality(rng: random.Random, ambient_n: int = 2, tries: int = 400):
    """A valid acyclic splitting found by rejection sampling over the off-diagonal blocks."""
    from .duality import DualityError, assemble_duality

    for _ in range(tries):
        q = random_complex(rng, max_gens=3, degree_range=(0, 2), prefix="q").complex
        pairing = {a: "p" + a[1:] for a in q.labels()}
        p_deg = {pairing[a]: ambient_n - 3 - q.degree_of(a) for a in q.labels()}
        p_diff = {pairing[a]: [pairing[b] for b in q.labels() if a in q.differential_of(b)] for a in q.labels()}
        p = ChainComplex.from_differential(p_deg, p_diff, -1)
        c_deg = {}
        for i, a in enumerate(q.labels()):
            c_deg[f"c{i}"] = q.degree_of(a) - 1
        for i, b in enumerate(p.labels()):
            c_deg[f"k{i}"] = p.degree_of(b) + 1
        c = ChainComplex.from_differential(c_deg, {}, -1)

        def pick(src: ChainComplex, tgt: ChainComplex) -> dict[str, list[str]]:
            return {
                g: [t for t in tgt.basis(src.degree_of(g) - 1) if rng.random() < 0.5] for g in src.labels()
            }

        try:
            return assemble_duality(
                q, c, p, pick(q, c), pick(c, p), pick(q, p), pairing, ambient_n
            )
        except DualityError:
            continue
    raise RuntimeError("no acyclic splitting found")


# ----------------------------------------------------------------------------
# DGAs


def random_dga(rng: random.Random, max_zero: int = 5, max_one: int = 4, max_word: int = 3) -> DgaPresentation:
    """Degree 0 chords ``b_i`` and degree 1 chords ``a_j`` with ``d a_j`` a sum of words in the ``b``.

    Degree 2 chords ``e`` with ``d e = a_i + a_j`` are added when two ``a``
    share a differential, so the square of the differential always vanishes.
    """
    nb = rng.randint(0, max_zero)
    na = rng.randint(0, max_one)
    bs = [f"b{i}" for i in range(nb)]
    gens = [Generator(b, 0, Fraction(1)) for b in bs]
    diff: dict[str, Gf2Sum] = {}
    for j in range(na):
        words = []
        for _ in range(rng.randint(0, 4)):
            length = rng.randint(0, max_word) if bs else 0
            words.append(tuple(rng.choice(bs) for _ in range(length)))
        s = Gf2Sum(words)
        name = f"a{j}"
        if j and rng.random() < 0.25:
            s = diff[f"a{j - 1}"]
        diff[name] = s
        longest = max((len(w) for w in s.words), default=0)
        gens.append(Generator(name, 1, Fraction(longest + 1)))
    seen: dict[Gf2Sum, str] = {}
    for j in range(na):
        s = diff[f"a{j}"]
        if s in seen:
            e = f"e{j}"
            top = max(g.action for g in gens if g.name in (seen[s], f"a{j}"))
            gens.append(Generator(e, 2, top + 1))
            diff[e] = Gf2Sum([(seen[s],), (f"a{j}",)])
        else:
            seen[s] = f"a{j}"
    return DgaPresentation(tuple(gens), diff, 2)


def single_word_mutations(dga: DgaPresentation):
    """Every differential obtained by changing one word of one ``d c``.

    Yields ``(description, mutated)`` for: removing a word, adding the unit or
    a single letter, and replacing an existing word by one with a letter
    removed, inserted or substituted.
    """
    names = dga.names
    for c in names:
        s = dga.d(c)
        words = sorted(s.words)
        for w in words:
            yield f"remove '{' '.join(w) or '1'}' from d {c}", dga.with_differential(c, s + Gf2Sum([w]))
        for extra in [()] + [(g,) for g in names]:
            if extra not in s.words:
                yield f"add '{' '.join(extra) or '1'}' to d {c}", dga.with_differential(c, s + Gf2Sum([extra]))
        for w in words:
            variants = set()
            for j in range(len(w)):
                variants.add(w[:j] + w[j + 1 :])
                for g in names:
                    variants.add(w[:j] + (g,) + w[j + 1 :])
            for j in range(len(w) + 1):
                for g in names:
                    variants.add(w[:j] + (g,) + w[j:])
            for v in sorted(variants):
                if v != w and v not in s.words:
                    label = f"replace '{' '.join(w) or '1'}' by '{' '.join(v) or '1'}' in d {c}"
                    yield label, dga.with_differential(c, s + Gf2Sum([w, v]))
