"""Exhaustive reference computations.

Nothing here uses the elimination code in ``gf2_core``: subspaces are
enumerated vector by vector, so these are only usable on small inputs
(a few thousand vectors per degree).
"""

from __future__ import annotations

from itertools import product

from .dga import DgaPresentation
from .gf2_core import ChainComplex, Gf2Matrix

MAX_BITS = 14


def _log2(n: int) -> int:
    k = n.bit_length() - 1
    assert 1 << k == n, "subspace size must be a power of two"
    return k


def _columns(c: ChainComplex, d: int) -> list[int]:
    """Boundary columns of degree ``d`` rebuilt from the label-level differential."""
    tgt = {lab: i for i, lab in enumerate(c.basis(d + c.direction))}
    cols = []
    for lab in c.basis(d):
        v = 0
        for t in c.differential_of(lab):
            v ^= 1 << tgt[t]
        cols.append(v)
    return cols


def _apply(cols: list[int], v: int) -> int:
    out = 0
    for i, col in enumerate(cols):
        if v >> i & 1:
            out ^= col
    return out


def span_size(cols: list[int], dim: int) -> int:
    if dim > MAX_BITS:
        raise ValueError("too many generators for the exhaustive oracle")
    return len({_apply(cols, v) for v in range(1 << dim)})


def kernel_size(cols: list[int], dim: int) -> int:
    if dim > MAX_BITS:
        raise ValueError("too many generators for the exhaustive oracle")
    return sum(1 for v in range(1 << dim) if _apply(cols, v) == 0)


def homology_ranks(c: ChainComplex) -> dict[int, int]:
    """Nonzero ranks ``log2 |ker| - log2 |im|`` by enumerating every vector."""
    out = {}
    for d in c.degrees:
        ker = kernel_size(_columns(c, d), c.dim(d))
        src = d - c.direction
        im = span_size(_columns(c, src), c.dim(src))
        r = _log2(ker) - _log2(im)
        if r:
            out[d] = r
    return out


def matrix_rank(m: Gf2Matrix) -> int:
    return _log2(span_size(list(m.columns), m.cols))


def sequence_exact(terms_dims: list[int], maps: list[Gf2Matrix]) -> list[int]:
    """Positions where ``im(in) != ker(out)``, comparing the actual subspaces."""
    bad = []
    for i, dim in enumerate(terms_dims):
        if i > 0:
            m = maps[i - 1]
            image = {_apply(list(m.columns), v) for v in range(1 << m.cols)}
        else:
            image = {0}
        if i < len(maps):
            m = maps[i]
            kernel = {v for v in range(1 << dim) if _apply(list(m.columns), v) == 0}
        else:
            kernel = set(range(1 << dim))
        if image != kernel:
            bad.append(i)
    return bad


def _eps_word(word, ones) -> int:
    return int(all(b in ones for b in word))


def augmentations(dga: DgaPresentation) -> list[frozenset]:
    """All degree-0 supported assignments killing every ``eps(dc)``, by brute force."""
    zero = [g.name for g in dga.generators if g.degree == 0]
    if len(zero) > MAX_BITS:
        raise ValueError("too many degree-0 generators for the exhaustive oracle")
    found = []
    for vals in product((0, 1), repeat=len(zero)):
        ones = frozenset(n for n, v in zip(zero, vals) if v)
        if all(sum(_eps_word(w, ones) for w in dga.d(c).words) % 2 == 0 for c in dga.names):
            found.append(ones)
    return found


def linearized_differential(dga: DgaPresentation, ones: frozenset) -> dict[str, list[str]]:
    """Linear part of the conjugated differential: letter ``w_j`` counts when the rest augment to 1."""
    out = {}
    for c in dga.names:
        acc: set = set()
        for w in dga.d(c).words:
            for j, b in enumerate(w):
                if all(x in ones for i, x in enumerate(w) if i != j):
                    acc ^= {b}
        out[c] = sorted(acc)
    return out


def linearized_ranks(dga: DgaPresentation, ones: frozenset) -> dict[int, int]:
    degrees = {g.name: g.degree for g in dga.generators}
    c = ChainComplex.from_differential(degrees, linearized_differential(dga, ones), direction=-1)
    return homology_ranks(c)


def dga_axioms_hold(dga: DgaPresentation) -> bool:
    """Square, degree and action conditions recomputed from scratch."""
    gens = {g.name: g for g in dga.generators}
    diff = {n: set(dga.d(n).words) for n in gens}
    for name, g in gens.items():
        for w in diff[name]:
            if sum(gens[b].degree for b in w) != g.degree - 1:
                return False
            if sum((gens[b].action for b in w), 0) >= g.action:
                return False
        square: set = set()
        for w in diff[name]:
            for j, b in enumerate(w):
                for v in diff[b]:
                    square ^= {w[:j] + v + w[j + 1 :]}
        if square:
            return False
    return True
