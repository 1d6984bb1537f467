"""Augmentations, conjugated differentials and linearized complexes."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

from .dga import DgaError, DgaPresentation, Gf2Sum, Word, word_length_truncate
from .gf2_core import ChainComplex, homology


class NotAnAugmentation(DgaError):
    pass


@dataclass(frozen=True)
class Augmentation:
    """A unital algebra map to GF(2), stored as the set of generators sent to 1."""

    ones: frozenset
    graded: bool = True

    @classmethod
    def from_ones(cls, names: Iterable[str], graded: bool = True) -> Augmentation:
        return cls(frozenset(names), graded)

    def __call__(self, name: str) -> int:
        return int(name in self.ones)

    def word(self, w: Word) -> int:
        return int(all(b in self.ones for b in w))

    def evaluate(self, s: Gf2Sum) -> int:
        return sum(self.word(w) for w in s.words) % 2

    def bitstring(self, names: Iterable[str]) -> str:
        return "".join(str(self(n)) for n in names)


def variables(dga: DgaPresentation, graded: bool = True) -> list[str]:
    if graded:
        return [g.name for g in dga.generators if g.degree == 0]
    return dga.names


def is_augmentation(dga: DgaPresentation, eps: Augmentation) -> bool:
    if eps.graded and any(dga.gen(n).degree != 0 for n in eps.ones):
        return False
    return all(eps.evaluate(dga.d(n)) == 0 for n in dga.names)


def enumerate_augmentations(dga: DgaPresentation, graded: bool = True) -> list[Augmentation]:
    """All augmentations, in lexicographic order of their values on ``variables``.

    Depth-first over the variables in declaration order; each relation
    ``eps(d c) = 0`` is tested as soon as its last variable is assigned.
    """
    names = variables(dga, graded)
    index = {n: i for i, n in enumerate(names)}
    # relation = (constant, list of monomial masks), attached to its highest variable
    attached: list[list[tuple[int, list[int]]]] = [[] for _ in names]
    for c in dga.names:
        const = 0
        monos: Counter = Counter()
        for w in dga.d(c).words:
            if any(b not in index for b in w):
                continue  # a letter forced to zero kills the word
            mask = 0
            for b in w:
                mask |= 1 << index[b]
            if mask == 0:
                const ^= 1
            else:
                monos[mask] += 1
        masks = [m for m, k in monos.items() if k % 2]
        if not masks:
            if const:
                return []
            continue
        top = max(m.bit_length() - 1 for m in masks)
        attached[top].append((const, masks))

    found: list[Augmentation] = []

    def dfs(i: int, ones: int) -> None:
        if i == len(names):
            found.append(Augmentation.from_ones((names[j] for j in range(len(names)) if ones >> j & 1), graded))
            return
        for val in (0, 1):
            cur = ones | (val << i)
            if all((const + sum((cur & m) == m for m in masks)) % 2 == 0 for const, masks in attached[i]):
                dfs(i + 1, cur)

    dfs(0, 0)
    return found


def substitute(differential: Mapping[str, Gf2Sum], eps: Augmentation) -> dict[str, Gf2Sum]:
    """Apply ``b -> b + eps(b)`` letterwise to every word."""
    out = {}
    for name, s in differential.items():
        words = []
        for w in s.words:
            choices = [((b,), ()) if eps(b) else ((b,),) for b in w]
            for pick in product(*choices):
                words.append(tuple(x for part in pick for x in part))
        out[name] = Gf2Sum(words)
    return out


def conjugate(dga: DgaPresentation, eps: Augmentation, strict: bool = True) -> dict[str, Gf2Sum]:
    """The conjugated differential ``E_eps d E_eps^{-1}`` on generators.

    In strict mode a surviving constant term (``eps(dc) != 0``) raises
    NotAnAugmentation.
    """
    full = {n: dga.d(n) for n in dga.names}
    out = substitute(full, eps)
    if strict:
        bad = [n for n in dga.names if out[n].constant()]
        if bad:
            raise NotAnAugmentation(f"eps(d {bad[0]}) = 1, so eps is not an augmentation")
    return out


@dataclass(frozen=True)
class LinearizedComplex:
    complex: ChainComplex
    dga: DgaPresentation
    eps: Augmentation


def linearized_complex(dga: DgaPresentation, eps: Augmentation) -> LinearizedComplex:
    if any(dga.gen(n).degree != 0 for n in eps.ones):
        raise DgaError("linearization needs an augmentation supported in degree 0")
    lin = word_length_truncate(dga, conjugate(dga, eps))
    degrees = {g.name: g.degree for g in dga.generators}
    return LinearizedComplex(ChainComplex.from_differential(degrees, lin, direction=-1), dga, eps)


def dualize(lin: LinearizedComplex | ChainComplex) -> ChainComplex:
    """Hom into GF(2): transpose every boundary and flip the direction."""
    c = lin.complex if isinstance(lin, LinearizedComplex) else lin
    return c.dual()


def homology_ranks_dual(lin: LinearizedComplex) -> dict[int, int]:
    """Nonzero ranks of linearized cohomology."""
    return homology(dualize(lin)).nonzero_ranks()


def poincare_multiset(dga: DgaPresentation, augs: list[Augmentation]) -> list[dict]:
    """Distinct linearized Poincare polynomials with their multiplicities."""
    counts: Counter = Counter()
    for eps in augs:
        ranks = homology(linearized_complex(dga, eps).complex).nonzero_ranks()
        counts[tuple(sorted(ranks.items()))] += 1
    return [
        {"ranks": {str(d): r for d, r in key}, "count": n}
        for key, n in sorted(counts.items(), key=lambda kv: kv[0])
    ]


@dataclass(frozen=True)
class HomotopyWitness:
    support: frozenset

    @classmethod
    def of(cls, names: Iterable[str]) -> HomotopyWitness:
        return cls(frozenset(names))

    def __call__(self, name: str) -> int:
        return int(name in self.support)


def omega(w: Word, em: Augmentation, ep: Augmentation, K: HomotopyWitness) -> int:
    total = 0
    for j, b in enumerate(w):
        if K(b) and em.word(w[:j]) and ep.word(w[j + 1 :]):
            total ^= 1
    return total


@dataclass
class HomotopyResult:
    ok: bool
    failures: list[str]

    def __bool__(self) -> bool:
        return self.ok


def homotopy_check(dga: DgaPresentation, em: Augmentation, ep: Augmentation, K: HomotopyWitness) -> HomotopyResult:
    """Check ``em(c) + ep(c) = Omega_K(dc)`` on every generator."""
    bad = []
    for c in dga.names:
        lhs = em(c) ^ ep(c)
        rhs = sum(omega(w, em, ep, K) for w in dga.d(c).words) % 2
        if lhs != rhs:
            bad.append(c)
    return HomotopyResult(not bad, bad)


def validate_witness(dga: DgaPresentation, K: HomotopyWitness) -> list[str]:
    """Generators in the support of K whose degree is not -1.

    With d lowering degree by one and augmentations living in degree 0, only
    degree -1 letters of a word of dc (for |c| = 0) can carry K.
    """
    return sorted(n for n in K.support if dga.gen(n).degree != -1)
