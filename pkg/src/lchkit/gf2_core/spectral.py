"""Spectral sequence of a finite decreasing filtration.

Level ``p`` runs over ``1..k`` and ``F^p`` is spanned by the basis labels of
level at least ``p``.  For each total degree ``n``

    Z_r^p = {x in F^p : dx in F^{p+r}}
    E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})

and ``d_r`` is induced by ``d`` on representatives.  Pages are keyed by
``(p, q)`` with ``q = n - p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .complex import ChainComplex, ComplexError, homology
from .matrix import Gf2Matrix, Reducer, bits, kernel_basis


class FiltrationError(ComplexError):
    pass


class FilteredComplex:
    def __init__(self, complex_: ChainComplex, level: Mapping[str, int]):
        self.complex = complex_
        missing = [lab for lab in complex_.labels() if lab not in level]
        if missing:
            raise FiltrationError(f"no filtration level for {missing[0]!r}")
        self.level = {lab: int(level[lab]) for lab in complex_.labels()}
        if any(p < 1 for p in self.level.values()):
            raise FiltrationError("filtration levels start at 1")
        self.k = max(self.level.values(), default=1)
        for lab in complex_.labels():
            for t in complex_.differential_of(lab):
                if self.level[t] < self.level[lab]:
                    raise FiltrationError(
                        f"boundary of {lab!r} (level {self.level[lab]}) reaches {t!r} (level {self.level[t]})"
                    )

    def mask(self, degree: int, p: int) -> int:
        """Bit vector of the basis of ``F^p`` in ``degree``."""
        out = 0
        for i, lab in enumerate(self.complex.basis(degree)):
            if self.level[lab] >= p:
                out |= 1 << i
        return out


def _cycles(fc: FilteredComplex, n: int, p: int, r: int) -> list[int]:
    """Basis of ``Z_r^p`` in degree ``n``."""
    c = fc.complex
    if c.dim(n) == 0:
        return []
    source = fc.mask(n, p)
    outside = ~fc.mask(n + c.direction, p + r)
    cols_idx = list(bits(source))
    b = c.boundary(n)
    restricted = Gf2Matrix.from_columns(b.rows, [b.column(j) & outside for j in cols_idx])
    out = []
    for v in kernel_basis(restricted):
        x = 0
        for j in bits(v):
            x |= 1 << cols_idx[j]
        out.append(x)
    return out


@dataclass
class PageEntry:
    dim: int
    reps: list[int]
    reducer: Reducer  # denominator (tag 0) plus reps (tagged)


@dataclass
class SpectralSequence:
    filtered: FilteredComplex
    pages: dict[int, dict[tuple[int, int], int]]
    differential_ranks: dict[int, dict[tuple[int, int], int]]
    e_infinity: dict[tuple[int, int], int]
    checks: list[str] = field(default_factory=list)

    def total_ranks(self, page: dict[tuple[int, int], int] | None = None) -> dict[int, int]:
        page = self.e_infinity if page is None else page
        out: dict[int, int] = {}
        for (p, q), dim in page.items():
            out[p + q] = out.get(p + q, 0) + dim
        return {n: r for n, r in sorted(out.items())}


def _entry(fc: FilteredComplex, n: int, p: int, r: int) -> PageEntry:
    c = fc.complex
    red = Reducer()
    for v in _cycles(fc, n, p + 1, r - 1):
        red.add(v)
    for v in _cycles(fc, n - c.direction, p - r + 1, r - 1):
        red.add(c.boundary(n - c.direction).apply(v))
    reps = []
    for z in _cycles(fc, n, p, r):
        rem, _ = red.reduce(z)
        if rem:
            red.add(rem, 1 << len(reps))
            reps.append(rem)
    return PageEntry(len(reps), reps, red)


def spectral_sequence(fc: FilteredComplex, r_max: int | None = None, verify: bool = True) -> SpectralSequence:
    """Pages ``E_1 .. E_{r_max}`` plus ``E_inf`` (which equals ``E_{k}``, and ``E_{k+1}``)."""
    c = fc.complex
    k = fc.k
    last = max(r_max or 1, k + 1)
    degrees = c.degrees
    pages: dict[int, dict[tuple[int, int], int]] = {}
    diff_ranks: dict[int, dict[tuple[int, int], int]] = {}
    checks = []
    entries: dict[int, dict[tuple[int, int], PageEntry]] = {}
    for r in range(1, last + 1):
        ent = {}
        for n in degrees:
            for p in range(1, k + 1):
                e = _entry(fc, n, p, r)
                if e.dim:
                    ent[(n, p)] = e
        entries[r] = ent
        pages[r] = {(p, n - p): e.dim for (n, p), e in sorted(ent.items(), key=lambda kv: (kv[0][1], kv[0][0]))}

    for r in range(1, last):
        ranks = {}
        mats = {}
        for (n, p), e in entries[r].items():
            tgt = entries[r].get((n + c.direction, p + r))
            if tgt is None:
                continue
            cols = []
            for x in e.reps:
                rem, tag = tgt.reducer.reduce(c.boundary(n).apply(x))
                if rem:
                    raise FiltrationError(f"d_{r} representative escapes Z_{r} at (p={p}, n={n})")
                cols.append(tag)
            m = Gf2Matrix.from_columns(tgt.dim, cols)
            mats[(n, p)] = m
            if m.rank():
                ranks[(p, n - p)] = m.rank()
        diff_ranks[r] = ranks
        if verify:
            for (n, p), m in mats.items():
                nxt = mats.get((n + c.direction, p + r))
                if nxt is not None and not (nxt @ m).is_zero():
                    raise FiltrationError(f"d_{r} squared is nonzero at (p={p}, n={n})")
            for (n, p), e in entries[r].items():
                out_rank = mats[(n, p)].rank() if (n, p) in mats else 0
                inc = mats.get((n - c.direction, p - r))
                in_rank = inc.rank() if inc is not None else 0
                nxt = entries[r + 1].get((n, p))
                expected = e.dim - out_rank - in_rank
                if (nxt.dim if nxt else 0) != expected:
                    raise FiltrationError(f"E_{r + 1} at (p={p}, n={n}) is not the homology of d_{r}")
            checks.append(f"d_{r}^2 = 0 and E_{r + 1} = H(E_{r}, d_{r})")

    show = r_max or last
    return SpectralSequence(
        fc,
        {r: pages[r] for r in range(1, show + 1) if r in pages},
        {r: diff_ranks[r] for r in range(1, show + 1) if r in diff_ranks},
        pages[last],
        checks,
    )


def check_convergence(ss: SpectralSequence) -> bool:
    """E_inf total ranks equal the homology ranks of the underlying complex."""
    h = homology(ss.filtered.complex).nonzero_ranks()
    return ss.total_ranks() == h
