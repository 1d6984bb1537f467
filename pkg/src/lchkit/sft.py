"""Action-filtered SFT complex of a filling with one positive end.

The differential ``d^f`` is built directly from disks: a chord ``c`` sitting
at a negative puncture of a word of ``d b``, with every other negative
puncture capped by the augmentation, contributes ``b`` to ``d^f c``.  This
route never forms the linearized matrix, so comparing with its transpose is
a genuine check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .augmentations import Augmentation, NotAnAugmentation, dualize, is_augmentation, linearized_complex
from .dga import DgaError, DgaPresentation, MonotonicityConstants
from .gf2_core import ChainComplex, ChainMap, homology, induced_map, verify_chain_map


class ActionError(DgaError):
    pass


class MonotonicityError(DgaError):
    def __init__(self, chords: list[str]):
        self.chords = chords
        super().__init__("monotonicity violated by " + ", ".join(chords))


@dataclass(frozen=True)
class SftComplex:
    complex: ChainComplex
    action: dict[str, Fraction]
    dga: DgaPresentation
    eps: Augmentation


def sft_differential(dga: DgaPresentation, eps: Augmentation) -> dict[str, list[str]]:
    out: dict[str, set] = {n: set() for n in dga.names}
    for b in dga.names:
        for w in dga.d(b).words:
            for j, c in enumerate(w):
                if eps.word(w[:j]) and eps.word(w[j + 1 :]):
                    out[c] ^= {b}
    return {c: sorted(v) for c, v in out.items()}


def build_sft(dga: DgaPresentation, eps: Augmentation) -> SftComplex:
    if not is_augmentation(dga, eps):
        raise NotAnAugmentation("capping words needs an augmentation")
    diff = sft_differential(dga, eps)
    action = {g.name: g.action for g in dga.generators}
    for c, targets in diff.items():
        for b in targets:
            if not action[b] > action[c]:
                raise ActionError(f"d^f({c}) contains {b} without increasing action")
    degrees = {g.name: g.degree for g in dga.generators}
    return SftComplex(ChainComplex.from_differential(degrees, diff, direction=1), action, dga, eps)


def truncate(sft: SftComplex, alpha) -> ChainComplex:
    """Quotient by the chords of action at least ``alpha``."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("truncation level must be positive")
    return sft.complex.restrict(c for c in sft.complex.labels() if sft.action[c] < alpha)


@dataclass
class TruncationTower:
    sft: SftComplex
    thresholds: list[Fraction]
    levels: dict[Fraction, ChainComplex] = field(default_factory=dict)

    def __post_init__(self):
        self.thresholds = sorted(set(Fraction(a) for a in self.thresholds if a > 0))
        for a in self.thresholds:
            self.levels[a] = truncate(self.sft, a)

    def projection(self, alpha, beta) -> ChainMap:
        """``pi^alpha_beta: V_[alpha] -> V_[beta]`` for ``alpha > beta``."""
        src, tgt = self.levels[Fraction(alpha)], self.levels[Fraction(beta)]
        return ChainMap.from_images(src, tgt, {c: [c] for c in tgt.labels()})

    def ranks(self, degree: int) -> list[tuple[Fraction, int]]:
        return [(a, homology(self.levels[a]).rank(degree)) for a in self.thresholds]


def tower_samples(sft: SftComplex, extra=()) -> list[Fraction]:
    acts = sorted(set(sft.action.values()))
    top = max(acts, default=Fraction(1))
    pts = set(acts) | {top + 1}
    for a in extra:
        pts |= {Fraction(a), Fraction(a) + 1}
    pts.add(max([top] + [Fraction(a) for a in extra]) + 2)
    return sorted(p for p in pts if p > 0)


def build_tower(sft: SftComplex, mono: MonotonicityConstants | None = None, window=None) -> TruncationTower:
    extra = [mono.threshold(r) for r in range(window[0], window[1] + 1)] if mono and window else []
    return TruncationTower(sft, tower_samples(sft, extra))


def default_window(sft: SftComplex) -> tuple[int, int]:
    lo, hi = sft.complex.degree_window()
    return (lo - 1, hi + 1)


@dataclass
class DegreeE1:
    degree: int
    rank: int
    threshold: Fraction
    certified: bool
    certificate: dict | None

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "rank": self.rank,
            "threshold": str(self.threshold),
            "certified": self.certified,
            "certificate": self.certificate,
        }


def e1_limit(
    tower: TruncationTower, mono: MonotonicityConstants, window: tuple[int, int]
) -> list[DegreeE1]:
    """Stabilized rank of the tower in each degree, with a certificate.

    The certificate names the first two sampled levels above the bound with
    equal rank whose projection induces an isomorphism in that degree; the
    degree is certified only if, in addition, every sampled level above the
    bound has that rank.
    """
    bad = mono.violations(tower.sft.dga.generators)
    if bad:
        raise MonotonicityError(bad)
    hom = {a: homology(tower.levels[a]) for a in tower.thresholds}
    out = []
    for r in range(window[0], window[1] + 1):
        bound = mono.threshold(r)
        above = [a for a in tower.thresholds if a > bound]
        ranks = [hom[a].rank(r) for a in above]
        cert = None
        for lo_a, hi_a in zip(above, above[1:]):
            if hom[lo_a].rank(r) != hom[hi_a].rank(r):
                continue
            m = induced_map(tower.projection(hi_a, lo_a), hom[hi_a], hom[lo_a], r)
            if m.rank() == hom[lo_a].rank(r):
                cert = {"alpha_low": str(lo_a), "alpha_high": str(hi_a), "rank": hom[lo_a].rank(r)}
                break
        constant = len(set(ranks)) == 1
        rank = ranks[-1] if ranks else homology(tower.sft.complex).rank(r)
        out.append(DegreeE1(r, rank, bound, bool(cert) and constant, cert))
    return out


def tower_ranks(sft: SftComplex, window: tuple[int, int]) -> dict:
    """Tower ranks per sampled level without any stabilization claim."""
    tower = TruncationTower(sft, tower_samples(sft))
    return {
        str(a): {r: homology(tower.levels[a]).rank(r) for r in range(window[0], window[1] + 1)}
        for a in tower.thresholds
    }


@dataclass
class LchSftReport:
    status: str  # "pass", "fail" or "refused"
    chain_map: bool = False
    transpose_equal: bool = False
    rows: list[dict] = field(default_factory=list)
    refused_chords: list[str] = field(default_factory=list)
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "chain_map": self.chain_map,
            "transpose_equal": self.transpose_equal,
            "degrees": self.rows,
            "refused_chords": self.refused_chords,
            "detail": self.detail,
        }


def lch_sft_check(
    dga: DgaPresentation,
    eps: Augmentation,
    mono: MonotonicityConstants,
    window: tuple[int, int] | None = None,
) -> LchSftReport:
    """Compare linearized cohomology with the stabilized SFT tower."""
    bad = mono.violations(dga.generators)
    if bad:
        return LchSftReport("refused", refused_chords=bad, detail="monotonicity hypothesis fails")
    lin = linearized_complex(dga, eps)
    cochains = dualize(lin)
    sft = build_sft(dga, eps)
    window = window or default_window(sft)
    ident = ChainMap.by_labels(cochains, sft.complex)
    chain_ok = bool(verify_chain_map(ident))
    transpose_ok = all(
        sorted(sft.complex.differential_of(c)) == sorted(cochains.differential_of(c)) for c in dga.names
    )
    h_lch = homology(cochains)
    h_sft = homology(sft.complex)
    tower = build_tower(sft, mono, window)
    e1 = e1_limit(tower, mono, window)
    rows = []
    ok = chain_ok and transpose_ok
    for d in e1:
        iso = induced_map(ident, h_lch, h_sft, d.degree)
        iso_ok = iso.rows == iso.cols and iso.rank() == iso.rows
        match = d.rank == h_lch.rank(d.degree)
        ok = ok and match and d.certified and iso_ok
        rows.append({**d.to_dict(), "lch_rank": h_lch.rank(d.degree), "match": match, "induced_iso": iso_ok})
    return LchSftReport("pass" if ok else "fail", chain_ok, transpose_ok, rows)
