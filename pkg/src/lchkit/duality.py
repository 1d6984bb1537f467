"""Duality splitting Q + C + P of the mixed chords of a far-shifted copy.

The total complex is homological with lower triangular boundary

    [[d_q, 0,   0  ],
     [rho, d_c, 0  ],
     [eta, sigma, d_p]]

where ``Q`` is the linearized complex, ``C`` a Morse complex of the
Legendrian with ``H_j(C) = H_{j+1}`` of the Legendrian, and ``P`` the dual
of ``Q`` with ``|p| = n - 3 - |q|`` for paired generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .gf2_core import (
    ChainComplex,
    ChainMap,
    ComplexError,
    Gf2Matrix,
    homology,
    induced_map,
    inverse,
    sub_and_quotient,
)
from .gf2_core.matrix import solve
from .gf2_core.sequences import LongExactSequence, Term, connecting_map


class DualityError(ComplexError):
    def __init__(self, code: str, detail: str):
        self.code = code
        super().__init__(f"[{code}] {detail}")


@dataclass(frozen=True)
class DualitySplitting:
    total: ChainComplex
    q: ChainComplex
    c: ChainComplex
    p: ChainComplex
    pairing: dict[str, str]  # q label -> p label
    ambient_n: int
    pd: frozenset = frozenset()  # unordered pairs of C labels

    @property
    def q_labels(self) -> list[str]:
        return self.q.labels()

    @property
    def c_labels(self) -> list[str]:
        return self.c.labels()

    @property
    def p_labels(self) -> list[str]:
        return self.p.labels()

    def block_map(self, src: ChainComplex, tgt: ChainComplex) -> ChainMap:
        """Component of the total boundary from one block to another, as a degree -1 map."""
        images = {g: [t for t in self.total.differential_of(g) if t in tgt] for g in src.labels()}
        return ChainMap.from_images(src, tgt, images, shift=-1)

    @property
    def rho(self) -> ChainMap:
        return self.block_map(self.q, self.c)

    @property
    def sigma(self) -> ChainMap:
        return self.block_map(self.c, self.p)

    @property
    def eta(self) -> ChainMap:
        return self.block_map(self.q, self.p)


def assemble_duality(
    q: ChainComplex,
    c: ChainComplex,
    p: ChainComplex,
    rho: Mapping[str, list[str]],
    sigma: Mapping[str, list[str]],
    eta: Mapping[str, list[str]],
    pairing: Mapping[str, str],
    ambient_n: int,
    pd: frozenset = frozenset(),
    require_acyclic: bool = True,
) -> DualitySplitting:
    for blk in (q, c, p):
        if blk.direction != -1:
            raise DualityError("shape", "duality blocks are homological")
    labels = q.labels() + c.labels() + p.labels()
    if len(set(labels)) != len(labels):
        raise DualityError("shape", "block labels must be distinct")
    for name, m, src, tgt in (("rho", rho, q, c), ("sigma", sigma, c, p), ("eta", eta, q, p)):
        for g, targets in m.items():
            if g not in src:
                raise DualityError("shape", f"{name} row for {g!r}, which is not in its source block")
            for t in targets:
                if t not in tgt:
                    raise DualityError("shape", f"{name}({g}) contains {t!r}, which is not in its target block")
    degrees = {g: blk.degree_of(g) for blk in (q, c, p) for g in blk.labels()}
    diff = {}
    for g in labels:
        blk = q if g in q else (c if g in c else p)
        diff[g] = blk.differential_of(g) + list(rho.get(g, [])) + list(sigma.get(g, [])) + list(eta.get(g, []))
    try:
        total = ChainComplex.from_differential(degrees, diff, direction=-1, check=False)
    except ComplexError as exc:
        raise DualityError("shape", str(exc)) from None
    for d in total.degrees:
        if not total.square_defect(d).is_zero():
            raise DualityError("square", f"total boundary squared is nonzero in degree {d}")

    check_pairing(q, p, pairing, ambient_n)
    for a, b in pd:
        if a not in c or b not in c:
            raise DualityError("shape", f"Poincare pairing names {a!r}, {b!r} outside the C block")
    ds = DualitySplitting(total, q, c, p, dict(pairing), ambient_n, frozenset(pd))
    if require_acyclic and homology(total).nonzero_ranks():
        raise DualityError("not_acyclic", f"total homology {homology(total).nonzero_ranks()} is nonzero")
    return ds


def check_pairing(q: ChainComplex, p: ChainComplex, pairing: Mapping[str, str], n: int) -> None:
    """``d_p`` must be the transpose of ``d_q`` under the pairing, with ``|p| = n-3-|q|``."""
    if sorted(pairing) != sorted(q.labels()) or sorted(pairing.values()) != sorted(p.labels()):
        raise DualityError("p_dual", "pairing must be a bijection between the Q and P generators")
    back = {v: k for k, v in pairing.items()}
    for a in q.labels():
        if p.degree_of(pairing[a]) != n - 3 - q.degree_of(a):
            raise DualityError("p_dual", f"|{pairing[a]}| should be {n - 3 - q.degree_of(a)}")
    for a in q.labels():
        expected = sorted(pairing[b] for b in q.labels() if a in q.differential_of(b))
        got = sorted(p.differential_of(pairing[a]))
        if expected != got:
            raise DualityError("p_dual", f"d({pairing[a]}) is not dual to the boundary into {back[pairing[a]]}")


def q_matches_linearized(ds: DualitySplitting, lin: ChainComplex) -> bool:
    return ds.q == lin


# ----------------------------------------------------------------------------
# homology-level maps


class _Maps:
    """Homologies and induced maps shared by the sequence and diagram checks."""

    def __init__(self, ds: DualitySplitting):
        self.ds = ds
        t = ds.total
        # P is a subcomplex with quotient Q+C; C+P is a subcomplex with quotient Q
        _, self.qc, _, _ = sub_and_quotient(t, ds.p_labels)
        self.cp, _, _, _ = sub_and_quotient(t, ds.c_labels + ds.p_labels)
        self.hq, self.hc, self.hp = homology(ds.q), homology(ds.c), homology(ds.p)
        self.hqc, self.hcp = homology(self.qc), homology(self.cp)
        self.H = ChainMap.from_images(
            self.qc, ds.p, {g: [x for x in t.differential_of(g) if x in ds.p] for g in self.qc.labels()}, shift=-1
        )
        self.Hp = ChainMap.from_images(
            ds.q, self.cp, {g: [x for x in t.differential_of(g) if x not in ds.q] for g in ds.q.labels()}, shift=-1
        )
        self.proj_q = ChainMap.from_images(self.qc, ds.q, {g: [g] for g in ds.q.labels()})
        self.incl_c = ChainMap.from_images(ds.c, self.qc, {g: [g] for g in ds.c.labels()})

    def degrees(self) -> range:
        degs = set(self.ds.total.degrees) or {0}
        return range(max(degs) + 1, min(degs) - 2, -1)

    def H_star(self, s: int) -> Gf2Matrix:
        return induced_map(self.H, self.hqc, self.hp, s)

    def Hp_star(self, s: int) -> Gf2Matrix:
        return induced_map(self.Hp, self.hq, self.hcp, s)

    def sigma_star(self, s: int) -> Gf2Matrix:
        return induced_map(self.ds.sigma, self.hc, self.hp, s)

    def rho_star(self, s: int) -> Gf2Matrix:
        return induced_map(self.ds.rho, self.hq, self.hc, s)

    def theta(self, s: int) -> Gf2Matrix:
        """``H_{s-1}(P) -> H_s(Q)``: inverse of ``H_*`` followed by projection."""
        return induced_map(self.proj_q, self.hqc, self.hq, s) @ inverse(self.H_star(s))

    def Hp_inverse(self, s: int) -> Gf2Matrix:
        """``H_{s-1}(C+P) -> H_s(Q)``."""
        return inverse(self.Hp_star(s))


def h_maps_iso_check(ds: DualitySplitting) -> dict:
    m = _Maps(ds)
    out = {"H": True, "H_prime": True, "failures": []}
    for s in m.degrees():
        for name, mat in (("H", m.H_star(s)), ("H_prime", m.Hp_star(s))):
            if not (mat.rows == mat.cols and mat.rank() == mat.rows):
                out[name] = False
                out["failures"].append({"map": name, "degree": s})
    out["pass"] = out["H"] and out["H_prime"]
    return out


@dataclass
class DualitySequence:
    sequence: LongExactSequence
    labels: dict[str, str]
    pairing_checks: list[dict] = field(default_factory=list)
    adjoint: bool = True
    pd_nondegenerate: bool = True

    @property
    def pairing_ok(self) -> bool:
        return self.adjoint and self.pd_nondegenerate and all(ch["holds"] for ch in self.pairing_checks)

    def to_dict(self) -> dict:
        return {
            "exact": self.sequence.is_exact(),
            "defects": [(t.name, t.degree) for t in self.sequence.defects()],
            "terms": self.sequence.to_dict()["terms"],
            "labels": self.labels,
            "pairing": {
                "adjoint": self.adjoint,
                "pd_nondegenerate": self.pd_nondegenerate,
                "classes": self.pairing_checks,
                "holds": self.pairing_ok,
            },
        }


def duality_sequence(ds: DualitySplitting) -> DualitySequence:
    """``H_s(C) -> H_{s-1}(P) -> H_s(Q) -> H_{s-1}(C) -> ...`` via sigma, theta, rho."""
    m = _Maps(ds)
    terms: list[Term] = []
    maps: list[Gf2Matrix] = []
    names: list[str] = []
    degs = list(m.degrees())
    for i, s in enumerate(degs):
        terms += [Term("H(C)", s, m.hc.rank(s)), Term("H(P)", s - 1, m.hp.rank(s - 1)), Term("H(Q)", s, m.hq.rank(s))]
        try:
            theta = m.theta(s)
        except ValueError:
            raise DualityError("not_acyclic", f"H = (eta sigma) is not invertible on homology in degree {s}") from None
        maps += [m.sigma_star(s), theta]
        names += ["sigma", "theta"]
        if i + 1 < len(degs):
            maps.append(m.rho_star(s))
            names.append("rho")
    seq = LongExactSequence(terms, maps, names)
    n = ds.ambient_n
    labels = {
        "H(C)_s": "H_{s+1} of the Legendrian",
        "H(P)_j": f"LCH^{{{n}-3-j}}",
        "H(Q)_s": "LCH_s",
    }
    out = DualitySequence(seq, labels)
    _pairing_checks(ds, m, out)
    return out




def _pq_pairing(ds: DualitySplitting, p_labels: list[str], q_labels: list[str]) -> int:
    ps = set(p_labels)
    return sum(1 for a in q_labels if ds.pairing[a] in ps) % 2


def _pd_value(ds: DualitySplitting, u: list[str], v: list[str]) -> int:
    return sum(1 for a in u for b in v if frozenset((a, b)) in ds.pd) % 2


def _pairing_checks(ds: DualitySplitting, m: _Maps, out: DualitySequence) -> None:
    """Adjointness ``<sigma g, a> = PD(g, rho a)`` on homology, plus the existence statement.

    ``H_s(C)`` pairs with ``H_{n-3-s}(C)``; ``sigma g`` lies in ``H_{s-1}(P)``
    and pairs with ``H_{n-2-s}(Q)``.
    """
    n = ds.ambient_n
    if not ds.pd:
        has_c = any(m.hc.rank(s) for s in m.degrees())
        out.pd_nondegenerate = not has_c
        out.adjoint = not has_c
        if has_c:
            return
    for s in m.degrees():
        j = n - 2 - s
        gammas = m.hc.representatives(s)
        partners = m.hc.representatives(j - 1)
        gram = [[_pd_value(ds, g, h) for h in partners] for g in gammas]
        if len(gammas) != len(partners) or Gf2Matrix.from_dense(gram, len(partners)).rank() != len(gammas):
            out.pd_nondegenerate = False
        sigma_g = [_apply(ds.sigma, ds.c, g) for g in gammas]
        for a_idx, alpha in enumerate(m.hq.representatives(j)):
            rho_a = _apply(ds.rho, ds.q, alpha)
            # coordinates of rho(alpha) in the partner basis
            coords = m.hc[j - 1].coordinates(ds.c.vector(rho_a)) if rho_a else 0
            for gi, g in enumerate(gammas):
                lhs = _pq_pairing(ds, sigma_g[gi], alpha)
                rhs = sum(gram[gi][k] for k in range(len(partners)) if coords >> k & 1) % 2
                if lhs != rhs:
                    out.adjoint = False
            if not coords:
                continue
            witness = next(
                (g for gi, g in enumerate(gammas) if _pq_pairing(ds, sigma_g[gi], alpha)),
                None,
            )
            out.pairing_checks.append(
                {
                    "alpha": alpha,
                    "beta": rho_a,
                    "gamma": witness,
                    "holds": witness is not None,
                }
            )


def _apply(f: ChainMap, src: ChainComplex, labels: list[str]) -> list[str]:
    if not labels:
        return []
    d = src.degree_of(labels[0])
    return f.target.vector_labels(d + f.shift, f.apply(d, src.vector(labels)))


# ----------------------------------------------------------------------------
# comparison with the two-copy sequence


def _same_complex(a: ChainComplex, b: ChainComplex) -> bool:
    if sorted(a.labels()) != sorted(b.labels()) or a.direction != b.direction:
        return False
    return all(
        a.degree_of(g) == b.degree_of(g) and sorted(a.differential_of(g)) == sorted(b.differential_of(g))
        for g in a.labels()
    )


@dataclass
class DiagramReport:
    K: int
    squares: dict[str, list[int]]  # square -> degrees where it fails on homology
    vertical_isomorphisms: dict[str, bool]
    chain_level: dict[str, bool]

    @property
    def ok(self) -> bool:
        return not any(self.squares.values())

    def to_dict(self) -> dict:
        return {
            "pass": self.ok,
            "K": self.K,
            "squares": {k: {"pass": not v, "failed_degrees": v} for k, v in sorted(self.squares.items())},
            "vertical_isomorphisms": dict(sorted(self.vertical_isomorphisms.items())),
            "chain_level": dict(sorted(self.chain_level.items())),
        }


def diagram_check(ds: DualitySplitting, tc, match: Mapping[str, str]) -> DiagramReport:
    """Compare the two-copy sequence with the duality sequence on homology.

    ``tc`` is regraded by ``s = K - t`` (which makes it homological) and its
    chords are renamed through ``match``: long chords onto P, short chords
    onto C.  The rows are

        H_s(short) -> H_s(Chat) -> H_s(I) -> H_{s-1}(short)
        H_s(C)     -> H_{s-1}(P) -> H_s(Q) -> H_{s-1}(C)

    with vertical maps the identification, the connecting map of
    ``long -> tc -> Chat`` and ``H'^{-1}`` after the connecting map of
    ``C_inf -> tc -> I``.  Squares are compared after passing to homology.
    """
    long, short, inter = list(tc.long), list(tc.short), list(tc.inter)
    if sorted(match) != sorted(long + short):
        raise DualityError("basis", "every chord of the two-copy complex needs exactly one match")
    if sorted(match[x] for x in long) != sorted(ds.p_labels):
        raise DualityError("basis", "long chords must match the P block bijectively")
    if sorted(match[x] for x in short) != sorted(ds.c_labels):
        raise DualityError("basis", "short chords must match the C block bijectively")
    clash = set(inter) & set(ds.total.labels())
    if clash:
        raise DualityError("basis", f"intersection points clash with splitting labels: {sorted(clash)}")
    ks = {ds.total.degree_of(match[x]) + tc.complex.degree_of(x) for x in match}
    if len(ks) > 1:
        raise DualityError("basis", f"matched degrees need a single constant s + t, found {sorted(ks)}")
    K = ks.pop() if ks else 0

    R = tc.complex.regrade(K).relabel(dict(match))
    m = _Maps(ds)
    P, C = ds.p_labels, ds.c_labels
    cinf, I2, inc_cinf, proj_I2 = sub_and_quotient(R, C + P)
    if not _same_complex(cinf, m.cp):
        raise DualityError("basis", "chord block of the two-copy complex differs from the C + P block")
    longc, chat, inc_long, proj_chat = sub_and_quotient(R, P)
    shortc, I, inc_short, proj_I = sub_and_quotient(chat, C)

    h = {name: homology(x) for name, x in
         (("long", longc), ("chat", chat), ("short", shortc), ("I", I), ("I2", I2), ("cinf", cinf))}
    id_long = ChainMap.by_labels(longc, ds.p)
    id_short = ChainMap.by_labels(shortc, ds.c)
    id_cinf = ChainMap.by_labels(cinf, m.cp)
    id_I = ChainMap.by_labels(I, I2)

    degs = set(R.degrees) | set(ds.total.degrees) or {0}
    squares: dict[str, list[int]] = {"A": [], "B": [], "C": []}
    vertical = {"chat_to_P": True, "I_to_Q": True}
    chain = {"A": True, "C": True}
    for s in range(max(degs) + 1, min(degs) - 1, -1):
        try:
            hp_inv = m.Hp_inverse(s)
            theta = m.theta(s)
        except ValueError:
            raise DualityError("not_acyclic", f"H or H' is not invertible in degree {s}") from None
        incl = induced_map(inc_short, h["short"], h["chat"], s)
        proj = induced_map(proj_I, h["chat"], h["I"], s)
        delta = connecting_map(inc_long, proj_chat, h["long"], h["chat"], s)
        delta2 = connecting_map(inc_cinf, proj_I2, h["cinf"], h["I2"], s)
        conn_top = connecting_map(inc_short, proj_I, h["short"], h["I"], s)
        idl = induced_map(id_long, h["long"], m.hp, s - 1)
        ids = induced_map(id_short, h["short"], m.hc, s)
        ids_next = induced_map(id_short, h["short"], m.hc, s - 1)
        idc = induced_map(id_cinf, h["cinf"], m.hcp, s - 1)
        idi = induced_map(id_I, h["I"], h["I2"], s)

        down_chat = idl @ delta
        down_I = hp_inv @ idc @ delta2 @ idi
        if m.sigma_star(s) @ ids != down_chat @ incl:
            squares["A"].append(s)
        if theta @ down_chat != down_I @ proj:
            squares["B"].append(s)
        if m.rho_star(s) @ down_I != ids_next @ conn_top:
            squares["C"].append(s)
        for key, mat in (("chat_to_P", down_chat), ("I_to_Q", down_I)):
            if not (mat.rows == mat.cols and mat.rank() == mat.rows):
                vertical[key] = False

        # chain level: sigma is literally the long part of the boundary of a short chord,
        # and the boundary of an intersection representative lies in the image of H'
        for g in shortc.basis(s):
            if sorted(t for t in R.differential_of(g) if t in P) != sorted(ds.sigma.images()[g]):
                chain["A"] = False
        hq = m.Hp.component(s)
        for x in h["I"].representatives(s):
            bd = set()
            for g in x:
                bd ^= {t for t in R.differential_of(g) if t in cinf}
            if bd and solve(hq, m.cp.vector(bd)) is None:
                chain["C"] = False
    return DiagramReport(K, squares, vertical, chain)
