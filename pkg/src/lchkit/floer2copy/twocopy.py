"""Two-copy Floer complex of a filling and its push-off.

Generators come in three blocks: long chords (one per chord of the
Legendrian, written ``c'``), short chords (critical points of a Morse
function on the Legendrian) and intersection points (critical points of a
Morse function on the filling).  The differential raises degree by one and
has the block form

    d = [[d_inf, rho], [0, d_0]]     d_inf = [[d^f, S], [0, d_f]]

on ``(long + short) + intersection``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..augmentations import LinearizedComplex, dualize, homology_ranks_dual
from ..gf2_core import ChainComplex, ComplexError, homology, les_of_pair
from ..gf2_core.sequences import LongExactSequence

ASSUMPTIONS = [
    "two-copy correspondences assumed: long-chord block from the SFT differential, "
    "short-chord block from the Morse complex on the Legendrian, intersection block "
    "from the Morse complex on the filling, off-diagonal blocks from the connecting data",
]

LONG_SHIFT = -1  # default degree of a short chord: Morse index - 1
FILLING_SHIFT = -2  # default degree of an intersection point: Morse index - 2


class TwoCopyError(ComplexError):
    def __init__(self, identity: str, detail: str):
        self.identity = identity
        super().__init__(f"{identity} fails: {detail}")


@dataclass(frozen=True)
class MorseComplexData:
    role: str  # "lambda" or "filling"
    index: dict[str, int]
    degree: dict[str, int]
    differential: dict[str, list[str]]
    action: dict[str, Fraction] = field(default_factory=dict)

    @property
    def names(self) -> list[str]:
        return list(self.index)

    def complex(self) -> ChainComplex:
        return ChainComplex.from_differential(self.degree, self.differential, direction=1)


def morse_data(
    role: str,
    index: Mapping[str, int],
    differential: Mapping[str, list[str]] | None = None,
    degree: Mapping[str, int] | None = None,
    action: Mapping[str, Fraction] | None = None,
) -> MorseComplexData:
    """Morse complex with cohomological (index raising) differential."""
    if role not in ("lambda", "filling"):
        raise ValueError(f"unknown Morse role {role!r}")
    shift = LONG_SHIFT if role == "lambda" else FILLING_SHIFT
    differential = dict(differential or {})
    for p, targets in differential.items():
        for q in targets:
            if q not in index:
                raise ComplexError(f"unknown critical point {q!r}")
            if index[q] != index[p] + 1:
                raise ComplexError(f"Morse differential {p} -> {q} must raise the index by one")
    deg = {p: (degree or {}).get(p, i + shift) for p, i in index.items()}
    data = MorseComplexData(role, dict(index), deg, differential, dict(action or {}))
    data.complex()  # squares to zero and respects degrees
    return data


@dataclass(frozen=True)
class ConnectingData:
    short: dict[str, list[str]] = field(default_factory=dict)  # short chord -> long chords
    rho: dict[str, list[str]] = field(default_factory=dict)  # intersection point -> chords


def long_name(chord: str) -> str:
    return chord + "'"


@dataclass(frozen=True)
class TwoCopyComplex:
    complex: ChainComplex
    long: tuple[str, ...]
    short: tuple[str, ...]
    inter: tuple[str, ...]
    action: dict[str, Fraction]
    ambient_n: int = 2
    assumptions: tuple[str, ...] = tuple(ASSUMPTIONS)

    @property
    def c_infinity(self) -> tuple[str, ...]:
        return self.long + self.short

    def kind(self, label: str) -> str:
        if label in self.long:
            return "long"
        if label in self.short:
            return "short"
        return "intersection"

    def identities(self) -> dict[str, bool]:
        return block_identities(self.complex, set(self.c_infinity))

    def with_complex(self, c: ChainComplex, drop=()) -> TwoCopyComplex:
        keep = lambda labs: tuple(x for x in labs if x not in drop)  # noqa: E731
        action = {k: v for k, v in self.action.items() if k not in drop}
        return make_two_copy(c, keep(self.long), keep(self.short), keep(self.inter), action, self.ambient_n)


def block_identities(c: ChainComplex, c_inf: set) -> dict[str, bool]:
    """Classify the entries of d^2 by block: which of the three identities hold."""
    ok = {"d_inf^2 = 0": True, "d_0^2 = 0": True, "d_inf rho + rho d_0 = 0": True}
    for d in c.degrees:
        sq = c.square_defect(d)
        for r, col in sq.entries:
            src = c.basis(d)[col] in c_inf
            tgt = c.basis(d + 2 * c.direction)[r] in c_inf
            if src and tgt:
                ok["d_inf^2 = 0"] = False
            elif not src and not tgt:
                ok["d_0^2 = 0"] = False
            else:
                ok["d_inf rho + rho d_0 = 0"] = False
    return ok


def make_two_copy(
    c: ChainComplex,
    long: tuple,
    short: tuple,
    inter: tuple,
    action: Mapping[str, Fraction],
    ambient_n: int = 2,
) -> TwoCopyComplex:
    """Validate block shape, the three identities and the action condition."""
    long, short, inter = tuple(long), tuple(short), tuple(inter)
    if c.direction != 1:
        raise ComplexError("two-copy complexes raise degree")
    if sorted(long + short + inter) != sorted(c.labels()):
        raise ComplexError("block partition does not match the basis")
    blocks = {x: 0 for x in long} | {x: 1 for x in short} | {x: 2 for x in inter}
    for x in c.labels():
        for y in c.differential_of(x):
            if blocks[y] > blocks[x]:
                raise TwoCopyError("block triangularity", f"d({x}) contains {y}")
    for name, ok in block_identities(c, set(long + short)).items():
        if not ok:
            raise TwoCopyError(name, "nonzero entries in the square of the differential")
    for x in c.labels():
        a = Fraction(action[x])
        if (x in inter) != (a == 0) or a < 0:
            raise TwoCopyError("action", f"{x} has action {a}")
        for y in c.differential_of(x):
            if Fraction(action[y]) < a:
                raise TwoCopyError("action", f"d({x}) contains {y} of smaller action")
    return TwoCopyComplex(c, long, short, inter, {k: Fraction(v) for k, v in action.items()}, ambient_n)


def assemble_two_copy(
    lin: LinearizedComplex,
    morse_lambda: MorseComplexData,
    morse_filling: MorseComplexData,
    conn: ConnectingData,
) -> TwoCopyComplex:
    dga = lin.dga
    sft_part = dualize(lin)  # d^f as the transpose of the linearized differential
    long = tuple(long_name(c) for c in dga.names)
    short = tuple(morse_lambda.names)
    inter = tuple(morse_filling.names)
    clash = (set(long) & set(short)) | (set(long + short) & set(inter))
    if clash:
        raise ComplexError(f"generator names used twice: {sorted(clash)}")

    degrees: dict[str, int] = {}
    diff: dict[str, list[str]] = {}
    for c in dga.names:
        degrees[long_name(c)] = dga.gen(c).degree
        diff[long_name(c)] = [long_name(b) for b in sft_part.differential_of(c)]
    for p in short:
        degrees[p] = morse_lambda.degree[p]
        extra = conn.short.get(p, [])
        if any(t not in long for t in extra):
            raise TwoCopyError("block triangularity", f"short chord {p} must map to long chords")
        diff[p] = list(morse_lambda.differential.get(p, [])) + list(extra)
    for x in inter:
        degrees[x] = morse_filling.degree[x]
        extra = conn.rho.get(x, [])
        if any(t not in long and t not in short for t in extra):
            raise TwoCopyError("block triangularity", f"intersection point {x} must map to chords")
        diff[x] = list(morse_filling.differential.get(x, [])) + list(extra)
    for src in list(conn.short) + list(conn.rho):
        if src not in degrees:
            raise ComplexError(f"connecting data for unknown generator {src!r}")

    c = ChainComplex.from_differential(degrees, diff, direction=1, check=False)
    acts = [g.action for g in dga.generators]
    default_short = min(acts) / 2 if acts else Fraction(1, 2)
    action = {long_name(g.name): g.action for g in dga.generators}
    action |= {p: morse_lambda.action.get(p, default_short) for p in short}
    action |= {x: Fraction(0) for x in inter}
    return make_two_copy(c, long, short, inter, action, dga.ambient_n)


@dataclass
class TwoCopySequence:
    sequence: LongExactSequence
    acyclic: bool
    delta_ranks: dict[int, int]  # k -> rank of H^k(quotient) -> H^{k+1}(C_+)
    delta_isomorphism: bool
    correspondence: dict[str, str]

    def to_dict(self) -> dict:
        return {
            "exact": self.sequence.is_exact(),
            "acyclic": self.acyclic,
            "delta_ranks": {str(k): v for k, v in sorted(self.delta_ranks.items())},
            "delta_isomorphism": self.delta_isomorphism,
            "correspondence": self.correspondence,
            "terms": self.sequence.to_dict()["terms"],
        }


def two_copy_sequence(tc: TwoCopyComplex) -> TwoCopySequence:
    """Sequence of ``0 -> C_+ -> C -> C/C_+ -> 0`` with ``C_+`` the long chords."""
    c = tc.complex
    for x in tc.long:
        if any(y not in tc.long for y in c.differential_of(x)):
            raise ComplexError("long chords do not span a subcomplex; action data is inconsistent")
    seq = les_of_pair(c, tc.long, names=("C+", "C", "Chat"))
    deltas = {}
    iso = True
    for i, name in enumerate(seq.map_names):
        if name != "connecting":
            continue
        src, tgt = seq.terms[i], seq.terms[i + 1]
        m = seq.maps[i]
        deltas[src.degree] = m.rank()
        if not (m.rank() == src.dim == tgt.dim):
            iso = False
    acyclic = not homology(c).nonzero_ranks()
    n = tc.ambient_n
    corr = {
        "C+": "H^k(C+) = E_1^k = LCH^k",
        "Chat": f"H^k(Chat) = H_{{{n}-k-2}}(L)",
        "connecting": "H^k(Chat) -> H^{k+1}(C+)",
    }
    return TwoCopySequence(seq, acyclic, deltas, iso, corr)


@dataclass
class FillVerdict:
    verdict: str  # "consistent" or "obstructed"
    reason: str
    first_mismatch: int | None = None
    table: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "first_mismatch": self.first_mismatch,
            "table": self.table,
        }


def fillability_check(lin: LinearizedComplex | None, candidate: Mapping[int, int], ambient_n: int) -> FillVerdict:
    """Compare ``LCH^k`` with the candidate ``H_{n-k-1}(L)`` in every degree.

    ``lin`` is None when the DGA has no augmentation.
    """
    if lin is None:
        return FillVerdict("obstructed", "no augmentation")
    lch = homology_ranks_dual(lin)
    ks = set(lch) | {ambient_n - j - 1 for j in candidate}
    table = []
    first = None
    for k in sorted(ks):
        want = candidate.get(ambient_n - k - 1, 0)
        have = lch.get(k, 0)
        table.append({"k": k, "lch_upper": have, "filling_degree": ambient_n - k - 1, "filling_rank": want})
        if have != want and first is None:
            first = k
    if first is None:
        return FillVerdict("consistent", "LCH^k matches H_{n-k-1}(L) in every degree", None, table)
    return FillVerdict("obstructed", f"rank mismatch in degree {first}", first, table)
