"""Long exact sequences: from short exact sequences of complexes and from mapping cones."""

from __future__ import annotations

from dataclasses import dataclass, field

from .complex import (
    ChainComplex,
    ChainMap,
    ComplexError,
    Homology,
    ShapeError,
    homology,
    induced_map,
    sub_and_quotient,
    verify_chain_map,
)
from .matrix import Gf2Matrix, solve


@dataclass(frozen=True)
class Term:
    name: str
    degree: int
    dim: int


@dataclass
class LongExactSequence:
    """A finite sequence of vector spaces with maps ``maps[i]: terms[i] -> terms[i+1]``.

    The sequence is understood to be padded by zero spaces at both ends, so
    exactness at the first term means its outgoing map is injective and at
    the last term that its incoming map is surjective.
    """

    terms: list[Term]
    maps: list[Gf2Matrix]
    map_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        if len(self.maps) != max(len(self.terms) - 1, 0):
            raise ShapeError("need exactly one map between consecutive terms")
        for i, m in enumerate(self.maps):
            expected = (self.terms[i + 1].dim, self.terms[i].dim)
            if m.shape != expected:
                raise ShapeError(f"map {i} has shape {m.shape}, expected {expected}")

    def defects(self) -> list[Term]:
        """Terms at which image of the incoming map differs from kernel of the outgoing one."""
        bad = []
        for i, t in enumerate(self.terms):
            rank_in = self.maps[i - 1].rank() if i > 0 else 0
            rank_out = self.maps[i].rank() if i < len(self.maps) else 0
            if i < len(self.maps) and i > 0 and not (self.maps[i] @ self.maps[i - 1]).is_zero():
                bad.append(t)
            elif rank_in + rank_out != t.dim:
                bad.append(t)
        return bad

    def is_exact(self) -> bool:
        return not self.defects()

    def find(self, name: str, degree: int) -> int:
        for i, t in enumerate(self.terms):
            if t.name == name and t.degree == degree:
                return i
        raise KeyError((name, degree))

    def map_from(self, name: str, degree: int) -> Gf2Matrix:
        return self.maps[self.find(name, degree)]

    def to_dict(self) -> dict:
        return {
            "terms": [{"space": t.name, "degree": t.degree, "rank": t.dim} for t in self.terms],
            "map_ranks": [m.rank() for m in self.maps],
            "exact": self.is_exact(),
        }


def connecting_map(
    inclusion: ChainMap,
    projection: ChainMap,
    h_sub: Homology,
    h_quot: Homology,
    degree: int,
) -> Gf2Matrix:
    """Connecting map ``H_degree(quot) -> H_{degree+dir}(sub)`` of ``0 -> A -> B -> C -> 0``.

    Lift a cycle through the projection, apply the boundary, pull back along
    the inclusion.
    """
    b = inclusion.target
    step = b.direction
    p = projection.component(degree)
    i = inclusion.component(degree + step)
    tgt = h_sub[degree + step]
    cols = []
    for z in h_quot[degree].representatives:
        lift = solve(p, z)
        if lift is None:
            raise ComplexError("projection is not surjective")
        pulled = solve(i, b.boundary(degree).apply(lift))
        if pulled is None:
            raise ComplexError("sequence is not exact at the middle term")
        cols.append(tgt.coordinates(pulled))
    return Gf2Matrix.from_columns(tgt.rank, cols)


def les_of_short_exact(
    inclusion: ChainMap,
    projection: ChainMap,
    names: tuple[str, str, str] = ("A", "B", "C"),
    window: tuple[int, int] | None = None,
) -> LongExactSequence:
    """Long exact homology sequence of ``0 -> A -> B -> C -> 0`` (degree-0 maps)."""
    if inclusion.shift or projection.shift:
        raise ShapeError("short exact sequence maps must preserve degree")
    a, b, c = inclusion.source, inclusion.target, projection.target
    ha, hb, hc = homology(a), homology(b), homology(c)
    step = b.direction
    if window is None:
        degs = set(a.degrees) | set(b.degrees) | set(c.degrees) or {0}
        window = (min(degs) - 1, max(degs) + 1)
    lo, hi = window
    degrees = range(hi, lo - 1, -1) if step == -1 else range(lo, hi + 1)
    terms: list[Term] = []
    maps: list[Gf2Matrix] = []
    map_names: list[str] = []
    for d in degrees:
        terms += [Term(names[0], d, ha.rank(d)), Term(names[1], d, hb.rank(d)), Term(names[2], d, hc.rank(d))]
        maps += [induced_map(inclusion, ha, hb, d), induced_map(projection, hb, hc, d)]
        map_names += ["inclusion", "projection"]
        if d != degrees[-1]:
            maps.append(connecting_map(inclusion, projection, ha, hc, d))
            map_names.append("connecting")
    return LongExactSequence(terms, maps, map_names)


def les_of_pair(c: ChainComplex, sub_labels, names=("A", "B", "C"), window=None) -> LongExactSequence:
    """Sequence of a subcomplex spanned by basis labels and its quotient."""
    _, _, inc, proj = sub_and_quotient(c, sub_labels)
    return les_of_short_exact(inc, proj, names, window)


@dataclass
class Cone:
    complex: ChainComplex
    inclusion: ChainMap  # target -> cone
    projection: ChainMap  # cone -> source, raising degree by the direction
    sequence: LongExactSequence


def mapping_cone(f: ChainMap, check: bool = True) -> Cone:
    """Cone of a degree-0 chain map ``f: S -> T``.

    ``Cone_d = S_{d+dir} + T_d`` with labels ``S:x`` and ``T:y`` and boundary
    ``(s, t) -> (ds, f s + dt)``.  In the returned sequence the connecting map
    out of the shifted ``S`` term is ``f_*``.
    """
    if f.shift:
        raise ShapeError("mapping_cone expects a degree-preserving map")
    if check:
        res = verify_chain_map(f)
        if not res:
            raise ComplexError(f"not a chain map in degree {res.degree}: {res.detail}")
    s, t = f.source, f.target
    step = s.direction
    degrees: dict[str, int] = {}
    diff: dict[str, list[str]] = {}
    images = f.images()
    for lab in s.labels():
        degrees["S:" + lab] = s.degree_of(lab) - step
        diff["S:" + lab] = ["S:" + x for x in s.differential_of(lab)] + ["T:" + y for y in images[lab]]
    for lab in t.labels():
        degrees["T:" + lab] = t.degree_of(lab)
        diff["T:" + lab] = ["T:" + y for y in t.differential_of(lab)]
    cone = ChainComplex.from_differential(degrees, diff, step)
    t_labels = ["T:" + lab for lab in t.labels()]
    _, _, _, proj_quot = sub_and_quotient(cone, t_labels)
    inclusion = ChainMap.from_images(t, cone, {lab: ["T:" + lab] for lab in t.labels()})
    projection = ChainMap.from_images(cone, s, {"S:" + lab: [lab] for lab in s.labels()}, shift=step)
    seq = les_of_short_exact(inclusion, proj_quot, ("target", "cone", "source[shifted]"))
    return Cone(cone, inclusion, projection, seq)
