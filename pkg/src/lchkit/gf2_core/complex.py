"""Graded GF(2) chain complexes, chain maps and homology."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .matrix import Gf2Matrix, Reducer, bits, kernel_basis, permute_bits, span_basis


class ComplexError(ValueError):
    """Base class for invalid chain-level data."""


class BoundarySquareError(ComplexError):
    def __init__(self, degree: int, detail: str = ""):
        self.degree = degree
        msg = f"boundary squared is nonzero starting in degree {degree}"
        super().__init__(msg + (f": {detail}" if detail else ""))


class ShapeError(ComplexError):
    pass


class ChainComplex:
    """A finite graded complex over GF(2).

    ``boundary(d)`` is the matrix from degree ``d`` to ``d + direction``;
    direction -1 is homological, +1 cohomological.  Degrees with an empty
    basis may be omitted.
    """

    def __init__(
        self,
        basis: Mapping[int, Sequence[str]],
        boundary: Mapping[int, Gf2Matrix] | None = None,
        direction: int = -1,
        check: bool = True,
    ):
        if direction not in (1, -1):
            raise ComplexError("direction must be +1 or -1")
        self.direction = direction
        self._basis = {d: tuple(labels) for d, labels in sorted(basis.items()) if labels}
        seen: dict[str, int] = {}
        for d, labels in self._basis.items():
            for lab in labels:
                if lab in seen:
                    raise ComplexError(f"duplicate basis label {lab!r}")
                seen[lab] = d
        self._degree_of = seen
        self._index = {d: {lab: i for i, lab in enumerate(labels)} for d, labels in self._basis.items()}
        self._boundary: dict[int, Gf2Matrix] = {}
        for d, m in (boundary or {}).items():
            expected = (self.dim(d + direction), self.dim(d))
            if m.shape != expected:
                raise ShapeError(f"boundary({d}) has shape {m.shape}, expected {expected}")
            if not m.is_zero():
                self._boundary[d] = m
        if check:
            self.check_square()

    # -- structure --------------------------------------------------------
    @property
    def degrees(self) -> list[int]:
        return list(self._basis)

    def basis(self, d: int) -> tuple[str, ...]:
        return self._basis.get(d, ())

    def dim(self, d: int) -> int:
        return len(self._basis.get(d, ()))

    def labels(self) -> list[str]:
        return [lab for d in self._basis for lab in self._basis[d]]

    def degree_of(self, label: str) -> int:
        return self._degree_of[label]

    def index(self, label: str) -> int:
        return self._index[self._degree_of[label]][label]

    def __contains__(self, label: str) -> bool:
        return label in self._degree_of

    def boundary(self, d: int) -> Gf2Matrix:
        m = self._boundary.get(d)
        if m is None:
            return Gf2Matrix.zero(self.dim(d + self.direction), self.dim(d))
        return m

    def degree_window(self) -> tuple[int, int]:
        if not self._basis:
            return (0, 0)
        return (min(self._basis), max(self._basis))

    def vector(self, labels: Iterable[str]) -> int:
        """Bit vector of a set of same-degree labels (repeats cancel)."""
        v = 0
        for lab in labels:
            v ^= 1 << self.index(lab)
        return v

    def vector_labels(self, d: int, v: int) -> list[str]:
        labels = self.basis(d)
        return [labels[i] for i in bits(v)]

    def differential_of(self, label: str) -> list[str]:
        d = self.degree_of(label)
        return self.vector_labels(d + self.direction, self.boundary(d).column(self.index(label)))

    def square_defect(self, d: int) -> Gf2Matrix:
        return self.boundary(d + self.direction) @ self.boundary(d)

    def check_square(self) -> None:
        for d in self.degrees:
            if not self.square_defect(d).is_zero():
                raise BoundarySquareError(d)

    def is_acyclic(self) -> bool:
        return all(r == 0 for r in homology(self).ranks.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return (
            self.direction == other.direction
            and self._basis == other._basis
            and self._boundary == other._boundary
        )

    def __repr__(self) -> str:
        dims = {d: self.dim(d) for d in self.degrees}
        return f"ChainComplex(direction={self.direction}, dims={dims})"

    # -- derived complexes ------------------------------------------------
    @classmethod
    def from_differential(
        cls,
        degrees: Mapping[str, int],
        differential: Mapping[str, Iterable[str]],
        direction: int = -1,
        check: bool = True,
    ) -> ChainComplex:
        """Build from label -> degree and label -> list of labels in its boundary."""
        basis: dict[int, list[str]] = {}
        for lab, d in degrees.items():
            basis.setdefault(d, []).append(lab)
        index = {lab: i for labs in basis.values() for i, lab in enumerate(labs)}
        entries: dict[int, list[tuple[int, int]]] = {}
        for lab, targets in differential.items():
            d = degrees[lab]
            acc: set[str] = set()
            for t in targets:
                acc ^= {t}
            for t in acc:
                if t not in degrees:
                    raise ComplexError(f"unknown generator {t!r} in boundary of {lab!r}")
                if degrees[t] != d + direction:
                    raise ComplexError(
                        f"{lab!r} (degree {d}) has {t!r} (degree {degrees[t]}) in its boundary"
                    )
                entries.setdefault(d, []).append((index[t], index[lab]))
        boundary = {
            d: Gf2Matrix(len(basis.get(d + direction, ())), len(basis[d]), ents)
            for d, ents in entries.items()
        }
        return cls(basis, boundary, direction, check=check)

    def to_differential(self) -> dict[str, list[str]]:
        return {lab: self.differential_of(lab) for lab in self.labels()}

    def dual(self) -> ChainComplex:
        """Hom(-, GF(2)): transposed boundaries, direction flipped, same labels."""
        boundary = {d + self.direction: m.transpose() for d, m in self._boundary.items()}
        return ChainComplex(self._basis, boundary, -self.direction, check=False)

    def regrade(self, constant: int) -> ChainComplex:
        """Same matrices with degree ``d`` renamed ``constant - d`` (direction flips)."""
        basis = {constant - d: labels for d, labels in self._basis.items()}
        boundary = {constant - d: m for d, m in self._boundary.items()}
        return ChainComplex(basis, boundary, -self.direction, check=False)

    def shifted(self, k: int) -> ChainComplex:
        """Same complex with every degree raised by ``k``."""
        basis = {d + k: labels for d, labels in self._basis.items()}
        boundary = {d + k: m for d, m in self._boundary.items()}
        return ChainComplex(basis, boundary, self.direction, check=False)

    def relabel(self, mapping: Mapping[str, str]) -> ChainComplex:
        """Rename basis labels (unlisted labels keep their names)."""
        basis = {d: [mapping.get(lab, lab) for lab in labels] for d, labels in self._basis.items()}
        return ChainComplex(basis, self._boundary, self.direction, check=False)

    def restrict(self, keep: Iterable[str]) -> ChainComplex:
        """Submatrix on the kept labels (valid as a complex only for sub/quotient spans)."""
        keep_set = set(keep)
        basis = {d: [lab for lab in labs if lab in keep_set] for d, labs in self._basis.items()}
        return ChainComplex.from_differential(
            {lab: d for d, labs in basis.items() for lab in labs},
            {lab: [t for t in self.differential_of(lab) if t in keep_set] for labs in basis.values() for lab in labs},
            self.direction,
        )


@dataclass(frozen=True)
class ChainMap:
    """A map of complexes raising degree by ``shift``; ``component(d)`` maps degree d."""

    source: ChainComplex
    target: ChainComplex
    components: Mapping[int, Gf2Matrix] = field(default_factory=dict)
    shift: int = 0

    def __post_init__(self):
        for d, m in self.components.items():
            expected = (self.target.dim(d + self.shift), self.source.dim(d))
            if m.shape != expected:
                raise ShapeError(f"component({d}) has shape {m.shape}, expected {expected}")

    def component(self, d: int) -> Gf2Matrix:
        m = self.components.get(d)
        if m is None:
            return Gf2Matrix.zero(self.target.dim(d + self.shift), self.source.dim(d))
        return m

    @classmethod
    def from_images(
        cls,
        source: ChainComplex,
        target: ChainComplex,
        images: Mapping[str, Iterable[str]],
        shift: int = 0,
    ) -> ChainMap:
        """Build from label -> labels of its image; unlisted labels map to zero."""
        cols: dict[int, list[int]] = {d: [0] * source.dim(d) for d in source.degrees}
        for lab, targets in images.items():
            d = source.degree_of(lab)
            v = 0
            for t in targets:
                if target.degree_of(t) != d + shift:
                    raise ShapeError(f"{lab!r} maps to {t!r} of the wrong degree")
                v ^= 1 << target.index(t)
            cols[d][source.index(lab)] = v
        comps = {d: Gf2Matrix.from_columns(target.dim(d + shift), c) for d, c in cols.items()}
        return cls(source, target, comps, shift)

    @classmethod
    def identity(cls, c: ChainComplex) -> ChainMap:
        return cls(c, c, {d: Gf2Matrix.identity(c.dim(d)) for d in c.degrees})

    @classmethod
    def by_labels(cls, source: ChainComplex, target: ChainComplex, mapping: Mapping[str, str] | None = None) -> ChainMap:
        """The map sending each source label to the same-named (or mapped) target label."""
        mapping = mapping or {}
        return cls.from_images(source, target, {lab: [mapping.get(lab, lab)] for lab in source.labels()})

    def images(self) -> dict[str, list[str]]:
        out = {}
        for d in self.source.degrees:
            m = self.component(d)
            for lab in self.source.basis(d):
                out[lab] = self.target.vector_labels(d + self.shift, m.column(self.source.index(lab)))
        return out

    def apply(self, d: int, v: int) -> int:
        return self.component(d).apply(v)

    def compose(self, first: ChainMap) -> ChainMap:
        """``self ∘ first``."""
        if first.target is not self.source and first.target != self.source:
            raise ShapeError("maps are not composable")
        comps = {
            d: self.component(d + first.shift) @ first.component(d) for d in first.source.degrees
        }
        return ChainMap(first.source, self.target, comps, first.shift + self.shift)

    def __add__(self, other: ChainMap) -> ChainMap:
        if other.shift != self.shift:
            raise ShapeError("cannot add maps of different degree")
        comps = {d: self.component(d) + other.component(d) for d in self.source.degrees}
        return ChainMap(self.source, self.target, comps, self.shift)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.components.values())


@dataclass(frozen=True)
class ChainMapCheck:
    ok: bool
    degree: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_chain_map(f: ChainMap) -> ChainMapCheck:
    """Check ``f ∘ ∂ = ∂ ∘ f`` degree by degree; report the first failing degree."""
    s, t = f.source, f.target
    if s.direction != t.direction:
        raise ShapeError("source and target have different directions")
    for d in sorted(set(s.degrees) | {d - f.shift for d in t.degrees}):
        lhs = f.component(d + s.direction) @ s.boundary(d)
        rhs = t.boundary(d + f.shift) @ f.component(d)
        if lhs != rhs:
            diff = lhs + rhs
            r, c = min(diff.entries)
            detail = (
                f"generator {s.basis(d)[c]!r}: coefficient of "
                f"{t.basis(d + f.shift + s.direction)[r]!r} differs"
            )
            return ChainMapCheck(False, d, detail)
    return ChainMapCheck(True)


class HomologyDegree:
    """Homology of one degree: representatives and a coordinate solver."""

    def __init__(self, complex_: ChainComplex, degree: int):
        c = complex_
        self.degree = degree
        n = c.dim(degree)
        # pivot order: lexicographically smallest label gets bit 0
        order = sorted(range(n), key=lambda i: c.basis(degree)[i])
        to_sorted = [0] * n
        for pos, i in enumerate(order):
            to_sorted[i] = pos
        self._to_sorted = to_sorted
        self._from_sorted = order

        outgoing = c.boundary(degree)
        incoming = c.boundary(degree - c.direction)
        sorted_cols = [0] * n
        for i in range(n):
            sorted_cols[to_sorted[i]] = outgoing.column(i)
        kernel = kernel_basis(Gf2Matrix.from_columns(outgoing.rows, sorted_cols))
        image = [permute_bits(col, to_sorted) for col in incoming.columns]

        red = Reducer()
        for v in image:
            red.add(v)
        self.boundary_rank = len(red)
        reps_sorted: list[int] = []
        for z in sorted(kernel):
            rem, _ = red.reduce(z)
            if rem:
                red.add(rem, 1 << len(reps_sorted))
                reps_sorted.append(rem)
        self._reducer = red
        self.cycle_rank = len(kernel)
        self.rank = len(reps_sorted)
        self.representatives = [permute_bits(v, order) for v in reps_sorted]
        self.representative_labels = [c.vector_labels(degree, v) for v in self.representatives]

    def coordinates(self, z: int) -> int:
        """Coordinates of the class of cycle ``z`` in the representative basis."""
        rem, tag = self._reducer.reduce(permute_bits(z, self._to_sorted))
        if rem:
            raise ComplexError(f"vector is not a cycle in degree {self.degree}")
        return tag

    def is_boundary(self, z: int) -> bool:
        return self.coordinates(z) == 0


class Homology:
    """Graded homology with deterministic representatives."""

    def __init__(self, complex_: ChainComplex):
        complex_.check_square()
        self.complex = complex_
        self._degrees = {d: HomologyDegree(complex_, d) for d in complex_.degrees}

    def __getitem__(self, d: int) -> HomologyDegree:
        hd = self._degrees.get(d)
        if hd is None:
            hd = HomologyDegree(self.complex, d)
            self._degrees[d] = hd
        return hd

    @property
    def ranks(self) -> dict[int, int]:
        return {d: h.rank for d, h in self._degrees.items()}

    def rank(self, d: int) -> int:
        return self[d].rank

    def nonzero_ranks(self) -> dict[int, int]:
        return {d: r for d, r in self.ranks.items() if r}

    def representatives(self, d: int) -> list[list[str]]:
        return self[d].representative_labels


def homology(complex_: ChainComplex) -> Homology:
    """Homology of ``complex_``; raises BoundarySquareError if ∂² ≠ 0."""
    return Homology(complex_)


def induced_map(f: ChainMap, hs: Homology, ht: Homology, degree: int) -> Gf2Matrix:
    """Matrix of ``f_*`` from ``H_degree(source)`` to ``H_{degree+shift}(target)``."""
    src = hs[degree]
    tgt = ht[degree + f.shift]
    comp = f.component(degree)
    cols = [tgt.coordinates(comp.apply(r)) for r in src.representatives]
    return Gf2Matrix.from_columns(tgt.rank, cols)


def sub_and_quotient(
    c: ChainComplex, sub_labels: Iterable[str]
) -> tuple[ChainComplex, ChainComplex, ChainMap, ChainMap]:
    """Split ``c`` along a subcomplex spanned by basis labels.

    Returns ``(sub, quotient, inclusion, projection)``; raises ComplexError if
    the span is not closed under the boundary.
    """
    sub_set = set(sub_labels)
    for lab in sub_set:
        escaped = [t for t in c.differential_of(lab) if t not in sub_set]
        if escaped:
            raise ComplexError(f"span is not a subcomplex: boundary of {lab!r} contains {escaped[0]!r}")
    rest = [lab for lab in c.labels() if lab not in sub_set]
    sub = c.restrict(sub_set)
    quot = c.restrict(rest)
    inc = ChainMap.by_labels(sub, c)
    proj = ChainMap.from_images(c, quot, {lab: [lab] for lab in rest})
    return sub, quot, inc, proj


def direct_sum_labels(*complexes: ChainComplex) -> list[str]:
    return [lab for c in complexes for lab in c.labels()]


def kernel_dim(m: Gf2Matrix) -> int:
    return m.cols - m.rank()


def image_basis(m: Gf2Matrix) -> list[int]:
    return span_basis(m.columns)
