"""Chain-level moves on Floer-type complexes and the squares relating them."""

from __future__ import annotations

from dataclasses import dataclass

from ..gf2_core import ChainComplex, ChainMap, ComplexError, Gf2Matrix, ShapeError, verify_chain_map
from .twocopy import TwoCopyComplex


class MovePrecondition(ComplexError):
    pass


def _complex(obj) -> ChainComplex:
    return obj.complex if isinstance(obj, TwoCopyComplex) else obj


def _same_block(tc: TwoCopyComplex, x: str, y: str) -> None:
    if tc.kind(x) != tc.kind(y):
        raise MovePrecondition(f"{x} and {y} lie in different blocks")


def handle_slide_move(obj, x: str, y: str):
    """Change of basis ``x -> x + y`` with ``|x| = |y|``.

    The new differential is ``phi d phi^{-1}`` and ``Phi = phi`` is returned
    as a degree preserving chain isomorphism from old to new.
    """
    c = _complex(obj)
    if x == y:
        raise MovePrecondition("handle slide needs two distinct generators")
    if c.degree_of(x) != c.degree_of(y):
        raise MovePrecondition(f"|{x}| = {c.degree_of(x)} differs from |{y}| = {c.degree_of(y)}")
    if isinstance(obj, TwoCopyComplex):
        _same_block(obj, x, y)

    def phi(labels):
        out = set()
        for t in labels:
            out ^= {t}
            if t == x:
                out ^= {y}
        return sorted(out)

    diff = {}
    for g in c.labels():
        src = [g] + ([y] if g == x else [])  # phi^{-1} = phi
        image = []
        for s in src:
            image += c.differential_of(s)
        diff[g] = phi(image)
    new = ChainComplex.from_differential({g: c.degree_of(g) for g in c.labels()}, diff, c.direction)
    old_to_new = ChainMap.from_images(c, new, {g: phi([g]) for g in c.labels()})
    if isinstance(obj, TwoCopyComplex):
        return obj.with_complex(new), old_to_new
    return new, old_to_new


def ungraded_slide_map(c: ChainComplex, x: str, y: str) -> tuple[Gf2Matrix, Gf2Matrix, Gf2Matrix]:
    """The map ``phi (1 + d)`` on the total space, with both total differentials.

    Returns ``(F, D_old, D_new)`` over the basis ``c.labels()``; ``F`` mixes
    degrees, so it is a chain isomorphism only in the ungraded sense.
    """
    labels = c.labels()
    pos = {g: i for i, g in enumerate(labels)}
    new, _ = handle_slide_move(c, x, y)

    def total(cc: ChainComplex) -> Gf2Matrix:
        cols = []
        for g in labels:
            v = 0
            for t in cc.differential_of(g):
                v ^= 1 << pos[t]
            cols.append(v)
        return Gf2Matrix.from_columns(len(labels), cols)

    d_old, d_new = total(c), total(new)
    phi_cols = [(1 << pos[g]) | ((1 << pos[y]) if g == x else 0) for g in labels]
    phi = Gf2Matrix.from_columns(len(labels), phi_cols)
    return phi @ (Gf2Matrix.identity(len(labels)) + d_old), d_old, d_new


@dataclass
class BirthDeath:
    reduced: object
    Phi: ChainMap  # big -> reduced
    Psi: ChainMap  # reduced -> big


def birth_death_move(obj, x: str, y: str) -> BirthDeath:
    """Cancel ``x`` against ``y`` where ``dx = y + v`` and ``v`` has no ``y`` term."""
    c = _complex(obj)
    if x == y:
        raise MovePrecondition("cancelling pair needs two distinct generators")
    dx = c.differential_of(x)
    if y not in dx:
        raise MovePrecondition(f"{y} does not appear in d({x})")
    if isinstance(obj, TwoCopyComplex):
        _same_block(obj, x, y)
    v = [t for t in dx if t != y]
    rest = [g for g in c.labels() if g not in (x, y)]

    def Phi(labels):
        out = set()
        for t in labels:
            if t == x:
                continue
            out ^= set(v) if t == y else {t}
        return sorted(out)

    diff = {g: Phi(c.differential_of(g)) for g in rest}
    reduced = ChainComplex.from_differential({g: c.degree_of(g) for g in rest}, diff, c.direction)
    phi_map = ChainMap.from_images(c, reduced, {g: Phi([g]) for g in c.labels()})
    psi_images = {}
    for g in rest:
        psi_images[g] = [g] + ([x] if y in c.differential_of(g) else [])
    psi_map = ChainMap.from_images(reduced, c, psi_images)
    if isinstance(obj, TwoCopyComplex):
        reduced = obj.with_complex(reduced, drop={x, y})
    return BirthDeath(reduced, phi_map, psi_map)


@dataclass
class CheckResult:
    ok: bool
    degree: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"pass": self.ok, "degree": self.degree, "detail": self.detail}


def join_map_check(Phi: ChainMap, source: TwoCopyComplex, target: TwoCopyComplex) -> CheckResult:
    """Chain-map check for a cobordism-joining map that fixes intersection points."""
    if _complex(source) != Phi.source or _complex(target) != Phi.target:
        raise ShapeError("map does not run between the given complexes")
    images = Phi.images()
    for x in source.inter:
        if x not in target.inter or images.get(x) != [x]:
            raise MovePrecondition(f"join map must fix intersection point {x}")
    res = verify_chain_map(Phi)
    return CheckResult(res.ok, res.degree, res.detail)


def homotopy_square_check(phi_minus: ChainMap, phi_plus: ChainMap, psi: ChainMap, K: ChainMap) -> CheckResult:
    """Check ``psi phi_minus + phi_plus = K d + d~ K`` degree by degree.

    ``phi_minus: C -> C1``, ``psi: C1 -> C2``, ``phi_plus: C -> C2`` and ``K``
    maps ``C -> C2`` against the direction of the differential.
    """
    c, c1, c2 = phi_minus.source, phi_minus.target, phi_plus.target
    if psi.source != c1 or psi.target != c2 or phi_plus.source != c or K.source != c or K.target != c2:
        raise ShapeError("maps do not form a square")
    if phi_minus.shift or phi_plus.shift or psi.shift or K.shift != -c.direction:
        raise ShapeError("square maps preserve degree and K moves against the differential")
    step = c.direction
    for d in sorted(set(c.degrees) | {d - step for d in c.degrees}):
        lhs = psi.component(d) @ phi_minus.component(d) + phi_plus.component(d)
        rhs = K.component(d + step) @ c.boundary(d) + c2.boundary(d - step) @ K.component(d)
        if lhs != rhs:
            r, col = min((lhs + rhs).entries)
            return CheckResult(False, d, f"entry ({c2.basis(d)[r]}, {c.basis(d)[col]}) differs")
    return CheckResult(True)


def homotopy_from_images(source: ChainComplex, target: ChainComplex, images: dict[str, list[str]]) -> ChainMap:
    return ChainMap.from_images(source, target, images, shift=-source.direction)


def complete_square(phi_minus: ChainMap, psi: ChainMap, K: ChainMap) -> ChainMap:
    """The unique ``phi_plus`` making the homotopy square hold for the given ``K``."""
    c, c2 = phi_minus.source, psi.target
    step = c.direction
    comps = {}
    for d in c.degrees:
        m = psi.component(d) @ phi_minus.component(d)
        m = m + K.component(d + step) @ c.boundary(d) + c2.boundary(d - step) @ K.component(d)
        comps[d] = m
    return ChainMap(c, c2, comps)


def single_entry_mutations(K: ChainMap):
    """Every map differing from ``K`` in exactly one matrix entry."""
    for d in K.source.degrees:
        m = K.component(d)
        for r in range(m.rows):
            for col in range(m.cols):
                comps = dict(K.components)
                comps[d] = m.flip(r, col)
                yield (d, r, col), ChainMap(K.source, K.target, comps, K.shift)


__all__ = [
    "BirthDeath",
    "CheckResult",
    "MovePrecondition",
    "birth_death_move",
    "complete_square",
    "handle_slide_move",
    "homotopy_from_images",
    "homotopy_square_check",
    "join_map_check",
    "single_entry_mutations",
    "ungraded_slide_map",
]
