"""Free noncommutative GF(2) DGAs generated by Reeb chords."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Word = tuple  # tuple[str, ...]; () is the unit


class DgaError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    action: Fraction
    kind: str = "pure"
    pieces: tuple[int, int] | None = None

    def __post_init__(self):
        if self.action <= 0:
            raise DgaError(f"action must be positive (generator {self.name!r})")
        if self.kind not in ("pure", "mixed"):
            raise DgaError(f"unknown generator kind {self.kind!r}")


class Gf2Sum:
    """A formal GF(2) sum of words; adding a word twice cancels it."""

    __slots__ = ("words",)

    def __init__(self, words: Iterable[Word] = ()):
        acc: set = set()
        for w in words:
            acc ^= {tuple(w)}
        object.__setattr__(self, "words", frozenset(acc))

    def __setattr__(self, name, value):
        raise AttributeError("Gf2Sum is immutable")

    @classmethod
    def unit(cls) -> Gf2Sum:
        return cls([()])

    @classmethod
    def word(cls, *names: str) -> Gf2Sum:
        return cls([tuple(names)])

    def __add__(self, other: Gf2Sum) -> Gf2Sum:
        out = Gf2Sum()
        object.__setattr__(out, "words", self.words ^ other.words)
        return out

    def __mul__(self, other: Gf2Sum) -> Gf2Sum:
        return Gf2Sum(u + v for u in self.words for v in other.words)

    def __iter__(self) -> Iterator[Word]:
        return iter(sorted(self.words, key=lambda w: (len(w), w)))

    def __len__(self) -> int:
        return len(self.words)

    def __bool__(self) -> bool:
        return bool(self.words)

    def __contains__(self, w) -> bool:
        return tuple(w) in self.words

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gf2Sum):
            return NotImplemented
        return self.words == other.words

    def __hash__(self) -> int:
        return hash(self.words)

    def part(self, length: int) -> Gf2Sum:
        return Gf2Sum(w for w in self.words if len(w) == length)

    def constant(self) -> int:
        return int(() in self.words)

    def __str__(self) -> str:
        if not self.words:
            return "0"
        return " + ".join(" ".join(w) if w else "1" for w in self)

    def __repr__(self) -> str:
        return f"Gf2Sum({str(self)!r})"


@dataclass(frozen=True)
class MonotonicityConstants:
    """Constants with ``|c| > C1 * action(c) + C0`` for every chord."""

    C0: Fraction
    C1: Fraction

    def __post_init__(self):
        if self.C1 <= 0:
            raise DgaError("C1 must be positive")

    def violations(self, generators: Iterable[Generator]) -> list[str]:
        return [g.name for g in generators if not g.degree > self.C1 * g.action + self.C0]

    def threshold(self, r: int) -> Fraction:
        """Action beyond which degree-r cohomology of the truncations is constant."""
        return (r + 1 - self.C0) / self.C1


@dataclass(frozen=True)
class DgaPresentation:
    generators: tuple[Generator, ...]
    differential: Mapping[str, Gf2Sum] = field(default_factory=dict)
    ambient_n: int = 2

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise DgaError(f"duplicate generator {dup!r}")
        known = set(names)
        for name, s in self.differential.items():
            if name not in known:
                raise DgaError(f"differential given for unknown generator {name!r}")
            for w in s.words:
                for b in w:
                    if b not in known:
                        raise DgaError(f"unknown generator {b!r} in the differential of {name!r}")
        object.__setattr__(self, "_by_name", {g.name: g for g in self.generators})

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def gen(self, name: str) -> Generator:
        try:
            return self._by_name[name]  # type: ignore[attr-defined]
        except KeyError:
            raise DgaError(f"unknown generator {name!r}") from None

    def d(self, name: str) -> Gf2Sum:
        self.gen(name)
        return self.differential.get(name, Gf2Sum())

    def word_degree(self, w: Word) -> int:
        return sum(self.gen(b).degree for b in w)

    def word_action(self, w: Word) -> Fraction:
        return sum((self.gen(b).action for b in w), Fraction(0))

    def with_differential(self, name: str, value: Gf2Sum) -> DgaPresentation:
        diff = dict(self.differential)
        diff[name] = value
        return DgaPresentation(self.generators, diff, self.ambient_n)

    def with_generator(self, gen: Generator) -> DgaPresentation:
        gens = tuple(gen if g.name == gen.name else g for g in self.generators)
        return DgaPresentation(gens, self.differential, self.ambient_n)


def leibniz_extend(dga: DgaPresentation, s: Gf2Sum, differential: Mapping[str, Gf2Sum] | None = None) -> Gf2Sum:
    """Extend a differential on generators to sums of words by the Leibniz rule."""
    diff = dga.differential if differential is None else differential
    out: list[Word] = []
    for w in s.words:
        for j, b in enumerate(w):
            dga.gen(b)
            for v in diff.get(b, Gf2Sum()).words:
                out.append(w[:j] + v + w[j + 1 :])
    return Gf2Sum(out)


@dataclass(frozen=True)
class Violation:
    check: str  # "square", "degree" or "action"
    generator: str
    word: str
    detail: str

    def to_dict(self) -> dict:
        return {"check": self.check, "generator": self.generator, "word": self.word, "detail": self.detail}


@dataclass
class DgaReport:
    violations: list[Violation]
    checked: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def failed_checks(self) -> set[str]:
        return {v.check for v in self.violations}


def check_dga(dga: DgaPresentation) -> DgaReport:
    violations = []
    for g in dga.generators:
        dc = dga.d(g.name)
        sq = leibniz_extend(dga, dc)
        if sq:
            violations.append(Violation("square", g.name, str(sq), "d^2 is nonzero"))
        for w in dc:
            deg = dga.word_degree(w)
            if deg != g.degree - 1:
                violations.append(
                    Violation("degree", g.name, " ".join(w) or "1", f"word degree {deg}, expected {g.degree - 1}")
                )
            act = dga.word_action(w)
            if not act < g.action:
                violations.append(
                    Violation("action", g.name, " ".join(w) or "1", f"word action {act} is not below {g.action}")
                )
    return DgaReport(violations, len(dga.generators))


class FiltrationViolation(DgaError):
    def __init__(self, generator: str):
        self.generator = generator
        super().__init__(f"differential of {generator!r} has a constant term")


def word_length_truncate(dga: DgaPresentation, differential: Mapping[str, Gf2Sum]) -> dict[str, list[str]]:
    """Length-one part of a differential that preserves word length filtration."""
    out = {}
    for name in dga.names:
        s = differential.get(name, Gf2Sum())
        if s.constant():
            raise FiltrationViolation(name)
        out[name] = sorted(w[0] for w in s.part(1))
    return out
