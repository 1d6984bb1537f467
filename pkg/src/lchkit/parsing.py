"""Reader for the ``.lch`` text format.

A file starts with ``ambient n <integer>`` and then lists DGA data at top level::

    ambient n 2
    gen a1 deg 1 action 4
    gen b1 deg 0 action 1
    d a1 = 1 + b1 + b1 b2 b3
    aug b1 b3
    mono C0 -1/2 C1 1/3

followed by optional sections.  Two-copy data lives in ``[morse lambda]``,
``[morse filling]`` (``crit``/``d`` lines), ``[connect rho]`` and
``[connect short]`` (``row`` lines, where a target may carry a ``!long`` or
``!short`` tag that is checked against its kind).  Duality data lives in ``[block q]``,
``[block c]``, ``[block p]`` (``cell``/``d``/``pair``/``pd`` lines) and
``[map rho]``, ``[map sigma]``, ``[map eta]`` (``row`` lines).  A
``[diagram]`` section holds ``match <two-copy gen> <splitting gen>`` lines.
Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .augmentations import Augmentation, enumerate_augmentations, linearized_complex
from .dga import DgaError, DgaPresentation, Generator, Gf2Sum, MonotonicityConstants
from .gf2_core import ChainComplex, ComplexError

NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")
RATIONAL = re.compile(r"-?\d+(/\d+)?$")
INTEGER = re.compile(r"-?\d+$")

SECTIONS = {
    "morse lambda",
    "morse filling",
    "connect rho",
    "connect short",
    "block q",
    "block c",
    "block p",
    "map rho",
    "map sigma",
    "map eta",
    "diagram",
}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int = 1, source: str = "<input>"):
        self.message = message
        self.line = line
        self.col = col
        self.source = source
        where = f"{source}:{line}:{col}" if line > 0 else source
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class Tok:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class CritPoint:
    name: str
    index: int
    degree: int | None
    action: Fraction | None


@dataclass(frozen=True)
class Workspace:
    """Everything read from one input file; build mathematical objects on demand."""

    source: str
    sha256: str
    ambient_n: int
    dga: DgaPresentation
    aug: tuple[str, ...] | None = None
    mono: MonotonicityConstants | None = None
    crit: dict = field(default_factory=dict)  # role -> list[CritPoint]
    morse_d: dict = field(default_factory=dict)  # role -> name -> targets
    connect: dict = field(default_factory=dict)  # "rho" / "short" -> name -> targets
    cells: dict = field(default_factory=dict)  # block -> name -> degree
    block_d: dict = field(default_factory=dict)  # block -> name -> targets
    pairs: dict = field(default_factory=dict)  # q -> p
    pd: frozenset = frozenset()
    maps: dict = field(default_factory=dict)  # rho/sigma/eta -> name -> targets
    matches: dict = field(default_factory=dict)
    sections: tuple[str, ...] = ()

    # -- sections ---------------------------------------------------------
    def has(self, *names: str) -> bool:
        return all(n in self.sections for n in names)

    @property
    def has_two_copy(self) -> bool:
        return "morse lambda" in self.sections or "morse filling" in self.sections

    @property
    def has_duality(self) -> bool:
        return any(s.startswith("block ") or s.startswith("map ") for s in self.sections)

    # -- builders ---------------------------------------------------------
    def augmentation(self) -> Augmentation | None:
        """The declared augmentation, else the first graded one, else None."""
        if self.aug is not None:
            return Augmentation.from_ones(self.aug)
        augs = enumerate_augmentations(self.dga)
        return augs[0] if augs else None

    def morse(self, role: str):
        from .floer2copy import morse_data

        points = self.crit.get(role, [])
        return morse_data(
            role,
            {p.name: p.index for p in points},
            self.morse_d.get(role, {}),
            {p.name: p.degree for p in points if p.degree is not None},
            {p.name: p.action for p in points if p.action is not None},
        )

    def two_copy(self, eps: Augmentation | None = None):
        from .floer2copy import ConnectingData, assemble_two_copy

        eps = eps or self.augmentation()
        if eps is None:
            raise DgaError("the two-copy complex needs an augmentation")
        lin = linearized_complex(self.dga, eps)
        conn = ConnectingData(dict(self.connect.get("short", {})), dict(self.connect.get("rho", {})))
        return assemble_two_copy(lin, self.morse("lambda"), self.morse("filling"), conn)

    def block(self, name: str) -> ChainComplex:
        return ChainComplex.from_differential(self.cells.get(name, {}), self.block_d.get(name, {}), direction=-1)

    def q_block(self, eps: Augmentation | None = None) -> tuple[ChainComplex, bool | None]:
        """The Q block and whether it agrees with the linearized complex (None if unchecked)."""
        eps = eps or (self.augmentation() if self.dga.generators else None)
        lin = linearized_complex(self.dga, eps).complex if eps is not None else None
        if "block q" in self.sections:
            q = self.block("q")
            if lin is None:
                return q, None
            same = sorted(q.labels()) == sorted(lin.labels()) and all(
                q.degree_of(g) == lin.degree_of(g) and sorted(q.differential_of(g)) == sorted(lin.differential_of(g))
                for g in q.labels()
            )
            return q, same
        if lin is None:
            raise DgaError("no [block q] section and no augmentation to linearize with")
        return lin, True

    def duality(self, eps: Augmentation | None = None, require_acyclic: bool = True):
        from .duality import assemble_duality

        q, _ = self.q_block(eps)
        return assemble_duality(
            q,
            self.block("c"),
            self.block("p"),
            self.maps.get("rho", {}),
            self.maps.get("sigma", {}),
            self.maps.get("eta", {}),
            self.pairs,
            self.ambient_n,
            self.pd,
            require_acyclic,
        )


def _tokens(line: str, lineno: int) -> list[Tok]:
    return [Tok(m.group(), lineno, m.start() + 1) for m in re.finditer(r"\S+", line)]


class _Parser:
    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source
        self.ambient: int | None = None
        self.gens: list[Generator] = []
        self.gen_line: dict[str, Tok] = {}
        self.diff: dict[str, Gf2Sum] = {}
        self.diff_toks: dict[str, list[Tok]] = {}
        self.aug: tuple[str, ...] | None = None
        self.aug_toks: list[Tok] = []
        self.mono: MonotonicityConstants | None = None
        self.crit: dict[str, list[CritPoint]] = {}
        self.morse_d: dict[str, dict[str, list[str]]] = {}
        self.connect: dict[str, dict[str, list[str]]] = {}
        self.cells: dict[str, dict[str, int]] = {}
        self.block_d: dict[str, dict[str, list[str]]] = {}
        self.pairs: dict[str, str] = {}
        self.pd: set = set()
        self.maps: dict[str, dict[str, list[str]]] = {}
        self.matches: dict[str, str] = {}
        self.sections: list[str] = []
        self.section: str | None = None
        # two-copy and duality data are matched explicitly, so they keep separate namespaces
        self.names_seen: dict[str, dict[str, Tok]] = {"main": {}, "q": {}, "dual": {}}
        self._positions: dict[int, dict[str, list[Tok]]] = {}
        self._pair_toks: dict[str, list[Tok]] = {}
        self._pd_toks: list[list[Tok]] = []
        self._cell_toks: dict[str, Tok] = {}
        self._tags: list[tuple[Tok, str]] = []

    def error(self, msg: str, tok: Tok | None = None, line: int = 1) -> ParseError:
        if tok is None:
            return ParseError(msg, line, 1, self.source)
        return ParseError(msg, tok.line, tok.col, self.source)

    # -- token helpers ----------------------------------------------------
    def name(self, tok: Tok) -> str:
        if not NAME.match(tok.text):
            raise self.error(f"invalid name {tok.text!r}", tok)
        return tok.text

    def integer(self, tok: Tok) -> int:
        if not INTEGER.match(tok.text):
            raise self.error(f"expected an integer, got {tok.text!r}", tok)
        return int(tok.text)

    def rational(self, tok: Tok) -> Fraction:
        if not RATIONAL.match(tok.text):
            raise self.error(f"bad rational {tok.text!r}", tok)
        num, _, den = tok.text.partition("/")
        if den and int(den) == 0:
            raise self.error(f"bad rational {tok.text!r}: zero denominator", tok)
        return Fraction(int(num), int(den or 1))

    def expect(self, toks: list[Tok], i: int, word: str, line: int) -> None:
        if i >= len(toks):
            raise self.error(f"expected {word!r} at end of line", None, line)
        if toks[i].text != word:
            raise self.error(f"expected {word!r}, got {toks[i].text!r}", toks[i])

    def new_name(self, tok: Tok, space: str = "main") -> str:
        name = self.name(tok)
        seen = self.names_seen[space]
        if name in seen:
            raise self.error(f"duplicate name {name!r} (first declared on line {seen[name].line})", tok)
        seen[name] = tok
        return name

    def targets(self, toks: list[Tok]) -> list[Tok]:
        """Right-hand side ``x + y + ...`` of a row or Morse line; ``0`` is empty."""
        if len(toks) == 1 and toks[0].text == "0":
            return []
        out = []
        expect_term = True
        for t in toks:
            if expect_term:
                base, bang, tag = t.text.partition("!")
                if bang and self.section and self.section.startswith("connect"):
                    if tag not in ("long", "short"):
                        raise self.error(f"unknown chord tag {'!' + tag!r}", t)
                    t = Tok(base, t.line, t.col)
                    self._tags.append((t, tag))
                self.name(t)
                out.append(t)
            elif t.text != "+":
                raise self.error(f"expected '+', got {t.text!r}", t)
            expect_term = not expect_term
        if expect_term and toks:
            raise self.error("dangling '+'", toks[-1])
        return out

    def gf2sum(self, toks: list[Tok]) -> tuple[Gf2Sum, list[Tok]]:
        """``1 + b1 + b1 b2``; ``0`` is the empty sum.  Returns the sum and its letter tokens."""
        if len(toks) == 1 and toks[0].text == "0":
            return Gf2Sum(), []
        terms: list[list[Tok]] = [[]]
        for t in toks:
            if t.text == "+":
                if not terms[-1]:
                    raise self.error("empty term in sum", t)
                terms.append([])
            else:
                terms[-1].append(t)
        if not terms[-1]:
            raise self.error("dangling '+'", toks[-1])
        words, letters = [], []
        for term in terms:
            if any(t.text == "1" for t in term):
                if len(term) > 1:
                    raise self.error("the unit must stand alone in a term", term[0])
                words.append(())
                continue
            words.append(tuple(self.name(t) for t in term))
            letters += term
        return Gf2Sum(words), letters

    # -- main loop --------------------------------------------------------
    def run(self) -> Workspace:
        for lineno, raw in enumerate(self.text.splitlines(), start=1):
            line = raw.split("#", 1)[0]
            toks = _tokens(line, lineno)
            if not toks:
                continue
            if self.ambient is None:
                if toks[0].text != "ambient":
                    raise self.error("missing ambient header", toks[0])
                # "ambient n 2" is the documented form; "ambient 2" is accepted too
                if len(toks) == 3 and toks[1].text == "n":
                    toks = [toks[0], toks[2]]
                if len(toks) != 2:
                    raise self.error("usage: ambient n <integer>", toks[0])
                self.ambient = self.integer(toks[1])
                if self.ambient < 1:
                    raise self.error("ambient dimension must be positive", toks[1])
                continue
            if line.strip().startswith("["):
                self.open_section(line, toks)
                continue
            self.directive(toks, lineno)
        if self.ambient is None:
            raise self.error("missing ambient header", None, 1)
        return self.finish()

    def open_section(self, line: str, toks: list[Tok]) -> None:
        m = re.match(r"\s*\[([^\]]*)\]\s*$", line)
        if not m:
            raise self.error("malformed section header", toks[0])
        name = " ".join(m.group(1).split())
        if name not in SECTIONS:
            raise self.error(f"unknown section [{name}]", toks[0])
        if name in self.sections:
            raise self.error(f"section [{name}] appears twice", toks[0])
        self.sections.append(name)
        self.section = name

    def directive(self, toks: list[Tok], lineno: int) -> None:
        head = toks[0].text
        sec = self.section
        if sec is None:
            handler = {"gen": self.gen, "d": self.dga_d, "aug": self.aug_line, "mono": self.mono_line}.get(head)
        elif sec.startswith("morse"):
            handler = {"crit": self.crit_line, "d": self.morse_line}.get(head)
        elif sec.startswith("connect") or sec.startswith("map"):
            handler = {"row": self.row_line}.get(head)
        elif sec.startswith("block"):
            handler = {"cell": self.cell_line, "d": self.block_line, "pair": self.pair_line, "pd": self.pd_line}.get(
                head
            )
        else:
            handler = {"match": self.match_line}.get(head)
        if handler is None:
            where = f"section [{sec}]" if sec else "the top level"
            raise self.error(f"unknown directive {head!r} in {where}", toks[0])
        handler(toks, lineno)

    # -- top level --------------------------------------------------------
    def gen(self, toks: list[Tok], lineno: int) -> None:
        if len(toks) not in (6, 9):
            raise self.error("usage: gen <name> deg <int> action <rational> [mixed <i> <j>]", toks[0])
        name = self.new_name(toks[1])
        self.expect(toks, 2, "deg", lineno)
        deg = self.integer(toks[3])
        self.expect(toks, 4, "action", lineno)
        action = self.rational(toks[5])
        if action <= 0:
            raise self.error("action must be positive", toks[5])
        kind, pieces = "pure", None
        if len(toks) == 9:
            self.expect(toks, 6, "mixed", lineno)
            kind, pieces = "mixed", (self.integer(toks[7]), self.integer(toks[8]))
        self.gens.append(Generator(name, deg, action, kind, pieces))
        self.gen_line[name] = toks[1]

    def dga_d(self, toks: list[Tok], lineno: int) -> None:
        if len(toks) < 4 or toks[2].text != "=":
            raise self.error("usage: d <generator> = <sum>", toks[0])
        name = toks[1].text
        if name in self.diff:
            raise self.error(f"second differential for {name!r}", toks[1])
        self.diff[name], letters = self.gf2sum(toks[3:])
        self.diff_toks[name] = [toks[1]] + letters

    def aug_line(self, toks: list[Tok], lineno: int) -> None:
        if self.aug is not None:
            raise self.error("only one aug line is allowed", toks[0])
        self.aug = tuple(self.name(t) for t in toks[1:])
        self.aug_toks = toks[1:]

    def mono_line(self, toks: list[Tok], lineno: int) -> None:
        if len(toks) != 5:
            raise self.error("usage: mono C0 <rational> C1 <rational>", toks[0])
        self.expect(toks, 1, "C0", lineno)
        self.expect(toks, 3, "C1", lineno)
        c0, c1 = self.rational(toks[2]), self.rational(toks[4])
        if c1 <= 0:
            raise self.error("C1 must be positive", toks[4])
        self.mono = MonotonicityConstants(c0, c1)

    # -- two-copy sections ------------------------------------------------
    def role(self) -> str:
        return self.section.split()[1]

    def crit_line(self, toks: list[Tok], lineno: int) -> None:
        if len(toks) < 4 or len(toks) % 2:
            raise self.error("usage: crit <name> index <int> [deg <int>] [action <rational>]", toks[0])
        name = self.new_name(toks[1])
        self.expect(toks, 2, "index", lineno)
        index = self.integer(toks[3])
        opts: dict[str, Tok] = {}
        for key, val in zip(toks[4::2], toks[5::2]):
            if key.text not in ("deg", "action") or key.text in opts:
                raise self.error(f"unexpected {key.text!r}", key)
            opts[key.text] = val
        degree = self.integer(opts["deg"]) if "deg" in opts else None
        action = self.rational(opts["action"]) if "action" in opts else None
        if action is not None and action <= 0:
            raise self.error("action must be positive", opts["action"])
        self.crit.setdefault(self.role(), []).append(CritPoint(name, index, degree, action))

    def morse_line(self, toks: list[Tok], lineno: int) -> None:
        if len(toks) < 4 or toks[2].text != "=":
            raise self.error("usage: d <critical point> = <targets>", toks[0])
        table = self.morse_d.setdefault(self.role(), {})
        self._rows(table, toks[1], toks[3:])

    def row_line(self, toks: list[Tok], lineno: int) -> None:
        if len(toks) < 4 or toks[2].text != "=":
            raise self.error("usage: row <source> = <targets>", toks[0])
        kind, which = self.section.split()
        table = (self.connect if kind == "connect" else self.maps).setdefault(which, {})
        self._rows(table, toks[1], toks[3:])

    def _rows(self, table: dict, src: Tok, rhs: list[Tok]) -> None:
        name = self.name(src)
        if name in table:
            raise self.error(f"second row for {name!r}", src)
        targets = self.targets(rhs)
        table[name] = [t.text for t in targets]
        self._positions.setdefault(id(table), {})[name] = [src] + targets

    # -- duality sections -------------------------------------------------
    def block_name(self) -> str:
        return self.section.split()[1]

    def cell_line(self, toks: list[Tok], lineno: int) -> None:
        if len(toks) != 4:
            raise self.error("usage: cell <name> deg <int>", toks[0])
        block = self.block_name()
        name = self.new_name(toks[1], "q" if block == "q" else "dual")
        self.expect(toks, 2, "deg", lineno)
        self.cells.setdefault(block, {})[name] = self.integer(toks[3])
        self._cell_toks[name] = toks[1]

    def block_line(self, toks: list[Tok], lineno: int) -> None:
        if len(toks) < 4 or toks[2].text != "=":
            raise self.error("usage: d <cell> = <targets>", toks[0])
        self._rows(self.block_d.setdefault(self.block_name(), {}), toks[1], toks[3:])

    def pair_line(self, toks: list[Tok], lineno: int) -> None:
        if len(toks) != 3:
            raise self.error("usage: pair <q-gen> <p-gen>", toks[0])
        q, p = self.name(toks[1]), self.name(toks[2])
        if q in self.pairs:
            raise self.error(f"{q!r} is paired twice", toks[1])
        self.pairs[q] = p
        self._pair_toks[q] = toks

    def pd_line(self, toks: list[Tok], lineno: int) -> None:
        if len(toks) != 3:
            raise self.error("usage: pd <c-gen> <c-gen>", toks[0])
        pair = frozenset((self.name(toks[1]), self.name(toks[2])))
        if pair in self.pd:
            raise self.error("repeated pd pair", toks[0])
        self.pd.add(pair)
        self._pd_toks.append(toks)

    def match_line(self, toks: list[Tok], lineno: int) -> None:
        if len(toks) != 3:
            raise self.error("usage: match <two-copy gen> <splitting gen>", toks[0])
        a, b = self.name(toks[1]), self.name(toks[2])
        if a in self.matches:
            raise self.error(f"{a!r} is matched twice", toks[1])
        self.matches[a] = b

    # -- validation -------------------------------------------------------
    def finish(self) -> Workspace:
        names = {g.name for g in self.gens}
        for name, toks in self.diff_toks.items():
            if name not in names:
                raise self.error(f"differential for undeclared generator {name!r}", toks[0])
            for t in toks[1:]:
                if t.text not in names:
                    raise self.error(f"unknown generator {t.text!r}", t)
        for t in self.aug_toks:
            if t.text not in names:
                raise self.error(f"unknown generator {t.text!r} in aug line", t)
        long_names = {g + "'" for g in names}
        morse_names = {role: {p.name for p in pts} for role, pts in self.crit.items()}
        lam, fil = morse_names.get("lambda", set()), morse_names.get("filling", set())
        checks = [
            (self.morse_d.get("lambda", {}), lam, lam),
            (self.morse_d.get("filling", {}), fil, fil),
            (self.connect.get("short", {}), lam, long_names),
            (self.connect.get("rho", {}), fil, long_names | lam),
        ]
        cells = {b: set(c) for b, c in self.cells.items()}
        q_names = cells.get("q", names)
        c_names, p_names = cells.get("c", set()), cells.get("p", set())
        for g in sorted((c_names | p_names) & q_names, key=lambda g: self._cell_toks[g].line):
            raise self.error(f"{g!r} names both a Q generator and a C or P cell", self._cell_toks[g])
        for b in ("q", "c", "p"):
            own = cells.get(b, set())
            checks.append((self.block_d.get(b, {}), own, own))
        checks += [
            (self.maps.get("rho", {}), q_names, c_names),
            (self.maps.get("sigma", {}), c_names, p_names),
            (self.maps.get("eta", {}), q_names, p_names),
        ]
        for t, tag in self._tags:
            if t.text not in (long_names if tag == "long" else lam):
                raise self.error(f"{t.text!r} is not a {tag} chord", t)
        for table, sources, targets in checks:
            pos = self._positions.get(id(table), {})
            for src, row in table.items():
                toks = pos[src]
                if src not in sources:
                    raise self.error(f"{src!r} is not a generator of this section's source", toks[0])
                for t in toks[1:]:
                    if t.text not in targets:
                        raise self.error(f"{t.text!r} is not a valid target here", t)
        for q, toks in self._pair_toks.items():
            if q not in q_names:
                raise self.error(f"{q!r} is not a Q generator", toks[1])
            if toks[2].text not in p_names:
                raise self.error(f"{toks[2].text!r} is not a P generator", toks[2])
        for toks in self._pd_toks:
            for t in toks[1:]:
                if t.text not in c_names:
                    raise self.error(f"{t.text!r} is not a C generator", t)
        try:
            dga = DgaPresentation(tuple(self.gens), dict(self.diff), self.ambient)
        except DgaError as exc:
            raise self.error(str(exc), None, 1) from None
        digest = hashlib.sha256(self.text.encode()).hexdigest()
        return Workspace(
            source=self.source,
            sha256=digest,
            ambient_n=self.ambient,
            dga=dga,
            aug=self.aug,
            mono=self.mono,
            crit=self.crit,
            morse_d=self.morse_d,
            connect=self.connect,
            cells=self.cells,
            block_d=self.block_d,
            pairs=self.pairs,
            pd=frozenset(self.pd),
            maps=self.maps,
            matches=self.matches,
            sections=tuple(self.sections),
        )


def parse_text(text: str, source: str = "<input>") -> Workspace:
    return _Parser(text, source).run()


def parse(path) -> Workspace:
    path = Path(path)
    try:
        text = path.read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read file: {exc}", 0, 0, str(path)) from None
    return parse_text(text, path.name)


__all__ = ["ComplexError", "CritPoint", "ParseError", "Workspace", "parse", "parse_text"]
