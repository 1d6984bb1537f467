"""Sparse GF(2) matrices and bit-vector elimination.

Vectors are Python ints used as bit sets: bit ``i`` set means basis
element ``i`` has coefficient 1.  Matrices are stored as a frozen set of
nonzero positions and cached as column bitmasks for elimination.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence


def bits(v: int) -> Iterator[int]:
    """Yield the set bit positions of ``v`` in increasing order."""
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


def popcount(v: int) -> int:
    return bin(v).count("1")


def permute_bits(v: int, perm: Sequence[int]) -> int:
    """Move bit ``i`` of ``v`` to position ``perm[i]``."""
    out = 0
    for i in bits(v):
        out |= 1 << perm[i]
    return out


class Gf2Matrix:
    """An immutable ``rows x cols`` matrix over GF(2).

    Acts on column vectors: ``M.apply(v)`` is the XOR of the columns
    selected by the bits of ``v``.
    """

    __slots__ = ("rows", "cols", "entries", "_columns")

    def __init__(self, rows: int, cols: int, entries: Iterable[tuple[int, int]] = ()):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        entry_list = list(entries)
        entry_set = frozenset(entry_list)
        if len(entry_set) != len(entry_list):
            raise ValueError("duplicate matrix positions")
        columns = [0] * cols
        for r, c in entry_set:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"position {(r, c)} outside {rows}x{cols} matrix")
            columns[c] |= 1 << r
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entry_set)
        object.__setattr__(self, "_columns", tuple(columns))

    def __setattr__(self, name, value):
        raise AttributeError("Gf2Matrix is immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, rows: int, cols: int) -> Gf2Matrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> Gf2Matrix:
        return cls(n, n, ((i, i) for i in range(n)))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[int]) -> Gf2Matrix:
        return cls(rows, len(columns), ((r, c) for c, col in enumerate(columns) for r in bits(col)))

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> Gf2Matrix:
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        return cls(rows, cols, ((r, c) for r, row in enumerate(data) for c, x in enumerate(row) if x % 2))

    # -- access -----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def column(self, j: int) -> int:
        return self._columns[j]

    @property
    def columns(self) -> tuple[int, ...]:
        return self._columns

    def row(self, i: int) -> int:
        return sum(1 << c for r, c in self.entries if r == i)

    def __getitem__(self, pos: tuple[int, int]) -> int:
        return int(pos in self.entries)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, c in self.entries:
            out[r][c] = 1
        return out

    def is_zero(self) -> bool:
        return not self.entries

    # -- algebra ----------------------------------------------------------
    def apply(self, v: int) -> int:
        out = 0
        for j in bits(v):
            out ^= self._columns[j]
        return out

    def __matmul__(self, other: Gf2Matrix) -> Gf2Matrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        return Gf2Matrix.from_columns(self.rows, [self.apply(col) for col in other._columns])

    def __add__(self, other: Gf2Matrix) -> Gf2Matrix:
        if self.shape != other.shape:
            raise ValueError(f"cannot add {self.shape} and {other.shape}")
        return Gf2Matrix(self.rows, self.cols, self.entries ^ other.entries)

    def transpose(self) -> Gf2Matrix:
        return Gf2Matrix(self.cols, self.rows, ((c, r) for r, c in self.entries))

    @property
    def T(self) -> Gf2Matrix:
        return self.transpose()

    def rank(self) -> int:
        return rank_of(self._columns)

    def flip(self, r: int, c: int) -> Gf2Matrix:
        """Return a copy with entry ``(r, c)`` toggled."""
        return Gf2Matrix(self.rows, self.cols, self.entries ^ {(r, c)})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"Gf2Matrix({self.rows}, {self.cols}, {sorted(self.entries)})"


def block_matrix(blocks: Sequence[Sequence[Gf2Matrix]]) -> Gf2Matrix:
    """Assemble a block matrix; every block row/column must have consistent sizes."""
    row_sizes = [row[0].rows for row in blocks]
    col_sizes = [m.cols for m in blocks[0]]
    entries = []
    r0 = 0
    for i, row in enumerate(blocks):
        c0 = 0
        for j, m in enumerate(row):
            if m.shape != (row_sizes[i], col_sizes[j]):
                raise ValueError(f"block ({i}, {j}) has shape {m.shape}")
            entries.extend((r0 + r, c0 + c) for r, c in m.entries)
            c0 += col_sizes[j]
        r0 += row_sizes[i]
    return Gf2Matrix(sum(row_sizes), sum(col_sizes), entries)


class Reducer:
    """Incremental echelon basis of a span, pivoting on the lowest set bit.

    Each stored vector carries a tag (an int bit set) recording which
    tagged inputs it was built from, so that ``reduce`` returns both the
    remainder and the combination of tags used.
    """

    def __init__(self) -> None:
        self._pivots: dict[int, tuple[int, int]] = {}

    def __len__(self) -> int:
        return len(self._pivots)

    def reduce(self, v: int, tag: int = 0) -> tuple[int, int]:
        # a pivot vector only touches bits >= its pivot, so this terminates
        changed = True
        while v and changed:
            changed = False
            for b in bits(v):
                hit = self._pivots.get(b)
                if hit is not None:
                    v ^= hit[0]
                    tag ^= hit[1]
                    changed = True
                    break
        return v, tag

    def add(self, v: int, tag: int = 0) -> bool:
        """Insert ``v``; return False if it was already in the span."""
        v, tag = self.reduce(v, tag)
        if not v:
            return False
        low = (v & -v).bit_length() - 1
        self._pivots[low] = (v, tag)
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0

    def basis(self) -> list[int]:
        return [self._pivots[p][0] for p in sorted(self._pivots)]


def rank_of(vectors: Iterable[int]) -> int:
    red = Reducer()
    return sum(1 for v in vectors if red.add(v))


def span_basis(vectors: Iterable[int]) -> list[int]:
    red = Reducer()
    for v in vectors:
        red.add(v)
    return red.basis()


def kernel_basis(m: Gf2Matrix) -> list[int]:
    """Basis of ``{v : m v = 0}`` as domain bit vectors."""
    red = Reducer()
    kernel = []
    for j, col in enumerate(m.columns):
        rem, tag = red.reduce(col, 1 << j)
        if rem:
            red.add(rem, tag)
        else:
            kernel.append(tag)
    return kernel


def solve(m: Gf2Matrix, y: int) -> int | None:
    """Return some ``x`` with ``m x = y``, or None when ``y`` is not in the image."""
    red = Reducer()
    for j, col in enumerate(m.columns):
        red.add(col, 1 << j)
    rem, tag = red.reduce(y)
    return None if rem else tag


def inverse(m: Gf2Matrix) -> Gf2Matrix:
    """Inverse of a square invertible matrix; raises ValueError otherwise."""
    if m.rows != m.cols:
        raise ValueError("only square matrices can be inverted")
    red = Reducer()
    for j, col in enumerate(m.columns):
        if not red.add(col, 1 << j):
            raise ValueError("matrix is singular")
    cols = []
    for i in range(m.rows):
        rem, tag = red.reduce(1 << i)
        cols.append(tag)
    return Gf2Matrix.from_columns(m.cols, cols)
