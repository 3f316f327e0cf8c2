"""Dense GF(2) matrices with bit-packed rows.

Each row is a Python ``int`` whose bit ``j`` holds column ``j``.  Row
operations are then single XORs on arbitrary-width integers, which is
the operation that dominates every resolution and cobar computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence


@dataclass(frozen=True)
class BitMatrix:
    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.nrows < 0 or self.ncols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.rows) != self.nrows:
            raise ValueError(f"expected {self.nrows} rows, got {len(self.rows)}")
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError("row has bits outside the column range")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], ncols: int | None = None) -> BitMatrix:
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        rows = []
        for line in entries:
            if len(line) != ncols:
                raise ValueError("ragged matrix")
            rows.append(pack_bits(line))
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> BitMatrix:
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        return (self.rows[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [unpack_bits(r, self.ncols) for r in self.rows]

    def transpose(self) -> BitMatrix:
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BitMatrix(self.ncols, self.nrows, tuple(cols))

    def apply(self, vector: int) -> int:
        """Return M v for a column vector ``v`` packed as an int."""
        out = 0
        for i, r in enumerate(self.rows):
            if (r & vector).bit_count() & 1:
                out |= 1 << i
        return out

    def left_apply(self, vector: int) -> int:
        """Return x M for a row vector ``x`` packed as an int."""
        out = 0
        i = 0
        while vector:
            if vector & 1:
                out ^= self.rows[i]
            vector >>= 1
            i += 1
        return out

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch in product")
        return BitMatrix(self.nrows, other.ncols, tuple(other.left_apply(r) for r in self.rows))


def pack_bits(bits: Iterable[int]) -> int:
    out = 0
    for j, b in enumerate(bits):
        if b & 1:
            out |= 1 << j
    return out


def unpack_bits(value: int, width: int) -> list[int]:
    return [(value >> j) & 1 for j in range(width)]


def _low(x: int) -> int:
    return (x & -x).bit_length() - 1


class RREF(NamedTuple):
    rank: int
    reduced: BitMatrix
    pivots: list[int]


def rref(m: BitMatrix) -> RREF:
    """Reduced row-echelon form; zero rows are moved to the bottom."""
    pivot_rows: dict[int, int] = {}
    for r in m.rows:
        while r:
            p = _low(r)
            if p in pivot_rows:
                r ^= pivot_rows[p]
            else:
                pivot_rows[p] = r
                break
    pivots = sorted(pivot_rows)
    # back-substitution: clear each pivot column from every other pivot row
    for p in pivots:
        bit = 1 << p
        row = pivot_rows[p]
        for q in pivots:
            if q != p and pivot_rows[q] & bit:
                pivot_rows[q] ^= row
    reduced = tuple(pivot_rows[p] for p in pivots) + (0,) * (m.nrows - len(pivots))
    return RREF(len(pivots), BitMatrix(m.nrows, m.ncols, reduced), pivots)


def rank(m: BitMatrix) -> int:
    return len(Echelon.from_rows(m.rows).pivots)


def kernel_basis(m: BitMatrix) -> BitMatrix:
    """Basis of ``{v : M v = 0}``, one vector per row of the result."""
    red = rref(m)
    pivots = red.pivots
    pivot_set = set(pivots)
    free = [j for j in range(m.ncols) if j not in pivot_set]
    basis = []
    for f in free:
        v = 1 << f
        for row, p in zip(red.reduced.rows, pivots):
            if (row >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return BitMatrix(len(basis), m.ncols, tuple(basis))


def solve_in_span(m: BitMatrix, v: int | Sequence[int]) -> int | None:
    """Find ``x`` with ``x M = v``, or ``None`` when ``v`` is not in the row span.

    ``v`` may be a packed int or a 0/1 sequence of length ``m.ncols``; the
    result is packed, with bit ``i`` selecting row ``i``.
    """
    if not isinstance(v, int):
        if len(v) != m.ncols:
            raise ValueError(f"vector length {len(v)} does not match {m.ncols} columns")
        v = pack_bits(v)
    elif v >> m.ncols:
        raise ValueError("vector has bits outside the column range")
    ech = Echelon.from_rows(m.rows, track=True)
    residue, combo = ech.reduce(v)
    if residue:
        return None
    return combo


class Echelon:
    """Incremental echelon basis keyed by lowest set bit.

    When ``track`` is set every stored row carries the combination of
    input rows that produced it, so rows that reduce to zero yield the
    left kernel.
    """

    __slots__ = ("pivots", "history", "track", "relations", "count")

    def __init__(self, track: bool = False):
        self.pivots: dict[int, int] = {}
        self.history: dict[int, int] = {}
        self.track = track
        self.relations: list[int] = []
        self.count = 0

    @classmethod
    def from_rows(cls, rows: Iterable[int], track: bool = False) -> Echelon:
        ech = cls(track)
        for r in rows:
            ech.add(r)
        return ech

    def reduce(self, value: int, combo: int = 0) -> tuple[int, int]:
        pivots = self.pivots
        history = self.history
        while value:
            p = _low(value)
            row = pivots.get(p)
            if row is None:
                break
            value ^= row
            if self.track:
                combo ^= history[p]
        return value, combo

    def add(self, value: int) -> bool:
        """Insert the next input row; return True if it enlarged the span."""
        combo = (1 << self.count) if self.track else 0
        self.count += 1
        value, combo = self.reduce(value, combo)
        if value:
            p = _low(value)
            self.pivots[p] = value
            if self.track:
                self.history[p] = combo
            return True
        if self.track:
            self.relations.append(combo)
        return False

    def insert_free(self, value: int) -> int:
        """Reduce ``value`` and store it untracked; return the residue (0 if dependent)."""
        value, _ = self.reduce(value)
        if value:
            p = _low(value)
            self.pivots[p] = value
            if self.track:
                self.history[p] = 0
        return value

    @property
    def rank(self) -> int:
        return len(self.pivots)
