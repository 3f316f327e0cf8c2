"""Polynomials and matrices over the graded PID GF(2)[tau]."""

from __future__ import annotations

import heapq

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence


@dataclass(frozen=True, order=True)
class TauPoly:
    """Polynomial in tau over GF(2); bit ``i`` of ``bits`` is the coefficient of tau^i."""

    bits: int = 0

    def __post_init__(self) -> None:
        if self.bits < 0:
            raise ValueError("coefficient mask must be nonnegative")

    @classmethod
    def monomial(cls, k: int) -> TauPoly:
        return cls(1 << k)

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[int]) -> TauPoly:
        bits = 0
        for i, c in enumerate(coeffs):
            if c & 1:
                bits |= 1 << i
        return cls(bits)

    @property
    def coefficients(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.bits.bit_length())]

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return self.bits.bit_length() - 1

    @property
    def valuation(self) -> int:
        """Largest k with tau^k dividing self; -1 for zero."""
        if not self.bits:
            return -1
        return (self.bits & -self.bits).bit_length() - 1

    def __bool__(self) -> bool:
        return self.bits != 0

    def is_unit(self) -> bool:
        return self.bits == 1

    def is_monomial(self) -> bool:
        return self.bits != 0 and self.bits & (self.bits - 1) == 0

    def __add__(self, other: TauPoly) -> TauPoly:
        return TauPoly(self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other: TauPoly) -> TauPoly:
        return TauPoly(clmul(self.bits, other.bits))

    def __divmod__(self, other: TauPoly) -> tuple[TauPoly, TauPoly]:
        q, r = poly_divmod(self.bits, other.bits)
        return TauPoly(q), TauPoly(r)

    def __floordiv__(self, other: TauPoly) -> TauPoly:
        return divmod(self, other)[0]

    def __mod__(self, other: TauPoly) -> TauPoly:
        return divmod(self, other)[1]

    def divides(self, other: TauPoly) -> bool:
        if not self.bits:
            return not other.bits
        return not (other % self).bits

    def __str__(self) -> str:
        if not self.bits:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            if (self.bits >> i) & 1:
                terms.append("1" if i == 0 else ("t" if i == 1 else f"t^{i}"))
        return " + ".join(terms)


ZERO = TauPoly(0)
ONE = TauPoly(1)
TAU = TauPoly(2)


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomial masks."""
    if a.bit_count() > b.bit_count():
        a, b = b, a
    out = 0
    while a:
        low = a & -a
        out ^= b << (low.bit_length() - 1)
        a ^= low
    return out


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    db = b.bit_length()
    q = 0
    while a.bit_length() >= db:
        shift = a.bit_length() - db
        q |= 1 << shift
        a ^= b << shift
    return q, a


@dataclass(frozen=True)
class TauPolyMatrix:
    nrows: int
    ncols: int
    entries: tuple[tuple[TauPoly, ...], ...]

    def __post_init__(self) -> None:
        if self.nrows < 0 or self.ncols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.nrows or any(len(r) != self.ncols for r in self.entries):
            raise ValueError("entries do not match the stated shape")

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[TauPoly | int]], ncols: int | None = None) -> TauPolyMatrix:
        """Build from TauPoly values or raw coefficient masks."""
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        entries = tuple(
            tuple(e if isinstance(e, TauPoly) else TauPoly(e) for e in row) for row in rows
        )
        return cls(len(entries), ncols, entries)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> TauPolyMatrix:
        return cls(nrows, ncols, tuple((ZERO,) * ncols for _ in range(nrows)))

    def __getitem__(self, index: tuple[int, int]) -> TauPoly:
        i, j = index
        return self.entries[i][j]

    def masks(self) -> list[list[int]]:
        return [[e.bits for e in row] for row in self.entries]


class SmithForm(NamedTuple):
    factors: list[TauPoly]
    # labels carried along by the row/column permutations of each pivot
    pivot_rows: list[int]
    pivot_cols: list[int]
    zero_rows: list[int]


def smith_normal_form(m: TauPolyMatrix) -> list[TauPoly]:
    """Invariant factors (nonzero diagonal of the Smith form), each dividing the next."""
    return smith_reduce(m.masks(), m.ncols).factors


def smith_reduce(
    rows: list[list[int]],
    ncols: int,
    row_labels: Sequence[int] | None = None,
    col_labels: Sequence[int] | None = None,
) -> SmithForm:
    """Diagonalise a matrix of coefficient masks in place.

    Pivots are chosen at minimal degree.  Labels follow their row or column
    through every swap; for a homogeneous matrix (every entry a monomial whose
    exponent is a difference of row and column gradings) elementary
    operations keep each position's grading, so the labels of the pivot
    positions are the gradings of the Smith basis vectors.
    """
    a = [list(r) for r in rows]
    nrows = len(a)
    rl = list(row_labels) if row_labels is not None else list(range(nrows))
    cl = list(col_labels) if col_labels is not None else list(range(ncols))
    diag: list[int] = []
    prow: list[int] = []
    pcol: list[int] = []

    k = 0
    while k < nrows and k < ncols:
        best = None
        best_deg = None
        for i in range(k, nrows):
            ri = a[i]
            for j in range(k, ncols):
                e = ri[j]
                if e:
                    d = e.bit_length()
                    if best_deg is None or d < best_deg:
                        best, best_deg = (i, j), d
                        if d == 1:
                            break
            if best_deg == 1:
                break
        if best is None:
            break
        i, j = best
        if i != k:
            a[i], a[k] = a[k], a[i]
            rl[i], rl[k] = rl[k], rl[i]
        if j != k:
            for r in a:
                r[j], r[k] = r[k], r[j]
            cl[j], cl[k] = cl[k], cl[j]

        while True:
            p = a[k][k]
            dirty = False
            # clear column k below the pivot
            for i in range(k + 1, nrows):
                e = a[i][k]
                if e:
                    q, rem = poly_divmod(e, p)
                    ri, rk = a[i], a[k]
                    for c in range(k, ncols):
                        if rk[c]:
                            ri[c] ^= clmul(q, rk[c])
                    if rem:
                        dirty = True
            # clear row k right of the pivot
            rk = a[k]
            for j in range(k + 1, ncols):
                e = rk[j]
                if e:
                    q, rem = poly_divmod(e, p)
                    for r in a[k:]:
                        if r[k]:
                            r[j] ^= clmul(q, r[k])
                    if rem:
                        dirty = True
            if not dirty:
                # all remaining entries must also be divisible by the pivot
                bad = None
                for i in range(k + 1, nrows):
                    for j in range(k + 1, ncols):
                        e = a[i][j]
                        if e and poly_divmod(e, p)[1]:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                # add the offending row to the pivot row and retry
                for c in range(k, ncols):
                    a[k][c] ^= a[bad][c]
                dirty = True
            # move a smaller remainder into the pivot position
            best = None
            best_deg = None
            for i in range(k, nrows):
                e = a[i][k]
                if e and (best_deg is None or e.bit_length() < best_deg):
                    best, best_deg = (i, k), e.bit_length()
            for j in range(k, ncols):
                e = a[k][j]
                if e and (best_deg is None or e.bit_length() < best_deg):
                    best, best_deg = (k, j), e.bit_length()
            i, j = best
            if i != k:
                a[i], a[k] = a[k], a[i]
                rl[i], rl[k] = rl[k], rl[i]
            if j != k:
                for r in a:
                    r[j], r[k] = r[k], r[j]
                cl[j], cl[k] = cl[k], cl[j]
        diag.append(a[k][k])
        prow.append(rl[k])
        pcol.append(cl[k])
        k += 1

    return SmithForm([TauPoly(d) for d in diag], prow, pcol, rl[k:])


def matmul(x: TauPolyMatrix, y: TauPolyMatrix) -> TauPolyMatrix:
    if x.ncols != y.nrows:
        raise ValueError("dimension mismatch in product")
    out = []
    for i in range(x.nrows):
        row = []
        for k in range(y.ncols):
            acc = 0
            for j in range(x.ncols):
                a = x.entries[i][j].bits
                if a:
                    b = y.entries[j][k].bits
                    if b:
                        acc ^= clmul(a, b)
            row.append(TauPoly(acc))
        out.append(tuple(row))
    return TauPolyMatrix(x.nrows, y.ncols, tuple(out))


@dataclass(frozen=True)
class GradedMatrix:
    """Homogeneous matrix over GF(2)[tau] stored as bits plus gradings.

    Entry (i, j) is tau^(col_weights[j] - row_weights[i]) when bit j of
    ``rows[i]`` is set and zero otherwise.  Columns must be sorted by
    ascending weight.
    """

    rows: tuple[int, ...]
    row_weights: tuple[int, ...]
    col_weights: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != len(self.row_weights):
            raise ValueError("one weight per row required")
        if any(b < a for a, b in zip(self.col_weights, self.col_weights[1:])):
            raise ValueError("columns must be sorted by weight")
        for i, r in enumerate(self.rows):
            if r >> len(self.col_weights):
                raise ValueError("row has bits outside the column range")
            while r:
                low = r & -r
                if self.col_weights[low.bit_length() - 1] < self.row_weights[i]:
                    raise ValueError("negative tau exponent in a homogeneous matrix")
                r ^= low

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.col_weights)

    def to_taupoly(self) -> TauPolyMatrix:
        entries = []
        for r, wr in zip(self.rows, self.row_weights):
            entries.append(tuple(
                TauPoly.monomial(wc - wr) if (r >> j) & 1 else ZERO
                for j, wc in enumerate(self.col_weights)
            ))
        return TauPolyMatrix(self.nrows, self.ncols, tuple(entries))


def _bits(x: int) -> Iterable[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def graded_smith(m: GradedMatrix) -> SmithForm:
    """Smith form of a homogeneous matrix; every invariant factor is a power of tau.

    Repeatedly pivots on a nonzero entry of least tau-degree.  Because the
    pivot has minimal degree it divides every entry of its row and column;
    clearing its column touches only other rows, and clearing its row
    only touches the pivot row, which is then retired.
    """
    cw, rw = m.col_weights, m.row_weights
    live = {i: r for i, r in enumerate(m.rows) if r}
    zero_rows = [i for i, r in enumerate(m.rows) if not r]
    # holders[c] has bit i set when live row i has an entry in column c
    holders = [0] * m.ncols
    for i, r in live.items():
        for c in _bits(r):
            holders[c] |= 1 << i
    factors: list[TauPoly] = []
    prow: list[int] = []
    pcol: list[int] = []

    def key(i: int, r: int) -> tuple[int, int]:
        # the least-degree entry of a row is at its lowest set bit
        return (cw[(r & -r).bit_length() - 1] - rw[i], i)

    heap = [(key(i, r), r) for i, r in live.items()]
    heapq.heapify(heap)
    while heap:
        (_, p), pr = heapq.heappop(heap)
        if live.get(p) != pr:
            continue
        del live[p]
        pcols = list(_bits(pr))
        for c in pcols:
            holders[c] ^= 1 << p
        c = pcols[0]
        factors.append(TauPoly.monomial(cw[c] - rw[p]))
        prow.append(rw[p])
        pcol.append(cw[c])
        for i in _bits(holders[c]):
            for cc in pcols:
                holders[cc] ^= 1 << i
            r = live[i] ^ pr
            if r:
                live[i] = r
                heapq.heappush(heap, (key(i, r), r))
            else:
                del live[i]
                zero_rows.append(i)
    order = sorted(range(len(factors)), key=lambda k: factors[k].degree)
    return SmithForm(
        [factors[k] for k in order],
        [prow[k] for k in order],
        [pcol[k] for k in order],
        [rw[i] for i in sorted(zero_rows)],
    )
