"""The table of stable stems through dimension 90 as validated data.

Each row splits pi_k into three summands: v1-torsion at the prime 2
(possibly with several alternatives where the group is not fully
determined), v1-torsion at odd primes, and the v1-periodic part.
"""

from __future__ import annotations

import hashlib
import logging
import statistics
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from itertools import zip_longest
from typing import Iterable, Sequence

from . import imj
from .errors import ParseError, StemRangeError, StemTableError
from .imj import GroupDescriptor, parse_descriptor, prime_power_base

log = logging.getLogger(__name__)

MIN_STEM, MAX_STEM = 1, 90
FIRST_NEW = 62
DATA_FILE = "stems.tbl"

HEADER = (
    "# stemkit stable stems table, dimensions 1-90\n"
    "# columns: k|v1-torsion at 2|v1-torsion at odd primes|v1-periodic\n"
    '# n stands for Z/n, n^j for j copies of Z/n, "." for direct sum, "/" separates alternatives\n'
    "# rows from 62 on are the newly computed range\n"
)

# Orders of the 2-primary v1-torsion each alternative may take.
ALTERNATIVE_ORDERS: dict[int, frozenset[int]] = {
    70: frozenset({512, 256}),
    71: frozenset({2048, 1024}),
    82: frozenset({256, 128}),
    83: frozenset({64, 32}),
    84: frozenset({64, 32}),
    85: frozenset({1024, 512}),
    86: frozenset({2048, 1024}),
    87: frozenset({256, 128}),
}


@dataclass(frozen=True)
class StemEntry:
    k: int
    two_torsion: tuple[GroupDescriptor, ...]
    odd_torsion: GroupDescriptor
    v1_periodic: GroupDescriptor

    @property
    def is_new(self) -> bool:
        return self.k >= FIRST_NEW

    @property
    def is_uncertain(self) -> bool:
        return len(self.two_torsion) > 1

    def alternatives(self) -> list[GroupDescriptor]:
        """The whole group, once per 2-primary alternative."""
        return [t + self.odd_torsion + self.v1_periodic for t in self.two_torsion]

    def two_primary_order(self, alternative: int = 0) -> int:
        return self.two_torsion[alternative].order * self.v1_periodic.part(2).order

    def line(self) -> str:
        two = "/".join(str(t) for t in self.two_torsion)
        return f"{self.k}|{two}|{self.odd_torsion}|{self.v1_periodic}"


def _column(text: str, lineno: int, name: str) -> GroupDescriptor:
    try:
        return parse_descriptor(text)
    except (ParseError, ValueError) as exc:
        raise StemTableError(f"{name} column: {exc}", lineno) from None


def parse_stem_table(document: str) -> list[StemEntry]:
    entries: dict[int, StemEntry] = {}
    for lineno, raw in enumerate(document.splitlines(), start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        cols = text.split("|")
        if len(cols) != 4:
            raise StemTableError(f"expected 4 '|'-separated columns, found {len(cols)}", lineno)
        k_text, two_text, odd_text, per_text = (c.strip() for c in cols)
        if not k_text.isdigit():
            raise StemTableError(f"stem {k_text!r} is not a positive integer", lineno)
        k = int(k_text)
        if not MIN_STEM <= k <= MAX_STEM:
            raise StemTableError(f"stem {k} outside {MIN_STEM}..{MAX_STEM}", lineno)
        if k in entries:
            raise StemTableError(f"duplicate row for stem {k}", lineno)
        two = tuple(_column(alt, lineno, "2-primary") for alt in two_text.split("/"))
        for alt in two:
            if alt.primes() - {2}:
                raise StemTableError(f"2-primary column has odd factors: {alt}", lineno)
        if len(set(two)) != len(two):
            raise StemTableError("repeated alternative in 2-primary column", lineno)
        if "/" in odd_text or "/" in per_text:
            raise StemTableError("only the 2-primary column may list alternatives", lineno)
        odd = _column(odd_text, lineno, "odd-primary")
        if 2 in odd.primes():
            raise StemTableError(f"odd-primary column has 2-power factors: {odd}", lineno)
        per = _column(per_text, lineno, "v1-periodic")
        entries[k] = StemEntry(k, two, odd, per)
    missing = [k for k in range(MIN_STEM, MAX_STEM + 1) if k not in entries]
    if missing:
        raise StemTableError(f"missing rows for stems {', '.join(map(str, missing))}")
    return [entries[k] for k in sorted(entries)]


def emit_table(entries: Iterable[StemEntry]) -> str:
    return HEADER + "".join(e.line() + "\n" for e in entries)


def data_bytes() -> bytes:
    return resources.files("stemkit").joinpath("data", DATA_FILE).read_bytes()


def data_checksum() -> str:
    return hashlib.sha256(data_bytes()).hexdigest()


@lru_cache(maxsize=1)
def load_table() -> tuple[StemEntry, ...]:
    return tuple(parse_stem_table(data_bytes().decode("utf-8")))


@dataclass(frozen=True)
class AssembledGroup:
    """Invariant factors n_1 | n_2 | ... of a finite abelian group."""

    invariant_factors: tuple[int, ...]

    @property
    def order(self) -> int:
        out = 1
        for n in self.invariant_factors:
            out *= n
        return out

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z/{n}" for n in self.invariant_factors)


def invariant_factors(group: GroupDescriptor) -> AssembledGroup:
    by_prime: dict[int, list[int]] = {}
    for n in group.factors:
        by_prime.setdefault(prime_power_base(n), []).append(n)  # type: ignore[arg-type]
    columns = [sorted(v, reverse=True) for _, v in sorted(by_prime.items())]
    out = []
    for row in zip_longest(*columns, fillvalue=1):
        n = 1
        for q in row:
            n *= q
        out.append(n)
    return AssembledGroup(tuple(reversed(out)))


def assemble_group(entry: StemEntry) -> list[AssembledGroup]:
    return [invariant_factors(g) for g in entry.alternatives()]


@dataclass(frozen=True)
class StemQuery:
    entry: StemEntry
    groups: tuple[AssembledGroup, ...]

    @property
    def is_uncertain(self) -> bool:
        return self.entry.is_uncertain


def query_stem(k: int, entries: Sequence[StemEntry] | None = None) -> StemQuery:
    if not MIN_STEM <= k <= MAX_STEM:
        raise StemRangeError(f"stem {k} is outside the tabulated range {MIN_STEM}..{MAX_STEM}")
    table = load_table() if entries is None else entries
    entry = next(e for e in table if e.k == k)
    return StemQuery(entry, tuple(assemble_group(entry)))


@dataclass(frozen=True)
class Violation:
    k: int
    message: str

    def __str__(self) -> str:
        return f"k={self.k}: {self.message}"


def check_consistency(entries: Sequence[StemEntry]) -> list[Violation]:
    out: list[Violation] = []
    for e in entries:
        if e.k <= 0:
            out.append(Violation(e.k, "stem must be positive for the group to be finite"))
            continue
        expected = imj.v1_periodic_all(e.k)
        if expected != e.v1_periodic:
            for p in sorted(expected.primes() | e.v1_periodic.primes()):
                want, got = expected.part(p), e.v1_periodic.part(p)
                if want != got:
                    out.append(Violation(
                        e.k, f"v1-periodic {p}-part is {got.canonical()}, expected {want.canonical()}"
                    ))
        if e.is_uncertain and e.k < FIRST_NEW:
            out.append(Violation(e.k, "uncertain row below the newly computed range"))
        orders = ALTERNATIVE_ORDERS.get(e.k)
        if orders is not None:
            got = [t.order for t in e.two_torsion]
            bad = sorted(set(got) - orders)
            if bad:
                out.append(Violation(
                    e.k, f"alternative orders {bad} not among {sorted(orders, reverse=True)}"
                ))
            absent = sorted(orders - set(got), reverse=True)
            if absent:
                out.append(Violation(e.k, f"no alternative of order {absent}"))
    return out


@dataclass(frozen=True)
class GrowthFit:
    points: tuple[tuple[int, int], ...]
    slope: float
    intercept: float
    r_squared: float
    first_alternative_rows: tuple[int, ...]

    def to_csv(self) -> str:
        rows = ", ".join(map(str, self.first_alternative_rows)) or "none"
        lines = [
            "# f(k) = product of 2-primary orders of pi_1 .. pi_k",
            f"# rows with alternatives use the first one: {rows}",
            f"# least squares log2f = slope*k^2 + intercept: slope={self.slope:.6g} "
            f"intercept={self.intercept:.6g} r2={self.r_squared:.6f}",
            "k,log2f",
        ]
        lines += [f"{k},{v}" for k, v in self.points]
        return "\n".join(lines) + "\n"


def cumulative_growth(entries: Sequence[StemEntry]) -> GrowthFit:
    points = []
    total = 0
    for e in sorted(entries, key=lambda e: e.k):
        total += e.two_primary_order(0).bit_length() - 1
        points.append((e.k, total))
    chosen = tuple(e.k for e in entries if e.is_uncertain)
    if chosen:
        log.info("growth uses the first alternative for stems %s", chosen)
    xs = [k * k for k, _ in points]
    ys = [v for _, v in points]
    slope, intercept = statistics.linear_regression(xs, ys)
    r = statistics.correlation(xs, ys)
    return GrowthFit(tuple(points), slope, intercept, r * r, chosen)
