"""The mod 2 Steenrod algebra in the admissible basis, and its dual.

Elements of ``A`` are sets of admissible exponent tuples (``()`` is the
unit, ``(3, 1)`` is Sq3 Sq1); the set encodes GF(2) coefficients.  Dual
monomials are exponent tuples ``(e1, e2, ...)`` for z1^e1 z2^e2 ... with
trailing zeros stripped, graded by ``deg z_i = 2^i - 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import ParseError
from .f2 import BitMatrix, pack_bits, solve_in_span

Word = tuple[int, ...]
Monomial = tuple[int, ...]


def binom2(n: int, k: int) -> int:
    """Binomial coefficient mod 2 (Lucas); zero outside 0 <= k <= n."""
    if n < 0 or k < 0 or k > n:
        return 0
    return 1 if (n & k) == k else 0


def is_admissible(word: Word) -> bool:
    return all(word[i] >= 2 * word[i + 1] for i in range(len(word) - 1))


def word_degree(word: Word) -> int:
    return sum(word)


def adem_terms(a: int, b: int) -> list[Word]:
    """Right-hand side of the Adem relation for Sq^a Sq^b with a < 2b."""
    if not 0 < a < 2 * b:
        raise ValueError(f"Sq{a} Sq{b} is already admissible")
    out = []
    for c in range(a // 2 + 1):
        if binom2(b - c - 1, a - 2 * c):
            out.append((a + b - c, c) if c else (a + b,))
    return out


@dataclass(frozen=True)
class SteenrodElement:
    terms: frozenset[Word]
    degree: int = field(default=0)

    def __post_init__(self) -> None:
        for w in self.terms:
            if sum(w) != self.degree:
                raise ValueError(f"inhomogeneous element: {w} in degree {self.degree}")
            if not is_admissible(w) or any(i <= 0 for i in w):
                raise ValueError(f"{w} is not an admissible monomial")

    @classmethod
    def of(cls, terms: Iterable[Word], degree: int | None = None) -> SteenrodElement:
        acc: set[Word] = set()
        for t in terms:
            acc ^= {tuple(t)}
        if degree is None:
            degree = sum(next(iter(acc))) if acc else 0
        return cls(frozenset(acc), degree)

    @classmethod
    def sq(cls, *exponents: int) -> SteenrodElement:
        """Normal form of the word Sq^{i1} ... Sq^{in}."""
        return adem_reduce(tuple(exponents))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: SteenrodElement) -> SteenrodElement:
        if self.terms and other.terms and self.degree != other.degree:
            raise ValueError("cannot add elements of different degrees")
        degree = self.degree if self.terms else other.degree
        return SteenrodElement(self.terms ^ other.terms, degree)

    def __mul__(self, other: SteenrodElement) -> SteenrodElement:
        return multiply(self, other)

    def sorted_terms(self) -> list[Word]:
        return sorted(self.terms, reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(format_word(w) for w in self.sorted_terms())


ONE = SteenrodElement(frozenset({()}), 0)


def format_word(word: Word) -> str:
    return " ".join(f"Sq{i}" for i in word) if word else "1"


_SQ = re.compile(r"Sq(\d+)$")


def parse_word(text: str) -> Word:
    """Parse ``"Sq3 Sq2"``; ``Sq0`` and ``1`` tokens are the unit."""
    out = []
    for token in text.split():
        if token == "1":
            continue
        m = _SQ.match(token)
        if not m:
            raise ParseError(f"bad Steenrod token {token!r}; expected Sq<n>")
        n = int(m.group(1))
        if n:
            out.append(n)
    return tuple(out)


# -- Adem reduction ---------------------------------------------------------


def _inadmissible_positions(word: Word) -> list[int]:
    return [i for i in range(len(word) - 1) if word[i] < 2 * word[i + 1]]


@lru_cache(maxsize=None)
def _reduce_word(word: Word, rightmost: bool) -> frozenset[Word]:
    bad = _inadmissible_positions(word)
    if not bad:
        return frozenset({word})
    i = bad[-1] if rightmost else bad[0]
    acc: set[Word] = set()
    for rhs in adem_terms(word[i], word[i + 1]):
        acc ^= _reduce_word(word[:i] + rhs + word[i + 2 :], rightmost)
    return frozenset(acc)


def adem_reduce(word: Word | Iterable[int], strategy: str = "leftmost") -> SteenrodElement:
    """Rewrite a word in the Sq^i into the admissible basis.

    ``strategy`` picks which inadmissible adjacent pair is rewritten first
    ("leftmost" or "rightmost"); the normal form does not depend on it.
    """
    word = tuple(i for i in word if i)
    if any(i < 0 for i in word):
        raise ValueError("Steenrod squares have nonnegative exponents")
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    return SteenrodElement(_reduce_word(word, strategy == "rightmost"), sum(word))


@lru_cache(maxsize=None)
def _sq_times(a: int, mono: Monomial) -> frozenset[Word]:
    """Admissible expansion of Sq^a times an admissible monomial."""
    if a == 0:
        return frozenset({mono})
    if not mono or a >= 2 * mono[0]:
        return frozenset({(a,) + mono})
    b, rest = mono[0], mono[1:]
    acc: set[Word] = set()
    for c in range(a // 2 + 1):
        if binom2(b - c - 1, a - 2 * c):
            for m in _sq_times(c, rest):
                acc ^= _sq_times(a + b - c, m)
    return frozenset(acc)


@lru_cache(maxsize=None)
def monomial_product(x: Monomial, y: Monomial) -> frozenset[Word]:
    """Product of two admissible monomials in the admissible basis."""
    if not x:
        return frozenset({y})
    acc: set[Word] = set()
    for m in monomial_product(x[1:], y):
        acc ^= _sq_times(x[0], m)
    return frozenset(acc)


def multiply(x: SteenrodElement, y: SteenrodElement) -> SteenrodElement:
    acc: set[Word] = set()
    for a in x.terms:
        for b in y.terms:
            acc ^= monomial_product(a, b)
    return SteenrodElement(frozenset(acc), x.degree + y.degree)


# -- bases ------------------------------------------------------------------


def _admissible(degree: int, max_first: int) -> Iterator[Word]:
    if degree == 0:
        yield ()
        return
    for first in range(min(degree, max_first), 0, -1):
        for tail in _admissible(degree - first, first // 2):
            yield (first,) + tail


@lru_cache(maxsize=None)
def _admissible_basis(degree: int) -> tuple[Word, ...]:
    return tuple(sorted(_admissible(degree, degree), reverse=True))


def admissible_basis(degree: int) -> list[Word]:
    """Admissible monomials of a degree, in descending lexicographic order."""
    if degree < 0:
        return []
    return list(_admissible_basis(degree))


def milnor_degree(mono: Monomial) -> int:
    return sum(e * ((1 << (i + 1)) - 1) for i, e in enumerate(mono))


def _strip(exps: Iterable[int]) -> Monomial:
    exps = list(exps)
    while exps and exps[-1] == 0:
        exps.pop()
    return tuple(exps)


def _milnor(degree: int, top: int) -> Iterator[list[int]]:
    # exponent lists for generators z_1 .. z_top
    if top == 0:
        if degree == 0:
            yield []
        return
    w = (1 << top) - 1
    for e in range(degree // w, -1, -1):
        for head in _milnor(degree - e * w, top - 1):
            yield head + [e]


@lru_cache(maxsize=None)
def _milnor_basis(degree: int) -> tuple[Monomial, ...]:
    top = max(1, (degree + 1).bit_length())
    return tuple(sorted((_strip(m) for m in _milnor(degree, top)), reverse=True))


def milnor_basis(degree: int) -> list[Monomial]:
    """Monomials of the dual algebra in a degree, descending lexicographic."""
    if degree < 0:
        return []
    return list(_milnor_basis(degree))


# -- the dual algebra ---------------------------------------------------------


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    n = max(len(a), len(b))
    return _strip((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def generator(i: int, power: int = 1) -> Monomial:
    """The monomial z_i^power (z_0 = 1)."""
    if i == 0 or power == 0:
        return ()
    return (0,) * (i - 1) + (power,)


Tensor = frozenset[tuple[Monomial, Monomial]]


def tensor_mul(x: Iterable[tuple[Monomial, Monomial]], y: Iterable[tuple[Monomial, Monomial]]) -> Tensor:
    y = list(y)
    acc: set[tuple[Monomial, Monomial]] = set()
    for a, b in x:
        for c, d in y:
            acc ^= {(mono_mul(a, c), mono_mul(b, d))}
    return frozenset(acc)


@lru_cache(maxsize=None)
def generator_coproduct(i: int) -> Tensor:
    """z_i -> sum_k z_{i-k}^{2^k} (x) z_k."""
    return frozenset((generator(i - k, 1 << k), generator(k)) for k in range(i + 1))


@lru_cache(maxsize=None)
def _coproduct(mono: Monomial) -> Tensor:
    if not mono:
        return frozenset({((), ())})
    i = next(j for j, e in enumerate(mono) if e)
    rest = list(mono)
    rest[i] -= 1
    return tensor_mul(generator_coproduct(i + 1), _coproduct(_strip(rest)))


@dataclass(frozen=True)
class DualTensor:
    terms: Tensor
    degree: int

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = sorted(self.terms, key=lambda t: (milnor_degree(t[1]), t[1], t[0]))
        return " + ".join(f"{format_monomial(a)} (x) {format_monomial(b)}" for a, b in parts)


def coproduct(mono: Monomial) -> DualTensor:
    """Coproduct of a dual monomial, extended multiplicatively."""
    mono = _strip(mono)
    return DualTensor(_coproduct(mono), milnor_degree(mono))


def format_monomial(mono: Monomial) -> str:
    parts = []
    for i, e in enumerate(mono, start=1):
        if e == 1:
            parts.append(f"z{i}")
        elif e:
            parts.append(f"z{i}^{e}")
    return "*".join(parts) if parts else "1"


_Z = re.compile(r"z(\d+)(?:\^(\d+))?$")


def parse_monomial(text: str) -> Monomial:
    """Parse ``"z1^2*z2"``; ``1`` is the unit."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    exps: dict[int, int] = {}
    for factor in text.split("*"):
        factor = factor.strip()
        m = _Z.match(factor)
        if not m:
            raise ParseError(f"bad dual monomial factor {factor!r}; expected z<i>^<e>")
        i = int(m.group(1))
        e = int(m.group(2) or 1)
        if i == 0:
            continue
        exps[i] = exps.get(i, 0) + e
    top = max(exps, default=0)
    return _strip(exps.get(i, 0) for i in range(1, top + 1))


# -- duality ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _pair(word: Word, mono: Monomial) -> int:
    if sum(word) != milnor_degree(mono):
        return 0
    if not word:
        return 1 if not mono else 0
    a = word[0]
    if len(word) == 1:
        return 1 if mono == generator(1, a) else 0
    first = generator(1, a)
    total = 0
    for left, right in _coproduct(mono):
        if left == first:
            total ^= _pair(word[1:], right)
    return total


def pairing(word: Word, mono: Monomial) -> int:
    """Hopf pairing <Sq^{i1}...Sq^{in}, m>, built from the coproduct alone."""
    return _pair(tuple(i for i in word if i), _strip(mono))


def element_pairing(x: SteenrodElement, mono: Monomial) -> int:
    total = 0
    for w in x.terms:
        total ^= _pair(w, mono)
    return total


@lru_cache(maxsize=None)
def pairing_matrix(degree: int) -> BitMatrix:
    """Rows: admissible basis; columns: Milnor basis; entries: the pairing."""
    adm = _admissible_basis(degree)
    mil = _milnor_basis(degree)
    return BitMatrix.from_lists([[_pair(w, m) for m in mil] for w in adm], len(mil))


def dualized_product(x: SteenrodElement, y: SteenrodElement, probe_degree_bound: int) -> SteenrodElement:
    """Product xy recovered only from the coproduct of the dual and the pairing."""
    d = x.degree + y.degree
    if d > probe_degree_bound:
        raise ValueError(f"degree {d} exceeds the probe bound {probe_degree_bound}")
    mil = _milnor_basis(d)
    values = []
    for m in mil:
        v = 0
        for left, right in _coproduct(m):
            if milnor_degree(left) == x.degree and element_pairing(x, left):
                v ^= element_pairing(y, right)
        values.append(v)
    combo = solve_in_span(pairing_matrix(d), pack_bits(values))
    if combo is None:
        raise ArithmeticError(f"pairing in degree {d} is degenerate")
    adm = _admissible_basis(d)
    return SteenrodElement(frozenset(adm[i] for i in range(len(adm)) if (combo >> i) & 1), d)
