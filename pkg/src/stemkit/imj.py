"""The v1-periodic part of the stable stems, in closed form at every prime."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from math import isqrt
from typing import Iterable

from .errors import ParseError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, isqrt(n) + 1))


def prime_power_base(n: int) -> int | None:
    """The prime p with n = p^e, e >= 1, or None."""
    if n < 2:
        return None
    for p in range(2, isqrt(n) + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return p if n == 1 else None
    return n


@dataclass(frozen=True)
class GroupDescriptor:
    """A finite abelian group written as a multiset of cyclic prime-power orders.

    Equality compares the multiset only; ``notation`` remembers how the
    group was written so a parsed descriptor prints back unchanged.
    """

    factors: tuple[int, ...] = ()
    notation: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for n in self.factors:
            if prime_power_base(n) is None:
                raise ValueError(f"{n} is not a prime power")
        object.__setattr__(self, "factors", tuple(sorted(self.factors, key=_display_key)))

    @classmethod
    def of(cls, factors: Iterable[int]) -> GroupDescriptor:
        return cls(tuple(factors))

    @classmethod
    def parse(cls, text: str) -> GroupDescriptor:
        return parse_descriptor(text)

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    @property
    def order(self) -> int:
        out = 1
        for n in self.factors:
            out *= n
        return out

    def primes(self) -> set[int]:
        return {prime_power_base(n) for n in self.factors}  # type: ignore[misc]

    def part(self, p: int) -> GroupDescriptor:
        return GroupDescriptor(tuple(n for n in self.factors if prime_power_base(n) == p))

    def __add__(self, other: GroupDescriptor) -> GroupDescriptor:
        return GroupDescriptor(self.factors + other.factors)

    def canonical(self) -> str:
        if not self.factors:
            return "0"
        counts = Counter(self.factors)
        parts = []
        for n in sorted(counts, key=_display_key):
            parts.append(str(n) if counts[n] == 1 else f"{n}^{counts[n]}")
        return ".".join(parts)

    def __str__(self) -> str:
        return self.notation if self.notation is not None else self.canonical()


def _display_key(n: int) -> tuple[int, int]:
    # ascending prime, larger powers first
    return (prime_power_base(n) or 0, -n)


TRIVIAL = GroupDescriptor()

_FACTOR = re.compile(r"(\d+)(?:\^(\d+))?")


def parse_descriptor(text: str) -> GroupDescriptor:
    """Parse ``0`` or ``n[^j](.n[^j])*``, where n^j means j copies of Z/n."""
    src = text.strip()
    if src == "0":
        return GroupDescriptor((), notation=src)
    if not src:
        raise ParseError("empty group descriptor")
    factors: list[int] = []
    for piece in src.split("."):
        m = _FACTOR.fullmatch(piece)
        if not m:
            raise ParseError(f"malformed factor {piece!r} in {src!r}")
        n, j = int(m.group(1)), int(m.group(2) or 1)
        if j < 1:
            raise ParseError(f"multiplicity must be positive in {piece!r}")
        if prime_power_base(n) is None:
            raise ParseError(f"{n} is not a prime power")
        factors.extend([n] * j)
    return GroupDescriptor(tuple(factors), notation=src)


def nu(k: int) -> int:
    """Largest power of 2 dividing k."""
    if k <= 0:
        raise ValueError("nu is defined for positive integers")
    return k & -k


def nu_p(p: int, a: int) -> int:
    """Largest power of the odd prime p dividing a."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if a <= 0:
        raise ValueError("nu_p is defined for positive integers")
    out = 1
    while a % p == 0:
        a //= p
        out *= p
    return out


_TWO_PRIMARY = {0: (2,), 1: (2, 2), 2: (2,), 3: (8,)}


def v1_periodic(p: int, k: int) -> GroupDescriptor:
    """The p-primary v1-periodic summand of the k-th stem."""
    if k <= 0:
        raise ValueError("stems start at k = 1")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        if k == 1:
            return GroupDescriptor((2,))
        r = k % 8
        if r == 7:
            return GroupDescriptor((2 * nu(k + 1),))
        return GroupDescriptor(_TWO_PRIMARY.get(r, ()))
    period = 2 * (p - 1)
    if (k + 1) % period:
        return TRIVIAL
    return GroupDescriptor((p * nu_p(p, (k + 1) // period),))


def v1_primes(k: int) -> list[int]:
    """Primes that can contribute to the v1-periodic summand of the k-th stem."""
    out = [2]
    for p in range(3, (k + 3) // 2 + 1):
        if (k + 1) % (2 * (p - 1)) == 0 and is_prime(p):
            out.append(p)
    return out


def v1_periodic_all(k: int) -> GroupDescriptor:
    if k <= 0:
        raise ValueError("stems start at k = 1")
    total = TRIVIAL
    for p in v1_primes(k):
        total = total + v1_periodic(p, k)
    return total
