"""The C-motivic dual Steenrod algebra over GF(2)[tau].

Gradings are homological: tau has bidegree (0, -1), xi_i has
(2^{i+1} - 2, 2^i - 1) and tau_i has (2^{i+1} - 1, 2^i - 1).  With these
choices the relation tau_i^2 = tau xi_{i+1} and both coproduct formulas
are bihomogeneous.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from . import steenrod
from .errors import ParseError

Bidegree = tuple[int, int]


def tau_i_bidegree(i: int) -> Bidegree:
    return ((2 << i) - 1, (1 << i) - 1)


def xi_bidegree(i: int) -> Bidegree:
    return ((2 << i) - 2, (1 << i) - 1)


TAU_BIDEGREE: Bidegree = (0, -1)


def _strip(exps: Iterable[int]) -> tuple[int, ...]:
    exps = list(exps)
    while exps and exps[-1] == 0:
        exps.pop()
    return tuple(exps)


@dataclass(frozen=True, order=True)
class MotivicMonomial:
    """tau^tau_power * prod_{i in tau_indices} tau_i * prod_i xi_i^{xi[i-1]}."""

    tau_power: int = 0
    tau_indices: tuple[int, ...] = ()
    xi: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.tau_power < 0 or any(e < 0 for e in self.xi):
            raise ValueError("exponents must be nonnegative")
        if any(b <= a for a, b in zip(self.tau_indices, self.tau_indices[1:])):
            raise ValueError("tau_indices must be strictly increasing")
        if self.xi and self.xi[-1] == 0:
            object.__setattr__(self, "xi", _strip(self.xi))

    @cached_property
    def bidegree(self) -> Bidegree:
        deg, wt = 0, -self.tau_power
        for i in self.tau_indices:
            d, w = tau_i_bidegree(i)
            deg, wt = deg + d, wt + w
        for i, e in enumerate(self.xi, start=1):
            d, w = xi_bidegree(i)
            deg, wt = deg + e * d, wt + e * w
        return deg, wt

    @property
    def degree(self) -> int:
        return self.bidegree[0]

    def without_tau(self) -> MotivicMonomial:
        return MotivicMonomial(0, self.tau_indices, self.xi)

    def with_tau(self, k: int) -> MotivicMonomial:
        return MotivicMonomial(self.tau_power + k, self.tau_indices, self.xi)

    def __str__(self) -> str:
        return format_raw(self.tau_power, {i: 1 for i in self.tau_indices}, dict(enumerate(self.xi, 1)))


UNIT = MotivicMonomial()


def tau_gen(i: int) -> MotivicMonomial:
    return MotivicMonomial(0, (i,), ())


def xi_gen(i: int, power: int = 1) -> MotivicMonomial:
    if i == 0 or power == 0:
        return UNIT
    return MotivicMonomial(0, (), (0,) * (i - 1) + (power,))


TAU = MotivicMonomial(1)


@dataclass(frozen=True)
class RawMonomial:
    """A monomial before imposing tau_i^2 = tau xi_{i+1}; exponents are arbitrary."""

    tau_power: int = 0
    tau_exps: tuple[tuple[int, int], ...] = ()
    xi_exps: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, tau_power: int = 0, tau_exps: Mapping[int, int] | None = None,
           xi_exps: Mapping[int, int] | None = None) -> RawMonomial:
        te = tuple(sorted((i, e) for i, e in (tau_exps or {}).items() if e))
        xe = tuple(sorted((i, e) for i, e in (xi_exps or {}).items() if e and i))
        return cls(tau_power, te, xe)

    @property
    def bidegree(self) -> Bidegree:
        deg, wt = 0, -self.tau_power
        for i, e in self.tau_exps:
            d, w = tau_i_bidegree(i)
            deg, wt = deg + e * d, wt + e * w
        for i, e in self.xi_exps:
            d, w = xi_bidegree(i)
            deg, wt = deg + e * d, wt + e * w
        return deg, wt

    def reducible(self) -> list[int]:
        return [i for i, e in self.tau_exps if e >= 2]


def apply_relation(raw: RawMonomial, i: int) -> RawMonomial:
    """Rewrite one factor tau_i^2 as tau * xi_{i+1}."""
    te = dict(raw.tau_exps)
    if te.get(i, 0) < 2:
        raise ValueError(f"tau_{i} does not appear squared")
    te[i] -= 2
    xe = dict(raw.xi_exps)
    xe[i + 1] = xe.get(i + 1, 0) + 1
    return RawMonomial.of(raw.tau_power + 1, te, xe)


def normalize(raw: RawMonomial) -> MotivicMonomial:
    """Normal form of a raw monomial (a single monomial: the relation is binomial)."""
    while True:
        red = raw.reducible()
        if not red:
            break
        raw = apply_relation(raw, red[0])
    xe = dict(raw.xi_exps)
    top = max(xe, default=0)
    return MotivicMonomial(
        raw.tau_power,
        tuple(i for i, e in raw.tau_exps if e),
        _strip(xe.get(i, 0) for i in range(1, top + 1)),
    )


@dataclass(frozen=True)
class MotivicElement:
    terms: frozenset[MotivicMonomial]
    bidegree: Bidegree = (0, 0)

    def __post_init__(self) -> None:
        for m in self.terms:
            if m.bidegree != self.bidegree:
                raise ValueError(f"inhomogeneous element: {m} has bidegree {m.bidegree}")

    @classmethod
    def of(cls, terms: Iterable[MotivicMonomial], bidegree: Bidegree | None = None) -> MotivicElement:
        acc: set[MotivicMonomial] = set()
        for t in terms:
            acc ^= {t}
        if bidegree is None:
            bidegree = next(iter(acc)).bidegree if acc else (0, 0)
        return cls(frozenset(acc), bidegree)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: MotivicElement) -> MotivicElement:
        if self.terms and other.terms and self.bidegree != other.bidegree:
            raise ValueError("cannot add elements of different bidegrees")
        bideg = self.bidegree if self.terms else other.bidegree
        return MotivicElement(self.terms ^ other.terms, bideg)

    def __mul__(self, other: MotivicElement) -> MotivicElement:
        return motivic_multiply(self, other)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(str(m) for m in sorted(self.terms))


def element(*monos: MotivicMonomial) -> MotivicElement:
    return MotivicElement.of(monos)


def motivic_normalize(raw: RawMonomial) -> MotivicElement:
    m = normalize(raw)
    return MotivicElement(frozenset({m}), m.bidegree)


def to_raw(m: MotivicMonomial) -> RawMonomial:
    return RawMonomial.of(m.tau_power, {i: 1 for i in m.tau_indices}, dict(enumerate(m.xi, 1)))


@lru_cache(maxsize=None)
def mono_mul(a: MotivicMonomial, b: MotivicMonomial) -> MotivicMonomial:
    te: dict[int, int] = {}
    for i in a.tau_indices + b.tau_indices:
        te[i] = te.get(i, 0) + 1
    n = max(len(a.xi), len(b.xi))
    xe = {
        i + 1: (a.xi[i] if i < len(a.xi) else 0) + (b.xi[i] if i < len(b.xi) else 0) for i in range(n)
    }
    return normalize(RawMonomial.of(a.tau_power + b.tau_power, te, xe))


def motivic_multiply(x: MotivicElement, y: MotivicElement) -> MotivicElement:
    acc: set[MotivicMonomial] = set()
    for a in x.terms:
        for b in y.terms:
            acc ^= {mono_mul(a, b)}
    b0, b1 = x.bidegree, y.bidegree
    return MotivicElement(frozenset(acc), (b0[0] + b1[0], b0[1] + b1[1]))


def set_tau_zero(x: MotivicElement) -> MotivicElement:
    return MotivicElement(frozenset(m for m in x.terms if m.tau_power == 0), x.bidegree)


# -- coproduct ----------------------------------------------------------------

# Tensor terms keep all tau powers in the left factor (tensor over GF(2)[tau]).
MTensor = frozenset[tuple[MotivicMonomial, MotivicMonomial]]


def _tensor_term(a: MotivicMonomial, b: MotivicMonomial) -> tuple[MotivicMonomial, MotivicMonomial]:
    if b.tau_power:
        return a.with_tau(b.tau_power), b.without_tau()
    return a, b


def tensor_mul(x: Iterable[tuple[MotivicMonomial, MotivicMonomial]],
               y: Iterable[tuple[MotivicMonomial, MotivicMonomial]]) -> MTensor:
    y = list(y)
    acc: set[tuple[MotivicMonomial, MotivicMonomial]] = set()
    for a, b in x:
        for c, d in y:
            acc ^= {_tensor_term(mono_mul(a, c), mono_mul(b, d))}
    return frozenset(acc)


@lru_cache(maxsize=None)
def tau_gen_coproduct(i: int) -> MTensor:
    """tau_i -> tau_i (x) 1 + sum_k xi_{i-k}^{2^k} (x) tau_k."""
    terms = [(tau_gen(i), UNIT)] + [(xi_gen(i - k, 1 << k), tau_gen(k)) for k in range(i + 1)]
    return tensor_mul(terms, [(UNIT, UNIT)])


@lru_cache(maxsize=None)
def xi_gen_coproduct(i: int) -> MTensor:
    """xi_i -> sum_k xi_{i-k}^{2^k} (x) xi_k."""
    return frozenset((xi_gen(i - k, 1 << k), xi_gen(k)) for k in range(i + 1))


@lru_cache(maxsize=None)
def _coproduct(m: MotivicMonomial) -> MTensor:
    if m.tau_power:
        return frozenset((a.with_tau(m.tau_power), b) for a, b in _coproduct(m.without_tau()))
    if m.tau_indices:
        i = m.tau_indices[0]
        rest = MotivicMonomial(0, m.tau_indices[1:], m.xi)
        return tensor_mul(tau_gen_coproduct(i), _coproduct(rest))
    if m.xi:
        j = next(k for k, e in enumerate(m.xi) if e)
        xi = list(m.xi)
        xi[j] -= 1
        return tensor_mul(xi_gen_coproduct(j + 1), _coproduct(MotivicMonomial(0, (), _strip(xi))))
    return frozenset({(UNIT, UNIT)})


@dataclass(frozen=True)
class MotivicTensor:
    terms: MTensor
    bidegree: Bidegree

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = sorted(self.terms, key=lambda t: (t[1].degree, t[1], t[0]))
        return " + ".join(f"{a} (x) {b}" for a, b in parts)


def motivic_coproduct(m: MotivicMonomial) -> MotivicTensor:
    return MotivicTensor(_coproduct(m), m.bidegree)


def reduced_coproduct(m: MotivicMonomial) -> MTensor:
    """Coproduct terms with both factors of positive degree."""
    return frozenset((a, b) for a, b in _coproduct(m) if a.degree and b.degree)


# -- specialisations ------------------------------------------------------------


def invert_tau(m: MotivicMonomial) -> tuple[steenrod.Monomial, int]:
    """Image in the classical dual after inverting tau, plus the dropped tau power.

    tau_i goes to z_{i+1} and xi_i to z_i^2; this is the degree-preserving
    form of the correspondence and commutes with the coproducts.
    """
    exps: dict[int, int] = {}
    for i in m.tau_indices:
        exps[i + 1] = exps.get(i + 1, 0) + 1
    for i, e in enumerate(m.xi, start=1):
        exps[i] = exps.get(i, 0) + 2 * e
    top = max(exps, default=0)
    return _strip(exps.get(i, 0) for i in range(1, top + 1)), m.tau_power


# -- bases ----------------------------------------------------------------------


def _xi_monomials(degree: int, top: int) -> Iterator[list[int]]:
    if top == 0:
        if degree == 0:
            yield []
        return
    d = xi_bidegree(top)[0]
    for e in range(degree // d + 1):
        for head in _xi_monomials(degree - e * d, top - 1):
            yield head + [e]


@lru_cache(maxsize=None)
def tau_free_basis(degree: int) -> tuple[MotivicMonomial, ...]:
    """Normal-form monomials without tau of a topological degree (free GF(2)[tau]-basis)."""
    out = []
    top = max(1, (degree + 2).bit_length())
    idx = [i for i in range(top + 1) if tau_i_bidegree(i)[0] <= degree]
    for r in range(len(idx) + 1):
        for subset in combinations(idx, r):
            rest = degree - sum(tau_i_bidegree(i)[0] for i in subset)
            if rest < 0 or rest % 2:
                continue
            for xi in _xi_monomials(rest, top):
                out.append(MotivicMonomial(0, subset, _strip(xi)))
    return tuple(sorted(out))


def motivic_basis(degree: int, weight: int) -> list[MotivicMonomial]:
    """All normal-form monomials of the bidegree, tau powers included."""
    if degree < 0:
        return []
    out = []
    for m in tau_free_basis(degree):
        k = m.bidegree[1] - weight
        if k >= 0:
            out.append(m.with_tau(k))
    return sorted(out)


# -- text form ------------------------------------------------------------------


def format_raw(tau_power: int, tau_exps: Mapping[int, int], xi_exps: Mapping[int, int]) -> str:
    parts = []
    if tau_power:
        parts.append("t" if tau_power == 1 else f"t^{tau_power}")
    for i in sorted(tau_exps):
        e = tau_exps[i]
        if e:
            parts.append(f"t{i}" if e == 1 else f"t{i}^{e}")
    for i in sorted(xi_exps):
        e = xi_exps[i]
        if e:
            parts.append(f"x{i}" if e == 1 else f"x{i}^{e}")
    return "*".join(parts) if parts else "1"


_TOKEN = re.compile(r"(t|x)(\d*)(?:\^(\d+))?$")


def parse_raw(text: str) -> RawMonomial:
    """Parse ``"t^2*t0^3*x1"``: ``t`` is tau, ``t<i>`` is tau_i, ``x<i>`` is xi_i."""
    text = text.strip()
    tau_power = 0
    te: dict[int, int] = {}
    xe: dict[int, int] = {}
    if text in ("", "1"):
        return RawMonomial()
    for factor in text.split("*"):
        factor = factor.strip()
        m = _TOKEN.match(factor)
        if not m:
            raise ParseError(f"bad motivic factor {factor!r}")
        kind, idx, exp = m.group(1), m.group(2), int(m.group(3) or 1)
        if kind == "t" and idx == "":
            tau_power += exp
        elif kind == "t":
            te[int(idx)] = te.get(int(idx), 0) + exp
        elif idx == "":
            raise ParseError(f"xi needs an index in {factor!r}")
        elif int(idx) > 0:
            xe[int(idx)] = xe.get(int(idx), 0) + exp
    return RawMonomial.of(tau_power, te, xe)


def parse_monomial(text: str) -> MotivicMonomial:
    return normalize(parse_raw(text))
