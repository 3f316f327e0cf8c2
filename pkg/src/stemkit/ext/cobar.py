"""Reduced cobar complexes of the classical and motivic dual Steenrod algebras.

In homological degree ``s`` the complex has one basis element per
``s``-tuple of positive-degree dual monomials, graded by total internal
degree ``t``.  The differential inserts the reduced coproduct at every
slot (signs vanish in characteristic two).  Matrices use the row-vector
convention: row ``i`` of ``d_s`` is the image of basis element ``i`` of
``C^s``, so ``d_s @ d_{s+1}`` must vanish.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .. import motivic, steenrod
from ..errors import ResourceLimitError
from ..f2 import BitMatrix, GradedMatrix, SmithForm, graded_smith, rank
from .resolution import default_budget

CLASSICAL = "F2"
MOTIVIC = "F2[tau]"


@dataclass
class CobarComplex:
    ground: str
    max_s: int
    max_t: int
    terms: dict[tuple[int, int], list[tuple]] = field(default_factory=dict)
    # d_s in internal degree t, from C^s_t to C^{s+1}_t
    differentials: dict[tuple[int, int], BitMatrix | GradedMatrix] = field(default_factory=dict)
    weights: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    _smith: dict[tuple[int, int], SmithForm] = field(default_factory=dict, repr=False)

    def smith(self, s: int, t: int) -> SmithForm:
        if (s, t) not in self._smith:
            d = self.differentials[(s, t)]
            if not isinstance(d, GradedMatrix):
                raise TypeError("Smith forms are kept for the motivic complex only")
            self._smith[(s, t)] = graded_smith(d)
        return self._smith[(s, t)]

    def dim(self, s: int, t: int) -> int:
        return len(self.terms.get((s, t), ()))

    def rank(self, s: int, t: int) -> int:
        d = self.differentials.get((s, t))
        if d is None or not d.nrows:
            return 0
        if isinstance(d, BitMatrix):
            return rank(d)
        return len(self.smith(s, t).factors)

    def homology_dim(self, s: int, t: int) -> int:
        """GF(2)-dimension (classical) or free rank (motivic) of H^{s,t}."""
        if (s, t) not in self.differentials and s <= self.max_s:
            raise KeyError(f"differential out of (s={s}, t={t}) was not computed")
        return self.dim(s, t) - self.rank(s, t) - (self.rank(s - 1, t) if s else 0)


@lru_cache(maxsize=None)
def _classical_factors(degree: int) -> tuple[steenrod.Monomial, ...]:
    return tuple(steenrod.milnor_basis(degree)) if degree > 0 else ()


@lru_cache(maxsize=None)
def _motivic_factors(degree: int) -> tuple[motivic.MotivicMonomial, ...]:
    return motivic.tau_free_basis(degree) if degree > 0 else ()


def _tuples(s: int, t: int, factors: Callable[[int], Sequence]) -> list[tuple]:
    if s == 0:
        return [()] if t == 0 else []
    out = []
    for first in range(1, t - s + 2):
        heads = factors(first)
        if not heads:
            continue
        tails = _tuples(s - 1, t - first, factors)
        for h in heads:
            for tail in tails:
                out.append((h,) + tail)
    return out


def _check_budget(n: int, s: int, t: int, budget: int, last: tuple[int, int] | None) -> None:
    if n > budget:
        raise ResourceLimitError(
            f"cobar term C^{s} in degree {t} has dimension {n}, over the budget of {budget}", last
        )


@lru_cache(maxsize=None)
def _classical_reduced(m: steenrod.Monomial) -> tuple[tuple[steenrod.Monomial, steenrod.Monomial], ...]:
    return tuple(sorted((a, b) for a, b in steenrod.coproduct(m).terms if a and b))


def classical_cobar(max_s: int, max_t: int, max_dim: int | None = None) -> CobarComplex:
    """Cobar complex over GF(2) with differentials d_s for s <= max_s, t <= max_t."""
    if max_s < 0 or max_t < 0:
        raise ValueError("bounds must be nonnegative")
    budget = default_budget() if max_dim is None else max_dim
    cx = CobarComplex(CLASSICAL, max_s, max_t)
    last = None
    for t in range(max_t + 1):
        for s in range(max_s + 2):
            basis = _tuples(s, t, _classical_factors)
            _check_budget(len(basis), s, t, budget, last)
            cx.terms[(s, t)] = basis
        for s in range(max_s + 1):
            src, dst = cx.terms[(s, t)], cx.terms[(s + 1, t)]
            index = {b: i for i, b in enumerate(dst)}
            rows = []
            for tup in src:
                row = 0
                for i, m in enumerate(tup):
                    for a, b in _classical_reduced(m):
                        row ^= 1 << index[tup[:i] + (a, b) + tup[i + 1 :]]
                rows.append(row)
            cx.differentials[(s, t)] = BitMatrix(len(src), len(dst), tuple(rows))
            last = (s, t)
    return cx


def _motivic_weight(tup: tuple) -> int:
    return sum(m.bidegree[1] for m in tup)


def motivic_cobar(max_s: int, max_stem: int, max_dim: int | None = None) -> CobarComplex:
    """Cobar complex over GF(2)[tau]; homology is available for s <= max_s, t - s <= max_stem."""
    if max_s < 0 or max_stem < 0:
        raise ValueError("bounds must be nonnegative")
    budget = default_budget() if max_dim is None else max_dim
    max_t = max_stem + max_s
    cx = CobarComplex(MOTIVIC, max_s, max_t)
    last = None
    for t in range(max_t + 1):
        for s in range(max_s + 2):
            basis = _tuples(s, t, _motivic_factors)
            _check_budget(len(basis), s, t, budget, last)
            basis.sort(key=lambda tup: (_motivic_weight(tup), tup))
            cx.terms[(s, t)] = basis
            cx.weights[(s, t)] = [_motivic_weight(tup) for tup in basis]
        for s in range(max_s + 1):
            src, dst = cx.terms[(s, t)], cx.terms[(s + 1, t)]
            src_w, dst_w = cx.weights[(s, t)], cx.weights[(s + 1, t)]
            index = {b: i for i, b in enumerate(dst)}
            rows = []
            for tup, w in zip(src, src_w):
                row = 0
                for i, m in enumerate(tup):
                    for a, b in motivic.reduced_coproduct(m):
                        j = index[tup[:i] + (a.without_tau(), b) + tup[i + 1 :]]
                        if dst_w[j] - w != a.tau_power:
                            raise AssertionError("cobar differential is not bihomogeneous")
                        row ^= 1 << j
                rows.append(row)
            cx.differentials[(s, t)] = GradedMatrix(tuple(rows), tuple(src_w), tuple(dst_w))
            last = (s, t)
    return cx


@dataclass(frozen=True)
class TauModuleDescriptor:
    """GF(2)[tau]^free_rank plus a GF(2)[tau]/tau^k summand per torsion exponent."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0 or any(k <= 0 for k in self.torsion):
            raise ValueError("invalid module descriptor")
        object.__setattr__(self, "torsion", tuple(sorted(self.torsion)))

    def is_zero(self) -> bool:
        return not self.free_rank and not self.torsion


def graded_homology(
    weights: Sequence[int],
    incoming: GradedMatrix | SmithForm | None,
    outgoing: GradedMatrix | SmithForm | None,
) -> dict[int, TauModuleDescriptor]:
    """Homology of C' -> C -> C'' at C, split by the weight of each generator.

    ``weights`` are the gradings of the basis of C.  The free part is the
    kernel of ``outgoing`` modulo the saturation of the image of
    ``incoming``; torsion comes from the non-unit invariant factors of
    ``incoming``.
    """
    if isinstance(outgoing, GradedMatrix):
        outgoing = graded_smith(outgoing) if outgoing.nrows else None
    if isinstance(incoming, GradedMatrix):
        incoming = graded_smith(incoming) if incoming.nrows else None
    kernel = Counter(outgoing.zero_rows) if outgoing is not None else Counter(weights)
    saturated: Counter[int] = Counter()
    torsion: dict[int, list[int]] = {}
    if incoming is not None:
        for f, w in zip(incoming.factors, incoming.pivot_cols):
            saturated[w] += 1
            if f.degree > 0:
                torsion.setdefault(w, []).append(f.degree)
    free = kernel - saturated
    if sum(free.values()) != sum(kernel.values()) - sum(saturated.values()):
        raise ArithmeticError("image is not contained in the kernel")
    out = {}
    for w in sorted(set(free) | set(torsion)):
        desc = TauModuleDescriptor(free.get(w, 0), tuple(torsion.get(w, ())))
        if not desc.is_zero():
            out[w] = desc
    return out


def tau_homology(cx: CobarComplex, s: int, t: int) -> dict[int, TauModuleDescriptor]:
    """H^{s} of the motivic cobar complex in internal degree t, keyed by weight."""
    if cx.ground != MOTIVIC:
        raise ValueError("tau homology needs the motivic cobar complex")
    if s > cx.max_s or t > cx.max_t:
        raise KeyError(f"(s={s}, t={t}) is outside the computed range")
    weights = cx.weights[(s, t)]
    incoming = cx.smith(s - 1, t) if s and cx.dim(s - 1, t) else None
    outgoing = cx.smith(s, t) if weights else None
    return graded_homology(weights, incoming, outgoing)


def tau_homology_at(cx: CobarComplex, s: int, bidegree: tuple[int, int]) -> TauModuleDescriptor:
    t, w = bidegree
    return tau_homology(cx, s, t).get(w, TauModuleDescriptor())


def d_squared_zero(cx: CobarComplex) -> bool:
    for (s, t), d in cx.differentials.items():
        nxt = cx.differentials.get((s + 1, t))
        if nxt is None:
            continue
        first = d if isinstance(d, BitMatrix) else BitMatrix(d.nrows, d.ncols, d.rows)
        second = nxt if isinstance(nxt, BitMatrix) else BitMatrix(nxt.nrows, nxt.ncols, nxt.rows)
        if any((first @ second).rows):
            return False
    return True
