"""Minimal free resolution of GF(2) over the Steenrod algebra.

Column ``s`` is a free module with generators in internal degrees ``t``;
the differential of each generator is a map {target generator index:
frozenset of admissible monomials}.  The resolution is built degree by
degree in ``t`` and, inside each ``t``, by increasing ``s``: a new
generator is added for every kernel vector of the previous differential
that is not hit by the already-existing generators.  Such generators
only ever map with positive-degree coefficients, so the resolution is
minimal and the generator counts are the dimensions of Ext.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field

from .. import steenrod
from ..errors import ResourceLimitError
from ..f2 import Echelon

log = logging.getLogger(__name__)

DEFAULT_MAX_DIM = 200_000
BUDGET_ENV = "STEMKIT_MAX_DIM"

Differential = dict[int, frozenset[steenrod.Word]]


def default_budget() -> int:
    value = os.environ.get(BUDGET_ENV)
    if not value:
        return DEFAULT_MAX_DIM
    try:
        budget = int(value)
    except ValueError:
        raise ValueError(f"{BUDGET_ENV} must be a positive integer, got {value!r}") from None
    if budget <= 0:
        raise ValueError(f"{BUDGET_ENV} must be positive")
    return budget


@dataclass
class FreeResolutionColumn:
    s: int
    degrees: list[int] = field(default_factory=list)
    differentials: list[Differential] = field(default_factory=list)

    def generators_in(self, t: int) -> list[int]:
        return [g for g, tg in enumerate(self.degrees) if tg == t]

    def count(self, t: int) -> int:
        return sum(1 for tg in self.degrees if tg == t)

    def basis(self, t: int) -> list[tuple[int, steenrod.Word]]:
        """GF(2)-basis of the column in internal degree t: (generator, admissible monomial)."""
        out = []
        for g, tg in enumerate(self.degrees):
            if tg <= t:
                out.extend((g, m) for m in steenrod.admissible_basis(t - tg))
        return out


@dataclass
class Resolution:
    max_s: int
    max_t: int
    columns: list[FreeResolutionColumn]

    def dim(self, s: int, t: int) -> int:
        if s < 0 or s >= len(self.columns):
            return 0
        return self.columns[s].count(t)

    def differential_element(self, s: int, g: int, h: int) -> steenrod.SteenrodElement:
        """Coefficient of target generator h in d(generator g of column s)."""
        col = self.columns[s]
        degree = col.degrees[g] - self.columns[s - 1].degrees[h]
        return steenrod.SteenrodElement(col.differentials[g].get(h, frozenset()), degree)


def _image_row(
    mono: steenrod.Word,
    diff: Differential,
    index: dict[tuple[int, steenrod.Word], int],
) -> int:
    row = 0
    for h, coeff in diff.items():
        for b in coeff:
            for m in steenrod.monomial_product(mono, b):
                row ^= 1 << index[(h, m)]
    return row


def minimal_resolution(max_s: int, max_t: int, max_dim: int | None = None) -> Resolution:
    """Resolve GF(2) through homological degree max_s and internal degree max_t."""
    if max_s < 0 or max_t < 0:
        raise ValueError("bounds must be nonnegative")
    budget = default_budget() if max_dim is None else max_dim
    cols = [FreeResolutionColumn(s) for s in range(max_s + 1)]
    last_done: tuple[int, int] | None = None

    for t in range(max_t + 1):
        if t == 0:
            cols[0].degrees.append(0)
            cols[0].differentials.append({})
            last_done = (0, 0)
            # d_0 is the augmentation: nothing of positive degree is needed
            continue
        # Kernel of d_0 in positive degree is all of F_0[t] = A_t.
        basis_prev = cols[0].basis(t)
        kernel = [1 << i for i in range(len(basis_prev))]
        last_done = (0, t)
        for s in range(1, min(max_s, t) + 1):
            col = cols[s]
            basis = col.basis(t)
            if len(basis) > budget or len(basis_prev) > budget:
                raise ResourceLimitError(
                    f"bidegree (s={s}, t={t}) needs {max(len(basis), len(basis_prev))} basis "
                    f"vectors, over the budget of {budget}",
                    last_done,
                )
            index_prev = {b: i for i, b in enumerate(basis_prev)}
            ech = Echelon(track=s < max_s)
            for g, mono in basis:
                ech.add(_image_row(mono, col.differentials[g], index_prev))
            new_kernel = ech.relations if s < max_s else []
            for vec in kernel:
                residue = ech.insert_free(vec)
                if residue:
                    diff: dict[int, set[steenrod.Word]] = {}
                    r = residue
                    while r:
                        low = r & -r
                        h, m = basis_prev[low.bit_length() - 1]
                        diff.setdefault(h, set()).add(m)
                        r ^= low
                    col.degrees.append(t)
                    col.differentials.append({h: frozenset(v) for h, v in diff.items()})
            added = col.count(t)
            if added:
                log.debug("Ext^{%d,%d} has dimension %d", s, t, added)
            # new generators sit at the end of the degree-t basis with the unit monomial
            basis_prev = basis + [(g, ()) for g in col.generators_in(t)]
            kernel = new_kernel
            last_done = (s, t)
    return Resolution(max_s, max_t, cols)


def d_squared_is_zero(res: Resolution, s: int, g: int) -> bool:
    """d(d(g)) == 0 for generator g of column s >= 2."""
    col, prev = res.columns[s], res.columns[s - 1]
    acc: dict[int, set[steenrod.Word]] = {}
    for h, coeff in col.differentials[g].items():
        for k, inner in prev.differentials[h].items():
            bucket = acc.setdefault(k, set())
            for a in coeff:
                for b in inner:
                    bucket ^= steenrod.monomial_product(a, b)
    return all(not v for v in acc.values())


def is_minimal(res: Resolution) -> bool:
    for col in res.columns[1:]:
        for diff in col.differentials:
            if any(() in coeff for coeff in diff.values()):
                return False
    return True


def h_lines(res: Resolution, j: int) -> set[tuple[tuple[int, int, int], tuple[int, int, int]]]:
    """Edges (s, t, i) -> (s+1, t+2^j, i') for h_j multiplication.

    Dots are numbered by their position among the generators of the same
    bidegree.  An edge is drawn when the differential of the target
    generator has Sq^{2^j} in its coefficient on the source generator.
    """
    if j not in (0, 1, 2):
        raise ValueError("only h0, h1 and h2 lines are supported")
    sq = (1 << j,)
    edges = set()
    for s in range(1, len(res.columns)):
        col, prev = res.columns[s], res.columns[s - 1]
        pos_prev = _positions(prev.degrees)
        pos = _positions(col.degrees)
        for g, diff in enumerate(col.differentials):
            for h, coeff in diff.items():
                if sq in coeff:
                    src = (s - 1, prev.degrees[h], pos_prev[h])
                    dst = (s, col.degrees[g], pos[g])
                    edges.add((src, dst))
    return edges


def _positions(degrees: list[int]) -> list[int]:
    seen: dict[int, int] = {}
    out = []
    for t in degrees:
        out.append(seen.get(t, 0))
        seen[t] = out[-1] + 1
    return out
