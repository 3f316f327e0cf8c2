from __future__ import annotations

from functools import reduce
from itertools import combinations, permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stemkit.f2 import (
    ONE,
    TAU,
    ZERO,
    BitMatrix,
    Echelon,
    GradedMatrix,
    TauPoly,
    TauPolyMatrix,
    graded_smith,
    kernel_basis,
    matmul,
    pack_bits,
    rank,
    rref,
    smith_normal_form,
    smith_reduce,
    solve_in_span,
    unpack_bits,
)


@st.composite
def bit_matrices(draw, max_rows=6, max_cols=6):
    n = draw(st.integers(0, max_rows))
    m = draw(st.integers(0, max_cols))
    rows = draw(st.lists(st.integers(0, (1 << m) - 1), min_size=n, max_size=n))
    return BitMatrix(n, m, tuple(rows))


def brute_rank(m: BitMatrix) -> int:
    """Size of the row space, counted by enumerating every combination of rows."""
    span = {reduce(lambda a, b: a ^ b, combo, 0)
            for k in range(m.nrows + 1) for combo in combinations(m.rows, k)}
    return len(span).bit_length() - 1


def test_rref_examples():
    r = rref(BitMatrix.identity(3))
    assert r.rank == 3 and list(r.pivots) == [0, 1, 2]
    assert rank(BitMatrix.from_lists([[1, 1], [1, 1]])) == 1
    assert rank(BitMatrix.from_lists([[1, 0, 1], [0, 1, 1], [1, 1, 0]])) == 2


def test_kernel_examples():
    assert kernel_basis(BitMatrix.identity(2)).nrows == 0
    assert kernel_basis(BitMatrix.zeros(2, 3)).nrows == 3
    k = kernel_basis(BitMatrix.from_lists([[1, 1, 0], [0, 0, 1]]))
    assert k.to_lists() == [[1, 1, 0]]


def test_solve_examples():
    assert solve_in_span(BitMatrix.identity(2), [1, 0]) == pack_bits([1, 0])
    assert solve_in_span(BitMatrix.from_lists([[1, 1]]), [1, 0]) is None
    assert solve_in_span(BitMatrix.from_lists([[1, 0], [1, 1]]), [0, 1]) == pack_bits([1, 1])
    with pytest.raises(ValueError):
        solve_in_span(BitMatrix.identity(2), [1, 0, 0])


def test_pack_roundtrip():
    assert unpack_bits(pack_bits([1, 0, 1, 1]), 4) == [1, 0, 1, 1]


@given(bit_matrices())
def test_rank_matches_span_enumeration(m):
    r = rank(m)
    assert r == brute_rank(m)
    assert r <= min(m.nrows, m.ncols)


@given(bit_matrices())
def test_rank_nullity(m):
    k = kernel_basis(m)
    assert rank(m) + k.nrows == m.ncols
    for v in k.rows:
        assert m.apply(v) == 0
    assert rank(k) == k.nrows


@given(bit_matrices())
def test_rref_is_reduced(m):
    r = rref(m)
    assert rank(r.reduced) == r.rank == rank(m)
    for i, p in enumerate(r.pivots):
        column = [(row >> p) & 1 for row in r.reduced.rows]
        assert column.count(1) == 1 and column[i] == 1


@given(bit_matrices(), st.data())
def test_solve_in_span(m, data):
    x = data.draw(st.integers(0, (1 << m.nrows) - 1))
    v = m.left_apply(x)
    y = solve_in_span(m, v)
    assert y is not None and m.left_apply(y) == v


@given(st.lists(st.integers(0, 63), max_size=8))
def test_echelon_relations_are_left_kernel(rows):
    ech = Echelon(track=True)
    for r in rows:
        ech.add(r)
    m = BitMatrix(len(rows), 6, tuple(rows))
    assert ech.rank == rank(m)
    assert len(ech.relations) == len(rows) - ech.rank
    for combo in ech.relations:
        assert combo and m.left_apply(combo) == 0


@given(bit_matrices(4, 4), bit_matrices(4, 4))
def test_matmul_transpose(a, b):
    if a.ncols != b.nrows:
        return
    assert (a @ b).transpose() == b.transpose() @ a.transpose()


# -- tau polynomials ---------------------------------------------------------------

polys = st.integers(0, 255).map(TauPoly)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + a == ZERO
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * ONE == a


@given(polys, polys)
def test_division(a, b):
    if not b:
        with pytest.raises(ZeroDivisionError):
            divmod(a, b)
        return
    q, r = divmod(a, b)
    assert q * b + r == a
    assert not r or r.degree < b.degree


def test_poly_basics():
    assert TauPoly.monomial(3) == TAU * TAU * TAU
    assert TauPoly.from_coefficients([1, 0, 1]).coefficients == [1, 0, 1]
    assert str(TAU) == "t"
    assert TAU.divides(TAU * TAU) and not (TAU * TAU).divides(TAU)


def test_smith_examples():
    assert smith_normal_form(TauPolyMatrix.from_lists([[TAU]])) == [TAU]
    assert smith_normal_form(TauPolyMatrix.zeros(2, 3)) == []
    assert smith_normal_form(TauPolyMatrix.from_lists([[TAU, ONE], [ZERO, TAU]])) == [ONE, TAU * TAU]


def _gcd(a: TauPoly, b: TauPoly) -> TauPoly:
    while b:
        a, b = b, a % b
    return a


def _det(rows: list[list[TauPoly]]) -> TauPoly:
    n = len(rows)
    total = ZERO
    for perm in permutations(range(n)):
        term = ONE
        for i, j in enumerate(perm):
            term = term * rows[i][j]
        total = total + term
    return total


def determinantal_factors(m: TauPolyMatrix) -> list[TauPoly]:
    """Invariant factors from gcds of k x k minors, independent of any elimination."""
    out = []
    prev = ONE
    for k in range(1, min(m.nrows, m.ncols) + 1):
        g = ZERO
        for rs in combinations(range(m.nrows), k):
            for cs in combinations(range(m.ncols), k):
                g = _gcd(g, _det([[m[i, j] for j in cs] for i in rs]))
        if not g:
            break
        out.append(g // prev)
        prev = g
    return out


@st.composite
def tau_matrices(draw, max_dim=4):
    n = draw(st.integers(1, max_dim))
    m = draw(st.integers(1, max_dim))
    entries = draw(st.lists(st.lists(st.integers(0, 15), min_size=m, max_size=m), min_size=n, max_size=n))
    return TauPolyMatrix.from_lists([[TauPoly(e) for e in row] for row in entries])


@given(tau_matrices())
def test_smith_matches_determinantal_divisors(m):
    factors = smith_normal_form(m)
    assert factors == determinantal_factors(m)
    for a, b in zip(factors, factors[1:]):
        assert a.divides(b)


@given(tau_matrices(3), tau_matrices(3))
def test_smith_of_product_factor_count(a, b):
    if a.ncols != b.nrows:
        return
    assert len(smith_normal_form(matmul(a, b))) <= min(len(smith_normal_form(a)), len(smith_normal_form(b)))


@st.composite
def graded_matrices(draw):
    n = draw(st.integers(0, 6))
    m = draw(st.integers(1, 6))
    col_w = sorted(draw(st.lists(st.integers(0, 4), min_size=m, max_size=m)))
    row_w = draw(st.lists(st.integers(0, 4), min_size=n, max_size=n))
    rows = []
    for w in row_w:
        allowed = [j for j, c in enumerate(col_w) if c >= w]
        bits = draw(st.lists(st.sampled_from(allowed), unique=True)) if allowed else []
        rows.append(pack_bits([1 if j in bits else 0 for j in range(m)]))
    return GradedMatrix(tuple(rows), tuple(row_w), tuple(col_w))


@given(graded_matrices())
def test_graded_smith_agrees_with_general(m):
    fast = graded_smith(m)
    assert all(f.is_monomial() for f in fast.factors)
    slow = smith_reduce(m.to_taupoly().masks(), m.ncols, m.row_weights, m.col_weights)
    assert fast.factors == slow.factors
    if m.nrows <= 4 and m.ncols <= 4:
        assert fast.factors == determinantal_factors(m.to_taupoly())
    assert len(fast.zero_rows) == m.nrows - len(fast.factors)
    for f, r, c in zip(fast.factors, fast.pivot_rows, fast.pivot_cols):
        assert f.degree == c - r
    assert sorted(fast.pivot_cols) == sorted(slow.pivot_cols)


def test_graded_matrix_validation():
    with pytest.raises(ValueError):
        GradedMatrix((1,), (0,), (1, 0))
    with pytest.raises(ValueError):
        GradedMatrix((1,), (2,), (1,))


def test_bitmatrix_validation():
    with pytest.raises(ValueError):
        BitMatrix(1, 2, (4,))
    assert BitMatrix.from_lists([[0, 1]])[0, 1] == 1
