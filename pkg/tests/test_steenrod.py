from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stemkit import steenrod
from stemkit.errors import ParseError
from stemkit.f2 import rank
from stemkit.steenrod import (
    ONE,
    SteenrodElement,
    adem_reduce,
    admissible_basis,
    coproduct,
    dualized_product,
    milnor_basis,
    milnor_degree,
    multiply,
    pairing,
    pairing_matrix,
    parse_monomial,
    parse_word,
)

sq = SteenrodElement.sq


def el(*words):
    return SteenrodElement.of(words)


def test_adem_examples():
    assert not adem_reduce((1, 1))
    assert adem_reduce((1, 2)) == el((3,))
    assert adem_reduce((2, 2)) == el((3, 1))
    assert not adem_reduce((3, 2))


def test_adem_terms_rejects_admissible():
    with pytest.raises(ValueError):
        steenrod.adem_terms(4, 2)


def test_multiply_examples():
    assert ONE * sq(2) == sq(2)
    assert not sq(1) * sq(1)
    assert sq(2) * sq(2) == el((3, 1))


def test_admissible_basis_examples():
    assert admissible_basis(0) == [()]
    assert admissible_basis(1) == [(1,)]
    assert admissible_basis(3) == [(3,), (2, 1)]


def test_milnor_basis_examples():
    assert milnor_basis(0) == [()]
    assert milnor_basis(3) == [(3,), (0, 1)]
    assert milnor_basis(4) == [(4,), (1, 1)]


def test_coproduct_examples():
    assert set(coproduct((1,)).terms) == {((1,), ()), ((), (1,))}
    assert set(coproduct((0, 1)).terms) == {((0, 1), ()), ((2,), (1,)), ((), (0, 1))}
    assert set(coproduct(()).terms) == {((), ())}
    assert str(coproduct(parse_monomial("z2"))) == "z2 (x) 1 + z1^2 (x) z1 + 1 (x) z2"


def test_pairing_examples():
    assert pairing((1,), (1,)) == 1
    assert pairing((3,), (0, 1)) == 0
    assert pairing((2, 1), (0, 1)) == 1


def test_dualized_product_examples():
    assert not dualized_product(sq(1), sq(1), 16)
    assert dualized_product(sq(2), sq(2), 16) == el((3, 1))
    assert dualized_product(ONE, sq(3), 16) == sq(3)
    with pytest.raises(ValueError):
        dualized_product(sq(8), sq(8), 10)


def test_parse_and_format():
    assert parse_word("Sq3 Sq2") == (3, 2)
    assert str(adem_reduce(parse_word("Sq2 Sq2"))) == "Sq3 Sq1"
    assert parse_monomial("z1^2*z2") == (2, 1)
    assert steenrod.format_monomial((2, 1)) == "z1^2*z2"
    assert steenrod.format_monomial(()) == "1"
    for bad in ("Sq", "Sqx", "Sq0 Sq-1"):
        with pytest.raises(ParseError):
            parse_word(bad)
    with pytest.raises(ParseError):
        parse_monomial("y3")


@pytest.mark.parametrize("d", range(25))
def test_basis_sizes_agree(d):
    assert len(admissible_basis(d)) == len(milnor_basis(d))


@pytest.mark.parametrize("d", range(1, 15))
def test_pairing_is_perfect(d):
    assert rank(pairing_matrix(d)) == len(admissible_basis(d))


@pytest.mark.parametrize("n", range(1, 13))
def test_sq_n_pairs_only_with_z1_power(n):
    assert [m for m in milnor_basis(n) if pairing((n,), m)] == [(n,)]


words = st.lists(st.integers(1, 6), min_size=1, max_size=4).map(tuple)


@given(words)
def test_adem_confluence(word):
    assert adem_reduce(word, "leftmost") == adem_reduce(word, "rightmost")


@given(words)
def test_reduction_is_admissible_and_homogeneous(word):
    r = adem_reduce(word)
    assert r.degree == sum(word)
    assert all(steenrod.is_admissible(w) for w in r.terms)


@given(words, words, words)
def test_multiplication_associative(a, b, c):
    x, y, z = adem_reduce(a), adem_reduce(b), adem_reduce(c)
    assert (x * y) * z == x * (y * z)


@given(words, words)
def test_multiplication_matches_concatenation(a, b):
    assert multiply(adem_reduce(a), adem_reduce(b)) == adem_reduce(a + b)


def _monomials_up_to(d):
    return [m for k in range(d + 1) for m in milnor_basis(k)]


@pytest.mark.parametrize("mono", _monomials_up_to(16))
def test_coassociativity(mono):
    left: set = set()
    right: set = set()
    for a, b in coproduct(mono).terms:
        for a1, a2 in coproduct(a).terms:
            left ^= {(a1, a2, b)}
        for b1, b2 in coproduct(b).terms:
            right ^= {(a, b1, b2)}
    assert left == right


@pytest.mark.parametrize("mono", _monomials_up_to(16))
def test_coproduct_homogeneous_and_counital(mono):
    d = milnor_degree(mono)
    terms = coproduct(mono).terms
    assert all(milnor_degree(a) + milnor_degree(b) == d for a, b in terms)
    assert (mono, ()) in terms and ((), mono) in terms


@given(st.sampled_from(_monomials_up_to(8)), st.sampled_from(_monomials_up_to(8)))
def test_coproduct_is_multiplicative(x, y):
    assert coproduct(steenrod.mono_mul(x, y)).terms == steenrod.tensor_mul(coproduct(x).terms, coproduct(y).terms)


@given(st.integers(0, 7), st.integers(0, 7))
def test_dualized_product_matches_multiply_on_basis(i, j):
    xs, ys = admissible_basis(i), admissible_basis(j)
    for a in xs:
        for b in ys:
            x, y = el(a), el(b)
            assert dualized_product(x, y, 16) == x * y
