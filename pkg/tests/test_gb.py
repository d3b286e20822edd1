import itertools

import sympy

from uqso.gb import GroebnerBasis, leading
from uqso.scalars import RationalFunctionDomain
from uqso.uqsl import serre_basis

DOM = RationalFunctionDomain()


def normal_word_counts(gb: GroebnerBasis, letters: int, max_len: int) -> list[int]:
    return [sum(gb.is_normal_word(w) for w in itertools.product(range(letters), repeat=d))
            for d in range(max_len + 1)]


def hilbert_coefficients(root_heights: list[int], max_len: int) -> list[int]:
    # PBW: one polynomial generator per positive root, graded by height
    t = sympy.symbols("t")
    series = sympy.prod([1 / (1 - t ** h) for h in root_heights])
    poly = sympy.series(series, t, 0, max_len + 1).removeO()
    return [int(poly.coeff(t, d)) for d in range(max_len + 1)]


def test_commutative_polynomial_ring():
    one = DOM.one()
    gb = GroebnerBasis(DOM).complete([{(1, 0): one, (0, 1): -one}], 6)
    assert gb.leading_words == [(1, 0)]
    assert normal_word_counts(gb, 2, 5) == [1, 2, 3, 4, 5, 6]
    assert gb.reduce({(1, 1, 0): one}) == {(0, 1, 1): one}


def test_completion_adds_overlap_consequence():
    # x y = y,  y x = x  forces x^2 = x and y^2 = y in the ideal
    one = DOM.one()
    gb = GroebnerBasis(DOM).complete([{(0, 1): one, (1,): -one}, {(1, 0): one, (0,): -one}], 4)
    assert gb.reduce({(0, 0): one, (0,): -one}) == {}
    assert gb.reduce({(1, 1): one, (1,): -one}) == {}


def test_serre_normal_words_match_pbw_sl3():
    gb = serre_basis(3, 6)
    assert normal_word_counts(gb, 2, 6) == hilbert_coefficients([1, 1, 2], 6)


def test_serre_normal_words_match_pbw_sl4():
    gb = serre_basis(4, 5)
    assert normal_word_counts(gb, 3, 5) == hilbert_coefficients([1, 1, 1, 2, 2, 3], 5)


def test_reduction_is_idempotent_and_kills_relations():
    gb = serre_basis(3, 4)
    v = DOM.v()
    two = v ** 2 + v ** -2
    rel = {(0, 0, 1): DOM.one(), (0, 1, 0): -two, (1, 0, 0): DOM.one()}
    assert gb.reduce(rel) == {}
    f = {(1, 0, 0, 1): DOM.one(), (1, 1, 0): v}
    r = gb.reduce(f)
    assert gb.reduce(r) == r
    assert all(gb.is_normal_word(w) for w in r)
    assert leading(f) == (1, 0, 0, 1)
