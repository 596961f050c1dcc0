from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from foliate.exterior import (FramedMetric, MultiIndexForm, basis_tuples, contract, format_form, hodge_star,
                              hodge_star_unit, parse_form, permutation_sign, wedge)
from foliate.linalg import Matrix
from oracles import brute_permutation_sign
from strategies import positive_definite, small_q

N = 4


@st.composite
def forms(draw, k=None, n=N):
    k = draw(st.integers(0, n)) if k is None else k
    tuples = basis_tuples(n, k)
    chosen = draw(st.lists(st.sampled_from(tuples), max_size=3)) if tuples else []
    return MultiIndexForm(n, {t: draw(small_q) for t in chosen}), k


@pytest.mark.parametrize("n", range(1, 6))
def test_permutation_sign_matches_cycle_count(n):
    for p in permutations(range(1, n + 1)):
        assert permutation_sign(p) == brute_permutation_sign(p)


def test_basic_wedges():
    e1, e2 = MultiIndexForm.basis(3, 1), MultiIndexForm.basis(3, 2)
    assert wedge(e1, e2) == MultiIndexForm(3, {(1, 2): 1})
    assert wedge(e2, e1) == MultiIndexForm(3, {(1, 2): -1})
    assert wedge(e1, e1).is_zero()


@given(forms(), forms())
def test_graded_commutative(a, b):
    (x, k), (y, l) = a, b
    assert wedge(x, y) == (-1) ** (k * l) * wedge(y, x)


@given(forms(), forms(), forms())
def test_wedge_associative(a, b, c):
    x, y, z = a[0], b[0], c[0]
    assert wedge(wedge(x, y), z) == wedge(x, wedge(y, z))


@given(st.integers(1, N), forms(), forms())
def test_contraction_is_antiderivation(i, a, b):
    (x, k), (y, _) = a, b
    lhs = contract(i, wedge(x, y))
    rhs = wedge(contract(i, x), y) + (-1) ** k * wedge(x, contract(i, y))
    assert lhs == rhs


@given(st.integers(1, N), st.integers(1, N), forms())
def test_contractions_anticommute(i, j, a):
    x = a[0]
    assert contract(i, contract(j, x)) == -contract(j, contract(i, x))


@given(st.integers(0, N).flatmap(lambda k: st.tuples(forms(k), forms(k))))
def test_hodge_star_defining_identity(pair):
    (a, k), (b, _) = pair
    g = FramedMetric(Matrix.diag([Fraction(4), Fraction(1), Fraction(9, 4), Fraction(1)]))
    vol = g.volume_form()
    assert wedge(a, hodge_star(b, g)) == g.inner(a, b) * vol


@given(st.integers(0, N).flatmap(forms), positive_definite(N))
def test_unit_star_squares_to_sign_over_det(a, gram):
    x, k = a
    g = FramedMetric(gram)
    twice = hodge_star_unit(hodge_star_unit(x, g), g)
    assert twice == ((-1) ** (k * (N - k)) / g.det) * x


def test_reversed_orientation_negates_star():
    g = FramedMetric.orthonormal(4)
    x = MultiIndexForm.basis(4, 1, 3)
    assert hodge_star(x, g.reversed()) == -hodge_star(x, g)
    assert g.reversed().orientation_sign == -1


def test_non_square_det_has_no_rational_volume():
    g = FramedMetric(Matrix([[2, 0], [0, 1]]))
    with pytest.raises(ValueError):
        g.volume_form()
    # the unit star stays rational
    assert hodge_star_unit(MultiIndexForm.basis(2, 1), g) == MultiIndexForm(2, {(2,): Fraction(1, 2)})


def test_indefinite_metric_rejected():
    with pytest.raises(ValueError):
        FramedMetric(Matrix([[1, 2], [2, 1]]))


@given(forms())
def test_format_parse_round_trip(a):
    x, _ = a
    assert parse_form(format_form(x), N) == x


def test_parse_form_syntax():
    f = parse_form("1/2 * e{1,2} - e{3} + 2", 3)
    assert f == MultiIndexForm(3, {(1, 2): Fraction(1, 2), (3,): -1, (): 2})
    assert parse_form("e{2,1}", 3) == MultiIndexForm(3, {(1, 2): -1})
    with pytest.raises(ValueError):
        parse_form("e{4}", 3)
    with pytest.raises(ValueError):
        parse_form("x{1}", 3)
