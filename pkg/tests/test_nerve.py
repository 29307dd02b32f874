from fractions import Fraction

import pytest

from errors import DegreeMismatch, EmptyInput, LengthMismatch, NotInNerve
from nerve import (
    Cochain,
    alternating_value,
    build_nerve,
    cech_differential,
    enumerate_simplices,
    permutation_sign,
    zero_cochain,
)


def test_boundary_tetrahedron_counts(tetrahedron):
    assert tetrahedron.counts() == [4, 6, 4]
    assert tetrahedron.dimension == 2
    assert len(tetrahedron.facets()) == 4


def test_faces_are_closed_and_sorted():
    nerve = build_nerve([[3, 1, 2]])
    assert enumerate_simplices(nerve, 1) == [(1, 2), (1, 3), (2, 3)]
    assert (1, 2, 3) in nerve
    assert (3, 2) not in nerve


def test_components_follow_edges():
    nerve = build_nerve([[0, 1], [2, 3], [4]])
    assert nerve.component_count == 3
    assert nerve.component_of(1) == nerve.component_of(0) == 0
    assert nerve.component_of(3) == 1
    assert nerve.component_of(4) == 2


def test_empty_input_rejected():
    with pytest.raises(EmptyInput):
        build_nerve([])
    with pytest.raises(ValueError):
        build_nerve([[0, -1]])


def test_cochain_drops_zeros_and_checks_support(circle):
    c = Cochain(circle, 1, 0, {(0, 1): 3, (1, 2): 0})
    assert c.values == {(0, 1): 3}
    assert c[(0, 2)] == 0
    with pytest.raises(NotInNerve):
        Cochain(circle, 1, 0, {(0, 5): 1})
    with pytest.raises(DegreeMismatch):
        Cochain(circle, 1, 0, {(0,): 1})


def test_cech_differential_squares_to_zero(tetrahedron):
    c = Cochain.from_function(tetrahedron, 0, 0, lambda s: s[0] * s[0] + 1)
    dc = cech_differential(c)
    assert dc[(0, 2)] == c[(2,)] - c[(0,)]
    assert not cech_differential(dc)


def test_cech_differential_over_rationals(circle):
    c = Cochain(circle, 0, Fraction(0), {(1,): Fraction(1, 2)})
    assert cech_differential(c)[(0, 1)] == Fraction(1, 2)
    assert cech_differential(c)[(1, 2)] == Fraction(-1, 2)


def test_alternating_extension(tetrahedron):
    c = Cochain(tetrahedron, 1, 0, {(0, 1): 5})
    assert alternating_value(c, (1, 0)) == -5
    assert alternating_value(c, (0, 1)) == 5
    assert alternating_value(c, (2, 2)) == 0
    assert alternating_value(zero_cochain(tetrahedron, 2, 0), (2, 0, 1)) == 0
    with pytest.raises(NotInNerve):
        alternating_value(c, (0, 7))
    with pytest.raises(LengthMismatch):
        alternating_value(c, (0, 1, 2))
    with pytest.raises(LengthMismatch):
        alternating_value(c, (0,))


@pytest.mark.parametrize("values, sign", [((0, 1, 2), 1), ((1, 0, 2), -1), ((2, 1, 0), -1), ((2, 0, 1), 1)])
def test_permutation_sign(values, sign):
    assert permutation_sign(values) == sign
