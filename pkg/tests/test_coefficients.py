from fractions import Fraction

import pytest

from coefficients import (
    CIRCLE_ZERO,
    CircleScalar,
    UpperTriValue,
    VectorValue,
    circle_reduce,
    coerce_scalar,
    format_scalar,
    mackey_antisym,
    mackey_bilinear,
    pair_vector,
    parse_scalar,
    rep0,
    scalar_kind_of,
    to_integer,
    upper_pairs,
)
from errors import LengthMismatch, NonInteger


def test_circle_scalars_reduce_mod_one():
    assert CircleScalar(Fraction(5, 4)).value == Fraction(1, 4)
    assert circle_reduce(Fraction(-1, 4)).value == Fraction(3, 4)
    assert circle_reduce(Fraction(1, 3)) + circle_reduce(Fraction(2, 3)) == CIRCLE_ZERO
    assert not circle_reduce(7)
    assert circle_reduce(Fraction(1, 6)) * 4 == circle_reduce(Fraction(2, 3))
    assert circle_reduce(Fraction(3, 4)).order == 4


def test_rep0():
    assert rep0(Fraction(-1, 3)) == Fraction(2, 3)
    assert rep0(circle_reduce(Fraction(5, 2))) == Fraction(1, 2)


def test_to_integer_is_exact():
    assert to_integer(Fraction(6, 3)) == 2
    with pytest.raises(NonInteger) as excinfo:
        to_integer(Fraction(3, 2))
    assert excinfo.value.value == Fraction(3, 2)
    with pytest.raises(NonInteger):
        coerce_scalar("Z", Fraction(1, 2))


def test_integer_coercion_rejects_fractional_values():
    assert coerce_scalar("Z", 2.0) == 2
    assert coerce_scalar("Z", "7") == 7
    with pytest.raises(NonInteger) as excinfo:
        coerce_scalar("Z", 1.5)
    assert excinfo.value.value == 1.5
    with pytest.raises(NonInteger):
        VectorValue.of([1, 2.5])


def test_scalar_kinds():
    assert scalar_kind_of(3) == "Z"
    assert scalar_kind_of(Fraction(1, 2)) == "Q"
    assert scalar_kind_of(CIRCLE_ZERO) == "QZ"
    with pytest.raises(TypeError):
        scalar_kind_of("x")


def test_vector_arithmetic():
    u = VectorValue.of([1, 2])
    v = VectorValue.unit(2, 1)
    assert list(u + v) == [1, 3]
    assert list(-u) == [-1, -2]
    assert not VectorValue.zero(3)
    with pytest.raises(LengthMismatch):
        u + VectorValue.zero(3)


def test_upper_triangular_storage_order():
    assert upper_pairs(3) == [(0, 1), (0, 2), (1, 2)]
    m = UpperTriValue.of(3, [1, 2, 3])
    assert m.get(0, 2) == 2
    assert m.get(1, 2) == 3
    assert UpperTriValue.from_mapping(3, {(1, 2): 5}).entries == (0, 0, 5)
    with pytest.raises(LengthMismatch):
        UpperTriValue.of(3, [1, 2])


def test_pairings():
    m = UpperTriValue.of(2, [1])
    assert mackey_bilinear(m, (2, 0), (0, 3)) == 6
    assert mackey_bilinear(m, (0, 3), (2, 0)) == 0
    assert mackey_antisym(m, (1, 4), (1, 4)) == 0
    assert mackey_antisym(m, (2, 0), (0, 3)) == 6
    half = UpperTriValue.of(2, [Fraction(1, 2)], "QZ")
    assert mackey_bilinear(half, (1, 1), (1, 1)) == circle_reduce(Fraction(1, 2))
    assert pair_vector(VectorValue.of([1, 2]), (3, 4)) == 11


def test_json_scalars():
    assert format_scalar(Fraction(1, 2)) == "1/2"
    assert format_scalar(Fraction(4, 2)) == 2
    assert format_scalar(circle_reduce(Fraction(5, 3))) == "2/3 mod 1"
    assert parse_scalar("2/3 mod 1") == circle_reduce(Fraction(2, 3))
    assert parse_scalar("4/2") == 2
    assert parse_scalar("1/2", "Q") == Fraction(1, 2)
