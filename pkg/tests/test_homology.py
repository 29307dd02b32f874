from fractions import Fraction

import numpy as np
import pytest

from coefficients import CIRCLE_ZERO, circle_reduce
from dimred_complex import assemble_complex, cech_complex
from errors import DegreeOutOfRange, NotACocycle, NotCoboundary
from homology import (
    CheckReport,
    CohomologyGroup,
    IntegerMatrix,
    bockstein,
    canonical_factors,
    class_order,
    coboundary_witness,
    cohomology_group,
    image_basis,
    is_coboundary,
    kernel_basis,
    lattice_equal,
    lattice_quotient,
    mod_n_cohomology,
    rational_rank,
    smith_normal_form,
    solve_integer,
    torsion_witnesses,
    uct_mod_n,
)
from twist import twist_from_support


def test_smith_normal_form_small():
    A = [[2, 4], [6, 8]]
    snf = smith_normal_form(A)
    assert snf.diagonal == (2, 4)
    assert (snf.U.dot(np.asarray(A, dtype=object)).dot(snf.V) == snf.S).all()
    assert (snf.U.dot(snf.U_inv) == np.identity(2, dtype=object)).all()


def test_smith_normal_form_is_deterministic():
    A = [[0, 3, 6], [9, 0, 12], [0, 0, 5]]
    first, second = smith_normal_form(A), smith_normal_form(A)
    assert first.diagonal == second.diagonal
    assert (first.U == second.U).all() and (first.V == second.V).all()


def test_kernel_and_image():
    A = IntegerMatrix.from_dense([[1, 1, 0], [0, 2, 2]])
    kernel = kernel_basis(A)
    assert kernel.shape == (3, 1)
    assert not A.to_dense().dot(kernel).any()
    assert lattice_equal(image_basis(A), [[1, 0], [0, 2]])
    assert rational_rank(A) == 2


def test_solve_integer_reports_residue():
    A = [[2, 0], [0, 3]]
    assert solve_integer(A, [4, 9]) == [2, 3]
    with pytest.raises(NotCoboundary) as excinfo:
        solve_integer(A, [1, 3])
    assert excinfo.value.residue


def test_lattice_quotient():
    L = [[1, 0], [0, 1]]
    K = [[2, 0], [0, 0]]
    quotient = lattice_quotient(L, K)
    assert quotient.free_rank == 1
    assert quotient.factors == (2,)
    assert canonical_factors([2, 3, 4]) == (2, 12)


def test_integer_matrix_ops():
    A = IntegerMatrix(2, 2, {(0, 1): 3, (1, 0): 0})
    assert A.entries == {(0, 1): 3}
    assert (A @ A).is_zero()
    assert A.transpose().entries == {(1, 0): 3}
    assert A.apply([Fraction(1, 3), 1], Fraction(0)) == [3, 0]
    with pytest.raises(IndexError):
        IntegerMatrix(1, 1, {(2, 0): 1})


def test_cech_cohomology_of_circle(circle):
    complex_ = cech_complex(circle, 2)
    assert cohomology_group(complex_, 0) == CohomologyGroup(1)
    assert cohomology_group(complex_, 1) == CohomologyGroup(1)
    assert cohomology_group(complex_, 1, "Q") == CohomologyGroup(1, (), "Q")
    assert str(cohomology_group(complex_, 1, "QZ")) == "(Q/Z)"
    with pytest.raises(DegreeOutOfRange):
        cohomology_group(complex_, 5)


def test_coboundary_witness(circle):
    complex_ = cech_complex(circle, 2)
    # basis of degree 1 is (0,1), (0,2), (1,2); d of vertex 1 is (1, 0, -1)
    x = coboundary_witness(complex_, 1, [1, 0, -1])
    assert complex_.differential(0).apply(x) == [1, 0, -1]
    assert not is_coboundary(complex_, 1, [1, 0, 0])
    half = circle_reduce(Fraction(1, 2))
    assert not is_coboundary(complex_, 1, [half, CIRCLE_ZERO, CIRCLE_ZERO], "QZ")
    assert is_coboundary(complex_, 1, [circle_reduce(1), CIRCLE_ZERO, CIRCLE_ZERO], "QZ")


def test_coboundary_witness_rejects_open_cochains(tetrahedron):
    complex_ = cech_complex(tetrahedron, 2)
    with pytest.raises(NotACocycle):
        coboundary_witness(complex_, 1, [1, 0, 0, 0, 0, 0])


@pytest.fixture
def lens3(tetrahedron):
    twist = twist_from_support(tetrahedron, 1, [([0, 1, 2], [3])])
    return assemble_complex(tetrahedron, twist, "Z", 4)


def test_lens_torsion_and_universal_coefficients(lens3):
    assert cohomology_group(lens3, 2) == CohomologyGroup(0, (3,))
    assert cohomology_group(lens3, 1, "QZ") == CohomologyGroup(0, (3,), "Q/Z")
    assert mod_n_cohomology(lens3, 2, 3) == uct_mod_n(lens3, 2, 3)
    assert mod_n_cohomology(lens3, 1, 3) == CohomologyGroup(0, (3,), "Z/3")
    assert mod_n_cohomology(lens3, 2, 2) == CohomologyGroup(0, (), "Z/2")


def test_bockstein_witness_has_exact_order(lens3):
    (witness,) = torsion_witnesses(lens3, 1)
    assert witness.order == 3
    assert class_order(lens3, 2, witness.target) == 3
    assert all(v.order in (1, 3) for v in witness.cocycle)


def test_check_report():
    report = CheckReport("demo")
    assert report.record(True, at=1)
    assert not report.record(False, at=circle_reduce(Fraction(1, 2)))
    other = CheckReport("demo")
    other.record(True)
    report.merge(other)
    data = report.to_json()
    assert data["checked"] == 3
    assert data["failure_count"] == 1
    assert data["failures"] == [{"at": "1/2 mod 1"}]
    assert not data["passed"]


@pytest.mark.parametrize("twisted", [False, True])
def test_bockstein_of_half_cocycle_vanishes(tetrahedron, twisted):
    support = [([0, 1, 2], [1])] if twisted else []
    complex_ = assemble_complex(tetrahedron, twist_from_support(tetrahedron, 1, support), "Z", 3)
    half = circle_reduce(Fraction(1, 2))
    z = [half if column == 0 and simplex in {(0, 1), (0, 2), (0, 3)} else CIRCLE_ZERO
         for column, simplex, _ in complex_.bases[1]]
    assert any(v != CIRCLE_ZERO for v in z)
    y = bockstein(complex_, 1, z)
    assert len(y) == complex_.dim(2)
    assert not any(y)
    assert is_coboundary(complex_, 2, y)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_bockstein_on_lens_space_has_order_p(tetrahedron, p):
    complex_ = assemble_complex(tetrahedron, twist_from_support(tetrahedron, 1, [([0, 1, 2], [p])]),
                                "Z", 3)
    (witness,) = torsion_witnesses(complex_, 1)
    y = bockstein(complex_, 1, list(witness.cocycle))
    assert any(y)
    assert not is_coboundary(complex_, 2, y)
    assert class_order(complex_, 2, y) == p


def test_bockstein_of_integer_cocycle_is_zero(lens3):
    z = [circle_reduce(1)] * lens3.dim(1)
    assert bockstein(lens3, 1, z) == [0] * lens3.dim(2)


def test_bockstein_rejects_open_cochains(lens3):
    z = [CIRCLE_ZERO] * lens3.dim(1)
    z[0] = circle_reduce(Fraction(1, 3))
    with pytest.raises(NotACocycle):
        bockstein(lens3, 1, z)
