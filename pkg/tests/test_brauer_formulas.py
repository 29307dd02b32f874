from fractions import Fraction

import pytest

from brauer_formulas import (
    FiberSample,
    GTriple,
    WLiftData,
    bockstein_of_g_triple,
    check_m_data,
    check_setup,
    check_triple,
    check_tu_closure,
    closure_plan,
    m_value,
    random_g,
    random_standard_setup,
    random_triple,
    standard_setup_from_s,
    surjectivity_cocycle,
    tudimred_witnesses,
    validate_setup,
    w_lift,
)
from coefficients import CIRCLE_ZERO, circle_reduce
from errors import NonInteger
from example_library import TORUS_GENERATOR
from twist import twist_from_support


@pytest.fixture
def rank_two(tetrahedron):
    return twist_from_support(tetrahedron, 2, [([0, 1, 2], [1, 2])])


@pytest.fixture
def setup(tetrahedron, rank_two, rng):
    return random_standard_setup(tetrahedron, rank_two, rng)


def test_random_setup_matches_twist(setup, rank_two):
    assert len(setup.samples) == 8
    assert check_setup(setup, rank_two).passed
    index = next(i for i, s in enumerate(setup.samples) if s.carrier == (0, 1, 2))
    assert setup.euler(index, 0, 1, 2) == (1, 2)
    assert setup.euler(index, 1, 0, 2) == (-1, -2)


def test_global_s_cannot_realize_a_nontrivial_class(tetrahedron, hopf_twist):
    pairs = {(0, 1): [0], (0, 2): [0], (1, 2): [1], (0, 3): [0], (1, 3): [0], (2, 3): [0]}
    setup = standard_setup_from_s(tetrahedron, 1, pairs)
    report = check_setup(setup, hopf_twist)
    assert not report.passed
    assert {tuple(sorted(f["indices"])) for f in report.failures} == {(1, 2, 3)}


def test_fractional_euler_values_are_rejected(tetrahedron):
    pairs = {(0, 1): ["1/2"], (0, 2): [0], (1, 2): [0], (0, 3): [0], (1, 3): [0], (2, 3): [0]}
    setup = standard_setup_from_s(tetrahedron, 1, pairs)
    with pytest.raises(NonInteger):
        validate_setup(setup)
    assert not check_setup(setup).passed


def test_lifts_vanish_at_sections(setup):
    wdata = WLiftData(seed=11)
    for index, sample in enumerate(setup.samples):
        for vertex in sample.carrier:
            section = setup.section(index, vertex)
            assert w_lift(setup, wdata, vertex, section) == (0, 0)
            k = (2, -1)
            assert m_value(setup, wdata, vertex, vertex, k, section) == k


def test_lift_offsets_are_deterministic(setup):
    x = FiberSample(0, (Fraction(1, 3), Fraction(3, 4)))
    first = WLiftData(seed=3).offset(setup, setup.samples[0].carrier[0], x)
    assert first == WLiftData(seed=3).offset(setup, setup.samples[0].carrier[0], x)
    assert WLiftData().offset(setup, setup.samples[0].carrier[0], x) == (0, 0)


def test_fiber_samples_are_reduced():
    x = FiberSample(0, (Fraction(5, 4), Fraction(-1, 3)))
    assert x.xi == (Fraction(1, 4), Fraction(2, 3))
    assert x.shifted((Fraction(1, 2), 1)).xi == (Fraction(3, 4), Fraction(2, 3))


def test_m_data_laws(setup, rng):
    assert check_m_data(setup, WLiftData(seed=5), rng, 1000).passed


def test_random_triples_are_cocycles(setup, rank_two, rng):
    triple = random_triple(setup, rank_two, rng)
    assert check_triple(triple, setup, rng).passed


class _BrokenTriple(GTriple):
    def phi20(self, sample, a, b, c):
        return super().phi20(sample, a, b, c) + circle_reduce(Fraction(a, 2))


def test_broken_triple_is_detected(setup, rng):
    triple = _BrokenTriple(setup, random_g(setup, rng))
    report = check_triple(triple, setup, rng)
    assert not report.passed
    assert {f["identity"] for f in report.failures} == {"d phi20 = phi11(F) + g u2 C"}


def test_surjectivity_cocycle_is_closed(tetrahedron, rank_two, rng):
    for round_ in range(50):
        setup = random_standard_setup(tetrahedron, rank_two, rng)
        triple = random_triple(setup, rank_two, rng)
        phi = surjectivity_cocycle(triple, setup, WLiftData(seed=round_))
        report = check_tu_closure(phi, closure_plan(setup, rng, 200))
        assert report.passed, report.failures[:3]
        assert report.checked == 200


def test_tudimred_witnesses(setup, rank_two, rng):
    triple = random_triple(setup, rank_two, rng)
    tau10, tau01, report = tudimred_witnesses(triple, setup, WLiftData(seed=2), rng, 40)
    assert report.passed
    assert report.checked == 120
    assert tau10(0, 0, 1) == CIRCLE_ZERO
    assert tau01(0, 0, (0, 0)) == -triple.phi20(0, 0, 0, 0)


@pytest.mark.parametrize("base", ["tetrahedron", "torus"])
def test_lift_independence(base, request, rng):
    nerve = request.getfixturevalue(base)
    support = [([0, 1, 2], [1, 2])] if base == "tetrahedron" else [(TORUS_GENERATOR, [1, 2])]
    setup = random_standard_setup(nerve, twist_from_support(nerve, 2, support), rng)
    for _ in range(20):
        result = bockstein_of_g_triple(setup, random_g(setup, rng))
        assert result.all_zero
        assert result.nonzero() == []
        assert len(result.components) == len(setup.samples)
