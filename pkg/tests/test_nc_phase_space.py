import math

import numpy as np
import pytest

from deformation import INFINITE_TAU, DeformationFamily, FamilyId
from errors import InvalidArgumentError, NumericalFailureError
from nc_phase_space import (PhaseState, SampleBox, bopp_map, bopp_observable, bopp_vector, bracket_matrix,
                            coordinate, jacobi_residual, jacobi_suite, poisson_bracket, random_samples,
                            verify_bracket_relations)


@pytest.fixture
def points():
    return random_samples(SampleBox(), 20, seed=7)


# --- PhaseState ---

def test_phase_state_validates_and_serializes():
    state = PhaseState(1.5, [1, 2, 3], [4, 5, 6])
    assert state.to_record() == {"t": 1.5, "x1": 1.0, "x2": 2.0, "x3": 3.0, "p1": 4.0, "p2": 5.0, "p3": 6.0}
    assert PhaseState.from_array(1.5, state.as_array()) == state
    with pytest.raises(InvalidArgumentError):
        PhaseState(float("nan"), [0, 0, 0], [0, 0, 0])
    with pytest.raises(InvalidArgumentError):
        PhaseState(0.0, [0, 0], [0, 0, 0])


# --- Bopp ---

def test_bopp_with_zero_kappa_is_identity(points):
    family = DeformationFamily(FamilyId.K4, 0.0, 2.0)
    for state in points:
        nc = bopp_map(state, family)
        np.testing.assert_array_equal(nc.xbar, state.x)
        np.testing.assert_array_equal(nc.pbar, state.p)


def test_bopp_k2_example():
    family = DeformationFamily(FamilyId.K2, 1.0, INFINITE_TAU)
    nc = bopp_map(PhaseState(2.0, [0, 0, 0], [1, 1, 0]), family)
    np.testing.assert_array_equal(nc.xbar, [-1.0, 1.0, 0.0])


def test_bopp_ignores_third_momentum():
    family = DeformationFamily(FamilyId.K6, 3.0, 1.5)
    state = PhaseState(0.8, [1.0, -2.0, 0.5], [0.0, 0.0, 4.0])
    np.testing.assert_array_equal(bopp_map(state, family).xbar, state.x)


def test_bopp_without_family_is_identity():
    state = PhaseState(0.8, [1.0, -2.0, 0.5], [1.0, 2.0, 4.0])
    np.testing.assert_array_equal(bopp_map(state, None).as_array(), state.as_array())


def test_unknown_observable_names():
    with pytest.raises(InvalidArgumentError):
        coordinate("x4")
    with pytest.raises(InvalidArgumentError):
        bopp_observable("xbar9", None)


# --- parênteses ---

def test_canonical_brackets(points):
    x1, x2, p1 = coordinate("x1"), coordinate("x2"), coordinate("p1")
    for point in points:
        assert poisson_bracket(x1, p1, point) == pytest.approx(1.0, abs=1e-8)
        assert poisson_bracket(x1, x2, point) == pytest.approx(0.0, abs=1e-8)
        assert poisson_bracket(p1, x1, point) == pytest.approx(-1.0, abs=1e-8)


def test_k3_bracket_is_f():
    family = DeformationFamily(FamilyId.K3, 1.0, 1.0)
    point = PhaseState(0.7, [0.3, -1.2, 2.0], [1.5, -0.5, 0.25])
    value = poisson_bracket(bopp_observable("xbar1", family), bopp_observable("xbar2", family), point)
    assert value == pytest.approx(math.sinh(0.7) ** 2, abs=1e-6)


def test_bracket_matrix_is_antisymmetric(points):
    family = DeformationFamily(FamilyId.K5, 0.5, 2.0)
    P = bracket_matrix(bopp_vector(family), points[0])
    np.testing.assert_allclose(P, -P.T, atol=1e-12)


def test_non_finite_partial_reports_coordinate_index():
    point = PhaseState(0.0, [0.0, 0.0, 0.0], [0.0, 0.0, 0.0])

    def blows_up_in_p2(state):
        if state.p[1] != 0.0:
            return float("inf")
        return 0.0

    with pytest.raises(NumericalFailureError) as info:
        poisson_bracket(coordinate("x1"), blows_up_in_p2, point)
    assert info.value.index == 4


def test_overflowing_family_reports_index():
    # tau minúsculo: f(t) estoura em qualquer ponto da amostra
    family = DeformationFamily(FamilyId.K1, 1.0, 1e-3)
    point = PhaseState(5.0, [1.0, 1.0, 1.0], [1.0, 1.0, 1.0])
    with pytest.raises(NumericalFailureError) as info:
        bracket_matrix(bopp_vector(family), point)
    assert info.value.index == 0


# --- verificação das relações ---

def test_zero_kappa_relations_are_canonical(points):
    report = verify_bracket_relations(DeformationFamily(FamilyId.K2, 0.0, 3.0), points)
    for relation in report.relations.values():
        assert relation.max_residual <= 1e-8


def test_k1_relations_on_long_box():
    box = SampleBox(t_range=(0.0, 10.0))
    family = DeformationFamily(FamilyId.K1, 0.3, INFINITE_TAU)
    report = verify_bracket_relations(family, random_samples(box, 100, seed=1), box)
    assert report.relations["{xbar1,xbar2}-f"].max_residual <= 1e-6
    assert report.sample_count == 100


@pytest.mark.parametrize("tau", [1.0, 10.0, INFINITE_TAU])
def test_k6_momenta_undeformed(points, tau):
    report = verify_bracket_relations(DeformationFamily(FamilyId.K6, 0.5, tau), points)
    assert report.relations["{xbar_i,pbar_j}-delta"].max_residual <= 1e-6
    assert report.relations["{pbar_i,pbar_j}"].max_residual <= 1e-8


def test_report_records_carry_argmax_point(points):
    family = DeformationFamily(FamilyId.K3, 0.5, 2.0)
    report = verify_bracket_relations(family, points, SampleBox())
    records = report.to_records()
    assert len(records) == 5
    assert {"relation", "max_residual", "family", "tau", "t", "x1", "box"} <= set(records[0])


def test_verify_requires_samples():
    with pytest.raises(InvalidArgumentError):
        verify_bracket_relations(DeformationFamily(FamilyId.K1, 0.3), [])


def test_random_samples_are_reproducible():
    a = random_samples(SampleBox(), 5, seed=3)
    b = random_samples(SampleBox(), 5, seed=3)
    assert a == b
    assert all(0.0 <= s.t <= 2.0 for s in a)
    with pytest.raises(InvalidArgumentError):
        random_samples(SampleBox(), 0)


# --- Jacobi ---

@pytest.mark.parametrize("fid", list(FamilyId))
def test_jacobi_bar_positions(points, fid):
    family = DeformationFamily(fid, 0.5, 2.0)
    for point in points[:5]:
        assert jacobi_residual(family, ("xbar1", "xbar2", "xbar3"), point) <= 1e-4


def test_jacobi_canonical_triple():
    family = DeformationFamily(FamilyId.K3, 0.0, 2.0)
    point = PhaseState(1.0, [0.5, 1.0, -1.0], [2.0, -3.0, 0.5])
    assert jacobi_residual(family, ("xbar1", "pbar1", "pbar2"), point) <= 1e-4


def test_jacobi_k4_mixed_triple(points):
    family = DeformationFamily(FamilyId.K4, 0.5, 1.5)
    for point in points[:5]:
        assert jacobi_residual(family, ("xbar1", "xbar2", "pbar3"), point) <= 1e-4


def test_jacobi_accepts_observables():
    x1 = coordinate("x1")
    point = PhaseState(0.0, [1.0, 2.0, 3.0], [0.1, 0.2, 0.3])
    assert jacobi_residual(None, (x1, "p1", "x2"), point) <= 1e-4
    with pytest.raises(InvalidArgumentError):
        jacobi_residual(None, ("x1", "p1"), point)


@pytest.mark.parametrize("tau", [1.0, INFINITE_TAU])
def test_jacobi_suite_all_triples(points, tau):
    residual = jacobi_suite(DeformationFamily(FamilyId.K4, 0.5, tau), points)
    assert residual.max_residual <= 1e-4
    assert residual.argmax_point is not None
