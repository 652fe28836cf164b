import math

import mpmath
import numpy as np
import pytest

from classical_transform import (TransformFamily, analytic_solution_cl, displacement, eval_a, eval_a_ddot,
                                 eval_a_dot, generated_force_H, integrate_classical)
from deformation import INFINITE_TAU
from dynamics import ForceField, Treatment
from errors import InvalidArgumentError, UnsupportedOriginError


@pytest.fixture
def cubic_tf():
    return TransformFamily(a1=0.5, v1=-1.0, b1=0.25, c1=0.1, a2=-2.0, v2=0.3, b2=-0.4, c2=0.05)


# --- a(t) ---

@pytest.mark.parametrize("tau", [0.5, 10.0, INFINITE_TAU])
def test_a_at_origin_is_offset(cubic_tf, tau):
    tf = TransformFamily(**{**cubic_tf.to_record(), "tau": tau})
    assert eval_a(tf, 1, 0.0) == pytest.approx(0.5, rel=1e-15)
    assert eval_a(tf, 2, 0.0) == pytest.approx(-2.0, rel=1e-15)


def test_a_limit_polynomial():
    tf = TransformFamily(a1=1.0, v1=2.0, b1=3.0, c1=4.0)
    assert eval_a(tf, 1, 1.0) == 10.0
    assert eval_a(tf, 2, 1.0) == 0.0


def test_a_finite_tau_example():
    tf = TransformFamily(b1=1.0, tau=10.0)
    with mpmath.workdps(40):
        expected = float(200 * (mpmath.cosh(mpmath.mpf("0.1")) - 1))
    assert eval_a(tf, 1, 1.0) == pytest.approx(expected, rel=1e-13)


def test_a_finite_tau_closed_form():
    """a(t) = a cosh u + v tau sinh u + 2 b tau^2 (cosh u - 1) + 6 c tau^3 (sinh u - u)."""
    a, v, b, c, T, t = 0.5, -1.0, 0.25, 0.1, 3.0, 2.2
    tf = TransformFamily(a1=a, v1=v, b1=b, c1=c, tau=T)
    with mpmath.workdps(40):
        u = mpmath.mpf(t) / T
        expected = float(a * mpmath.cosh(u) + v * T * mpmath.sinh(u)
                         + 2 * b * T ** 2 * (mpmath.cosh(u) - 1) + 6 * c * T ** 3 * (mpmath.sinh(u) - u))
    assert eval_a(tf, 1, t) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("tau", [0.8, 5.0, INFINITE_TAU])
def test_a_ddot_matches_finite_differences(cubic_tf, tau):
    tf = TransformFamily(**{**cubic_tf.to_record(), "tau": tau})
    h = 1e-5
    for axis in (1, 2):
        for t in (0.3, 1.0, 2.5):
            fd = (eval_a(tf, axis, t + h) - 2.0 * eval_a(tf, axis, t) + eval_a(tf, axis, t - h)) / h ** 2
            assert eval_a_ddot(tf, axis, t) == pytest.approx(fd, rel=1e-4, abs=1e-4)
            fd_dot = (eval_a(tf, axis, t + h) - eval_a(tf, axis, t - h)) / (2.0 * h)
            assert eval_a_dot(tf, axis, t) == pytest.approx(fd_dot, rel=1e-8, abs=1e-9)


def test_a_ddot_limit_is_linear():
    tf = TransformFamily(b2=0.5, c2=-1.5)
    t = np.linspace(0.0, 10.0, 6)
    np.testing.assert_array_equal(eval_a_ddot(tf, 2, t), 2.0 * 0.5 + 6.0 * -1.5 * t)


@pytest.mark.parametrize("tau", [1e80, 1e200])
def test_huge_tau_transform_equals_polynomial(cubic_tf, tau):
    finite = TransformFamily(**{**cubic_tf.to_record(), "tau": tau})
    t = np.array([0.0, 0.5, 3.0, 9.0])
    for func in (eval_a, eval_a_dot, eval_a_ddot):
        for axis in (1, 2):
            # termos a/tau^2 e v t/tau^2 ficam abaixo de 1e-100
            np.testing.assert_allclose(func(finite, axis, t), func(cubic_tf, axis, t), rtol=1e-14, atol=1e-100)


def test_a_ddot_only_velocity_term():
    tf = TransformFamily(v1=2.0, tau=4.0)
    assert eval_a_ddot(tf, 1, 3.0) == pytest.approx((2.0 / 4.0) * math.sinh(0.75), rel=1e-14)


def test_zero_transform_has_no_acceleration():
    tf = TransformFamily(tau=2.0)
    np.testing.assert_array_equal(eval_a_ddot(tf, 1, np.linspace(0.0, 5.0, 5)), 0.0)


@pytest.mark.parametrize("coefficient", ["a1", "v1", "b1", "c1"])
def test_transform_contracts_to_polynomial(coefficient):
    t = 1.0
    limit = eval_a(TransformFamily(**{coefficient: 1.0}), 1, t)
    gap = lambda tau: abs(eval_a(TransformFamily(**{coefficient: 1.0}, tau=tau), 1, t) - limit)
    assert 3.5 <= gap(100.0) / gap(200.0) <= 4.5


def test_invalid_axis_and_coefficients():
    with pytest.raises(InvalidArgumentError):
        eval_a(TransformFamily(), 3, 0.0)
    with pytest.raises(InvalidArgumentError):
        TransformFamily(b1=float("nan"))
    with pytest.raises(InvalidArgumentError):
        TransformFamily(tau=-2.0)


def test_transform_record_round_trip(cubic_tf):
    record = cubic_tf.to_record()
    assert record["tau"] == "inf"
    assert TransformFamily.from_record(record) == cubic_tf
    assert TransformFamily.from_record({"c2": 1.0}) == TransformFamily(c2=1.0)


def test_displacement_has_no_third_component(cubic_tf):
    d = displacement(cubic_tf, np.array([0.0, 1.0, 2.0]))
    assert d.shape == (3, 3)
    np.testing.assert_array_equal(d[:, 2], 0.0)


# --- força gerada H ---

@pytest.mark.parametrize("tf", [TransformFamily(a1=1.5, v1=-0.5, a2=-2.0, v2=0.75),
                                TransformFamily(a1=1.5, v1=-0.5)])
def test_galilean_transform_leaves_force_unchanged(force, tf):
    H = generated_force_H(np.linspace(0.0, 10.0, 101), tf, force, 2.0)
    np.testing.assert_array_equal(H, np.tile(force.F, (101, 1)))


def test_h_without_force_from_b1():
    H = generated_force_H(4.2, TransformFamily(b1=0.75), ForceField([0, 0, 0]), 2.0)
    np.testing.assert_array_equal(H, [2.0 * 2.0 * 0.75, 0.0, 0.0])


def test_h_without_force_from_c2():
    t = np.array([0.0, 1.0, 3.0])
    H = generated_force_H(t, TransformFamily(c2=0.5), ForceField([0, 0, 0]), 3.0)
    np.testing.assert_allclose(H[:, 1], 6.0 * 3.0 * 0.5 * t, rtol=1e-15)
    np.testing.assert_array_equal(H[:, 0], 0.0)


def test_h_finite_tau_galilean_is_not_exact(force):
    # com tau finito os termos a e v também aceleram
    H = generated_force_H(2.0, TransformFamily(a1=1.0, v1=1.0, tau=5.0), force, 1.0)
    assert H[0] != force.F[0]
    assert H[2] == force.F[2]


# --- soluções ---

def test_analytic_zero_transform_is_uniform_motion(make_scenario):
    scenario = make_scenario()
    t = np.linspace(0.0, 10.0, 9)
    expected = scenario.force.F * t[:, None] ** 2 / 2.0 + scenario.v0 * t[:, None] + scenario.x0
    np.testing.assert_allclose(analytic_solution_cl(t, TransformFamily(), scenario), expected, rtol=1e-15)


def test_analytic_limit_cubic_coefficients(make_scenario, cubic_tf):
    scenario = make_scenario(mass=2.0)
    t = 1.7
    x = analytic_solution_cl(t, cubic_tf, scenario)
    F, v0, x0 = scenario.force.F, scenario.v0, scenario.x0
    expected_1 = np.polyval([cubic_tf.c1, F[0] / 4.0 + cubic_tf.b1, v0[0] + cubic_tf.v1, x0[0] + cubic_tf.a1], t)
    expected_2 = np.polyval([cubic_tf.c2, F[1] / 4.0 + cubic_tf.b2, v0[1] + cubic_tf.v2, x0[1] + cubic_tf.a2], t)
    assert x[0] == pytest.approx(expected_1, rel=1e-14)
    assert x[1] == pytest.approx(expected_2, rel=1e-14)
    assert x[2] == pytest.approx(F[2] * t ** 2 / 4.0 + v0[2] * t + x0[2], rel=1e-14)


def test_analytic_at_origin_is_offset(make_scenario, cubic_tf):
    scenario = make_scenario()
    np.testing.assert_allclose(analytic_solution_cl(0.0, cubic_tf, scenario),
                               scenario.x0 + np.array([0.5, -2.0, 0.0]), rtol=1e-15)


def test_analytic_requires_zero_origin(make_scenario, cubic_tf):
    with pytest.raises(UnsupportedOriginError):
        analytic_solution_cl(2.0, cubic_tf, make_scenario(t_start=1.0))


@pytest.mark.parametrize("tau", [2.0, INFINITE_TAU])
def test_integrate_classical_matches_analytic(make_scenario, cubic_tf, tau):
    tf = TransformFamily(**{**cubic_tf.to_record(), "tau": tau})
    trajectory = integrate_classical(make_scenario(), tf)
    exact = analytic_solution_cl(trajectory.t, tf, trajectory.scenario)
    assert trajectory.treatment is Treatment.CLASSICAL
    assert float(np.max(np.abs(trajectory.x - exact) / (1.0 + np.abs(exact)))) <= 1e-8


def test_integrate_classical_momentum_follows_h(make_scenario):
    tf = TransformFamily(b1=0.5)
    scenario = make_scenario(step=1e-2)
    trajectory = integrate_classical(scenario, tf)
    # ṗ1 = F1 + 2 m b1 (constante)
    expected = scenario.initial.p[0] + (scenario.force.F[0] + 2.0 * scenario.mass * 0.5) * trajectory.t
    np.testing.assert_allclose(trajectory.p[:, 0], expected, atol=1e-11)


def test_integrate_classical_starts_in_transformed_frame(make_scenario, cubic_tf):
    scenario = make_scenario()
    trajectory = integrate_classical(scenario, cubic_tf)
    first = trajectory.sample(0)
    # o cenário guardado continua o de entrada; só a amostra inicial é deslocada
    assert trajectory.scenario is scenario
    np.testing.assert_allclose(first.x, scenario.x0 + np.array([0.5, -2.0, 0.0]), rtol=1e-15)
    np.testing.assert_allclose(first.p, scenario.mass * (scenario.v0 + np.array([-1.0, 0.3, 0.0])), rtol=1e-15)
    assert not np.allclose(first.x, scenario.initial.x)
