import mpmath
import numpy as np
import pytest

from errors import InvalidArgumentError, NumericalFailureError
from utils import (as_vector3, central_second_difference, finite_output, fd_step, require_positive,
                   sinh_tail, sinh_tail_ratio, sinhc)


@pytest.mark.parametrize("x", [1e-8, 1e-4, 0.05, 0.5, 0.99, 1.0, 2.0, -0.03, -1.5])
@pytest.mark.parametrize("degree", [1, 3])
def test_sinh_tail_matches_high_precision(x, degree):
    with mpmath.workdps(50):
        exact = mpmath.sinh(x) - sum(mpmath.mpf(x) ** k / mpmath.factorial(k) for k in range(1, degree + 1, 2))
    value = float(sinh_tail(x, degree))
    assert value == pytest.approx(float(exact), rel=1e-12, abs=1e-300)


def test_sinh_tail_rejects_even_degree():
    with pytest.raises(InvalidArgumentError):
        sinh_tail(0.3, 2)


@pytest.mark.parametrize("x", [0.0, 1e-200, 1e-8, 0.3, -0.99, 1.0, 5.0, -40.0])
def test_sinhc_matches_high_precision(x):
    with mpmath.workdps(50):
        exact = mpmath.mpf(1) if x == 0.0 else mpmath.sinh(x) / mpmath.mpf(x)
    assert float(sinhc(x)) == pytest.approx(float(exact), rel=1e-14)


@pytest.mark.parametrize("x", [0.0, 1e-150, 1e-5, 0.5, -0.9, 1.0, 3.0, -12.0])
@pytest.mark.parametrize("degree", [1, 3])
def test_sinh_tail_ratio_matches_high_precision(x, degree):
    with mpmath.workdps(60):
        if x == 0.0:
            exact = 1 / mpmath.factorial(degree + 2)
        else:
            xm = mpmath.mpf(x)
            tail = mpmath.sinh(xm) - sum(xm ** k / mpmath.factorial(k) for k in range(1, degree + 1, 2))
            exact = tail / xm ** (degree + 2)
    assert float(sinh_tail_ratio(x, degree)) == pytest.approx(float(exact), rel=1e-13)


def test_ratio_helpers_accept_arrays_and_overflow_to_inf():
    x = np.array([0.0, 0.5, 2.0])
    np.testing.assert_allclose(sinhc(x)[1:], np.sinh(x[1:]) / x[1:], rtol=1e-14)
    assert sinhc(x)[0] == 1.0
    assert np.isinf(sinhc(1000.0))
    assert np.isinf(sinh_tail_ratio(1000.0, 1))
    with pytest.raises(InvalidArgumentError):
        sinh_tail_ratio(0.3, 2)


def test_as_vector3_is_read_only():
    vec = as_vector3([1, 2, 3])
    assert vec.dtype == float
    with pytest.raises(ValueError):
        vec[0] = 5.0


@pytest.mark.parametrize("values", [[1.0, 2.0], [1.0, 2.0, 3.0, 4.0], [1.0, float("nan"), 0.0],
                                    [float("inf"), 0.0, 0.0], ["a", "b", "c"]])
def test_as_vector3_rejects_bad_input(values):
    with pytest.raises(InvalidArgumentError):
        as_vector3(values, "force")


@pytest.mark.parametrize("value", [0.0, -1.0, float("inf"), float("nan"), "abc"])
def test_require_positive_rejects(value):
    with pytest.raises(InvalidArgumentError):
        require_positive(value, "mass")


def test_finite_output_unwraps_scalars_and_flags_overflow():
    assert isinstance(finite_output(np.asarray(2.0), "f"), float)
    with pytest.raises(NumericalFailureError):
        finite_output(np.array([1.0, np.inf]), "f")


def test_fd_step_scales_with_magnitude():
    assert fd_step(0.0) == pytest.approx(1e-6)
    assert fd_step(-99.0) == pytest.approx(1e-4)


def test_central_second_difference_of_parabola():
    h = 0.1
    t = np.arange(0.0, 1.0, h)
    np.testing.assert_allclose(central_second_difference(3.0 * t ** 2, h), 6.0, rtol=1e-9)
