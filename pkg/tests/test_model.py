import math

import pytest

from skcw.errors import DomainError
from skcw.model import (
    GaussianField,
    MixtureXi,
    TemperaturePoint,
    theta_eval,
    xi_derivs,
    xi_eval,
    xi_prime,
)


def test_xi_polynomial_values():
    xi = MixtureXi((0.7, 0.3))
    # 0.49 x^2 + 0.09 x^4 by hand
    assert xi_eval(xi, 0.0) == 0.0
    assert xi_eval(xi, 1.0) == pytest.approx(0.58, abs=1e-15)
    assert xi_eval(xi, 0.5) == pytest.approx(0.49 * 0.25 + 0.09 * 0.0625, abs=1e-15)
    assert xi_eval(xi, -0.5) == xi_eval(xi, 0.5)


def test_xi_derivatives_match_finite_differences():
    xi = MixtureXi((0.6, 0.2, 0.1))
    eps = 1e-6
    for x in (0.1, 0.3, 0.7, 0.95):
        d1, d2 = xi_derivs(xi, x)
        fd1 = (xi_eval(xi, x + eps) - xi_eval(xi, x - eps)) / (2 * eps)
        fd2 = (xi_eval(xi, x + eps) - 2 * xi_eval(xi, x) + xi_eval(xi, x - eps)) / eps**2
        assert d1 == pytest.approx(fd1, abs=1e-8)
        assert d2 == pytest.approx(fd2, abs=1e-4)


def test_coefficient_sign_is_irrelevant():
    assert xi_eval(MixtureXi((-0.7, 0.3)), 0.8) == xi_eval(MixtureXi((0.7, -0.3)), 0.8)


def test_theta_nonnegative_and_zero_at_origin():
    xi = MixtureXi((0.5, 0.4))
    assert theta_eval(xi, 0.0) == 0.0
    for q in (0.1, 0.5, 0.9, 1.0):
        assert theta_eval(xi, q) >= 0.0
    # theta(1) = xi'(1) - xi(1)
    assert theta_eval(xi, 1.0) == pytest.approx(xi_prime(xi, 1.0) - xi_eval(xi, 1.0))


def test_zero_mixture():
    assert MixtureXi(()).is_zero
    assert MixtureXi((0.0, 0.0)).is_zero
    assert not MixtureXi((0.0, 0.1)).is_zero
    assert xi_eval(MixtureXi(()), 0.73) == 0.0


def test_argument_range_enforced():
    xi = MixtureXi((0.5,))
    with pytest.raises(DomainError):
        xi_eval(xi, 1.5)
    with pytest.raises(DomainError):
        xi_prime(xi, math.nan)
    # tiny overshoot from upstream rounding is clamped, not rejected
    assert xi_eval(xi, 1.0 + 1e-14) == pytest.approx(0.25)


def test_parameter_validation():
    with pytest.raises(DomainError):
        GaussianField(0.0, -0.1)
    with pytest.raises(DomainError):
        MixtureXi((math.inf,))
    with pytest.raises(DomainError):
        TemperaturePoint(-1.0, MixtureXi(()))
    assert GaussianField(0.0, 0.0).centered
    assert not GaussianField(0.2, 0.0).centered
