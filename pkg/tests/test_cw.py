import math

import numpy as np
import pytest

from skcw.cw import (
    alpha_critical,
    at_line_check,
    beta_for_magnetization,
    cw_curve,
    cw_fixed_point,
    delta_u,
    field_condition,
    field_condition_threshold,
    lemma_field_bound_check,
    region_contains,
    rs_solve,
)
from skcw.errors import DomainError
from skcw.model import GaussianField, MixtureXi, TemperaturePoint
from skcw.special import LN2

H0 = GaussianField(0.0, 0.0)

# frozen independent oracles (long bisection / closed forms, see test bodies)
MU_AT_BETA_2 = 0.9575040240772688  # root of tanh(2x) = x
B_STAR = 0.7717023192091041  # root of 2 b tanh b = 1
THRESHOLD = 2.2334230637464416  # cosh(b*)^2 / b*
E_EXP_2ABS_03 = 1.7377535373222637  # 2 e^{2 s^2} Phi(2s), s = 0.3


def test_fixed_point_zero_field_oracle():
    mu = cw_fixed_point(2.0, H0)
    assert mu == pytest.approx(MU_AT_BETA_2, abs=1e-11)
    # and it really is a fixed point
    assert math.tanh(2.0 * mu) == pytest.approx(mu, abs=1e-11)


def test_fixed_point_random_field_is_self_consistent():
    h = GaussianField(0.0, 0.4)
    beta = 1.8
    mu = cw_fixed_point(beta, h)
    from skcw.quadrature import expect_gaussian

    assert expect_gaussian(np.tanh, beta * mu, 0.4) == pytest.approx(mu, abs=1e-10)


def test_alpha_critical():
    assert alpha_critical(H0) == 1.0
    # sech^2 < 1 a.s. under a spread field, so alpha > 1
    assert alpha_critical(GaussianField(0.0, 0.5)) > 1.0


def test_subcritical_rejected():
    with pytest.raises(DomainError):
        cw_fixed_point(0.99, H0)
    with pytest.raises(DomainError):
        cw_fixed_point(1.0, H0)


def test_curve_values():
    # f(0) = ln 2 + E ln cosh(h); with h = 0 that is just ln 2
    assert cw_curve(0.0, 1.7, H0) == pytest.approx(LN2)
    mu = cw_fixed_point(2.0, H0)
    val = cw_curve(mu, 2.0, H0)
    assert val == pytest.approx(LN2 + math.log(math.cosh(2.0 * mu)) - mu * mu, abs=1e-14)
    # the fixed point maximizes the curve
    eps = 1e-4
    assert val >= cw_curve(mu + eps, 2.0, H0)
    assert val >= cw_curve(mu - eps, 2.0, H0)


def test_curve_envelope_derivative():
    # d/dbeta f(mu(beta), beta) = mu(beta)^2 / 2 by the envelope identity
    h = GaussianField(0.0, 0.3)
    beta, eps = 1.9, 1e-5
    lhs = (
        cw_curve(cw_fixed_point(beta + eps, h), beta + eps, h)
        - cw_curve(cw_fixed_point(beta - eps, h), beta - eps, h)
    ) / (2 * eps)
    mu = cw_fixed_point(beta, h)
    assert lhs == pytest.approx(mu * mu / 2.0, abs=1e-7)


def test_beta_for_magnetization_inverts_fixed_point():
    for h in (H0, GaussianField(0.0, 0.3)):
        for u in (0.3, 0.6, 0.9):
            bu = beta_for_magnetization(u, h)
            assert cw_fixed_point(bu, h) == pytest.approx(u, abs=1e-9)
    with pytest.raises(DomainError):
        beta_for_magnetization(0.0, H0)
    with pytest.raises(DomainError):
        beta_for_magnetization(1.0, H0)


def test_delta_u_properties():
    h = GaussianField(0.0, 0.3)
    u = 0.6
    bu = beta_for_magnetization(u, h)
    # vanishes on the boundary beta = beta_u, grows with beta
    assert delta_u(u, bu, h) == pytest.approx(0.0, abs=1e-9)
    d1, d2 = delta_u(u, bu + 0.3, h), delta_u(u, bu + 0.8, h)
    assert 0.0 < d1 < d2
    with pytest.raises(DomainError):
        delta_u(0.9, 1.05, H0)  # mu(1.05) is far below 0.9


def test_region_membership():
    h = GaussianField(0.0, 0.3)
    u = 0.6
    bu = beta_for_magnetization(u, h)
    beta = bu + 0.5
    d = delta_u(u, beta, h)
    inside = TemperaturePoint(beta, MixtureXi((math.sqrt(0.5 * d),)))  # xi(1) = d/2
    outside = TemperaturePoint(beta, MixtureXi((math.sqrt(2.5 * d),)))
    assert region_contains(u, inside, h)
    assert not region_contains(u, outside, h)
    cold = TemperaturePoint(bu - 0.1, MixtureXi(()))
    assert not region_contains(u, cold, h)


def test_field_condition_threshold_oracle():
    assert field_condition_threshold() == pytest.approx(THRESHOLD, abs=1e-12)
    bstar = B_STAR
    assert 2.0 * bstar * math.tanh(bstar) == pytest.approx(1.0, abs=1e-12)


def test_field_condition_boundary():
    assert field_condition(H0)  # degenerate field: E e^{2|h|} = 1
    assert field_condition(GaussianField(0.0, 0.3))
    # closed form at s = 0.3 against the frozen quadrature-free constant
    s = 0.3
    from skcw.special import normal_cdf

    lhs = 2.0 * math.exp(2 * s * s) * normal_cdf(2 * s)
    assert lhs == pytest.approx(E_EXP_2ABS_03, abs=1e-12)
    # large spread violates the condition
    assert not field_condition(GaussianField(0.0, 0.8))
    with pytest.raises(DomainError):
        field_condition(GaussianField(0.1, 0.3))


def test_lemma_field_bound():
    assert lemma_field_bound_check(2.0, GaussianField(0.0, 0.3))
    # at beta near b* with no field, beta sech^2(beta) is largest; still < 1
    assert lemma_field_bound_check(B_STAR, H0)


def test_rs_solution_high_temperature():
    # beta1 small, no coupling: q stays near 0, mu = 0 by symmetry
    mu, q = rs_solve(0.2, 0.0, H0)
    assert abs(mu) < 1e-8
    assert q == pytest.approx(0.0, abs=1e-8)
    assert at_line_check(0.2, 0.0, H0)


def test_rs_solution_with_coupling():
    mu, q = rs_solve(0.3, 1.5, H0)
    # self-consistency of the returned pair
    from skcw.quadrature import expect_gaussian

    std = math.sqrt(2 * q * 0.09)
    assert expect_gaussian(np.tanh, 1.5 * mu, std) == pytest.approx(mu, abs=1e-8)
    assert expect_gaussian(lambda x: np.tanh(x) ** 2, 1.5 * mu, std) == pytest.approx(
        q, abs=1e-8
    )
    assert mu > 0.8  # deep ferromagnet
