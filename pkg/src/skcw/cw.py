"""Curie-Weiss layer: the one-body free-energy curve, its fixed points, and
the replica-symmetric diagnostics used to position the glassy correction.

Everything here treats the magnetization mu as a scalar order parameter for
the ferromagnetic part alone:

    f(mu, beta) = ln 2 + E ln cosh(beta*mu + h) - beta*mu^2 / 2,

with h the Gaussian external field.  For a centered field the curve is even
in mu; above the critical coupling alpha = 1 / E sech^2(h) it develops a
symmetric pair of maxima +-mu(beta), where mu(beta) is the unique positive
root of E tanh(beta*mu + h) = mu.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import BracketError, ConvergenceError, DomainError
from .model import GaussianField, MixtureXi, TemperaturePoint, xi_eval
from .quadrature import DEFAULT_ORDER, expect_gaussian
from .special import LN2, log_cosh, normal_cdf, sech2

BETA_BRACKET_MAX = 1e3
_ROOT_TOL = 1e-12


def cw_curve(mu: float, beta: float, h: GaussianField, order: int = DEFAULT_ORDER) -> float:
    """f(mu, beta) above; requires |mu| <= 1 and beta >= 0."""
    if abs(mu) > 1.0 + 1e-12:
        raise DomainError(f"|mu| must be <= 1, got {mu}")
    if beta < 0.0:
        raise DomainError(f"beta must be >= 0, got {beta}")
    e = expect_gaussian(log_cosh, beta * mu + h.mean, h.std, order)
    return LN2 + e - 0.5 * beta * mu * mu


def _require_centered(h: GaussianField, what: str):
    if not h.centered:
        raise DomainError(f"{what} requires a centered field (mean 0), got mean {h.mean}")


def alpha_critical(h: GaussianField, order: int = DEFAULT_ORDER) -> float:
    """Critical coupling alpha solving alpha * E sech^2(h) = 1 (centered h)."""
    _require_centered(h, "alpha_critical")
    return 1.0 / expect_gaussian(sech2, 0.0, h.std, order)


def cw_fixed_point(
    beta: float, h: GaussianField, order: int = DEFAULT_ORDER, tol: float = _ROOT_TOL
) -> float:
    """Unique positive root mu of E tanh(beta*mu + h) = mu for beta > alpha.

    g(mu) = E tanh(beta*mu + h) - mu vanishes at 0, rises (g'(0) > 0 above
    alpha), and is eventually negative; g' is strictly decreasing, so g has a
    single interior maximum.  Stage 1 bisects g' to find that maximum, stage 2
    bisects g on [argmax, 1] where the sign change is guaranteed.
    """
    _require_centered(h, "cw_fixed_point")
    alpha = alpha_critical(h, order)
    if not beta > alpha:
        raise DomainError(f"beta must exceed alpha = {alpha:.12g}, got {beta}")

    def gprime(mu: float) -> float:
        return beta * expect_gaussian(sech2, beta * mu, h.std, order) - 1.0

    def g(mu: float) -> float:
        return expect_gaussian(np.tanh, beta * mu, h.std, order) - mu

    if gprime(1.0) >= 0.0:
        # cannot happen when the field-condition bound beta*E sech^2(beta+h) < 1 holds
        raise BracketError("E tanh(beta*mu + h) - mu has no sign change on (0, 1]")
    lo, hi = 0.0, 1.0
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if gprime(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    lo, hi = 0.5 * (lo + hi), 1.0
    if g(lo) <= 0.0:
        raise BracketError("fixed-point bracket invalid: g(argmax g) <= 0")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def beta_for_magnetization(
    u: float, h: GaussianField, order: int = DEFAULT_ORDER, tol: float = 1e-10
) -> float:
    """Inverse of beta -> mu(beta): the coupling beta_u with mu(beta_u) = u."""
    _require_centered(h, "beta_for_magnetization")
    if not 0.0 < u < 1.0:
        raise DomainError(f"target magnetization must lie in (0, 1), got {u}")
    alpha = alpha_critical(h, order)
    lo = alpha * (1.0 + 1e-9)
    hi = BETA_BRACKET_MAX
    if cw_fixed_point(hi, h, order) < u:
        raise BracketError(f"mu({hi}) < {u}: target not reachable in bracket")
    if cw_fixed_point(lo, h, order) > u:
        raise BracketError(f"mu(alpha(1+1e-9)) > {u}: target below bracket")
    # mu(beta) is strictly increasing
    while hi - lo > 1e-13 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if cw_fixed_point(mid, h, order) < u:
            lo = mid
        else:
            hi = mid
        if abs(cw_fixed_point(0.5 * (lo + hi), h, order) - u) <= tol:
            break
    return 0.5 * (lo + hi)


def delta_u(u: float, beta: float, h: GaussianField, order: int = DEFAULT_ORDER) -> float:
    """Height gap f(mu(beta), beta) - f(u, beta); requires beta >= beta_u."""
    mu_beta = cw_fixed_point(beta, h, order)
    if mu_beta < u - 1e-8:
        raise DomainError(
            f"delta_u needs beta >= beta_u; mu(beta) = {mu_beta:.6g} is below u = {u}"
        )
    gap = cw_curve(mu_beta, beta, h, order) - cw_curve(u, beta, h, order)
    return max(gap, 0.0)


def region_contains(
    u: float, temp: TemperaturePoint, h: GaussianField, order: int = DEFAULT_ORDER
) -> bool:
    """Membership in the supercritical region where the coupling beats the
    disorder strength: beta > beta_u and xi(1) < 2 * delta_u(beta)."""
    beta_u = beta_for_magnetization(u, h, order)
    if not temp.beta > beta_u:
        return False
    return xi_eval(temp.xi, 1.0) < 2.0 * delta_u(u, temp.beta, h, order)


@lru_cache(maxsize=1)
def field_condition_threshold() -> float:
    """1 / max_{b>=0} b/cosh^2(b); the maximizer solves 2 b tanh(b) = 1."""
    lo, hi = 0.1, 2.0
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if 2.0 * mid * math.tanh(mid) < 1.0:
            lo = mid
        else:
            hi = mid
    bstar = 0.5 * (lo + hi)
    return math.cosh(bstar) ** 2 / bstar


def field_condition(h: GaussianField) -> bool:
    """Smallness condition on a centered field: E e^{2|h|} < 1/max_b b sech^2 b.

    For h ~ N(0, s^2), E e^{2|h|} = 2 e^{2 s^2} Phi(2 s) in closed form.
    """
    _require_centered(h, "field_condition")
    s = h.std
    lhs = 2.0 * math.exp(2.0 * s * s) * normal_cdf(2.0 * s)
    return lhs < field_condition_threshold()


def lemma_field_bound_check(beta: float, h: GaussianField, order: int = DEFAULT_ORDER) -> bool:
    """beta * E sech^2(beta + h) < 1; consequence of the field condition that
    guarantees the uniqueness structure used by cw_fixed_point."""
    _require_centered(h, "lemma_field_bound_check")
    return beta * expect_gaussian(sech2, beta, h.std, order) < 1.0


def rs_solve(
    beta1: float,
    beta: float,
    h: GaussianField,
    order: int = DEFAULT_ORDER,
    damping: float = 0.5,
    tol: float = _ROOT_TOL,
    max_iter: int = 100_000,
) -> tuple[float, float]:
    """Replica-symmetric pair (mu, q) of the two-spin mixture with coupling:

        mu = E tanh(beta1 z sqrt(2 q) + beta mu + h)
        q  = E tanh^2(beta1 z sqrt(2 q) + beta mu + h)

    solved by damped alternation from (0.5, 0.5); z and h combine into one
    Gaussian of std sqrt(2 q beta1^2 + std_h^2).  Returns the first fixed
    point reached; callers in non-contractive regimes accept that point.
    """
    mu, q = 0.5, 0.5
    for _ in range(max_iter):
        std = math.sqrt(2.0 * q * beta1 * beta1 + h.std * h.std)
        mean = beta * mu + h.mean
        t1 = expect_gaussian(np.tanh, mean, std, order)
        t2 = expect_gaussian(lambda x: np.tanh(x) ** 2, mean, std, order)
        res = max(abs(t1 - mu), abs(t2 - q))
        if res <= tol:
            return mu, q
        mu = damping * mu + (1.0 - damping) * t1
        q = damping * q + (1.0 - damping) * t2
    if res <= 1e-10:
        return mu, q
    raise ConvergenceError(f"rs_solve residual {res:.3e} after {max_iter} iterations")


def at_line_check(
    beta1: float, beta: float, h: GaussianField, order: int = DEFAULT_ORDER
) -> bool:
    """Local stability of the RS pair: E 2 beta1^2 sech^4(...) < 1 at (mu, q)."""
    mu, q = rs_solve(beta1, beta, h, order)
    std = math.sqrt(2.0 * q * beta1 * beta1 + h.std * h.std)
    mean = beta * mu + h.mean
    val = expect_gaussian(lambda x: 2.0 * beta1 * beta1 * sech2(x) ** 2, mean, std, order)
    return val < 1.0
