"""Gauss-Hermite quadrature against the standard normal weight.

Rules use the probabilists' convention: nodes are in standard-normal units
and weights sum to one, so E f(Z) ~ sum_j w_j f(x_j) for Z ~ N(0,1).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial.hermite_e import hermegauss

from .errors import DomainError, EvaluationError

MAX_ORDER = 256
DEFAULT_ORDER = 64


@lru_cache(maxsize=None)
def gauss_hermite_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the order-point rule; exact for polynomials of
    degree <= 2*order - 1 in a standard normal variable."""
    if not isinstance(order, int) or not (1 <= order <= MAX_ORDER):
        raise DomainError(f"quadrature order must be an integer in [1, {MAX_ORDER}], got {order}")
    if order == 1:
        nodes = np.array([0.0])
        weights = np.array([1.0])
    else:
        nodes, weights = hermegauss(order)
        weights = weights / weights.sum()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def expect_gaussian(
    f: Callable[[np.ndarray], np.ndarray],
    mean: float,
    std: float,
    order: int = DEFAULT_ORDER,
) -> float:
    """E f(X) for X ~ N(mean, std^2); std == 0 evaluates f(mean) exactly."""
    if std < 0.0:
        raise DomainError(f"std must be nonnegative, got {std}")
    if std == 0.0:
        val = f(np.float64(mean))
        val = float(val)
        if not np.isfinite(val):
            raise EvaluationError(f"integrand returned non-finite value at {mean}")
        return val
    nodes, weights = gauss_hermite_rule(order)
    vals = np.asarray(f(mean + std * nodes), dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        raise EvaluationError("integrand returned non-finite values on quadrature nodes")
    return float(weights @ vals)
