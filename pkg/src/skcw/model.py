"""Model parameters for the mixed even-spin glass with a Curie-Weiss coupling.

The disordered part of the energy is a sum of even p-spin terms whose
coefficients enter only through their squares: the covariance of the
disordered energy between two configurations with overlap x is N * xi(x),

    xi(x) = sum_p  c_p^2 * x^(2p),        p = 1, 2, ...

On top sits a ferromagnetic term (beta*N/2) * m^2 in the magnetization m and
an i.i.d. Gaussian external field.  This module holds the parameter types and
the mixture polynomial xi with its derivatives and the auxiliary combination

    theta(q) = q * xi'(q) - xi(q),

which appears in the interpolation functional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

# slack for |x| <= 1 checks, absorbs float drift from upstream arithmetic
_EDGE_TOL = 1e-12


@dataclass(frozen=True)
class MixtureXi:
    """Even-mixture coefficients (c_1, c_2, ...); c_p multiplies the 2p-spin term.

    Entries may be negative or zero; only c_p^2 matters.  An empty tuple (or
    all zeros) is the degenerate mixture xi == 0.
    """

    coeffs: tuple[float, ...]

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        for c in coeffs:
            if not math.isfinite(c):
                raise DomainError(f"mixture coefficient is not finite: {c}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def is_zero(self) -> bool:
        return all(c == 0.0 for c in self.coeffs)


@dataclass(frozen=True)
class GaussianField:
    """External field h_i ~ N(mean, std^2), i.i.d. per site; std 0 = deterministic."""

    mean: float = 0.0
    std: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.std)):
            raise DomainError("field parameters must be finite")
        if self.std < 0.0:
            raise DomainError(f"field std must be nonnegative, got {self.std}")

    @property
    def centered(self) -> bool:
        return self.mean == 0.0


@dataclass(frozen=True)
class TemperaturePoint:
    """Ferromagnetic coupling strength beta >= 0 paired with a mixture."""

    beta: float
    xi: MixtureXi

    def __post_init__(self):
        if not math.isfinite(self.beta) or self.beta < 0.0:
            raise DomainError(f"beta must be finite and >= 0, got {self.beta}")


def _check_unit_interval(x: float) -> float:
    if not math.isfinite(x) or abs(x) > 1.0 + _EDGE_TOL:
        raise DomainError(f"mixture argument must satisfy |x| <= 1, got {x}")
    return min(max(x, -1.0), 1.0)


def xi_eval(xi: MixtureXi, x: float) -> float:
    """xi(x) = sum_p c_p^2 x^(2p) for |x| <= 1."""
    x = _check_unit_interval(x)
    s = x * x
    # Horner in s = x^2: sum_p c_p^2 s^p = s*(c_1^2 + s*(c_2^2 + ...))
    acc = 0.0
    for c in reversed(xi.coeffs):
        acc = s * (c * c + acc)
    return acc


def xi_derivs(xi: MixtureXi, x: float) -> tuple[float, float]:
    """(xi'(x), xi''(x)) for |x| <= 1."""
    x = _check_unit_interval(x)
    d1 = 0.0
    d2 = 0.0
    for p, c in enumerate(xi.coeffs, start=1):
        k = 2 * p
        cc = c * c
        d1 += k * cc * x ** (k - 1)
        d2 += k * (k - 1) * cc * x ** (k - 2)
    return d1, d2


def xi_prime(xi: MixtureXi, x: float) -> float:
    return xi_derivs(xi, x)[0]


def theta_eval(xi: MixtureXi, q: float) -> float:
    """theta(q) = q xi'(q) - xi(q); nonnegative on [0, 1] for even mixtures."""
    return q * xi_prime(xi, q) - xi_eval(xi, q)
