"""Overflow-safe scalar/array special functions used throughout the package."""

from __future__ import annotations

import math

import numpy as np

LN2 = math.log(2.0)


def log_cosh(x):
    """ln cosh(x), stable for large |x| via ln cosh x = |x| - ln 2 + ln(1 + e^{-2|x|})."""
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - LN2


def sech2(x):
    """1 / cosh(x)^2 without overflow: (2 e^{-|x|} / (1 + e^{-2|x|}))^2."""
    e = np.exp(-np.abs(x))
    s = 2.0 * e / (1.0 + e * e)
    return s * s


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))
