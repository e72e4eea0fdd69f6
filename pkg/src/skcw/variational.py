"""Variational free energy coupling the ferromagnetic layer to the
disordered layer.

The full free energy is the supremum over magnetizations mu in [-1, 1] of

    G(mu) = F_dis(beta mu + h) - beta mu^2 / 2,

where F_dis is the disordered-layer free energy at external field shifted by
beta mu (itself an infimum over discrete order-parameter measures).  The
maximizer set and its structure (unique point, symmetric pair, or neither)
is what downstream predictions key off.

G is located by an envelope scan: for a FIXED measure nu the map
mu -> P_nu(beta mu + h) - beta mu^2 / 2 needs a single backward solve, after
which every mu costs one small quadrature.  Minimizing measures are computed
at coarse anchor points (warm-started along the scan), the pointwise minimum
of the resulting one-solve curves approximates G on the fine grid, local
maxima are polished against the true objective, and the winner is confirmed
with a full fresh minimization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import GaussianField, MixtureXi, TemperaturePoint, theta_eval
from .parisi import (
    DEFAULT_K_MAX,
    DiscreteMeasure,
    GridSpec,
    default_grid,
    parisi_minimize,
    phi_solve,
)
from .quadrature import DEFAULT_ORDER, expect_gaussian, gauss_hermite_rule
from .special import LN2, log_cosh

SYMMETRY_TOL = 1e-6
DEFAULT_SCAN_STEP = 1e-3
DEFAULT_TOL_OMEGA = 1e-6
DEFAULT_MERGE_RADIUS = 1e-4
ANCHOR_SPACING = 0.025
CANDIDATE_SLACK = 2e-4
REFINE_XTOL = 1e-5
LAW_WEIGHT_FLOOR = 1e-4
LAW_MERGE_RADIUS = 1e-3


@dataclass(frozen=True)
class ArgmaxReport:
    """Value and maximizer structure of the outer variational problem."""

    value: float
    maximizers: tuple[float, ...]
    classification: str  # "unique" | "symmetric-pair" | "ambiguous" | "degenerate-beta-zero"
    tol: float

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "maximizers": list(self.maximizers),
            "classification": self.classification,
            "tol": self.tol,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ArgmaxReport":
        return cls(
            float(data["value"]),
            tuple(data["maximizers"]),
            str(data["classification"]),
            float(data["tol"]),
        )


def classify_maximizers(maximizers, sym_tol: float = SYMMETRY_TOL) -> str:
    """Structure of a maximizer list: one point, a +-pair, or neither."""
    pts = sorted(float(m) for m in maximizers)
    if len(pts) == 1:
        return "unique"
    if len(pts) == 2 and abs(pts[0] + pts[1]) <= sym_tol and pts[1] > sym_tol:
        return "symmetric-pair"
    return "ambiguous"


def skfi_objective(
    mu: float,
    temp: TemperaturePoint,
    h: GaussianField,
    k_max: int = DEFAULT_K_MAX,
    order: int = DEFAULT_ORDER,
    **opts,
) -> float:
    """G(mu): disordered free energy at the shifted field minus the
    quadratic magnetization cost."""
    if not -1.0 <= mu <= 1.0:
        raise DomainError(f"mu must lie in [-1, 1], got {mu}")
    shifted = GaussianField(h.mean + temp.beta * mu, h.std)
    res = parisi_minimize(temp.xi, shifted, k_max, order=order, **opts)
    return res.value - 0.5 * temp.beta * mu * mu


def _measure_curve(
    nu: DiscreteMeasure,
    temp: TemperaturePoint,
    h: GaussianField,
    mus: np.ndarray,
    order: int,
) -> np.ndarray:
    """P_nu(beta mu + h) - beta mu^2/2 for every mu, from one backward solve
    wide enough for the whole scan."""
    xi = temp.xi
    core = abs(h.mean) + temp.beta + 8.0 * h.std
    base = default_grid(xi, h, len(nu.atoms))
    grid = GridSpec(base.half_width + abs(h.mean) + temp.beta, base.spacing)
    phi = phi_solve(nu, xi, grid, order, min_core=core)
    const = (
        LN2
        - 0.5 * theta_eval(xi, 1.0)
        + 0.5 * sum(w * theta_eval(xi, q) for q, w in zip(nu.atoms, nu.weights))
    )
    centers = temp.beta * mus + h.mean
    if h.std == 0.0:
        e_phi = phi(centers)
    else:
        nodes, weights = gauss_hermite_rule(order)
        e_phi = phi(centers[:, None] + h.std * nodes[None, :]) @ weights
    return const + e_phi - 0.5 * temp.beta * mus * mus


def _analytic_curve(temp: TemperaturePoint, h: GaussianField, mus: np.ndarray, order: int) -> np.ndarray:
    """Objective for the degenerate mixture xi == 0 (no disordered layer)."""
    centers = temp.beta * mus + h.mean
    if h.std == 0.0:
        vals = log_cosh(centers)
    else:
        nodes, weights = gauss_hermite_rule(order)
        vals = log_cosh(centers[:, None] + h.std * nodes[None, :]) @ weights
    return LN2 + vals - 0.5 * temp.beta * mus * mus


def _golden_max(f, a: float, b: float, xtol: float) -> tuple[float, float]:
    """Golden-section maximization on [a, b]; returns (argmax, value)."""
    g = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - g * (b - a)
    x2 = a + g * (b - a)
    f1, f2 = f(x1), f(x2)
    best_x, best_v = (x1, f1) if f1 >= f2 else (x2, f2)
    while b - a > xtol:
        if f1 > f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - g * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + g * (b - a)
            f2 = f(x2)
        for x, v in ((x1, f1), (x2, f2)):
            if v > best_v:
                best_x, best_v = x, v
    return best_x, best_v


def skfi_free_energy(
    temp: TemperaturePoint,
    h: GaussianField,
    scan_step: float = DEFAULT_SCAN_STEP,
    tol_omega: float = DEFAULT_TOL_OMEGA,
    merge_radius: float = DEFAULT_MERGE_RADIUS,
    k_max: int = DEFAULT_K_MAX,
    order: int = DEFAULT_ORDER,
    seed: int = 0,
) -> ArgmaxReport:
    """Maximize G over [-1, 1] (over [0, 1] when the field is centered,
    since G is then even) and classify the maximizer set.

    Maximizers closer than merge_radius are treated as one; candidates whose
    polished value trails the best by more than tol_omega are dropped.
    """
    beta = temp.beta
    xi = temp.xi
    if beta == 0.0:
        # no ferromagnetic coupling: mu never enters, the report is degenerate
        if xi.is_zero:
            value = LN2 + expect_gaussian(log_cosh, h.mean, h.std, order)
        else:
            value = parisi_minimize(xi, h, k_max, order=order, seed=seed).value
        return ArgmaxReport(value, (), "degenerate-beta-zero", tol_omega)

    even = h.centered
    lo = 0.0 if even else -1.0
    mus = np.arange(lo, 1.0 + 0.5 * scan_step, scan_step)
    mus[-1] = min(mus[-1], 1.0)

    if xi.is_zero:
        env = _analytic_curve(temp, h, mus, order)

        def true_objective(mu: float) -> float:
            return float(_analytic_curve(temp, h, np.array([mu]), order)[0])

        refine_xtol = 1e-10
    else:
        stride = max(1, int(round(ANCHOR_SPACING / scan_step)))
        anchor_idx = list(range(0, len(mus), stride))
        if anchor_idx[-1] != len(mus) - 1:
            anchor_idx.append(len(mus) - 1)
        anchors: list[DiscreteMeasure] = []
        prev: DiscreteMeasure | None = None
        for j, idx in enumerate(anchor_idx):
            shifted = GaussianField(h.mean + beta * float(mus[idx]), h.std)
            res = parisi_minimize(
                xi,
                shifted,
                k_max,
                order=order,
                restarts=8 if j == 0 else 1,
                seed=seed,
                init=prev,
            )
            anchors.append(res.measure)
            prev = res.measure
        env = _measure_curve(anchors[0], temp, h, mus, order)
        for nu in anchors[1:]:
            np.minimum(env, _measure_curve(nu, temp, h, mus, order), out=env)

        def true_objective(mu: float) -> float:
            j = int(np.argmin([abs(mus[i] - mu) for i in anchor_idx]))
            return skfi_objective(
                mu, temp, h, k_max, order, restarts=0, seed=seed, init=anchors[j]
            )

        refine_xtol = REFINE_XTOL

    # plateau-aware local maxima of the envelope
    peaks: list[int] = []
    i = 0
    n = len(mus)
    while i < n:
        j = i
        while j + 1 < n and env[j + 1] == env[i]:
            j += 1
        left_ok = i == 0 or env[i - 1] < env[i]
        right_ok = j == n - 1 or env[j + 1] < env[j]
        if left_ok and right_ok:
            peaks.append((i + j) // 2)
        i = j + 1
    top = float(np.max(env))
    candidates = [p for p in peaks if env[p] >= top - CANDIDATE_SLACK]

    refined: list[tuple[float, float]] = []
    for p in candidates:
        a = float(mus[max(0, p - 1)])
        b = float(mus[min(n - 1, p + 1)])
        if a == b:
            refined.append((float(mus[p]), true_objective(float(mus[p]))))
        else:
            refined.append(_golden_max(true_objective, a, b, refine_xtol))

    best_mu, best_val = max(refined, key=lambda t: t[1])
    if not xi.is_zero:
        # confirm the winner with a fresh full minimization
        best_val = skfi_objective(best_mu, temp, h, k_max, order, seed=seed)

    kept = [(m, v) for m, v in refined if v >= best_val - tol_omega]
    kept.sort()
    merged: list[float] = []
    for m, _ in kept:
        if not merged or m - merged[-1] > merge_radius:
            merged.append(m)

    found: set[float] = set()
    for m in merged:
        if abs(m) <= merge_radius:
            found.add(0.0)
        else:
            found.add(m)
            if even and m > 0.0:
                found.add(-m)
    maximizers = sorted(found)
    return ArgmaxReport(best_val, tuple(maximizers), classify_maximizers(maximizers), tol_omega)


def classify_Bd(temp: TemperaturePoint, h: GaussianField, **opts) -> str:
    """Maximizer structure at positive coupling; beta == 0 is refused
    because the magnetization never enters the functional there."""
    if temp.beta == 0.0:
        raise DomainError("maximizer structure is undefined at beta == 0")
    return skfi_free_energy(temp, h, **opts).classification


def predicted_overlap_law(
    temp: TemperaturePoint,
    h: GaussianField,
    k_max: int = DEFAULT_K_MAX,
    order: int = DEFAULT_ORDER,
    seed: int = 0,
    report: ArgmaxReport | None = None,
) -> DiscreteMeasure:
    """Minimizing measure at the field shifted by the selected maximizer.

    With a symmetric pair the positive representative is used (the measure
    is the same for either by evenness).  An ambiguous maximizer set has no
    single predicted law and is refused.

    Atoms whose weight sits below LAW_WEIGHT_FLOOR are minimizer noise (their
    value contribution is at the sweep's improvement tolerance) and are
    dropped; near-coincident atoms are merged.  The reported law is the
    physical prediction, not the raw optimizer output.
    """
    if report is None:
        report = skfi_free_energy(temp, h, k_max=k_max, order=order, seed=seed)
    if report.classification not in ("unique", "symmetric-pair"):
        raise DomainError(
            f"no single predicted law for classification {report.classification!r}"
        )
    mu_star = max(report.maximizers)
    shifted = GaussianField(h.mean + temp.beta * mu_star, h.std)
    nu = parisi_minimize(temp.xi, shifted, k_max, order=order, seed=seed).measure
    return _prune_law(nu)


def _prune_law(nu: DiscreteMeasure) -> DiscreteMeasure:
    pairs = [(a, w) for a, w in zip(nu.atoms, nu.weights) if w >= LAW_WEIGHT_FLOOR]
    if not pairs:  # defensive: keep the heaviest atom
        pairs = [max(zip(nu.atoms, nu.weights), key=lambda p: p[1])]
    total = sum(w for _, w in pairs)
    merged: list[list[float]] = []
    for a, w in pairs:
        if merged and a - merged[-1][0] <= LAW_MERGE_RADIUS:
            qa, qw = merged[-1]
            merged[-1] = [(qa * qw + a * w) / (qw + w), qw + w]
        else:
            merged.append([a, w])
    return DiscreteMeasure(
        tuple(a for a, _ in merged), tuple(w / total for _, w in merged)
    )


def overlap_support_min(nu: DiscreteMeasure) -> float:
    """Smallest point of the support."""
    return nu.atoms[0]


@dataclass(frozen=True)
class BoundCheck:
    """Whether the squared maximizer magnetization sits at or below the
    bottom of the predicted overlap support."""

    mu_star: float
    mu_squared: float
    support_min: float
    slack: float
    holds: bool | None
    status: str  # "ok" | "skipped-nonidentifiable"

    def to_json(self) -> dict:
        return {
            "mu_star": self.mu_star,
            "mu_squared": self.mu_squared,
            "support_min": self.support_min,
            "slack": self.slack,
            "holds": self.holds,
            "status": self.status,
        }


def magnetization_overlap_bound_check(
    temp: TemperaturePoint,
    h: GaussianField,
    slack: float = 1e-6,
    k_max: int = DEFAULT_K_MAX,
    order: int = DEFAULT_ORDER,
    seed: int = 0,
) -> BoundCheck:
    if temp.xi.is_zero:
        report = skfi_free_energy(temp, h, k_max=k_max, order=order, seed=seed)
        mu = max(report.maximizers) if report.maximizers else 0.0
        return BoundCheck(mu, mu * mu, math.nan, slack, None, "skipped-nonidentifiable")
    report = skfi_free_energy(temp, h, k_max=k_max, order=order, seed=seed)
    law = predicted_overlap_law(temp, h, k_max=k_max, order=order, seed=seed, report=report)
    mu = max(report.maximizers) if report.maximizers else 0.0
    smin = overlap_support_min(law)
    return BoundCheck(mu, mu * mu, smin, slack, mu * mu <= smin + slack, "ok")
