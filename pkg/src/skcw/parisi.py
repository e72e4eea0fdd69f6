"""Hierarchical variational functional for the disordered part of the model.

The disordered free energy is the infimum over discrete probability measures
nu on [0,1] (finitely many atoms) of

    P(nu) = ln 2 + E Phi(h, 0) - theta(1)/2 + (1/2) sum_l w_l theta(q_l),

where Phi solves a backward equation in the "time" variable q from the
terminal condition Phi(x, 1) = ln cosh(x).  Because nu is atomic the solution
is an exact per-interval recursion: on an interval where nu([0, q]) has the
constant value m and the variance budget is Delta = xi'(q_hi) - xi'(q_lo),

    m > 0:   Phi(x, q_lo) = (1/m) ln E_z exp(m Phi(x + z sqrt(Delta), q_hi))
    m == 0:  Phi(x, q_lo) =       E_z      Phi(x + z sqrt(Delta), q_hi)

with z standard normal.  Phi(., q) is even in x at every level, so the
recursion is carried on a uniform grid over x >= 0 (cubic-spline interpolation
in x, Gauss-Hermite quadrature in z) and mirrored.  Beyond the grid edge the
values continue linearly with slope one, matching the ln cosh asymptote; the
neglected correction decays like e^{-2x}.

A one-atom measure delta_q collapses the recursion to the closed form

    P(delta_q) = ln 2 + E ln cosh(h + z sqrt(xi'(q)))
               + [xi(1) - xi(q) - (1 - q) xi'(q)] / 2,

which external cross-checks use; the solver here never special-cases it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from ._kernels import recursion_level, spline_slopes
from .errors import DomainError, GridError
from .model import GaussianField, MixtureXi, theta_eval, xi_prime
from .quadrature import DEFAULT_ORDER, expect_gaussian, gauss_hermite_rule
from .special import LN2, log_cosh

WEIGHT_SUM_TOL = 1e-12
ATOM_MERGE_RADIUS = 1e-6
WEIGHT_FLOOR = 1e-10
K_IMPROVEMENT_TOL = 1e-7
PASS_TOL = 1e-9
DEFAULT_SPACING = 1e-2
DEFAULT_K_MAX = 4
DEFAULT_RESTARTS = 8


@dataclass(frozen=True)
class DiscreteMeasure:
    """Probability measure with finitely many atoms in [0, 1].

    Atoms are strictly increasing, weights strictly positive and summing to
    one.  nu([0, q]) is the running weight total through the atoms <= q.
    """

    atoms: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        atoms = tuple(float(q) for q in self.atoms)
        weights = tuple(float(w) for w in self.weights)
        if len(atoms) == 0 or len(atoms) != len(weights):
            raise DomainError("measure needs matching, non-empty atoms and weights")
        for q in atoms:
            if not (0.0 <= q <= 1.0):
                raise DomainError(f"atom outside [0, 1]: {q}")
        for a, b in zip(atoms, atoms[1:]):
            if not b > a:
                raise DomainError("atoms must be strictly increasing")
        for w in weights:
            if not w > 0.0:
                raise DomainError(f"weights must be positive, got {w}")
        if abs(sum(weights) - 1.0) > WEIGHT_SUM_TOL:
            raise DomainError(f"weights must sum to 1, got {sum(weights)!r}")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    def cdf(self, q: float) -> float:
        return sum(w for a, w in zip(self.atoms, self.weights) if a <= q)

    def to_json(self) -> dict:
        return {"atoms": list(self.atoms), "weights": list(self.weights)}

    @classmethod
    def from_json(cls, data: dict) -> "DiscreteMeasure":
        return cls(tuple(data["atoms"]), tuple(data["weights"]))


def dirac(q: float) -> DiscreteMeasure:
    return DiscreteMeasure((q,), (1.0,))


def measure_distance(nu1: DiscreteMeasure, nu2: DiscreteMeasure) -> float:
    """L1 distance between the cumulative functions on [0, 1], computed
    exactly from the step structure."""
    w1 = dict(zip(nu1.atoms, nu1.weights))
    w2 = dict(zip(nu2.atoms, nu2.weights))
    total = 0.0
    prev = 0.0
    f1 = f2 = 0.0
    for q in sorted(set(nu1.atoms) | set(nu2.atoms)):
        total += abs(f1 - f2) * (q - prev)
        f1 += w1.get(q, 0.0)
        f2 += w2.get(q, 0.0)
        prev = q
    total += abs(f1 - f2) * (1.0 - prev)
    return total


def parisi_moment(nu: DiscreteMeasure, p: int) -> float:
    """int q^(2p) nu(dq)."""
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    return sum(w * q ** (2 * p) for q, w in zip(nu.atoms, nu.weights))


@dataclass(frozen=True)
class GridSpec:
    half_width: float
    spacing: float = DEFAULT_SPACING

    def __post_init__(self):
        if not (self.half_width > 0.0 and self.spacing > 0.0):
            raise GridError("grid half_width and spacing must be positive")
        if self.spacing > self.half_width:
            raise GridError("grid spacing exceeds half width")


def default_grid(xi: MixtureXi, h: GaussianField, n_atoms: int) -> GridSpec:
    """Half-width |mean| + 10 sqrt(std^2 + xi'(1)) (k+1); any constant shift
    applied to the field must already be folded into h.mean."""
    width = abs(h.mean) + 10.0 * math.sqrt(h.std**2 + xi_prime(xi, 1.0)) * (n_atoms + 1)
    return GridSpec(half_width=max(width, 1.0))


class PhiFunction:
    """Even function sampled on a uniform grid over x >= 0; cubic spline
    inside, slope-one linear continuation beyond the last grid point."""

    def __init__(self, x: np.ndarray, values: np.ndarray):
        self._x = x
        self._values = values
        self.half_width = float(x[-1])
        pad = min(8, len(x) - 1)
        # mirror a few points through 0 so the spline sees the even symmetry
        xs = np.concatenate([-x[pad:0:-1], x])
        ys = np.concatenate([values[pad:0:-1], values])
        self._spline = CubicSpline(xs, ys)
        self._edge = float(values[-1])

    def __call__(self, pts):
        a = np.abs(np.asarray(pts, dtype=np.float64))
        inside = self._spline(np.minimum(a, self.half_width))
        out = np.where(a <= self.half_width, inside, self._edge + (a - self.half_width))
        if out.shape == ():
            return float(out)
        return out

    @property
    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        return self._x, self._values


def _segments(nu: DiscreteMeasure, xi: MixtureXi) -> list[tuple[float, float, float, float]]:
    """Ascending (q_lo, q_hi, mass, Delta) intervals of constant nu([0, q])."""
    pts = [0.0, *nu.atoms, 1.0]
    segs = []
    for lo, hi in zip(pts, pts[1:]):
        if hi <= lo:
            continue
        mass = nu.cdf(lo)
        delta = xi_prime(xi, hi) - xi_prime(xi, lo)
        if delta < -1e-12:
            raise DomainError("xi' must be nondecreasing on [0, 1]")
        segs.append((lo, hi, mass, max(delta, 0.0)))
    return segs


def _combine(vals: np.ndarray, weights: np.ndarray, mass: float) -> np.ndarray:
    """Row-wise (1/m) ln E exp(m * vals) (plain average when m == 0).

    Centered expm1 form keeps accuracy for masses down to the weight floor;
    the max-shift form takes over before exp can overflow.
    """
    mean = vals @ weights
    if mass == 0.0:
        return mean
    delta = mass * (vals - mean[:, None])
    if delta.max() < 500.0:
        s = (np.expm1(delta) - delta) @ weights
        return mean + np.log1p(s) / mass
    top = vals.max(axis=1)
    return top + np.log(np.exp(mass * (vals - top[:, None])) @ weights) / mass


def _reference_level(x, values, offsets, weights, mass):
    """Plain-numpy level step used by cross-checking tests: evaluate the
    even extension through a padded spline and combine with _combine."""
    cur = PhiFunction(x, values)
    return _combine(cur(x[:, None] + offsets[None, :]), weights, mass)


def phi_solve(
    nu: DiscreteMeasure,
    xi: MixtureXi,
    grid: GridSpec,
    order: int = DEFAULT_ORDER,
    min_core: float = 0.0,
) -> PhiFunction:
    """Solve the backward recursion; returns Phi(., 0) as a PhiFunction.

    Raises GridError when the grid cannot hold the core evaluation region:
    the smoothing at each level reaches about 8 sigma = 8 sqrt(Delta_l)
    beyond the points that matter (Gaussian mass beyond that is < 1e-15).
    """
    segs = _segments(nu, xi)
    reach = 8.0 * sum(math.sqrt(d) for *_, d in segs)
    if grid.half_width < min_core + reach:
        raise GridError(
            f"grid half-width {grid.half_width:.3g} below required "
            f"{min_core + reach:.3g} (core {min_core:.3g} + smoothing reach {reach:.3g})"
        )
    npts = int(math.ceil(grid.half_width / grid.spacing)) + 1
    if npts < 9:
        raise GridError("grid must contain at least 9 points")
    dx = grid.spacing
    x = np.arange(npts) * dx
    width = x[-1]
    values = log_cosh(x)
    nodes, weights = gauss_hermite_rule(order)
    # tail nodes whose weight cannot move the result get dropped up front
    keep = weights > 1e-20
    nodes, weights = nodes[keep], weights[keep]
    for _, _, mass, delta in reversed(segs):
        if delta <= 1e-15:
            continue
        offsets = math.sqrt(delta) * nodes
        # slope 0 at 0 by evenness; the edge slope matches the asymptote
        slopes = spline_slopes(values, dx, 0.0, math.tanh(width))
        values = recursion_level(values, slopes, dx, offsets, weights, mass)
    return PhiFunction(x, values)


def parisi_functional(
    xi: MixtureXi,
    h: GaussianField,
    nu: DiscreteMeasure,
    grid: GridSpec | None = None,
    order: int = DEFAULT_ORDER,
) -> float:
    """P(nu) for the field h (a deterministic shift belongs in h.mean)."""
    if xi.is_zero:
        # no interaction: every measure collapses to the free-spin value,
        # so skip the recursion (and its spline interpolation error)
        return LN2 + expect_gaussian(log_cosh, h.mean, h.std, order)
    if grid is None:
        grid = default_grid(xi, h, len(nu.atoms))
    phi = phi_solve(nu, xi, grid, order, min_core=abs(h.mean) + 8.0 * h.std)
    e_phi = expect_gaussian(phi, h.mean, h.std, order)
    corr = 0.5 * sum(w * theta_eval(xi, q) for q, w in zip(nu.atoms, nu.weights))
    return LN2 + e_phi - 0.5 * theta_eval(xi, 1.0) + corr


@dataclass
class ParisiResult:
    value: float
    measure: DiscreteMeasure
    diagnostics: dict = field(default_factory=dict)


def _weights_from_sticks(sticks: np.ndarray) -> np.ndarray:
    w = np.empty(len(sticks) + 1)
    rem = 1.0
    for i, s in enumerate(sticks):
        w[i] = rem * s
        rem *= 1.0 - s
    w[-1] = rem
    return w


def _sticks_from_weights(weights) -> list[float]:
    sticks = []
    rem = 1.0
    for w in weights[:-1]:
        sticks.append(min(max(w / rem, 0.0), 1.0) if rem > 1e-300 else 0.0)
        rem -= w
    return sticks


def _vector_to_measure(vec: np.ndarray, k: int) -> DiscreteMeasure:
    """Decode (k atom coords, k-1 stick fractions) into a valid measure:
    sort, merge atoms within ATOM_MERGE_RADIUS, drop weights under the floor."""
    atoms = np.clip(vec[:k], 0.0, 1.0)
    sticks = np.clip(vec[k:], 1e-12, 1.0 - 1e-12)
    w = _weights_from_sticks(sticks)
    order = np.argsort(atoms, kind="stable")
    merged: list[list[float]] = []
    for q, wt in zip(atoms[order], w[order]):
        if merged and q - merged[-1][0] <= ATOM_MERGE_RADIUS:
            tot = merged[-1][1] + wt
            if tot > 0.0:
                merged[-1][0] = (merged[-1][0] * merged[-1][1] + q * wt) / tot
            merged[-1][1] = tot
        else:
            merged.append([q, wt])
    kept = [(q, wt) for q, wt in merged if wt >= WEIGHT_FLOOR]
    if not kept:
        kept = [max(merged, key=lambda t: t[1])]
    total = sum(wt for _, wt in kept)
    qs = tuple(q for q, _ in kept)
    ws = [wt / total for _, wt in kept]
    ws[-1] = 1.0 - sum(ws[:-1])  # exact unit mass
    return DiscreteMeasure(qs, tuple(ws))


def _extend_vector(measure: DiscreteMeasure, k: int) -> np.ndarray:
    """Start vector for a k-atom search seeded from a smaller-k minimizer."""
    atoms = list(measure.atoms)
    weights = list(measure.weights)
    while len(atoms) > k:
        # fold the lightest atom into its nearest neighbour
        i = min(range(len(atoms)), key=lambda j: weights[j])
        j = i - 1 if i > 0 else i + 1
        weights[j] += weights[i]
        del atoms[i], weights[i]
    while len(atoms) < k:
        atoms.append(min(0.5 * (atoms[-1] + 1.0), 1.0))
        weights = [w * (1.0 - 1e-6) for w in weights]
        weights.append(1.0 - sum(weights))
    return np.array(atoms + _sticks_from_weights(weights))


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _line_search(vec, coord, val, evalf, xtol=1e-5):
    """Coarse presample of one coordinate followed by golden-section
    refinement inside the best presample bracket."""
    cand = sorted({i / 8.0 for i in range(9)} | {float(np.clip(vec[coord], 0.0, 1.0))})

    def at(x):
        v = vec.copy()
        v[coord] = x
        return evalf(v)

    vals = [at(x) for x in cand]
    i = int(np.argmin(vals))
    best_x, best_v = cand[i], vals[i]
    a = cand[i - 1] if i > 0 else cand[0]
    b = cand[i + 1] if i + 1 < len(cand) else cand[-1]
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = at(x1), at(x2)
    while b - a > xtol:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = at(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = at(x2)
        for x, f in ((x1, f1), (x2, f2)):
            if f < best_v:
                best_x, best_v = x, f
    if best_v < val:
        out = vec.copy()
        out[coord] = best_x
        return out, best_v
    return vec, val


def _optimize_level(start_vecs, evalf, max_passes=40):
    finals = []
    for vec0 in start_vecs:
        vec = np.asarray(vec0, dtype=np.float64).copy()
        val = evalf(vec)
        for _ in range(max_passes):
            prev = val
            for c in range(len(vec)):
                vec, val = _line_search(vec, c, val, evalf)
            if prev - val < PASS_TOL:
                break
        finals.append((val, vec))
    finals.sort(key=lambda t: t[0])
    return finals


def parisi_minimize(
    xi: MixtureXi,
    h: GaussianField,
    k_max: int = DEFAULT_K_MAX,
    order: int = DEFAULT_ORDER,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    init: DiscreteMeasure | None = None,
) -> ParisiResult:
    """Minimize the functional over measures with at most k_max atoms.

    Per atom count k the 2k-1 free parameters (atom coords, stick-breaking
    weight fractions) are optimized by coordinate passes of presampled
    golden-section line searches until a pass improves by < 1e-9, from
    `restarts` seeded random starts plus a warm start extending the previous
    best (so the value is nonincreasing in k).  k stops growing once the
    improvement over the previous level falls under 1e-7.  For the degenerate
    mixture xi == 0 every measure gives ln 2 + E ln cosh(h) and a single atom
    at 0 is returned with the law flagged non-identifiable.
    """
    if k_max < 1:
        raise DomainError(f"k_max must be >= 1, got {k_max}")
    if xi.is_zero:
        value = LN2 + expect_gaussian(log_cosh, h.mean, h.std, order)
        return ParisiResult(
            value,
            dirac(0.0),
            {"nu_identifiable": False, "k_stopped_at": 0, "evaluations": 1,
             "quad_order": order, "atom_count": 1},
        )

    best_val = math.inf
    best_measure: DiscreteMeasure | None = None
    best_k = 0
    level_values: dict[int, float] = {}
    evaluations = 0
    near_ties: list[dict] = []
    stopped_at = k_max
    grid_used: GridSpec | None = None

    for k in range(1, k_max + 1):
        grid = default_grid(xi, h, k)
        cache: dict[tuple, float] = {}

        def evalf(vec, _grid=grid, _cache=cache, _k=k):
            measure = _vector_to_measure(vec, _k)
            key = (measure.atoms, measure.weights)
            if key not in _cache:
                _cache[key] = parisi_functional(xi, h, measure, _grid, order)
            return _cache[key]

        starts: list[np.ndarray] = []
        if best_measure is not None:
            starts.append(_extend_vector(best_measure, k))
        elif init is not None:
            starts.append(_extend_vector(init, k))
        if k == 1:
            # the lone coordinate's line search presamples [0,1] globally, so
            # extra random starts would retrace identical work
            if not starts:
                starts.append(np.array([0.5]))
        else:
            for r in range(restarts):
                rng = np.random.default_rng((seed, k, r))
                starts.append(rng.random(2 * k - 1))

        finals = _optimize_level(starts, evalf)
        evaluations += len(cache)
        val_k, vec_k = finals[0]
        measure_k = _vector_to_measure(vec_k, k)
        level_values[k] = val_k
        for v, vec in finals[1:]:
            if v - val_k <= K_IMPROVEMENT_TOL:
                d = measure_distance(_vector_to_measure(vec, k), measure_k)
                if d > 1e-3:
                    near_ties.append({"k": k, "value_gap": v - val_k, "distance": d})
        if val_k < best_val:
            best_val, best_measure, best_k = val_k, measure_k, k
            grid_used = grid
        if k >= 2 and level_values[k - 1] - val_k < K_IMPROVEMENT_TOL:
            stopped_at = k
            break

    assert best_measure is not None and grid_used is not None
    return ParisiResult(
        best_val,
        best_measure,
        {
            "nu_identifiable": True,
            "k_stopped_at": stopped_at,
            "k_best": best_k,
            "atom_count": len(best_measure.atoms),
            "grid_half_width": grid_used.half_width,
            "grid_spacing": grid_used.spacing,
            "quad_order": order,
            "evaluations": evaluations,
            "near_ties": near_ties,
        },
    )


def sk_free_energy(
    xi: MixtureXi,
    shift: float,
    h: GaussianField,
    k_max: int = DEFAULT_K_MAX,
    order: int = DEFAULT_ORDER,
    **opts,
) -> float:
    """Disordered free energy at external field shift + h (shift folded into
    the field mean)."""
    shifted = GaussianField(h.mean + shift, h.std)
    return parisi_minimize(xi, shifted, k_max, order=order, **opts).value


def sk_beta_p_derivative(
    xi: MixtureXi, h: GaussianField, p: int, k_max: int = DEFAULT_K_MAX, order: int = DEFAULT_ORDER
) -> float:
    """d F / d c_p = c_p (1 - int q^(2p) nu*(dq)) at the minimizer nu*."""
    if not 1 <= p <= len(xi.coeffs):
        raise DomainError(f"p must index a mixture coefficient, got {p}")
    res = parisi_minimize(xi, h, k_max, order=order)
    return xi.coeffs[p - 1] * (1.0 - parisi_moment(res.measure, p))
