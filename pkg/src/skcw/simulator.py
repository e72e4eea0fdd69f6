"""Finite-size laboratory: disorder sampling, heat-bath dynamics, exact
enumeration, and the observable estimates the verification layer consumes.

The finite-size Hamiltonian at inverse temperature beta on n spins is

    H(sigma) = (beta / 2n) (sum_i sigma_i)^2
             + c_1 n^{-1/2} sum_{ij}   g2[i,j] sigma_i sigma_j
             + c_2 n^{-3/2} sum_{ijkl} g4[i,j,k,l] sigma_i sigma_j sigma_k sigma_l
             + sum_i h_i sigma_i,

with i.i.d. standard normal couplings and Gibbs weights proportional to
exp H.  The raw tuple sums keep their diagonal terms: that makes the
disorder covariance of the random part exactly n * xi(overlap) at every n.

Reproducibility: every random draw comes from a Philox stream keyed by
(root_seed, purpose, disorder index, chain index), so any disorder or chain
can be regenerated in isolation and results do not depend on scheduling.
"""

from __future__ import annotations

import math
import weakref
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ._kernels import (
    gray_components,
    gray_components_g4,
    heat_bath_run,
    heat_bath_run_g4,
)
from .errors import DomainError
from .model import GaussianField, MixtureXi, TemperaturePoint
from .stats import MomentAccumulator, blocked_stderr, jackknife_stderr

MAX_SPINS_MC = 28
MAX_SPINS_ENUM = 16
MAX_SPINS_ENUM_G4 = 12
MAX_SPINS_R4 = 12

PURPOSE_DISORDER = 0
PURPOSE_CHAIN = 1
PURPOSE_TUPLES = 2
PURPOSE_COLD = 3


def rng_stream(root_seed: int, purpose: int, disorder: int = 0, chain: int = 0) -> np.random.Generator:
    """Independent, reconstructible stream for one (purpose, disorder, chain)."""
    seq = np.random.SeedSequence(root_seed, spawn_key=(purpose, disorder, chain))
    return np.random.Generator(np.random.Philox(seq))


@dataclass(eq=False)
class DisorderSample:
    """One realization of couplings and fields, with derived tensors used by
    the dynamics and enumeration kernels.  Identity semantics (eq=False)
    keep instances hashable for the enumeration cache."""

    n: int
    xi: MixtureXi
    index: int
    fields: np.ndarray
    g2: np.ndarray
    g4: np.ndarray | None
    c2: np.ndarray = field(repr=False, default=None)
    w1: np.ndarray | None = field(repr=False, default=None)
    w3: np.ndarray | None = field(repr=False, default=None)

    def __post_init__(self):
        if self.c2 is None:
            sym = self.g2 + self.g2.T
            np.fill_diagonal(sym, 0.0)
            self.c2 = sym
        if self.g4 is not None and self.w1 is None:
            g4 = self.g4
            self.w1 = (
                g4
                + np.moveaxis(g4, 1, 0)
                + np.moveaxis(g4, 2, 0)
                + np.moveaxis(g4, 3, 0)
            )
            self.w3 = (
                np.einsum("iiim->im", g4)
                + np.einsum("iimi->im", g4)
                + np.einsum("imii->im", g4)
                + np.einsum("miii->im", g4)
            )

    @property
    def has_g4(self) -> bool:
        return self.g4 is not None

    def coefficient(self, p: int) -> float:
        coeffs = self.xi.coeffs
        return coeffs[p - 1] if p <= len(coeffs) else 0.0


def sample_disorder(
    xi: MixtureXi, h: GaussianField, n: int, index: int, root_seed: int = 0
) -> DisorderSample:
    """Draw couplings and fields for one disorder realization.

    Draw order within the stream is fixed: pair couplings, then quartic
    couplings when the mixture has a nonzero second coefficient, then fields.
    """
    if n < 1 or n > MAX_SPINS_MC:
        raise DomainError(f"n must be in [1, {MAX_SPINS_MC}], got {n}")
    coeffs = xi.coeffs
    if len(coeffs) > 2:
        raise DomainError("finite-size sampling supports mixture terms p = 1, 2 only")
    rng = rng_stream(root_seed, PURPOSE_DISORDER, index)
    g2 = rng.standard_normal((n, n))
    g4 = None
    if len(coeffs) >= 2 and coeffs[1] != 0.0:
        g4 = rng.standard_normal((n, n, n, n))
    fields = h.mean + h.std * rng.standard_normal(n)
    return DisorderSample(n=n, xi=xi, index=index, fields=fields, g2=g2, g4=g4)


def hamiltonian(d: DisorderSample, sigma: np.ndarray, beta: float) -> float:
    """Direct evaluation (reference implementation; kernels are checked
    against it)."""
    sigma = np.asarray(sigma, dtype=np.float64)
    n = d.n
    total = 0.5 * beta / n * sigma.sum() ** 2
    total += d.coefficient(1) * n**-0.5 * float(sigma @ d.g2 @ sigma)
    if d.g4 is not None:
        c2 = d.coefficient(2)
        total += c2 * n**-1.5 * float(np.einsum("ijkl,i,j,k,l->", d.g4, sigma, sigma, sigma, sigma))
    total += float(d.fields @ sigma)
    return total


# ---------------------------------------------------------------------------
# exact enumeration


@dataclass
class EnumerationComponents:
    """Per-configuration energy pieces over all 2^n states (Gray order).
    Energies are linear in the mixture coefficients, so one enumeration
    serves every temperature and coefficient perturbation."""

    n: int
    spin_sum: np.ndarray  # int64, sum_i sigma_i
    pair: np.ndarray  # sigma^T g2 sigma, diagonal included
    quart: np.ndarray | None  # raw quartic form, None without g4
    field_sum: np.ndarray  # fields . sigma

    def energies(self, beta: float, c1: float, c2: float) -> np.ndarray:
        n = self.n
        e = (0.5 * beta / n) * self.spin_sum.astype(np.float64) ** 2
        e += (c1 * n**-0.5) * self.pair
        if c2 != 0.0:
            if self.quart is None:
                raise DomainError("quartic coefficient set but no quartic couplings")
            e += (c2 * n**-1.5) * self.quart
        e += self.field_sum
        return e


_components_cache: "weakref.WeakKeyDictionary[DisorderSample, EnumerationComponents]" = (
    weakref.WeakKeyDictionary()
)


def enumeration_components(d: DisorderSample) -> EnumerationComponents:
    limit = MAX_SPINS_ENUM_G4 if d.has_g4 else MAX_SPINS_ENUM
    if d.n > limit:
        raise DomainError(f"enumeration limited to n <= {limit} for this mixture")
    cached = _components_cache.get(d)
    if cached is not None:
        return cached
    if d.has_g4:
        msum, pair, quart, fsum = gray_components_g4(
            d.n, float(d.g2.sum()), d.c2, d.fields, float(d.g4.sum()), d.w1, d.w3
        )
    else:
        msum, pair, fsum = gray_components(d.n, float(d.g2.sum()), d.c2, d.fields)
        quart = None
    comp = EnumerationComponents(d.n, msum, pair, quart, fsum)
    _components_cache[d] = comp
    return comp


_spin_matrix_cache: dict[int, np.ndarray] = {}


def spin_matrix(n: int) -> np.ndarray:
    """All 2^n configurations in Gray-code order as a read-only int8 matrix."""
    mat = _spin_matrix_cache.get(n)
    if mat is None:
        idx = np.arange(1 << n, dtype=np.uint64)
        gray = idx ^ (idx >> np.uint64(1))
        bits = (gray[:, None] >> np.arange(n, dtype=np.uint64)[None, :]) & np.uint64(1)
        mat = (2 * bits.astype(np.int8) - 1).astype(np.int8)
        mat.setflags(write=False)
        if n <= 16:
            _spin_matrix_cache[n] = mat
    return mat


@dataclass
class ExactResult:
    n: int
    beta: float
    log_z: float
    free_energy: float  # log_z / n
    m_mean: float
    m_abs: float
    m2: float
    r2: float
    r4: float | None
    m_values: np.ndarray
    m_probs: np.ndarray
    corr: np.ndarray  # pairwise <sigma_i sigma_j>


def exact_statistics(
    comp: EnumerationComponents,
    beta: float,
    c1: float,
    c2: float,
    want_r4: bool = False,
) -> ExactResult:
    n = comp.n
    e = comp.energies(beta, c1, c2)
    shift = e.max()
    w = np.exp(e - shift)
    z = w.sum()
    log_z = shift + math.log(z)
    p = w / z
    m = comp.spin_sum.astype(np.float64) / n
    m_mean = float(p @ m)
    m_abs = float(p @ np.abs(m))
    m2 = float(p @ (m * m))
    smat = spin_matrix(n).astype(np.float64)
    corr = smat.T @ (p[:, None] * smat)
    r2 = float((corr**2).sum() / n**2)
    r4 = None
    if want_r4:
        if n > MAX_SPINS_R4:
            raise DomainError(f"fourth-moment enumeration limited to n <= {MAX_SPINS_R4}")
        t4 = np.zeros((n, n, n, n))
        chunk = 1 << 12
        for lo in range(0, len(p), chunk):
            s = smat[lo : lo + chunk]
            t4 += np.einsum("ti,tj,tk,tl->ijkl", p[lo : lo + chunk, None] * s, s, s, s)
        r4 = float((t4**2).sum() / n**4)
    counts = ((comp.spin_sum + n) // 2).astype(np.int64)
    m_probs = np.bincount(counts, weights=p, minlength=n + 1)
    m_values = (2 * np.arange(n + 1) - n) / n
    return ExactResult(
        n, beta, log_z, log_z / n, m_mean, m_abs, m2, r2, r4, m_values, m_probs, corr
    )


def enumerate_exact(d: DisorderSample, beta: float, want_r4: bool = False) -> ExactResult:
    comp = enumeration_components(d)
    return exact_statistics(comp, beta, d.coefficient(1), d.coefficient(2), want_r4)


# ---------------------------------------------------------------------------
# heat-bath dynamics


@dataclass
class ReplicaSet:
    """Independent chains sharing one disorder realization."""

    disorder: DisorderSample
    spins: np.ndarray  # (chains, n) int64
    rngs: list[np.random.Generator]
    kinds: tuple[str, ...]  # "hot" (random start) or "cold" (all +1)


def make_replicas(
    d: DisorderSample, n_hot: int, root_seed: int = 0, include_cold: bool = False
) -> ReplicaSet:
    if n_hot < 1:
        raise DomainError(f"need at least one chain, got {n_hot}")
    spins = []
    rngs = []
    kinds = []
    for c in range(n_hot):
        rng = rng_stream(root_seed, PURPOSE_CHAIN, d.index, c)
        spins.append(rng.integers(0, 2, d.n) * 2 - 1)
        rngs.append(rng)
        kinds.append("hot")
    if include_cold:
        rngs.append(rng_stream(root_seed, PURPOSE_COLD, d.index, 0))
        spins.append(np.ones(d.n, dtype=np.int64))
        kinds.append("cold")
    return ReplicaSet(d, np.array(spins, dtype=np.int64), rngs, tuple(kinds))


def heat_bath_sweep(
    state: ReplicaSet, beta: float, sweeps: int, record: bool = False
) -> np.ndarray | None:
    """Advance every chain by full sweeps in place.

    Per sweep each chain draws one uniform row to order the sites (argsort,
    an exact uniform permutation) and one row of acceptance uniforms, in that
    order.  Returns (chains, sweeps, n) int8 post-sweep states when
    record=True.
    """
    if sweeps < 0:
        raise DomainError(f"sweeps must be >= 0, got {sweeps}")
    d = state.disorder
    n = d.n
    c1 = d.coefficient(1)
    c2eff = (c1 / math.sqrt(n)) * d.c2
    cw_coeff = beta / n
    out = np.empty((len(state.rngs), sweeps, n), dtype=np.int8) if record else None
    scratch = np.empty((sweeps, n), dtype=np.int8)
    if d.has_g4:
        scale = d.coefficient(2) * n**-1.5
        w1s = scale * d.w1
        w3s = scale * d.w3
    for c, rng in enumerate(state.rngs):
        orders = np.argsort(rng.random((sweeps, n)), axis=1)
        uniforms = rng.random((sweeps, n))
        snaps = out[c] if record else scratch
        if d.has_g4:
            heat_bath_run_g4(
                state.spins[c], c2eff, w1s, w3s, d.fields, cw_coeff, orders, uniforms, snaps
            )
        else:
            heat_bath_run(
                state.spins[c], c2eff, d.fields, cw_coeff, orders, uniforms, snaps
            )
    return out


# ---------------------------------------------------------------------------
# full estimation runs


@dataclass(frozen=True)
class SimulationParams:
    """Plain-value description of an estimation run (picklable)."""

    beta: float
    coeffs: tuple[float, ...]
    h_mean: float
    h_std: float
    n: int
    n_disorder: int
    sweeps: int
    burn_in: int
    n_replicas: int = 2
    include_cold: bool = True
    root_seed: int = 0
    blocks: int = 20
    m_windows: tuple[tuple[float, float], ...] = ()
    overlap_thresholds: tuple[float, ...] = ()
    sign_eps: float = 0.05
    gg_level: int = 0
    gg_psi: str = "x"  # "x" | "x2" | "abs"
    gg_absolute: bool = False
    enumeration_crosscheck: bool = False
    want_r4: bool = False
    threads: int = 1

    @classmethod
    def make(cls, temp: TemperaturePoint, h: GaussianField, **kw) -> "SimulationParams":
        return cls(beta=temp.beta, coeffs=temp.xi.coeffs, h_mean=h.mean, h_std=h.std, **kw)

    @property
    def temperature(self) -> TemperaturePoint:
        return TemperaturePoint(self.beta, MixtureXi(self.coeffs))

    @property
    def h(self) -> GaussianField:
        return GaussianField(self.h_mean, self.h_std)

    def validate(self) -> None:
        if self.n_disorder < 1:
            raise DomainError("n_disorder must be >= 1")
        if self.sweeps < self.blocks:
            raise DomainError("sweeps must be at least the block count")
        if self.n_replicas < 1:
            raise DomainError("n_replicas must be >= 1")
        if self.gg_level:
            if self.gg_level < 1:
                raise DomainError("gg_level must be >= 1 when set")
            if self.n_replicas < self.gg_level + 1:
                raise DomainError(
                    f"gg_level {self.gg_level} needs n_replicas >= {self.gg_level + 1}"
                )
            if self.gg_psi not in ("x", "x2", "abs"):
                raise DomainError(f"unknown gg_psi {self.gg_psi!r}")


def _psi_apply(name: str, r: np.ndarray) -> np.ndarray:
    if name == "x":
        return r
    if name == "x2":
        return r * r
    return np.abs(r)


def _disorder_statistics(params: SimulationParams, index: int) -> dict[str, float]:
    """All per-disorder observables as disorder-level scalars."""
    d = sample_disorder(params.temperature.xi, params.h, params.n, index, params.root_seed)
    state = make_replicas(d, params.n_replicas, params.root_seed, params.include_cold)
    heat_bath_sweep(state, params.beta, params.burn_in, record=False)
    snaps = heat_bath_sweep(state, params.beta, params.sweeps, record=True)
    n = params.n
    hot = [c for c, k in enumerate(state.kinds) if k == "hot"]
    m_series = snaps.sum(axis=2, dtype=np.int64) / n  # (chains, sweeps)

    out: dict[str, float] = {}
    hot_m = m_series[hot]
    out["m"] = float(hot_m.mean())
    out["m_abs"] = float(np.abs(hot_m).mean())
    out["m2"] = float((hot_m**2).mean())
    out["m_stderr"] = math.sqrt(
        sum(blocked_stderr(m_series[c], params.blocks) ** 2 for c in hot)
    ) / len(hot)
    out["m2_stderr"] = math.sqrt(
        sum(blocked_stderr(m_series[c] ** 2, params.blocks) ** 2 for c in hot)
    ) / len(hot)

    if params.include_cold:
        cold = state.kinds.index("cold")
        out["mix_gap"] = abs(float(hot_m.mean()) - float(m_series[cold].mean()))

    # time-matched overlaps between hot chains
    overlaps: dict[tuple[int, int], np.ndarray] = {}
    for ai in range(len(hot)):
        for bi in range(ai + 1, len(hot)):
            a, b = hot[ai], hot[bi]
            prod = (snaps[a] * snaps[b]).sum(axis=1, dtype=np.int64)
            overlaps[(ai, bi)] = prod / n
    if overlaps:
        all_r = np.concatenate([r for r in overlaps.values()])
        out["r"] = float(all_r.mean())
        out["r_abs"] = float(np.abs(all_r).mean())
        out["r2"] = float((all_r**2).mean())
        out["r4"] = float((all_r**4).mean())
        out["r2_stderr"] = math.sqrt(
            sum(blocked_stderr(r**2, params.blocks) ** 2 for r in overlaps.values())
        ) / len(overlaps)
        for t, thr in enumerate(params.overlap_thresholds):
            out[f"r_le_{t}"] = float((all_r <= thr).mean())
            out[f"rabs_le_{t}"] = float((np.abs(all_r) <= thr).mean())

    for wdx, (lo_w, hi_w) in enumerate(params.m_windows):
        out[f"m_win_{wdx}"] = float(((hot_m >= lo_w) & (hot_m <= hi_w)).mean())

    eps = params.sign_eps
    if len(hot) >= 3:
        abc = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
        ultra = []
        m_vs_r = []
        for a, b, c in abc:
            r_ab = overlaps[(min(a, b), max(a, b))]
            r_ac = overlaps[(min(a, c), max(a, c))]
            r_bc = overlaps[(min(b, c), max(b, c))]
            ultra.append(r_ab < np.minimum(r_ac, r_bc) - eps)
            m_vs_r.append(m_series[hot[c]] ** 2 > np.abs(r_ab) + eps)
        out["ultra_viol"] = float(np.mean(ultra))
        out["m2_gt_r"] = float(np.mean(m_vs_r))

    if params.gg_level:
        nl = params.gg_level
        rows = {}
        for other in range(1, nl + 1):
            pair = (0, other)
            rows[other] = overlaps[pair]
        series = {k: (np.abs(v) if params.gg_absolute else v) for k, v in rows.items()}
        fams: dict[str, np.ndarray] = {"one": np.ones_like(series[1])}
        sign_prod = np.ones_like(series[1])
        for a in range(nl):
            for b in range(a + 1, nl):
                pr = overlaps[(a, b)]
                sign_prod = sign_prod * np.sign(np.abs(pr) if params.gg_absolute else pr)
        fams["prodsign"] = sign_prod
        psi = params.gg_psi
        psi_new = _psi_apply(psi, series[nl])
        psi_base = _psi_apply(psi, series[1])
        out["gg_psi_base"] = float(psi_base.mean())
        for fid, fvals in fams.items():
            out[f"gg_f_{fid}"] = float(fvals.mean())
            out[f"gg_new_{fid}"] = float((psi_new * fvals).mean())
            for l in range(1, nl):
                out[f"gg_mid_{fid}_{l}"] = float((_psi_apply(psi, series[l]) * fvals).mean())

    # replica bound across all chains; int64 is exact here since every
    # quantity is bounded by (chains * n)^2
    spin_sums = snaps.sum(axis=2, dtype=np.int64)  # (chains, sweeps)
    n_chain = snaps.shape[0]
    lhs = np.abs(spin_sums).sum(axis=0) ** 2
    dot_term = np.zeros(params.sweeps, dtype=np.int64)
    for a in range(n_chain):
        for b in range(a + 1, n_chain):
            dot_term += np.abs((snaps[a] * snaps[b]).sum(axis=1, dtype=np.int64))
    rhs = n * n * n_chain + 2 * n * dot_term
    out["replica_checks"] = float(params.sweeps)
    out["replica_violations"] = float(np.sum(lhs > rhs))

    if params.enumeration_crosscheck:
        ex = enumerate_exact(d, params.beta, params.want_r4)
        out["exact_m"] = ex.m_mean
        out["exact_m_abs"] = ex.m_abs
        out["exact_m2"] = ex.m2
        out["exact_r2"] = ex.r2
        out["exact_f"] = ex.free_energy
        if params.want_r4 and ex.r4 is not None:
            out["exact_r4"] = ex.r4
    return out


def _task(args: tuple) -> dict[str, float]:
    params_dict, index = args
    params_dict["m_windows"] = tuple(tuple(w) for w in params_dict["m_windows"])
    params_dict["overlap_thresholds"] = tuple(params_dict["overlap_thresholds"])
    params_dict["coeffs"] = tuple(params_dict["coeffs"])
    return _disorder_statistics(SimulationParams(**params_dict), index)


@dataclass
class SimulationResult:
    params: SimulationParams
    acc: MomentAccumulator
    per_disorder: dict[str, np.ndarray]
    replica_violations: int
    replica_checks: int

    def mean(self, name: str) -> float:
        return self.acc.mean(name)

    def stderr(self, name: str) -> float:
        return self.acc.stderr(name)


def estimate_observables(params: SimulationParams) -> SimulationResult:
    """Run every disorder and aggregate disorder-level means.

    Workers (if threads > 1) each handle whole disorders; partial results
    are merged in disorder order, so the totals do not depend on the thread
    count.
    """
    params.validate()
    if params.n < 1 or params.n > MAX_SPINS_MC:
        raise DomainError(f"n must be in [1, {MAX_SPINS_MC}]")
    results: list[dict[str, float]]
    if params.threads > 1:
        tasks = [(asdict(params), i) for i in range(params.n_disorder)]
        with ProcessPoolExecutor(max_workers=params.threads) as pool:
            results = list(pool.map(_task, tasks, chunksize=4))
    else:
        results = [_disorder_statistics(params, i) for i in range(params.n_disorder)]

    acc = MomentAccumulator()
    violations = 0
    checks = 0
    collected: dict[str, list[float]] = {}
    for res in results:
        violations += int(res.pop("replica_violations"))
        checks += int(res.pop("replica_checks"))
        acc.add_dict(res)
        for k, v in res.items():
            collected.setdefault(k, []).append(v)
    per_disorder = {k: np.array(v) for k, v in collected.items()}
    return SimulationResult(params, acc, per_disorder, violations, checks)


# ---------------------------------------------------------------------------
# structural checks usable on raw configurations


def replica_bound_check(configs: np.ndarray) -> tuple[float, float, bool]:
    """For any configurations (rows of +-1): sum_l |m_l| against
    sqrt(count + sum_{l != l'} |R_{l l'}|), decided in exact integer
    arithmetic.  Returns (lhs, rhs, holds)."""
    configs = np.asarray(configs)
    if configs.ndim != 2:
        raise DomainError("configs must be a 2-d array of chains x spins")
    count, n = configs.shape
    sums = [int(abs(int(row.sum()))) for row in configs.astype(np.int64)]
    lhs_int = sum(sums) ** 2
    dot_sum = 0
    rows = configs.astype(np.int64)
    for a in range(count):
        for b in range(count):
            if a != b:
                dot_sum += abs(int(rows[a] @ rows[b]))
    rhs_int = n * n * count + n * dot_sum
    lhs = sum(sums) / n
    rhs = math.sqrt(count + dot_sum / n)
    return lhs, rhs, lhs_int <= rhs_int


def gg_residual(result: SimulationResult) -> dict[str, dict[str, float]]:
    """Overlap-coupling residuals from an estimation run with gg_level set:
    for each test function family, n * E<psi(R_{1,n+1}) f> minus the
    predicted combination, with a leave-one-disorder-out error."""
    params = result.params
    nl = params.gg_level
    if not nl:
        raise DomainError("run was not configured with gg_level")
    out: dict[str, dict[str, float]] = {}
    for fid in ("one", "prodsign"):
        names = [f"gg_new_{fid}", "gg_psi_base", f"gg_f_{fid}"]
        names += [f"gg_mid_{fid}_{l}" for l in range(1, nl)]
        samples = {k: result.per_disorder[k] for k in names}

        def residual(means: dict[str, float], _fid=fid) -> float:
            value = nl * means[f"gg_new_{_fid}"]
            value -= means["gg_psi_base"] * means[f"gg_f_{_fid}"]
            for l in range(1, nl):
                value -= means[f"gg_mid_{_fid}_{l}"]
            return value

        point = residual({k: float(np.mean(v)) for k, v in samples.items()})
        err = jackknife_stderr(residual, samples)
        out[fid] = {"residual": point, "stderr": err}
    return out


@dataclass
class DerivativeCheck:
    p: int
    epsilon: float
    lhs: float  # centered difference of E log Z / n in the coefficient
    rhs: float  # c_p (1 - E<R^{2p}>) at the center
    diff: float
    stderr: float
    n_disorder: int


def finite_n_derivative_check(
    temp: TemperaturePoint,
    h: GaussianField,
    n: int,
    p: int,
    n_disorder: int,
    epsilon: float = 1e-4,
    root_seed: int = 0,
) -> DerivativeCheck:
    """Exact-enumeration check that d(E log Z / n)/d c_p equals
    c_p (1 - E<R_{12}^{2p}>) at finite n.

    The enumeration components are linear in the coefficients, so both
    perturbed free energies and the central moment reuse one enumeration per
    disorder (common random numbers; the difference is exact, not sampled).
    """
    xi = temp.xi
    if not 1 <= p <= 2:
        raise DomainError("derivative check supports p = 1 or 2")
    coeffs = list(xi.coeffs) + [0.0] * (2 - len(xi.coeffs))
    if p == 2 and coeffs[1] == 0.0:
        raise DomainError("p = 2 derivative needs a nonzero quartic coefficient")
    lhs_vals = []
    rhs_vals = []
    for index in range(n_disorder):
        d = sample_disorder(MixtureXi(tuple(coeffs)), h, n, index, root_seed)
        comp = enumeration_components(d)
        c1, c2 = coeffs
        up = [c1, c2]
        dn = [c1, c2]
        up[p - 1] += epsilon
        dn[p - 1] -= epsilon
        e_up = comp.energies(temp.beta, up[0], up[1])
        e_dn = comp.energies(temp.beta, dn[0], dn[1])
        shift = max(e_up.max(), e_dn.max())
        logz_up = shift + math.log(np.exp(e_up - shift).sum())
        logz_dn = shift + math.log(np.exp(e_dn - shift).sum())
        lhs_vals.append((logz_up - logz_dn) / (2.0 * epsilon * n))
        center = exact_statistics(comp, temp.beta, c1, c2, want_r4=(p == 2))
        moment = center.r4 if p == 2 else center.r2
        rhs_vals.append(coeffs[p - 1] * (1.0 - moment))
    diffs = np.array(lhs_vals) - np.array(rhs_vals)
    return DerivativeCheck(
        p,
        epsilon,
        float(np.mean(lhs_vals)),
        float(np.mean(rhs_vals)),
        float(diffs.mean()),
        float(diffs.std(ddof=1) / math.sqrt(n_disorder)) if n_disorder > 1 else 0.0,
        n_disorder,
    )
