"""Compiled inner loops: the backward-recursion level step, heat-bath
sweeps, and Gray-code exact enumeration.

Every kernel is deterministic given its inputs; all randomness is drawn by
the callers and passed in as arrays.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def spline_slopes(y: np.ndarray, dx: float, slope0: float, slope1: float) -> np.ndarray:
    """Nodal derivatives of the clamped C2 cubic spline interpolant on a
    uniform grid (Thomas algorithm on the standard tridiagonal system)."""
    n = y.shape[0]
    d = np.empty(n)
    d[0] = slope0
    d[n - 1] = slope1
    if n <= 2:
        return d
    m = n - 2
    cp = np.empty(m)
    bp = np.empty(m)
    cp[0] = 0.25
    bp[0] = (3.0 * (y[2] - y[0]) / dx - d[0]) * 0.25
    for i in range(2, n - 1):
        rhs = 3.0 * (y[i + 1] - y[i - 1]) / dx
        if i == n - 2:
            rhs -= d[n - 1]
        denom = 4.0 - cp[i - 2]
        cp[i - 1] = 1.0 / denom
        bp[i - 1] = (rhs - bp[i - 2]) / denom
    d[n - 2] = bp[m - 1]
    for i in range(n - 3, 0, -1):
        d[i] = bp[i - 1] - cp[i - 1] * d[i + 1]
    return d


@njit(cache=True)
def recursion_level(
    y: np.ndarray,
    d: np.ndarray,
    dx: float,
    offsets: np.ndarray,
    qweights: np.ndarray,
    mass: float,
) -> np.ndarray:
    """One smoothing level: Gaussian quadrature over the even extension of
    the sampled function, combined as (1/m) ln E exp(m .) for mass m > 0 or
    a plain average for m == 0.

    y holds samples on x = i dx, i = 0..n-1; d the spline slopes there.
    Beyond the last sample the function continues linearly with slope one.
    The centered expm1 form of the combine stays accurate for masses down to
    1e-10; a max-shift form takes over before exp can overflow.  Rows are
    independent.
    """
    n = y.shape[0]
    width = (n - 1) * dx
    edge = y[n - 1]
    nq = offsets.shape[0]
    inv_dx = 1.0 / dx
    vals = np.empty((n, nq))
    for j in range(nq):
        off = offsets[j]
        # every target x_i + off sits at the same in-segment coordinate on
        # each side of the mirror, so the Hermite basis is shared per column
        k = int(math.floor(off * inv_dx))
        t = off * inv_dx - k
        omt = 1.0 - t
        b00 = (1.0 + 2.0 * t) * omt * omt
        b10 = t * omt * omt * dx
        b01 = t * t * (3.0 - 2.0 * t)
        b11 = t * t * (t - 1.0) * dx
        tm = 1.0 - t
        omtm = t
        c00 = (1.0 + 2.0 * tm) * omtm * omtm
        c10 = tm * omtm * omtm * dx
        c01 = tm * tm * (3.0 - 2.0 * tm)
        c11 = tm * tm * (tm - 1.0) * dx
        for i in range(n):
            u = i + k
            if 0 <= u <= n - 2:
                vals[i, j] = b00 * y[u] + b10 * d[u] + b01 * y[u + 1] + b11 * d[u + 1]
            elif u >= n - 1:
                vals[i, j] = edge + (i * dx + off - width)
            else:
                # mirror: |x_i + off| lands in segment -u-1 at coordinate 1-t
                um = -u - 1
                if um <= n - 2:
                    vals[i, j] = (
                        c00 * y[um] + c10 * d[um] + c01 * y[um + 1] + c11 * d[um + 1]
                    )
                else:
                    vals[i, j] = edge + (-(i * dx + off) - width)
    out = np.empty(n)
    for i in range(n):
        mean = 0.0
        for j in range(nq):
            mean += qweights[j] * vals[i, j]
        if mass == 0.0:
            out[i] = mean
        else:
            mx = 0.0
            for j in range(nq):
                dd = vals[i, j] - mean
                if dd > mx:
                    mx = dd
            if mass * mx < 500.0:
                s = 0.0
                for j in range(nq):
                    dd = mass * (vals[i, j] - mean)
                    s += qweights[j] * (math.expm1(dd) - dd)
                out[i] = mean + math.log1p(s) / mass
            else:
                vm = vals[i, 0]
                for j in range(1, nq):
                    if vals[i, j] > vm:
                        vm = vals[i, j]
                s = 0.0
                for j in range(nq):
                    s += qweights[j] * math.exp(mass * (vals[i, j] - vm))
                out[i] = vm + math.log(s) / mass
    return out


@njit(cache=True)
def heat_bath_run(
    sigma: np.ndarray,
    c2eff: np.ndarray,
    fields: np.ndarray,
    cw_coeff: float,
    orders: np.ndarray,
    uniforms: np.ndarray,
    snapshots: np.ndarray,
) -> None:
    """Heat-bath dynamics without a quartic term.

    sigma: (n,) int64 state, updated in place.  c2eff: symmetrized pair
    couplings including their temperature prefactor, zero diagonal.
    orders/uniforms: (sweeps, n) site visit order and acceptance draws.
    snapshots: (sweeps, n) int8, row t receives the state after sweep t.
    """
    n = sigma.shape[0]
    sweeps = orders.shape[0]
    S = 0
    for i in range(n):
        S += sigma[i]
    a = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for k in range(n):
            acc += c2eff[i, k] * sigma[k]
        a[i] = acc
    for t in range(sweeps):
        for pos in range(n):
            i = orders[t, pos]
            lam = cw_coeff * (S - sigma[i]) + a[i] + fields[i]
            if lam > 300.0:
                p = 1.0
            elif lam < -300.0:
                p = 0.0
            else:
                p = 1.0 / (1.0 + math.exp(-2.0 * lam))
            s_new = 1 if uniforms[t, pos] < p else -1
            if s_new != sigma[i]:
                ds = 2.0 * s_new
                S += 2 * s_new
                for k in range(n):
                    a[k] += ds * c2eff[k, i]
                sigma[i] = s_new
        for i in range(n):
            snapshots[t, i] = sigma[i]


@njit(cache=True, inline="always")
def _quartic_local(W1s: np.ndarray, W3s: np.ndarray, sigma: np.ndarray, i: int) -> float:
    """Odd part of the scaled quartic form at site i (site i excluded from
    the free indices)."""
    n = sigma.shape[0]
    acc = 0.0
    for j in range(n):
        if j == i:
            continue
        sj = sigma[j]
        for k in range(n):
            if k == i:
                continue
            sjk = sj * sigma[k]
            row = W1s[i, j, k]
            for l in range(n):
                if l == i:
                    continue
                acc += row[l] * (sjk * sigma[l])
    for mth in range(n):
        if mth == i:
            continue
        acc += W3s[i, mth] * sigma[mth]
    return acc


@njit(cache=True)
def heat_bath_run_g4(
    sigma: np.ndarray,
    c2eff: np.ndarray,
    W1s: np.ndarray,
    W3s: np.ndarray,
    fields: np.ndarray,
    cw_coeff: float,
    orders: np.ndarray,
    uniforms: np.ndarray,
    snapshots: np.ndarray,
) -> None:
    """Heat-bath dynamics with the quartic term.  W1s / W3s carry the
    temperature and size prefactor already; the quartic local field is
    recomputed per proposal (O(n^3))."""
    n = sigma.shape[0]
    sweeps = orders.shape[0]
    S = 0
    for i in range(n):
        S += sigma[i]
    a = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for k in range(n):
            acc += c2eff[i, k] * sigma[k]
        a[i] = acc
    for t in range(sweeps):
        for pos in range(n):
            i = orders[t, pos]
            lam = cw_coeff * (S - sigma[i]) + a[i] + fields[i]
            lam += _quartic_local(W1s, W3s, sigma, i)
            if lam > 300.0:
                p = 1.0
            elif lam < -300.0:
                p = 0.0
            else:
                p = 1.0 / (1.0 + math.exp(-2.0 * lam))
            s_new = 1 if uniforms[t, pos] < p else -1
            if s_new != sigma[i]:
                ds = 2.0 * s_new
                S += 2 * s_new
                for k in range(n):
                    a[k] += ds * c2eff[k, i]
                sigma[i] = s_new
        for i in range(n):
            snapshots[t, i] = sigma[i]


@njit(cache=True)
def gray_components(
    n: int, g2sum: float, c2: np.ndarray, fields: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-configuration energy components over all 2^n states in Gray-code
    order: total spin, raw pair form sigma^T g2 sigma (diagonal included),
    and the field sum.  Configuration t has spins set by the bits of
    t ^ (t >> 1); single spin flips update each component in O(n)."""
    size = 1 << n
    msum = np.empty(size, np.int64)
    pair = np.empty(size)
    fsum = np.empty(size)
    sigma = np.full(n, -1, np.int64)
    a = np.empty(n)
    for i in range(n):
        acc = 0.0
        for k in range(n):
            acc += c2[i, k] * sigma[k]
        a[i] = acc
    S = -n
    pcur = g2sum
    fcur = 0.0
    for i in range(n):
        fcur += fields[i] * sigma[i]
    msum[0] = S
    pair[0] = pcur
    fsum[0] = fcur
    for t in range(1, size):
        b = 0
        tt = t
        while tt & 1 == 0:
            b += 1
            tt >>= 1
        ds = -2.0 * sigma[b]
        pcur += ds * a[b]
        fcur += ds * fields[b]
        S += -2 * sigma[b]
        sigma[b] = -sigma[b]
        for k in range(n):
            a[k] += ds * c2[k, b]
        msum[t] = S
        pair[t] = pcur
        fsum[t] = fcur
    return msum, pair, fsum


@njit(cache=True)
def gray_components_g4(
    n: int,
    g2sum: float,
    c2: np.ndarray,
    fields: np.ndarray,
    g4sum: float,
    W1: np.ndarray,
    W3: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """gray_components plus the raw quartic form (diagonals included).
    The quartic flip update is the odd part of the form at the flipped
    site, O(n^3) per configuration."""
    size = 1 << n
    msum = np.empty(size, np.int64)
    pair = np.empty(size)
    quart = np.empty(size)
    fsum = np.empty(size)
    sigma = np.full(n, -1, np.int64)
    a = np.empty(n)
    for i in range(n):
        acc = 0.0
        for k in range(n):
            acc += c2[i, k] * sigma[k]
        a[i] = acc
    S = -n
    pcur = g2sum
    qcur = g4sum
    fcur = 0.0
    for i in range(n):
        fcur += fields[i] * sigma[i]
    msum[0] = S
    pair[0] = pcur
    quart[0] = qcur
    fsum[0] = fcur
    for t in range(1, size):
        b = 0
        tt = t
        while tt & 1 == 0:
            b += 1
            tt >>= 1
        ds = -2.0 * sigma[b]
        qcur += ds * _quartic_local(W1, W3, sigma, b)
        pcur += ds * a[b]
        fcur += ds * fields[b]
        S += -2 * sigma[b]
        sigma[b] = -sigma[b]
        for k in range(n):
            a[k] += ds * c2[k, b]
        msum[t] = S
        pair[t] = pcur
        quart[t] = qcur
        fsum[t] = fcur
    return msum, pair, quart, fsum
