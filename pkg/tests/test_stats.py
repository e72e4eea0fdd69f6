import math

import numpy as np
import pytest

from skcw.errors import DomainError
from skcw.stats import MomentAccumulator, blocked_stderr, jackknife_stderr


def test_mean_variance_against_numpy():
    rng = np.random.default_rng(5)
    data = rng.normal(2.0, 1.5, size=500)
    acc = MomentAccumulator()
    for v in data:
        acc.add("x", v)
    assert acc.count("x") == 500
    assert acc.mean("x") == pytest.approx(data.mean(), rel=1e-12)
    assert acc.variance("x") == pytest.approx(data.var(ddof=1), rel=1e-9)
    assert acc.stderr("x") == pytest.approx(data.std(ddof=1) / math.sqrt(500), rel=1e-9)


def test_merge_associative_and_pure():
    rng = np.random.default_rng(6)
    chunks = [rng.normal(size=40) for _ in range(3)]
    accs = []
    for chunk in chunks:
        a = MomentAccumulator()
        for v in chunk:
            a.add("y", v)
        accs.append(a)
    left = accs[0].merge(accs[1]).merge(accs[2])
    right = accs[0].merge(accs[1].merge(accs[2]))
    # float addition is associative only up to rounding
    assert left.mean("y") == pytest.approx(right.mean("y"), rel=1e-13)
    assert left.variance("y") == pytest.approx(right.variance("y"), rel=1e-13)
    assert left.count("y") == right.count("y") == 120
    # merge must not mutate its operands
    assert accs[0].count("y") == 40


def test_disjoint_names_merge():
    a, b = MomentAccumulator(), MomentAccumulator()
    a.add("m", 1.0)
    b.add("r", 2.0)
    both = a.merge(b)
    assert both.names() == ["m", "r"]
    assert both.count("m") == 1 and both.count("r") == 1


def test_accumulator_guards():
    acc = MomentAccumulator()
    with pytest.raises(DomainError):
        acc.mean("missing")
    acc.add("x", 1.0)
    with pytest.raises(DomainError):
        acc.variance("x")
    acc.add("x", 1.0)
    assert acc.variance("x") == 0.0  # identical samples, clamped exact zero


def test_blocked_stderr_iid_matches_plain():
    rng = np.random.default_rng(7)
    series = rng.normal(size=20_000)
    plain = series.std(ddof=1) / math.sqrt(len(series))
    blocked = blocked_stderr(series, 20)
    assert blocked == pytest.approx(plain, rel=0.35)


def test_blocked_stderr_sees_autocorrelation():
    # AR(1) with strong positive correlation; naive stderr is far too small
    rng = np.random.default_rng(8)
    n, rho = 40_000, 0.95
    noise = rng.normal(size=n)
    series = np.empty(n)
    series[0] = noise[0]
    for i in range(1, n):
        series[i] = rho * series[i - 1] + noise[i] * math.sqrt(1 - rho**2)
    naive = series.std(ddof=1) / math.sqrt(n)
    blocked = blocked_stderr(series, 20)
    assert blocked > 3.0 * naive


def test_blocked_stderr_guards():
    with pytest.raises(DomainError):
        blocked_stderr(np.ones(100), 1)
    with pytest.raises(DomainError):
        blocked_stderr(np.ones(3), 10)


def test_jackknife_linear_statistic_matches_closed_form():
    # for statistic = mean the jackknife reduces to the usual stderr
    rng = np.random.default_rng(9)
    x = rng.normal(size=250)
    got = jackknife_stderr(lambda m: m["x"], {"x": x})
    assert got == pytest.approx(x.std(ddof=1) / math.sqrt(len(x)), rel=1e-10)


def test_jackknife_ratio_statistic():
    rng = np.random.default_rng(10)
    a = rng.normal(5.0, 1.0, size=400)
    b = rng.normal(2.0, 0.5, size=400)
    se = jackknife_stderr(lambda m: m["a"] / m["b"], {"a": a, "b": b})
    # delta-method scale for independent a, b
    ma, mb = a.mean(), b.mean()
    delta = abs(ma / mb) * math.sqrt(
        a.var(ddof=1) / (400 * ma**2) + b.var(ddof=1) / (400 * mb**2)
    )
    assert se == pytest.approx(delta, rel=0.2)


def test_jackknife_guards():
    with pytest.raises(DomainError):
        jackknife_stderr(lambda m: m["a"], {"a": np.ones(3), "b": np.ones(4)})
    with pytest.raises(DomainError):
        jackknife_stderr(lambda m: m["a"], {"a": np.ones(1)})
