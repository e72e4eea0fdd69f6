import math

import pytest

from skcw.cw import cw_curve, cw_fixed_point
from skcw.errors import DomainError
from skcw.model import GaussianField, MixtureXi, TemperaturePoint
from skcw.parisi import dirac
from skcw.special import LN2
from skcw.variational import (
    ArgmaxReport,
    classify_Bd,
    classify_maximizers,
    magnetization_overlap_bound_check,
    overlap_support_min,
    predicted_overlap_law,
    skfi_free_energy,
    skfi_objective,
)

H0 = GaussianField(0.0, 0.0)
NOXI = MixtureXi(())


def test_classify_maximizers():
    assert classify_maximizers([0.3]) == "unique"
    assert classify_maximizers([-0.5, 0.5]) == "symmetric-pair"
    assert classify_maximizers([-0.5, 0.5000001]) == "symmetric-pair"  # within tol
    assert classify_maximizers([0.2, 0.5]) == "ambiguous"
    assert classify_maximizers([-1e-9, 1e-9]) == "ambiguous"  # pair at zero is not split
    assert classify_maximizers([0.1, 0.2, 0.3]) == "ambiguous"


def test_report_json_roundtrip():
    rep = ArgmaxReport(1.25, (-0.4, 0.4), "symmetric-pair", 1e-6)
    assert ArgmaxReport.from_json(rep.to_json()) == rep


def test_degenerate_beta_zero():
    rep = skfi_free_energy(TemperaturePoint(0.0, NOXI), H0)
    assert rep.classification == "degenerate-beta-zero"
    assert rep.value == pytest.approx(LN2)
    with pytest.raises(DomainError):
        classify_Bd(TemperaturePoint(0.0, NOXI), H0)


def test_pure_coupling_subcritical_unique_zero():
    rep = skfi_free_energy(TemperaturePoint(0.8, NOXI), H0)
    assert rep.classification == "unique"
    assert rep.maximizers == (0.0,)
    assert rep.value == pytest.approx(LN2, abs=1e-9)


def test_pure_coupling_supercritical_pair():
    beta = 2.0
    rep = skfi_free_energy(TemperaturePoint(beta, NOXI), H0)
    assert rep.classification == "symmetric-pair"
    lo, hi = rep.maximizers
    assert lo == pytest.approx(-hi, abs=1e-9)
    mu = cw_fixed_point(beta, H0)
    assert hi == pytest.approx(mu, abs=1e-6)
    assert rep.value == pytest.approx(cw_curve(mu, beta, H0), abs=1e-9)


def test_positive_mean_field_breaks_symmetry():
    rep = skfi_free_energy(TemperaturePoint(2.0, NOXI), GaussianField(0.15, 0.0))
    assert rep.classification == "unique"
    assert len(rep.maximizers) == 1 and rep.maximizers[0] > 0.8


def test_objective_matches_free_energy_at_maximizer():
    # single-atom level and coarse scan keep this integration check quick;
    # the acceptance suite exercises the production settings
    temp = TemperaturePoint(1.6, MixtureXi((0.4,)))
    h = GaussianField(0.0, 0.2)
    opts = {"k_max": 1, "order": 32}
    rep = skfi_free_energy(temp, h, scan_step=0.025, seed=0, **opts)
    mu = max(rep.maximizers)
    direct = skfi_objective(mu, temp, h, seed=0, **opts)
    assert direct == pytest.approx(rep.value, abs=5e-6)
    # nearby points do not beat the reported maximum (beyond refine noise)
    for off in (-0.03, 0.03):
        if abs(mu + off) <= 1.0:
            assert skfi_objective(mu + off, temp, h, seed=0, **opts) <= rep.value + 1e-6


def test_objective_domain():
    with pytest.raises(DomainError):
        skfi_objective(1.2, TemperaturePoint(1.0, NOXI), H0)


def test_zero_coupling_reduces_to_plain_minimize():
    # beta = 0: the magnetization term vanishes; value is the plain
    # disordered free energy and the maximizer set collapses
    temp = TemperaturePoint(0.0, MixtureXi((0.3,)))
    rep = skfi_free_energy(temp, H0)
    assert rep.classification == "degenerate-beta-zero"
    assert rep.value == pytest.approx(LN2 + 0.045, abs=1e-4)


def test_predicted_law_subcritical_single_atom():
    # weak coupling, weak disorder: replica-symmetric single atom near
    # E tanh^2(h) and mu* = 0; the argmax report is handed in so only the
    # measure solve runs here
    temp = TemperaturePoint(0.5, MixtureXi((0.3,)))
    h = GaussianField(0.0, 0.3)
    rep = ArgmaxReport(0.74, (0.0,), "unique", 1e-6)
    law = predicted_overlap_law(temp, h, seed=0, report=rep)
    assert len(law.atoms) == 1
    assert 0.0 < overlap_support_min(law) < 0.2
    assert law.weights == (1.0,)


def test_predicted_law_refuses_ambiguous():
    rep = ArgmaxReport(1.0, (0.2, 0.5), "ambiguous", 1e-6)
    with pytest.raises(DomainError):
        predicted_overlap_law(
            TemperaturePoint(1.0, MixtureXi((0.3,))), H0, report=rep
        )


def test_bound_check_skips_zero_mixture():
    chk = magnetization_overlap_bound_check(TemperaturePoint(2.0, NOXI), H0)
    assert chk.status == "skipped-nonidentifiable"
    assert chk.holds is None
    assert math.isnan(chk.support_min)


def test_overlap_support_min():
    assert overlap_support_min(dirac(0.3)) == 0.3
