import math

import numpy as np
import pytest

from ruinrate.errors import DomainError, NoPositiveRate
from ruinrate.levy import CompoundPoisson, Exponential, Gamma, GammaProcess, InverseGaussian, MixedExponential
from ruinrate.rate import golden_section_max, solve_rate, stationarity_residual, truncation_sweep
from ruinrate.risk import AffinePremium, RiskModel


def cp(p, sigma, claims=None, intensity=1.0):
    return RiskModel(p, sigma, CompoundPoisson(intensity, claims or Gamma(2.0, 1.0)))


def grid_max(model, n=2000):
    """Two-level grid scan of Phi: a coarse pass, then a zoom around the best cell."""
    lo, hi = 0.0, model.abscissa
    for _ in range(2):
        lam = np.linspace(lo, hi, n)[1:-1] if hi == model.abscissa else np.linspace(lo, hi, n)
        values = np.asarray(model.big_phi(lam))
        i = int(np.argmax(values))
        lo, hi = lam[max(i - 1, 0)], lam[min(i + 1, lam.size - 1)]
    return float(values.max())


def test_table_examples():
    assert solve_rate(cp(2.2, 0.0)).k == pytest.approx(0.00319, abs=5e-6)
    assert solve_rate(cp(2.4, 1.0)).k == pytest.approx(0.01073, abs=5e-6)
    assert solve_rate(cp(2.2, 0.0, Exponential(0.5))).k == pytest.approx(0.00238, abs=5e-6)


def test_inverse_gaussian_closed_form():
    r = solve_rate(RiskModel(1.1, 0.0, InverseGaussian(1.0)))
    assert r.lam == pytest.approx((1 - 1.1**-2) / 2, abs=1e-10)
    assert r.k == pytest.approx(0.1**2 / 2.2, abs=1e-10)
    assert not r.boundary_max


def test_gamma_process_closed_form():
    r = solve_rate(RiskModel(1.1, 0.0, GammaProcess(0.5, 0.5)))
    assert r.lam == pytest.approx(0.5 - 0.5 / 1.1, abs=1e-10)


def test_result_invariants():
    r = solve_rate(cp(2.2, 1.0))
    assert 0 < r.lam < r.lam0
    assert r.k > 0
    assert r.residual <= 1e-10
    assert r.concavity_ok
    assert set(r.as_dict()) == {"lam", "k", "residual", "lam0", "concavity_ok", "boundary_max"}


def test_no_positive_rate():
    with pytest.raises(NoPositiveRate, match="net benefit condition fails"):
        solve_rate(cp(2.0, 0.0))
    with pytest.raises(NoPositiveRate):
        solve_rate(RiskModel(0.9, 1.0, InverseGaussian(1.0)))


def test_stationarity_residual_examples():
    assert stationarity_residual(cp(2.2, 0.0), 0.0) == pytest.approx(0.2, abs=1e-14)
    assert abs(stationarity_residual(RiskModel(1.1, 0.0, GammaProcess(0.5, 0.5)), 0.5 - 0.5 / 1.1)) < 1e-12


def test_stationarity_residual_closed_forms():
    lam = 0.2
    g = RiskModel(1.3, 1.5, GammaProcess(0.5, 0.5))
    assert stationarity_residual(g, lam) == pytest.approx(1.3 - 1.5**2 * lam - 0.5 / (0.5 - lam), rel=1e-14)
    ig = RiskModel(1.3, 1.5, InverseGaussian(1.0))
    assert stationarity_residual(ig, lam) == pytest.approx(1.3 - 1.5**2 * lam - 1 / math.sqrt(1 - 2 * lam), rel=1e-14)


def battery():
    models = []
    for claims in [Exponential(0.5), Gamma(2.0, 1.0), MixedExponential(0.75, 0.75, 0.25)]:
        for eta, sigma in [(0.05, 0.0), (0.1, 1.0), (0.3, 3.0), (0.2, 10.0)]:
            models.append(cp(2 * (1 + eta), sigma, claims))
    for jumps in [GammaProcess(0.5, 0.5), InverseGaussian(1.0)]:
        for eta, sigma in [(0.1, 0.0), (0.2, 1.0), (0.3, 2.0), (0.1, 5.0), (0.5, 0.5), (1.0, 0.0), (0.05, 0.2)]:
            models.append(RiskModel(1 + eta, sigma, jumps))
    models.append(RiskModel(AffinePremium(2.2, 0.1), 0.5, CompoundPoisson(1.0, Gamma(2.0, 1.0))))
    models.append(cp(5.0, 0.0, Exponential(0.5), intensity=2.0))
    models.append(cp(0.6, 0.3, Exponential(2.0), intensity=1.0))
    models.append(cp(3.0, 2.0, Gamma(0.5, 0.25), intensity=0.5))
    return models


def test_battery_has_thirty_scenarios():
    assert len(battery()) == 30


@pytest.mark.parametrize("model", battery())
def test_golden_section_agrees_with_grid_scan(model):
    assert solve_rate(model).k == pytest.approx(grid_max(model), abs=1e-8)


def test_golden_section_on_parabola():
    assert golden_section_max(lambda x: -((x - 0.3) ** 2), 0.0, 1.0) == pytest.approx(0.3, abs=1e-10)


@pytest.mark.parametrize("c", [0.5, 2.0])
def test_time_scaling(c):
    base = solve_rate(cp(2.2, 0.0)).k
    scaled = solve_rate(cp(2.2 * c, 0.0, intensity=c)).k
    assert scaled == pytest.approx(c * base, rel=1e-9)


def test_monotone_in_sigma_and_premium():
    sigmas = [0.0, 1.0, 2.0, 4.0, 8.0]
    ps = [2.1, 2.2, 2.4, 2.6, 3.0]
    k = np.array([[solve_rate(cp(p, s)).k for p in ps] for s in sigmas])
    assert np.all(np.diff(k, axis=0) <= 0)
    assert np.all(np.diff(k, axis=1) >= 0)


def test_inverse_gaussian_large_premium_stays_interior():
    # Phi' tends to -inf at gamma^2/2, so the maximizer never sits on the boundary
    r = solve_rate(RiskModel(50.0, 0.0, InverseGaussian(1.0)))
    assert not r.boundary_max
    assert r.lam < r.lam0
    assert r.residual <= 1e-10


@pytest.mark.parametrize("jumps", [GammaProcess(0.5, 0.5), InverseGaussian(1.0)])
def test_truncation_sweep_converges(jumps):
    model = RiskModel(1.1, 0.0, jumps)
    eps = [0.1 / 2**i for i in range(6)] + [1e-4]
    sweep = truncation_sweep(model, eps)
    gaps = [s.gap for s in sweep]
    assert all(b <= a + 1e-6 for a, b in zip(gaps, gaps[1:]))
    assert sweep[-1].gap < 1e-3


def test_truncation_sweep_rejects_bad_input():
    with pytest.raises(DomainError):
        truncation_sweep(cp(2.2, 0.0), [0.1])
    with pytest.raises(DomainError):
        truncation_sweep(RiskModel(1.1, 0.0, GammaProcess(0.5, 0.5)), [0.01, 0.1])
    with pytest.raises(DomainError):
        truncation_sweep(RiskModel(1.1, 0.0, GammaProcess(0.5, 0.5)), [0.0])
