import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats
from scipy.integrate import quad

from evmfade.fading import (INF, InterfererProfile, ShadowedFadingParams, SpecialCase,
                            UnsupportedError, classify, nakagami, no_fading, power_moment,
                            power_pdf, rayleigh, rician, sample_power, sample_sum_power,
                            special_case_params, sum_power_pdf)
from evmfade.specfun import DomainError
from oracles import mp


# ---------------------------------------------------------------- parameters
def test_thetas():
    p = ShadowedFadingParams(2.0, 1.5, 3.0)
    assert p.theta1 == pytest.approx(1 / (1.5 * 3))
    assert p.theta2 == pytest.approx((1.5 * 2 + 3) / (1.5 * 3 * 3))
    assert rician(4.0).theta2 == rician(4.0).theta1


@pytest.mark.parametrize("args", [(-1.0, 1.0, 1.0), (1.0, 0.0, 1.0), (1.0, 1.0, 0.0),
                                  (1.0, math.inf, 1.0), (math.inf, 1.0, 2.0)])
def test_params_invalid(args):
    with pytest.raises(DomainError):
        ShadowedFadingParams(*args)


def test_params_accept_inf_string():
    assert ShadowedFadingParams(1.0, 2.0, "inf").m == INF


def test_profile():
    prof = InterfererProfile.iid(rayleigh(), 3)
    assert prof.L == 3 and prof.is_iid
    mixed = InterfererProfile((rayleigh(), rician(2.0)))
    assert not mixed.is_iid and list(mixed) == [rayleigh(), rician(2.0)]
    with pytest.raises(DomainError):
        InterfererProfile(())


@pytest.mark.parametrize("tag, value, expected", [
    (SpecialCase.RICIAN, 3.0, (3.0, 1.0, INF)),
    (SpecialCase.NAKAGAMI, 2.0, (0.0, 2.0, INF)),
    (SpecialCase.RAYLEIGH, None, (0.0, 1.0, INF)),
    (SpecialCase.NO_FADING, None, (INF, 1.0, INF)),
])
def test_special_case_params(tag, value, expected):
    p = special_case_params(tag, value)
    assert (p.kappa, p.mu, p.m) == expected
    assert classify(p) is tag


def test_classify_general():
    assert classify(ShadowedFadingParams(1.0, 2.0, 3.0)) is SpecialCase.KAPPA_MU_SHADOWED
    assert classify(ShadowedFadingParams(1.0, 2.0)) is SpecialCase.KAPPA_MU


# ---------------------------------------------------------------- pdf
def test_rayleigh_pdf():
    assert power_pdf(rayleigh(), 0.5) == pytest.approx(math.exp(-0.5), rel=1e-14)


def test_pdf_negative_x():
    with pytest.raises(DomainError):
        power_pdf(rayleigh(), -0.1)


def test_pdf_no_density_for_point_mass():
    with pytest.raises(DomainError):
        power_pdf(no_fading(), 1.0)


def _mp_pdf(k, mu, m, x):
    # the textbook form with the raw 1F1, evaluated at 40 digits
    k, mu, x = mp.mpf(k), mp.mpf(mu), mp.mpf(x)
    t1 = 1 / (mu * (1 + k))
    if m == INF:
        return float(x ** (mu - 1) / (t1 ** mu * mp.gamma(mu)) * mp.exp(-x / t1 - mu * k)
                     * mp.hyp0f1(mu, mu * k * x / t1))
    m = mp.mpf(m)
    t2 = (mu * k + m) / (mu * (1 + k) * m)
    return float(t1 ** (m - mu) * x ** (mu - 1) / (t2 ** m * mp.gamma(mu)) * mp.exp(-x / t1)
                 * mp.hyp1f1(m, mu, (t2 - t1) * x / (t1 * t2)))


@pytest.mark.parametrize("k, mu, m", [(2.0, 1.5, 3.0), (5.0, 2.0, 1.0), (0.5, 0.7, 0.6),
                                      (10.0, 4.0, 20.0), (3.0, 1.0, INF), (0.0, 2.5, INF),
                                      (1.0, 1.0, 2.0)])
@pytest.mark.parametrize("x", [0.0, 1e-3, 0.3, 1.0, 2.5, 8.0])
def test_pdf_vs_mpmath(k, mu, m, x):
    p = ShadowedFadingParams(k, mu, m)
    if x == 0.0:
        # the density at 0 is the right limit
        x0 = 1e-300 if mu == 1 else None
        if x0 is None:
            assert power_pdf(p, 0.0) == (0.0 if mu > 1 else math.inf)
            return
        assert power_pdf(p, 0.0) == pytest.approx(_mp_pdf(k, mu, m, x0), rel=1e-12)
        return
    assert power_pdf(p, x) == pytest.approx(_mp_pdf(k, mu, m, x), rel=1e-10)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.0, 10.0), st.floats(0.6, 5.0), st.floats(0.5, 20.0))
def test_pdf_normalization_and_unit_mean(k, mu, m):
    p = ShadowedFadingParams(k, mu, m)
    assert power_moment(p, 0.0) == pytest.approx(1.0, abs=1e-8)
    assert power_moment(p, 1.0) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("mu", [0.8, 1.0, 2.5])
@pytest.mark.parametrize("x", [0.2, 1.0, 3.0])
def test_pdf_reduces_to_gamma(mu, x):
    p = ShadowedFadingParams(1e-8, mu, 1e7)
    assert power_pdf(p, x) == pytest.approx(stats.gamma.pdf(x, mu, scale=1 / mu), abs=1e-5)


def test_large_m_approaches_kappamu():
    a = power_pdf(ShadowedFadingParams(3.0, 1.5, 1e7), 0.8)
    b = power_pdf(ShadowedFadingParams(3.0, 1.5), 0.8)
    assert a == pytest.approx(b, rel=1e-5)


# ---------------------------------------------------------------- sum pdf
@pytest.mark.parametrize("x", [0.1, 1.0, 3.0])
@pytest.mark.parametrize("p", [ShadowedFadingParams(2.0, 1.5, 3.0), rician(2.0), nakagami(3.0)])
def test_sum_pdf_single_entry(p, x):
    assert sum_power_pdf(InterfererProfile((p,)), x) == pytest.approx(power_pdf(p, x), rel=1e-12)


def test_sum_of_two_exponentials():
    # two unit-mean exponentials sum to Gamma(2, 1): density x e^{-x}
    prof = InterfererProfile.iid(nakagami(1.0), 2)
    assert sum_power_pdf(prof, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.3, 6.0), st.integers(1, 6), st.floats(0.05, 12.0))
def test_sum_pdf_iid_nakagami_is_gamma(m_I, L, x):
    prof = InterfererProfile.iid(nakagami(m_I), L)
    ref = stats.gamma.pdf(x, L * m_I, scale=1.0 / m_I)
    assert sum_power_pdf(prof, x) == pytest.approx(ref, rel=1e-8, abs=1e-300)


def test_sum_pdf_permutation_invariant():
    es = [ShadowedFadingParams(1, 1, 2), ShadowedFadingParams(2, 2, 1),
          ShadowedFadingParams(0.5, 1.5, 3)]
    a = sum_power_pdf(InterfererProfile(tuple(es)), 1.5)
    b = sum_power_pdf(InterfererProfile(tuple(es[::-1])), 1.5)
    assert a == pytest.approx(b, rel=1e-12)


def test_sum_pdf_double_quadrature():
    es = [ShadowedFadingParams(1, 1, 2), ShadowedFadingParams(2, 2, 1),
          ShadowedFadingParams(0.5, 1.5, 3)]
    X = 1.5

    def inner(y):
        return quad(lambda u: power_pdf(es[0], u) * power_pdf(es[1], y - u), 0, y,
                    epsabs=1e-13, epsrel=1e-12)[0]

    ref = quad(lambda y: inner(y) * power_pdf(es[2], X - y), 0, X, epsabs=1e-13,
               epsrel=1e-12)[0]
    assert sum_power_pdf(InterfererProfile(tuple(es)), X) == pytest.approx(ref, rel=1e-9)


def test_sum_pdf_normalized():
    prof = InterfererProfile((ShadowedFadingParams(1, 1, 2), nakagami(2.0),
                              ShadowedFadingParams(3, 2, 0.8)))
    # the tail beyond 80 is below e^-70
    mass = quad(lambda x: sum_power_pdf(prof, x), 0, 80.0, limit=200)[0]
    assert mass == pytest.approx(1.0, abs=1e-8)


def test_sum_pdf_unsupported_kappamu():
    with pytest.raises(UnsupportedError):
        sum_power_pdf(InterfererProfile((rician(2.0), rician(3.0))), 1.0)


# ---------------------------------------------------------------- samplers
def test_sample_mean():
    r = np.random.default_rng(1)
    x = sample_power(ShadowedFadingParams(2.0, 2.0, 4.0), r, 1_000_000)
    assert abs(x.mean() - 1.0) < 0.005


def test_rayleigh_sample_variance():
    x = sample_power(rayleigh(), np.random.default_rng(2), 1_000_000)
    assert abs(x.var() - 1.0) < 0.01


def test_sample_scalar_and_point_mass(rng):
    assert isinstance(sample_power(rician(2.0), rng), float)
    assert sample_power(no_fading(), rng) == 1.0


@pytest.mark.parametrize("p", [ShadowedFadingParams(1, 1, 2), ShadowedFadingParams(2, 3, 0.7),
                               rician(5.0), nakagami(2.0)])
def test_physical_and_mixture_paths_agree(p):
    a = sample_power(p, np.random.default_rng(3), 200_000, method="mixture")
    b = sample_power(p, np.random.default_rng(4), 200_000, method="physical")
    assert stats.ks_2samp(a, b).pvalue > 1e-3
    assert b.mean() == pytest.approx(1.0, abs=0.01)


def test_physical_needs_integer_mu(rng):
    with pytest.raises(UnsupportedError):
        sample_power(ShadowedFadingParams(1.0, 1.5, 2.0), rng, 10, method="physical")


@pytest.mark.parametrize("p", [ShadowedFadingParams(2.0, 1.5, 3.0), rician(3.0)])
def test_sampler_ks_against_cdf(p):
    x = np.sort(sample_power(p, np.random.default_rng(5), 100_000))
    grid = np.linspace(0.0, x[-1], 2001)
    pieces = [quad(lambda t: power_pdf(p, t), lo, hi)[0] for lo, hi in zip(grid[:-1], grid[1:])]
    cdf = np.concatenate([[0.0], np.cumsum(pieces)])
    F = np.interp(x, grid, cdf)
    n = len(x)
    d = max(np.max(np.arange(1, n + 1) / n - F), np.max(F - np.arange(n) / n))
    assert d < 1.63 / math.sqrt(n)  # 1% critical value


def test_sample_sum_power_mean():
    prof = InterfererProfile((rayleigh(), ShadowedFadingParams(1, 2, 3)))
    s = sample_sum_power(prof, np.random.default_rng(6), 400_000)
    assert s.mean() == pytest.approx(2.0, abs=0.01)
