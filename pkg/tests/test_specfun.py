import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import roots_genlaguerre

from evmfade.specfun import (DomainError, FdArguments, Phi2Arguments, PrecisionError,
                             PrecisionPolicy, gamma_fn, gauss_2f1, gauss_2f1_integral,
                             kummer_1f1, lauricella_fd, log_gamma_ratio, phi2_n, pochhammer,
                             tricomi_u, tricomi_u_scaled)
from oracles import mp, mp_1f1, mp_2f1, mp_fd, mp_phi2, mp_tricomi, rel_err

RTOL = 1e-10


# ---------------------------------------------------------------- policy
@pytest.mark.parametrize("kw", [dict(rel_tol=0.0), dict(rel_tol=1e-3), dict(max_terms=99),
                                dict(quad_nodes=16), dict(quad_upper_cutoff=-1.0)])
def test_policy_rejects_bad_fields(kw):
    with pytest.raises(ValueError):
        PrecisionPolicy(**kw)


def test_policy_defaults():
    p = PrecisionPolicy()
    assert p.rel_tol == 1e-10 and p.max_terms == 100_000 and p.quad_nodes >= 32


# ---------------------------------------------------------------- gamma
@pytest.mark.parametrize("z, expected", [(1.0, 1.0), (0.5, math.sqrt(math.pi)),
                                         (4.5, 6.5625 * math.sqrt(math.pi))])
def test_gamma_values(z, expected):
    assert gamma_fn(z) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("z", [0.0, -1.0, -0.5])
def test_gamma_domain(z):
    with pytest.raises(DomainError):
        gamma_fn(z)


@given(st.floats(min_value=1e-3, max_value=49.0))
def test_gamma_recurrence(z):
    assert gamma_fn(z + 1.0) == pytest.approx(z * gamma_fn(z), rel=1e-12)


def test_log_gamma_ratio():
    assert math.exp(log_gamma_ratio(100.5, 100.0)) == pytest.approx(
        float(mp.gamma(100.5) / mp.gamma(100)), rel=1e-12)


@pytest.mark.parametrize("y, n, expected", [(3, 0, 1.0), (2, 3, 24.0), (0.5, 4, 6.5625),
                                            (-2.0, 3, 0.0)])
def test_pochhammer(y, n, expected):
    assert pochhammer(y, n) == expected


# ---------------------------------------------------------------- 1F1
def test_kummer_trivial():
    assert kummer_1f1(0.3, 1.7, 0.0) == 1.0
    assert kummer_1f1(1.0, 1.0, 1.0) == pytest.approx(math.e, rel=1e-14)


def test_kummer_brute_force_oracle():
    # 300-term series at 50 digits
    with mp.workdps(50):
        ref = mp.fsum(mp.rf(0.5, k) / mp.rf(1, k) * mp.mpf(-5) ** k / mp.factorial(k)
                      for k in range(300))
    assert rel_err(kummer_1f1(0.5, 1.0, -5.0), float(ref)) < RTOL


@pytest.mark.parametrize("a, b, z", [(0.5, 1.0, -30.0), (-0.5, 4.0, -12.0), (2.5, 1.5, 40.0),
                                     (0.5, 2.0, -400.0), (-0.5, 40.0, -80.0), (3.0, 0.7, -2.0),
                                     (-0.5, 1.0, -1e4), (7.0, 7.5, 150.0)])
def test_kummer_vs_mpmath(a, b, z):
    assert rel_err(kummer_1f1(a, b, z), mp_1f1(a, b, z)) < RTOL


@given(st.floats(0.05, 5.0), st.floats(0.1, 8.0), st.floats(1e-3, 20.0))
def test_kummer_transform(a, b, z):
    lhs = kummer_1f1(a, b, -z)
    rhs = math.exp(-z) * kummer_1f1(b - a, b, z)
    assert lhs == pytest.approx(rhs, rel=10 * RTOL)


def test_kummer_rejects_nonpositive_integer_b():
    with pytest.raises(DomainError):
        kummer_1f1(1.0, -2.0, 0.3)


# ---------------------------------------------------------------- 2F1
def test_2f1_trivial():
    assert gauss_2f1(1.3, 0.4, 2.0, 0.0) == 1.0
    assert gauss_2f1(1, 1, 2, 0.5) == pytest.approx(2 * math.log(2), rel=1e-13)


def test_2f1_laguerre_oracle():
    # 256-node generalized Gauss-Laguerre (weight t^(a-1) e^-t) on the 1F1 Laplace integral
    a, b, c, x = 1.5, 3.0, 2.0, 0.25
    t, w = roots_genlaguerre(256, a - 1)
    vals = np.array([mp_1f1(b, c, x * ti) for ti in t])
    ref = float(np.sum(w * vals) / math.gamma(a))
    assert rel_err(gauss_2f1(a, b, c, x), ref) < 1e-8


@pytest.mark.parametrize("x", np.round(np.arange(-0.9, 0.91, 0.1), 10))
@pytest.mark.parametrize("a, b, c", [(1.5, 3.0, 2.0), (0.5, 2.0, 1.5), (2.5, 0.7, 3.2)])
def test_2f1_series_matches_integral(a, b, c, x):
    pol = PrecisionPolicy()
    s = gauss_2f1(a, b, c, x, pol)
    i = gauss_2f1_integral(a, b, c, x, pol)
    assert abs(s - i) <= 10 * pol.rel_tol * abs(s)
    assert rel_err(s, mp_2f1(a, b, c, x)) < 10 * RTOL


@pytest.mark.parametrize("a, b, c, x", [(0.5, 3.0, 2.0, -100.0), (1.5, 2.0, 1.0, -1e4),
                                        (-0.5, 6.0, 3.0, -0.99), (0.5, 2.0, 3.0, 0.95),
                                        (2.0, 1.0, 2.5, 0.999), (-0.5, 40.0, 40.0, -3.0)])
def test_2f1_hard_points(a, b, c, x):
    assert rel_err(gauss_2f1(a, b, c, x), mp_2f1(a, b, c, x)) < 10 * RTOL


def test_2f1_random_vs_mpmath():
    r = np.random.default_rng(7)
    for _ in range(60):
        a, b = r.uniform(-0.5, 4, 2)
        c = r.uniform(0.3, 6)
        x = -math.expm1(r.uniform(-6, 0)) * r.choice([-30, 1])
        x = min(x, 0.98)
        assert rel_err(gauss_2f1(a, b, c, x), mp_2f1(a, b, c, x)) < 1e-9, (a, b, c, x)


@pytest.mark.parametrize("x", [1.0, 1.5])
def test_2f1_domain(x):
    with pytest.raises(DomainError):
        gauss_2f1(0.5, 1.0, 2.0, x)


# ---------------------------------------------------------------- Tricomi U
def test_tricomi_values():
    assert tricomi_u(1, 2, 4) == pytest.approx(0.25, rel=RTOL)


def _composite_oracle(a, b, z, n=10_000):
    # fixed composite Gauss-Legendre on t = u / (1 - u), 10^4 panels of 8 nodes
    x, w = np.polynomial.legendre.leggauss(8)
    edges = np.linspace(0.0, 1.0, n + 1)
    lo, hi = edges[:-1, None], edges[1:, None]
    u = (lo + hi) / 2 + (hi - lo) / 2 * x
    wt = (hi - lo) / 2 * w
    t = u / (1 - u)
    f = np.exp(-z * t + (a - 1) * np.log(t) + (b - a - 1) * np.log1p(t)) / (1 - u) ** 2
    return float(np.sum(wt * f) / math.gamma(a))


@pytest.mark.parametrize("a, b, z", [(1.0, 2.5, 1.0), (2.0, 3.5, 0.01)])
def test_tricomi_composite_oracle(a, b, z):
    ref = _composite_oracle(a, b, z)
    assert rel_err(tricomi_u(a, b, z), ref) < 1e-8
    assert rel_err(tricomi_u(a, b, z), mp_tricomi(a, b, z)) < 10 * RTOL


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("z", [0.1, 1.0, 10.0])
def test_tricomi_power_identity(a, z):
    assert tricomi_u(a, a + 1, z) * z ** a == pytest.approx(1.0, rel=RTOL)


@pytest.mark.parametrize("a, b, z", [(4.0, 5.5, 1e-6), (40.0, 41.5, 0.02), (0.3, 0.2, 50.0),
                                     (1.0, 2.5, 1e-8), (10.0, 11.5, 300.0)])
def test_tricomi_scaled_vs_mpmath(a, b, z):
    ref = float(mp.mpf(z) ** a * mp.hyperu(a, b, z))
    assert rel_err(tricomi_u_scaled(a, b, z), ref) < 10 * RTOL


@pytest.mark.parametrize("a, z", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -2.0)])
def test_tricomi_domain(a, z):
    with pytest.raises(DomainError):
        tricomi_u(a, 2.0, z)


# ---------------------------------------------------------------- Phi2
def test_phi2_trivial():
    assert phi2_n(Phi2Arguments((0.3, 2.0), 1.5, (0.0, 0.0))) == 1.0


@pytest.mark.parametrize("b, c, x", [(1.2, 2.0, -0.7), (0.5, 3.0, -40.0), (2.5, 1.5, 6.0)])
def test_phi2_one_variable_is_1f1(b, c, x):
    assert phi2_n(Phi2Arguments((b,), c, (x,))) == pytest.approx(kummer_1f1(b, c, x), rel=RTOL)


def _shifted(b, c, x, j):
    # Phi2(b; c; x) = e^{x_j} Phi2(b with b_j -> c - sum b; c; x - x_j with x_j -> -x_j)
    bs = list(b)
    bs[j] = c - sum(b)
    xs = [xi - x[j] for xi in x]
    xs[j] = -x[j]
    return bs, xs


def test_phi2_shift_identity_oracle():
    b, c, x = (0.8, 1.3), 2.2, (0.4, -0.7)
    bs, xs = _shifted(b, c, x, 1)
    direct = mp_phi2(b, c, x)
    assert rel_err(math.exp(x[1]) * mp_phi2(bs, c, xs), direct) < 1e-14
    assert rel_err(phi2_n(Phi2Arguments(b, c, x)), direct) < RTOL
    assert rel_err(math.exp(x[1]) * phi2_n(Phi2Arguments(bs, c, xs)), direct) < RTOL


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 4).flatmap(lambda n: st.tuples(
    st.lists(st.floats(0.1, 3.0), min_size=n, max_size=n),
    st.floats(0.5, 5.0),
    st.lists(st.floats(-0.99, 0.99), min_size=n, max_size=n),
    st.integers(0, n - 1))))
def test_phi2_shift_property(case):
    b, c, x, j = case
    bs, xs = _shifted(b, c, x, j)
    lhs = phi2_n(Phi2Arguments(b, c, x))
    rhs = math.exp(x[j]) * phi2_n(Phi2Arguments(bs, c, xs))
    assert rhs == pytest.approx(lhs, rel=1e-8)


@pytest.mark.parametrize("b, c, x", [((0.5, 1.5, 2.0), 3.5, (-3.0, -10.0, -0.2)),
                                     ((2.0, 2.0), 4.0, (-60.0, -55.0))])
def test_phi2_vs_brute_force(b, c, x):
    # the brute-force series converges for moderate |x| only at high precision
    with mp.workdps(80):
        ref = mp_phi2(b, c, x, terms=260)
    assert rel_err(phi2_n(Phi2Arguments(b, c, x)), ref) < RTOL


# ---------------------------------------------------------------- F_D
def test_fd_zero_arguments():
    assert lauricella_fd(FdArguments(2.5, (0.3, 1.0, 2.0), 3.0, (0.0, 0.0, 0.0))) == 1.0


@pytest.mark.parametrize("a, b, c, x", [(2.5, 1.7, 2.0, 0.3), (0.5, 3.0, 1.5, -0.8),
                                        (4.0, 0.5, 2.0, -20.0), (1.5, 2.0, 3.0, 0.9)])
def test_fd_one_variable_is_2f1(a, b, c, x):
    assert lauricella_fd(FdArguments(a, (b,), c, (x,))) == pytest.approx(
        gauss_2f1(a, b, c, x), rel=10 * RTOL)


def test_fd_collapse_example():
    bs = (0.4, 0.6, 0.7)
    val = lauricella_fd(FdArguments(2.5, bs, 2.0, (0.3,) * 3))
    assert val == pytest.approx(gauss_2f1(2.5, 1.7, 2.0, 0.3), rel=10 * RTOL)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.floats(0.2, 6.0), st.lists(st.floats(0.1, 3.0), min_size=n, max_size=n),
    st.floats(0.3, 6.0), st.floats(-5.0, 0.8))))
def test_fd_collapse_property(case):
    a, b, c, x = case
    val = lauricella_fd(FdArguments(a, tuple(b), c, (x,) * len(b)))
    assert val == pytest.approx(gauss_2f1(a, sum(b), c, x), rel=10 * RTOL)


@pytest.mark.parametrize("a, b, c, x", [(2.1, (2.5, 3.6), 0.5, (-4.0, -4.0)),
                                        (1.2, (3.0, 2.5), 0.7, (-3.0, -1.5)),
                                        (0.8, (1.5, 1.0), 1.1, (-2.0, 0.3))])
def test_fd_small_c_uses_euler_transform(a, b, c, x):
    # c < sum(b) makes the centred series cancel; the transformed one must not
    ref = float(mp.appellf1(a, b[0], b[1], c, x[0], x[1]))
    assert rel_err(lauricella_fd(FdArguments(a, b, c, x), method="series"), ref) < RTOL


@pytest.mark.parametrize("a, b, c, x", [
    (1.5, (0.7, 1.0), 3.0, (0.3, -0.5)),
    (2.0, (0.5, 1.5, 0.8), 4.5, (-0.4, 0.45, -0.9)),
    (3.5, (2.0, 1.0, 1.0, 0.5), 5.0, (-3.0, -0.5, -8.0, -0.1)),
])
def test_fd_vs_euler_integral(a, b, c, x):
    ref = mp_fd(a, b, c, x)
    for method in ("auto", "series", "quadrature"):
        assert rel_err(lauricella_fd(FdArguments(a, b, c, x), method=method), ref) < 10 * RTOL


def test_fd_large_outer_parameter():
    # the shape seen with many interferers: large a, many variables, arguments below -1
    a, c = 12.5, 14.0
    b = (1.0, 2.0, 1.0, 1.0, 3.0, 0.5)
    x = (-0.5, -0.9, -2.0, -0.2, -0.7, -1.5)
    ref = mp_fd(a, b, c, x)
    for method in ("auto", "series", "quadrature"):
        assert rel_err(lauricella_fd(FdArguments(a, b, c, x), method=method), ref) < 10 * RTOL


@pytest.mark.parametrize("x", [(1.0, 0.2), (0.3, 1.5)])
def test_fd_domain(x):
    with pytest.raises(DomainError):
        FdArguments(1.0, (1.0, 1.0), 2.0, x)


def test_fd_argument_validation():
    with pytest.raises(DomainError):
        FdArguments(1.0, (1.0,), 2.0, (0.1, 0.2))
    with pytest.raises(DomainError):
        FdArguments(1.0, (1.0,), -2.0, (0.1,))


def test_precision_error_carries_partial():
    pol = PrecisionPolicy(max_terms=100, max_multi_terms=100)
    with pytest.raises(PrecisionError) as info:
        lauricella_fd(FdArguments(30.0, (1.0, 2.0), 2.0, (0.95, -0.9)), pol, method="series")
    assert isinstance(info.value.partial, float)
