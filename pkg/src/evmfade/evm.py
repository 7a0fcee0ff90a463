"""Closed-form data-aided EVM under kappa-mu shadowed fading.

For large blocks the EVM of a fading block is sqrt((g_I + sigma2) / g_d),
with g_d the desired power and g_I the summed interferer power.  The two are
independent, so

    EVM = E[sqrt(g_I + sigma2)] * E[g_d ** -0.5]

and every formula here is a product of a *desired factor* and an
*interferer factor*.  :func:`evaluate` picks the most specific closed form
for a scenario.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from scipy import integrate

from . import fading
from .fading import INF, InterfererProfile, ShadowedFadingParams, UnsupportedError
from .specfun import (DEFAULT_POLICY, DomainError, FdArguments, PrecisionError, PrecisionPolicy,
                      gauss_2f1, kummer_1f1, lauricella_fd, log_gamma_ratio, tricomi_u_scaled)

SQRT_PI = math.sqrt(math.pi)


class DivergenceError(DomainError):
    """E[g_d^(-1/2)] is infinite (desired mu <= 0.5)."""


class UnsupportedScenarioError(UnsupportedError):
    """No closed form exists for this combination of fading laws and noise."""


@dataclass(frozen=True)
class EvmScenario:
    desired: ShadowedFadingParams
    interferers: InterfererProfile | None = None
    noise_variance: float = 0.0

    def __post_init__(self):
        s2 = float(self.noise_variance)
        if not s2 >= 0 or s2 == INF:
            raise DomainError(f"noise_variance must be finite and >= 0, got {self.noise_variance}")
        object.__setattr__(self, "noise_variance", s2)
        if self.interferers is not None and not isinstance(self.interferers, InterfererProfile):
            object.__setattr__(self, "interferers", InterfererProfile(tuple(self.interferers)))

    @property
    def L(self) -> int:
        return 0 if self.interferers is None else self.interferers.L

    @property
    def symbol_energy(self) -> float:
        return 1.0


@dataclass
class EvmResult:
    value: float
    formula_used: str
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.value = float(self.value)

    def __float__(self):
        return float(self.value)


def _canon(p: ShadowedFadingParams) -> ShadowedFadingParams:
    # with kappa = 0 the shadowing parameter has no effect
    if p.kappa == 0 and p.m != INF:
        return replace(p, m=INF)
    return p


def _gamma_ratio_half(x: float) -> float:
    """Gamma(x + 0.5) / Gamma(x)."""
    return math.exp(log_gamma_ratio(x + 0.5, x))


# ----------------------------------------------------------------------
# desired factor E[g_d^(-1/2)]
# ----------------------------------------------------------------------
def desired_factor(p: ShadowedFadingParams, policy: PrecisionPolicy | None = None) -> float:
    """E[g_d ** -0.5] for a unit-mean kappa-mu shadowed desired power."""
    policy = policy or DEFAULT_POLICY
    p = _canon(p)
    if p.is_deterministic:
        return 1.0
    if p.mu <= 0.5:
        raise DivergenceError(f"E[g_d^-1/2] diverges for mu <= 0.5 (got mu = {p.mu})")
    base = math.sqrt(p.mu * (1.0 + p.kappa)) * math.exp(log_gamma_ratio(p.mu - 0.5, p.mu))
    if p.kappa == 0:
        return base
    if p.m == INF:
        return base * kummer_1f1(0.5, p.mu, -p.kappa * p.mu, policy)
    # Pfaff form of (m/(mu k + m))^m 2F1(mu - 1/2, m; mu; mu k/(m + mu k))
    return base * gauss_2f1(0.5, p.m, p.mu, -p.mu * p.kappa / p.m, policy)


# ----------------------------------------------------------------------
# interferer factor E[sqrt(g_I + sigma2)]
# ----------------------------------------------------------------------
def iid_interferer_factor(p: ShadowedFadingParams, L: int,
                          policy: PrecisionPolicy | None = None) -> float:
    """E[sqrt(g_I)] for L i.i.d. interferers, no noise."""
    policy = policy or DEFAULT_POLICY
    p = _canon(p)
    if p.is_deterministic:
        return math.sqrt(L)
    Lmu = L * p.mu
    base = _gamma_ratio_half(Lmu) / math.sqrt(p.mu * (1.0 + p.kappa))
    if p.kappa == 0:
        return base
    if p.m == INF:
        return base * kummer_1f1(-0.5, Lmu, -L * p.kappa * p.mu, policy)
    return base * gauss_2f1(-0.5, L * p.m, Lmu, -p.mu * p.kappa / p.m, policy)


def inid_interferer_factor(profile: InterfererProfile, policy: PrecisionPolicy | None = None,
                           diagnostics: dict | None = None) -> float:
    """E[sqrt(g_I)] for independent, non-identical interferers, no noise.

    Every power with finite m (or kappa = 0) has Laplace transform
    prod (1 + s/r)^(-beta) over at most two components.  Anchoring at the
    smallest rate r0 and writing rho = sum beta,

        E[sqrt(g_I)] = Gamma(rho + 1/2)/Gamma(rho) r0^(-1/2) prod (r/r0)^beta
                       * F_D(rho + 1/2; beta; rho; 1 - r/r0)

    Components are pooled by rate first, so the result does not depend on
    the interferer order and all F_D arguments are <= 0.  If F_D cannot be
    evaluated to tolerance the Laplace-integral quadrature is used instead
    (noted in ``diagnostics["fd_fallback"]``).
    """
    policy = policy or DEFAULT_POLICY
    comps = {}
    for e in profile:
        e = _canon(e)
        if e.is_deterministic:
            raise UnsupportedScenarioError("non-fading interferers are folded into the noise term")
        for rate, shape in e.components():
            comps[rate] = comps.get(rate, 0.0) + shape
    rates = sorted(r for r, s in comps.items() if s != 0.0)
    betas = [comps[r] for r in rates]
    rho = sum(betas)
    r0 = rates[0]
    log_pref = sum(b * math.log(r / r0) for r, b in zip(rates, betas)) - 0.5 * math.log(r0)
    base = math.exp(log_pref + log_gamma_ratio(rho + 0.5, rho))
    xs = [1.0 - r / r0 for r in rates[1:]]
    if diagnostics is not None:
        diagnostics["fd_order"] = len(xs)
    if not xs:
        return base
    try:
        fd = lauricella_fd(FdArguments(rho + 0.5, betas[1:], rho, xs), policy)
    except PrecisionError:
        # widely spread rates with negative component shapes cancel badly in
        # F_D; the one-dimensional Laplace integral has no such problem
        if diagnostics is not None:
            diagnostics["fd_fallback"] = "laplace_quadrature"
        return interferer_factor_numeric(profile, 0.0)
    return base * fd


def nakagami_noise_factor(m_I: float, L: int, sigma2: float,
                          policy: PrecisionPolicy | None = None) -> float:
    """E[sqrt(g_I + sigma2)] with g_I ~ Gamma(L m_I, 1/m_I)."""
    a = L * m_I
    return math.sqrt(sigma2) * tricomi_u_scaled(a, a + 1.5, sigma2 * m_I, policy)


def _log_laplace(p: ShadowedFadingParams, s: float) -> float:
    """log E[exp(-s X)] for a unit-mean kappa-mu shadowed power."""
    if p.is_deterministic:
        return -s
    t1 = p.theta1
    out = -p.mu * math.log1p(t1 * s)
    if p.kappa == 0:
        return out
    d = p.kappa / (1.0 + p.kappa) * s / (1.0 + t1 * s)
    if p.m == INF:
        return out - d
    return out - p.m * math.log1p(d / p.m)


def interferer_factor_numeric(profile: InterfererProfile | None, sigma2: float = 0.0) -> float:
    """E[sqrt(g_I + sigma2)] from the Laplace transform by one-dimensional quadrature.

        E[sqrt Y] = 1/(2 sqrt(pi)) int_0^inf (1 - E[e^(-sY)]) s^(-3/2) ds

    Valid for any mix of fading laws.  With s = u^2 the integrand is smooth.
    """
    entries = () if profile is None else tuple(profile)

    mean = sigma2 + len(entries)

    def g(u):
        s = u * u
        if s == 0.0:
            return mean
        lv = -s * sigma2 + sum(_log_laplace(e, s) for e in entries)
        return -math.expm1(lv) / s

    head, _ = integrate.quad(g, 0.0, 1.0, limit=200, epsabs=0.0, epsrel=1e-12)
    tail, _ = integrate.quad(g, 1.0, math.inf, limit=400, epsabs=0.0, epsrel=1e-12)
    return (head + tail) / SQRT_PI


def desired_factor_numeric(p: ShadowedFadingParams) -> float:
    """E[g_d ** -0.5] = 1/sqrt(pi) int_0^inf s^(-1/2) E[e^(-s g_d)] ds, by quadrature."""
    if p.is_deterministic:
        return 1.0
    if p.mu <= 0.5:
        raise DivergenceError(f"E[g_d^-1/2] diverges for mu <= 0.5 (got mu = {p.mu})")

    # s = u^2 removes the endpoint singularity
    def g(u):
        return 2.0 * math.exp(_log_laplace(p, u * u))

    head, _ = integrate.quad(g, 0.0, 1.0, limit=200, epsabs=0.0, epsrel=1e-12)
    tail, _ = integrate.quad(g, 1.0, math.inf, limit=400, epsabs=0.0, epsrel=1e-12)
    return (head + tail) / SQRT_PI


# ----------------------------------------------------------------------
# named closed forms
# ----------------------------------------------------------------------
def _need_interference_limited(s: EvmScenario, name: str):
    if s.noise_variance != 0.0:
        raise UnsupportedScenarioError(f"{name} is the interference-limited form; sigma2 must be 0")
    if s.interferers is None:
        raise UnsupportedScenarioError(f"{name} needs at least one interferer")


def _need_noise(s: EvmScenario, name: str):
    if not s.noise_variance > 0:
        raise UnsupportedScenarioError(
            f"{name} needs sigma2 > 0; use the interference-limited form for sigma2 = 0")


def _iid_nakagami_shape(s: EvmScenario, name: str) -> float:
    prof = s.interferers
    if prof is None or not prof.is_iid:
        raise UnsupportedScenarioError(f"{name} needs i.i.d. Nakagami interferers")
    e = _canon(prof.entries[0])
    if e.kappa != 0:
        raise UnsupportedScenarioError(
            f"{name} needs Nakagami interferers (kappa_I = 0); "
            "shadowed interferers with noise have no closed form, use Monte Carlo")
    return e.mu


def evm_inid_shadowed(s: EvmScenario, policy: PrecisionPolicy | None = None) -> EvmResult:
    """Independent non-identical kappa-mu shadowed interferers, sigma2 = 0."""
    _need_interference_limited(s, "evm_inid_shadowed")
    diag = {}
    d = desired_factor(s.desired, policy)
    i = inid_interferer_factor(s.interferers, policy, diag)
    return EvmResult(d * i, "inid_shadowed", diag)


def evm_iid_shadowed(s: EvmScenario, policy: PrecisionPolicy | None = None) -> EvmResult:
    """i.i.d. kappa-mu shadowed interferers, sigma2 = 0."""
    _need_interference_limited(s, "evm_iid_shadowed")
    if not s.interferers.is_iid:
        raise UnsupportedScenarioError("evm_iid_shadowed needs identical interferers")
    d = desired_factor(s.desired, policy)
    i = iid_interferer_factor(s.interferers.entries[0], s.L, policy)
    return EvmResult(d * i, "iid_shadowed")


def evm_iid_kappamu(s: EvmScenario, policy: PrecisionPolicy | None = None) -> EvmResult:
    """i.i.d. kappa-mu interferers and kappa-mu desired link (m = m_I = inf), sigma2 = 0."""
    _need_interference_limited(s, "evm_iid_kappamu")
    if not s.interferers.is_iid:
        raise UnsupportedScenarioError("evm_iid_kappamu needs identical interferers")
    if _canon(s.desired).m != INF or _canon(s.interferers.entries[0]).m != INF:
        raise UnsupportedScenarioError("evm_iid_kappamu needs m = m_I = inf")
    d = desired_factor(s.desired, policy)
    i = iid_interferer_factor(s.interferers.entries[0], s.L, policy)
    return EvmResult(d * i, "iid_kappamu")


def evm_iid_rician(K: float, K_I: float, L: int) -> EvmResult:
    """Rician desired link (K) and L i.i.d. Rician interferers (K_I), sigma2 = 0."""
    _check_L(L)
    if K == INF and K_I == INF:
        return EvmResult(evm_no_fading_limit(L), "no_fading")
    d = desired_factor(fading.rician(K))
    i = iid_interferer_factor(fading.rician(K_I), L)
    return EvmResult(d * i, "iid_rician")


def evm_iid_nakagami(m: float, m_I: float, L: int) -> EvmResult:
    """Nakagami-m desired link and L i.i.d. Nakagami-m_I interferers, sigma2 = 0."""
    _check_L(L)
    if m <= 0.5:
        raise DivergenceError(f"E[g_d^-1/2] diverges for m <= 0.5 (got m = {m})")
    v = math.exp(log_gamma_ratio(m - 0.5, m) + log_gamma_ratio(L * m_I + 0.5, L * m_I))
    return EvmResult(v * math.sqrt(m / m_I), "iid_nakagami")


def evm_iid_rayleigh(L: int) -> EvmResult:
    """Rayleigh desired link and L i.i.d. Rayleigh interferers: sqrt(pi) Gamma(L+1/2)/Gamma(L)."""
    _check_L(L)
    return EvmResult(SQRT_PI * _gamma_ratio_half(L), "iid_rayleigh")


def evm_no_fading_limit(L: int) -> float:
    _check_L(L)
    return math.sqrt(L)


def evm_rayleigh_large_L(L: int) -> float:
    """Large-L expansion sqrt(pi L) (1 - 1/(8L)) of the Rayleigh/Rayleigh EVM."""
    _check_L(L)
    return math.sqrt(math.pi * L) * (1.0 - 1.0 / (8.0 * L))


def evm_nakagami_large_m(m: float, m_I: float, L: int) -> float:
    """Large-m expansion (1 + 3/(8m)) sqrt(L) (1 - 1/(8 L m_I)) of the Nakagami EVM."""
    _check_L(L)
    return (1.0 + 3.0 / (8.0 * m)) * math.sqrt(L) * (1.0 - 1.0 / (8.0 * L * m_I))


def evm_noise_shadowed(s: EvmScenario, policy: PrecisionPolicy | None = None) -> EvmResult:
    """kappa-mu shadowed desired link, L i.i.d. Nakagami interferers and noise."""
    _need_noise(s, "evm_noise_shadowed")
    m_I = _iid_nakagami_shape(s, "evm_noise_shadowed")
    d = desired_factor(s.desired, policy)
    i = nakagami_noise_factor(m_I, s.L, s.noise_variance, policy)
    return EvmResult(d * i, "noise_shadowed")


def evm_noise_kappamu(s: EvmScenario, policy: PrecisionPolicy | None = None) -> EvmResult:
    """kappa-mu desired link (m = inf), L i.i.d. Nakagami interferers and noise."""
    _need_noise(s, "evm_noise_kappamu")
    if _canon(s.desired).m != INF:
        raise UnsupportedScenarioError("evm_noise_kappamu needs desired m = inf")
    m_I = _iid_nakagami_shape(s, "evm_noise_kappamu")
    d = desired_factor(s.desired, policy)
    i = nakagami_noise_factor(m_I, s.L, s.noise_variance, policy)
    return EvmResult(d * i, "noise_kappamu")


def evm_noise_rician(K: float, m_I: float, L: int, sigma2: float) -> EvmResult:
    """Rician desired link, L i.i.d. Nakagami-m_I interferers and noise."""
    _check_L(L)
    _check_sigma2(sigma2)
    d = desired_factor(fading.rician(K))
    return EvmResult(d * nakagami_noise_factor(m_I, L, sigma2), "noise_rician")


def evm_noise_nakagami(m: float, m_I: float, L: int, sigma2: float) -> EvmResult:
    """Nakagami-m desired link, L i.i.d. Nakagami-m_I interferers and noise."""
    _check_L(L)
    _check_sigma2(sigma2)
    if m <= 0.5:
        raise DivergenceError(f"E[g_d^-1/2] diverges for m <= 0.5 (got m = {m})")
    d = math.sqrt(m) * math.exp(log_gamma_ratio(m - 0.5, m))
    return EvmResult(d * nakagami_noise_factor(m_I, L, sigma2), "noise_nakagami")


def evm_noise_rayleigh(L: int, sigma2: float) -> float:
    """Rayleigh desired link and interferers with noise: sqrt(pi) sigma2^(L+1/2) U(L, L+3/2, sigma2)."""
    _check_L(L)
    _check_sigma2(sigma2)
    return evm_noise_nakagami(1.0, 1.0, L, sigma2).value


def _check_L(L):
    if int(L) != L or L < 1:
        raise DomainError(f"L must be a positive integer, got {L}")


def _check_sigma2(sigma2):
    if not sigma2 > 0 or sigma2 == INF:
        raise UnsupportedScenarioError(
            f"sigma2 must be finite and > 0 here, got {sigma2}; use the interference-limited form")


# ----------------------------------------------------------------------
# dispatch
# ----------------------------------------------------------------------
def evaluate(s: EvmScenario, policy: PrecisionPolicy | None = None,
             numeric_fallback: bool = False) -> EvmResult:
    """EVM of a scenario through the most specific closed form.

    Non-fading interferers contribute a fixed unit power, so they are moved
    into the noise term.  i.n.i.d. kappa-mu interferers (m = inf, kappa > 0)
    are handled by the Laplace-transform quadrature.  Scenarios without a
    closed form (noise together with non-Nakagami or non-identical
    interferers) raise :class:`UnsupportedScenarioError` unless
    ``numeric_fallback`` is set.
    """
    policy = policy or DEFAULT_POLICY
    desired = _canon(s.desired)
    fixed = 0
    faded = []
    for e in (s.interferers or ()):
        e = _canon(e)
        if e.is_deterministic:
            fixed += 1
        else:
            faded.append(e)
    sigma2 = s.noise_variance + fixed
    prof = InterfererProfile(tuple(faded)) if faded else None
    L = len(faded)
    dcls = fading.classify(desired)
    diag = {"desired_law": dcls.value, "effective_sigma2": sigma2, "faded_interferers": L}

    if prof is None:
        if sigma2 == 0:
            raise DomainError("with no interferers and no noise the EVM is zero")
        d = desired_factor(desired, policy)
        if fixed and s.noise_variance == 0:
            name = "no_fading" if desired.is_deterministic else "fixed_interference"
        else:
            name = "noise_only"
        return EvmResult(d * math.sqrt(sigma2), name, diag)

    icls = fading.classify(faded[0]) if prof.is_iid else None
    if sigma2 == 0:
        if prof.is_iid:
            ip = faded[0]
            if dcls is fading.SpecialCase.RAYLEIGH and icls is fading.SpecialCase.RAYLEIGH:
                r = evm_iid_rayleigh(L)
            elif desired.kappa == 0 and ip.kappa == 0:
                r = evm_iid_nakagami(desired.mu, ip.mu, L)
            elif desired.mu == 1 and ip.mu == 1 and desired.m == INF and ip.m == INF:
                r = evm_iid_rician(desired.kappa, ip.kappa, L)
            else:
                sc = EvmScenario(desired, prof, 0.0)
                if desired.m == INF and ip.m == INF:
                    r = evm_iid_kappamu(sc, policy)
                else:
                    r = evm_iid_shadowed(sc, policy)
            r.diagnostics.update(diag)
            return r
        if all(e.m != INF or e.kappa == 0 for e in faded):
            r = evm_inid_shadowed(EvmScenario(desired, prof, 0.0), policy)
            r.diagnostics.update(diag)
            return r
        d = desired_factor(desired, policy)
        return EvmResult(d * interferer_factor_numeric(prof, 0.0), "inid_quadrature", diag)

    if prof.is_iid and faded[0].kappa == 0:
        m_I = faded[0].mu
        if dcls is fading.SpecialCase.RAYLEIGH and m_I == 1:
            return EvmResult(evm_noise_rayleigh(L, sigma2), "noise_rayleigh", diag)
        if desired.kappa == 0:
            r = evm_noise_nakagami(desired.mu, m_I, L, sigma2)
        elif desired.mu == 1 and desired.m == INF:
            r = evm_noise_rician(desired.kappa, m_I, L, sigma2)
        elif desired.m == INF:
            r = evm_noise_kappamu(EvmScenario(desired, prof, sigma2), policy)
        else:
            r = evm_noise_shadowed(EvmScenario(desired, prof, sigma2), policy)
        r.diagnostics.update(diag)
        return r
    if numeric_fallback:
        d = desired_factor(desired, policy)
        return EvmResult(d * interferer_factor_numeric(prof, sigma2), "laplace_quadrature", diag)
    raise UnsupportedScenarioError(
        "no closed form for noise with non-Nakagami or non-identical interferers; "
        "use Monte Carlo (or numeric_fallback=True)")


__all__ = [
    "DivergenceError", "EvmResult", "EvmScenario", "UnsupportedScenarioError",
    "desired_factor", "desired_factor_numeric", "evaluate", "evm_iid_kappamu",
    "evm_iid_nakagami", "evm_iid_rayleigh", "evm_iid_rician", "evm_iid_shadowed",
    "evm_inid_shadowed", "evm_nakagami_large_m", "evm_no_fading_limit", "evm_noise_kappamu",
    "evm_noise_nakagami", "evm_noise_rayleigh", "evm_noise_rician", "evm_noise_shadowed",
    "evm_rayleigh_large_L", "iid_interferer_factor", "inid_interferer_factor",
    "interferer_factor_numeric", "nakagami_noise_factor",
]
