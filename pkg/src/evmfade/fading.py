"""kappa-mu shadowed fading powers, all normalised to unit mean.

A power X has three parameters: ``kappa`` (dominant to scattered power
ratio), ``mu`` (number of clusters) and ``m`` (Nakagami shadowing of the
dominant part).  Two scale parameters recur everywhere::

    theta1 = 1 / (mu (1 + kappa))
    theta2 = (mu kappa + m) / (mu (1 + kappa) m)

``m = math.inf`` is an explicit sentinel for the unshadowed kappa-mu law and
``kappa = math.inf`` (with ``m = inf``) for a non-fading unit-power link.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .specfun import (DEFAULT_POLICY, DomainError, Phi2Arguments, PrecisionPolicy,
                      log_kummer_1f1, log_phi2_n)

INF = math.inf


class UnsupportedError(ValueError):
    """The requested computation has no implemented route for these parameters."""


def _as_param(v, name):
    if isinstance(v, str):
        if v.strip().lower() in ("inf", "infinity"):
            return INF
        v = float(v)
    v = float(v)
    if math.isnan(v):
        raise DomainError(f"{name} is NaN")
    return v


@dataclass(frozen=True)
class ShadowedFadingParams:
    kappa: float
    mu: float
    m: float = INF

    def __post_init__(self):
        object.__setattr__(self, "kappa", _as_param(self.kappa, "kappa"))
        object.__setattr__(self, "mu", _as_param(self.mu, "mu"))
        object.__setattr__(self, "m", _as_param(self.m, "m"))
        if not self.kappa >= 0:
            raise DomainError(f"kappa must be >= 0, got {self.kappa}")
        if not (0 < self.mu < INF):
            raise DomainError(f"mu must be a positive finite number, got {self.mu}")
        if not self.m > 0:
            raise DomainError(f"m must be > 0, got {self.m}")
        if self.kappa == INF and self.m != INF:
            raise DomainError("kappa = inf (no fading) requires m = inf")

    @property
    def theta1(self) -> float:
        return 1.0 / (self.mu * (1.0 + self.kappa))

    @property
    def theta2(self) -> float:
        if self.m == INF:
            return self.theta1
        return (self.mu * self.kappa + self.m) / (self.mu * (1.0 + self.kappa) * self.m)

    @property
    def is_deterministic(self) -> bool:
        return self.kappa == INF

    def components(self):
        """Gamma-like components ``[(rate, shape), ...]`` of the Laplace transform.

        E[exp(-sX)] = prod (1 + s/rate)^(-shape).  Only defined for finite m
        (or kappa = 0, where m drops out).
        """
        a = 1.0 / self.theta1
        if self.kappa == 0:
            return [(a, self.mu)]
        if self.m == INF:
            raise UnsupportedError("kappa-mu (m = inf, kappa > 0) has no finite gamma-product form")
        b = 1.0 / self.theta2
        if self.m == self.mu:
            return [(b, self.m)]
        return [(a, self.mu - self.m), (b, self.m)]


@dataclass(frozen=True)
class InterfererProfile:
    entries: tuple

    def __post_init__(self):
        entries = tuple(self.entries)
        if not entries:
            raise DomainError("an interferer profile needs at least one entry")
        for e in entries:
            if not isinstance(e, ShadowedFadingParams):
                raise TypeError(f"profile entries must be ShadowedFadingParams, got {e!r}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def iid(cls, params: ShadowedFadingParams, L: int) -> "InterfererProfile":
        if int(L) != L or L < 1:
            raise DomainError(f"L must be a positive integer, got {L}")
        return cls((params,) * int(L))

    @property
    def L(self) -> int:
        return len(self.entries)

    @property
    def is_iid(self) -> bool:
        return all(e == self.entries[0] for e in self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


class SpecialCase(enum.Enum):
    KAPPA_MU_SHADOWED = "kappa-mu-shadowed"
    KAPPA_MU = "kappa-mu"
    RICIAN = "rician"
    NAKAGAMI = "nakagami"
    RAYLEIGH = "rayleigh"
    NO_FADING = "no-fading"


def special_case_params(tag, value: float | None = None, *, kappa=None, mu=None,
                        m=None) -> ShadowedFadingParams:
    """Map a named fading law to its (kappa, mu, m) triple.

    ``value`` is the Rician K or the Nakagami m; the two kappa-mu families
    take their parameters by keyword.
    """
    tag = SpecialCase(tag)
    if tag is SpecialCase.RAYLEIGH:
        return ShadowedFadingParams(0.0, 1.0, INF)
    if tag is SpecialCase.NO_FADING:
        return ShadowedFadingParams(INF, 1.0, INF)
    if tag is SpecialCase.RICIAN:
        return ShadowedFadingParams(value, 1.0, INF)
    if tag is SpecialCase.NAKAGAMI:
        return ShadowedFadingParams(0.0, value, INF)
    if tag is SpecialCase.KAPPA_MU:
        return ShadowedFadingParams(kappa, mu, INF)
    return ShadowedFadingParams(kappa, mu, m)


def rayleigh():
    return special_case_params(SpecialCase.RAYLEIGH)


def rician(K):
    return special_case_params(SpecialCase.RICIAN, K)


def nakagami(m):
    return special_case_params(SpecialCase.NAKAGAMI, m)


def no_fading():
    return special_case_params(SpecialCase.NO_FADING)


def classify(p: ShadowedFadingParams) -> SpecialCase:
    """Most specific named law the triple belongs to."""
    if p.kappa == INF:
        return SpecialCase.NO_FADING
    if p.m != INF:
        return SpecialCase.KAPPA_MU_SHADOWED
    if p.kappa == 0:
        return SpecialCase.RAYLEIGH if p.mu == 1 else SpecialCase.NAKAGAMI
    return SpecialCase.RICIAN if p.mu == 1 else SpecialCase.KAPPA_MU


# ----------------------------------------------------------------------
# densities
# ----------------------------------------------------------------------
def _log_power_pdf(p: ShadowedFadingParams, x: float, policy) -> float:
    mu = p.mu
    t1 = p.theta1
    if x == 0.0 and mu != 1.0:
        return -math.inf if mu > 1 else math.inf
    base = ((mu - 1.0) * math.log(x) if x > 0 else 0.0) - math.lgamma(mu)
    if p.kappa == 0:
        return base - mu * math.log(t1) - x / t1
    if p.m == INF:
        # Poisson(mu kappa) mixture of Gamma(mu + k, theta1) laws
        # sum_k lam^k/k! (x/t1)^k / (mu)_k = 0F1(; mu; lam x / t1)
        lam = mu * p.kappa
        return base - mu * math.log(t1) - x / t1 - lam + _log_0f1(mu, lam * x / t1)
    t2 = p.theta2
    c = 1.0 / t1 - 1.0 / t2
    lv, sg = log_kummer_1f1(mu - p.m, mu, -c * x, policy)
    if sg <= 0:
        return -math.inf
    return base + (p.m - mu) * math.log(t1) - p.m * math.log(t2) - x / t2 + lv


def _log_0f1(b: float, z: float) -> float:
    """log 0F1(; b; z) for z >= 0, from the scaled Bessel function."""
    if z == 0.0:
        return 0.0
    from scipy.special import ive

    # 0F1(; b; z) = Gamma(b) z^((1-b)/2) I_(b-1)(2 sqrt z)
    s = 2.0 * math.sqrt(z)
    iv = ive(b - 1.0, s)
    if iv > 0 and math.isfinite(iv):
        return math.lgamma(b) + 0.5 * (1.0 - b) * math.log(z) + math.log(iv) + s
    # deep underflow/overflow: sum the series in log space
    terms = []
    k = 0
    lt = 0.0
    while True:
        terms.append(lt)
        k += 1
        lt += math.log(z) - math.log(k) - math.log(b + k - 1.0)
        if k > z and lt < max(terms) - 40:
            break
    mx = max(terms)
    return mx + math.log(sum(math.exp(t - mx) for t in terms))


def power_pdf(p: ShadowedFadingParams, x: float, policy: PrecisionPolicy | None = None) -> float:
    """Density of the unit-mean kappa-mu shadowed power at ``x``."""
    policy = policy or DEFAULT_POLICY
    x = float(x)
    if not x >= 0:
        raise DomainError(f"power_pdf needs x >= 0, got {x}")
    if p.is_deterministic:
        raise DomainError("the non-fading law has no density (point mass at 1)")
    lv = _log_power_pdf(p, x, policy)
    return math.exp(lv) if lv < 709.7 else math.inf


def power_moment(p: ShadowedFadingParams, s: float) -> float:
    """E[X**s] by quadrature of the density (a test and diagnostics helper)."""
    from scipy import integrate

    if p.is_deterministic:
        return 1.0
    f = lambda x: x ** s * power_pdf(p, x)
    head, _ = integrate.quad(f, 0.0, 1.0, limit=200)
    tail, _ = integrate.quad(f, 1.0, math.inf, limit=200)
    return head + tail


def _merge_components(profile: InterfererProfile):
    comps = {}
    for e in profile:
        if e.is_deterministic:
            raise UnsupportedError("non-fading interferers have no sum density")
        for rate, shape in e.components():
            key = float(rate)
            comps[key] = comps.get(key, 0.0) + shape
    return [(r, s) for r, s in comps.items() if s != 0.0]


def sum_power_pdf(profile: InterfererProfile, x: float,
                  policy: PrecisionPolicy | None = None) -> float:
    """Density of the sum of independent interferer powers at ``x``.

    Each shadowed power has Laplace transform prod (1 + s/r)^(-shape) over
    its components, so the sum is a product of such factors and its density
    is ``prod r^shape * x^(rho-1)/Gamma(rho) * Phi_2(shapes; rho; -r x)``
    with ``rho`` the total shape.
    """
    policy = policy or DEFAULT_POLICY
    x = float(x)
    if not x >= 0:
        raise DomainError(f"sum_power_pdf needs x >= 0, got {x}")
    if profile.L == 1:
        return power_pdf(profile.entries[0], x, policy)
    comps = _merge_components(profile)
    rho = sum(s for _, s in comps)
    if x == 0.0:
        if rho > 1:
            return 0.0
        if rho < 1:
            return math.inf
    lpref = sum(s * math.log(r) for r, s in comps) - math.lgamma(rho)
    if len(comps) == 1:
        r = comps[0][0]
        return math.exp(lpref + (rho - 1.0) * math.log(x) - r * x) if x > 0 else math.exp(lpref)
    rates = np.array([r for r, _ in comps])
    shapes = np.array([s for _, s in comps])
    lv, sg = log_phi2_n(Phi2Arguments(shapes, rho, -rates * x), policy)
    if sg <= 0:
        return 0.0
    lx = (rho - 1.0) * math.log(x) if x > 0 else 0.0
    return math.exp(lpref + lx + lv)


# ----------------------------------------------------------------------
# sampling
# ----------------------------------------------------------------------
def sample_power(p: ShadowedFadingParams, rng: np.random.Generator, size=None,
                 method: str = "mixture"):
    """Draw unit-mean fading powers.

    ``method="mixture"`` works for any mu > 0: a shadowing weight
    w ~ Gamma(m, 1/m) scales the dominant power, and given w the power is a
    scaled noncentral chi-square with 2 mu degrees of freedom.
    ``method="physical"`` builds the power from mu Gaussian clusters whose
    dominant components share one Nakagami-m amplitude; it needs integer mu.
    """
    if p.is_deterministic:
        return 1.0 if size is None else np.ones(size)
    if method == "physical":
        return _sample_physical(p, rng, size)
    if method != "mixture":
        raise ValueError(f"unknown sampling method {method!r}")
    sig2 = 1.0 / (2.0 * p.mu * (1.0 + p.kappa))
    d2 = p.kappa / (1.0 + p.kappa)
    if p.kappa == 0:
        return sig2 * rng.chisquare(2.0 * p.mu, size)
    if p.m == INF:
        w = 1.0
    else:
        w = rng.gamma(p.m, 1.0 / p.m, size)
    return sig2 * rng.noncentral_chisquare(2.0 * p.mu, w * d2 / sig2, size)


def _sample_physical(p, rng, size):
    n = int(round(p.mu))
    if n != p.mu:
        raise UnsupportedError(f"the physical cluster construction needs integer mu, got {p.mu}")
    shape = () if size is None else (size if isinstance(size, tuple) else (int(size),))
    sig = math.sqrt(1.0 / (2.0 * p.mu * (1.0 + p.kappa)))
    dom = math.sqrt(p.kappa / (1.0 + p.kappa) / (2.0 * n))  # p_i = q_i
    if p.m == INF:
        xi = np.ones(shape)
    else:
        xi = np.sqrt(rng.gamma(p.m, 1.0 / p.m, shape))
    xi = xi[..., None]
    xs = rng.normal(0.0, sig, shape + (n,)) + xi * dom
    ys = rng.normal(0.0, sig, shape + (n,)) + xi * dom
    out = np.sum(xs * xs + ys * ys, axis=-1)
    return float(out) if size is None else out


def sample_sum_power(profile: InterfererProfile, rng: np.random.Generator, size=None):
    total = 0.0
    for e in profile:
        total = total + sample_power(e, rng, size)
    return total


def params_from_iterable(values: Iterable[Sequence[float]]) -> InterfererProfile:
    return InterfererProfile(tuple(ShadowedFadingParams(*v) for v in values))


__all__ = [
    "INF", "InterfererProfile", "ShadowedFadingParams", "SpecialCase", "UnsupportedError",
    "classify", "nakagami", "no_fading", "params_from_iterable", "power_moment", "power_pdf",
    "rayleigh", "rician", "sample_power", "sample_sum_power", "special_case_params",
    "sum_power_pdf",
]
