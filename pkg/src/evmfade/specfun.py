"""Hypergeometric special functions used by the EVM closed forms.

Every function has a series route and an independent integral route so
the two can be checked against each other:

=================  =========================  ===========================
function           series route               integral route
=================  =========================  ===========================
``kummer_1f1``     power series / asymptotic  (via ``gauss_2f1_integral``)
``gauss_2f1``      power series, centred      ``gauss_2f1_integral``
                   total-degree series
``lauricella_fd``  centred total-degree       Laplace integral over a
                   series, or its Euler       ``phi2_n`` kernel
                   transform when c < sum b
``tricomi_u``      --                         Laplace-type integral
=================  =========================  ===========================

Multivariate series are summed by total degree.  With
``e_n(y) = [t^n] prod_i (1 - y_i t)^(-b_i)`` one has

    F_D(a; b; c; y) = sum_n (a)_n / (c)_n * e_n(y)
    Phi_2(b; c; y)  = sum_n e_n(y) / (c)_n

and ``e_n`` obeys the Newton recursion ``n e_n = sum_j p_j e_(n-j)`` with
``p_j = sum_i b_i y_i**j``.  This is an exact rearrangement of the
multi-index series at O(n^2) cost instead of O(n^N).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate

from . import _kernels

_EPS = np.finfo(float).eps


class DomainError(ValueError):
    """Argument outside the domain where the function is defined or supported."""


class PrecisionError(ArithmeticError):
    """Evaluation could not reach the requested tolerance.

    ``partial`` holds the best value that was obtained.
    """

    def __init__(self, message, partial=float("nan")):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class PrecisionPolicy:
    """Tolerances and budgets shared by every special-function evaluation.

    ``max_terms`` caps scalar series.  Multivariate series cost O(n^2) in the
    summation order n, so their order is capped at
    ``sqrt(2 * max_multi_terms)``.  ``quad_nodes`` is the subinterval budget
    of the adaptive quadrature.  ``quad_upper_cutoff`` truncates
    semi-infinite integrals (in the integral's scaled variable); ``None``
    picks a cutoff where the integrand tail is far below ``rel_tol``.
    """

    rel_tol: float = 1e-10
    max_terms: int = 100_000
    max_multi_terms: int = 10_000_000
    quad_nodes: int = 512
    quad_upper_cutoff: float | None = None
    shift_threshold: float = 0.5
    window: int = 20

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1e-3:
            raise ValueError(f"rel_tol must lie in (0, 1e-3), got {self.rel_tol}")
        if self.max_terms < 100:
            raise ValueError(f"max_terms must be >= 100, got {self.max_terms}")
        if self.max_multi_terms < self.max_terms:
            raise ValueError("max_multi_terms must be >= max_terms")
        if self.quad_nodes < 32:
            raise ValueError(f"quad_nodes must be >= 32, got {self.quad_nodes}")
        if self.quad_upper_cutoff is not None and self.quad_upper_cutoff <= 0:
            raise ValueError("quad_upper_cutoff must be positive")
        if self.shift_threshold < 0:
            raise ValueError("shift_threshold must be non-negative")

    @property
    def max_order(self) -> int:
        return int(math.sqrt(2.0 * self.max_multi_terms))


DEFAULT_POLICY = PrecisionPolicy()


def _policy(policy):
    return DEFAULT_POLICY if policy is None else policy


def _is_nonpositive_int(v) -> bool:
    return v <= 0 and float(v).is_integer()


@dataclass(frozen=True)
class FdArguments:
    """Arguments of the fourth Lauricella function F_D^(N)(a; b_1..b_N; c; x_1..x_N)."""

    a: float
    b: tuple
    c: float
    x: tuple

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        if len(self.b) != len(self.x):
            raise DomainError(f"len(b)={len(self.b)} != len(x)={len(self.x)}")
        if not self.a > 0:
            raise DomainError(f"F_D outer parameter must be positive, got a={self.a}")
        if not self.c > 0:
            raise DomainError(f"F_D lower parameter must be positive, got c={self.c}")
        bad = [v for v in self.x if not v < 1.0]
        if bad:
            raise DomainError(f"F_D arguments must be < 1, got {bad}")


@dataclass(frozen=True)
class Phi2Arguments:
    """Arguments of the confluent Lauricella function Phi_2^(N)(b; c; x)."""

    b: tuple
    c: float
    x: tuple

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        if len(self.b) != len(self.x):
            raise DomainError(f"len(b)={len(self.b)} != len(x)={len(self.x)}")
        if not self.c > 0:
            raise DomainError(f"Phi_2 lower parameter must be positive, got c={self.c}")


# ----------------------------------------------------------------------
# Gamma and Pochhammer
# ----------------------------------------------------------------------
def gamma_fn(z: float) -> float:
    """Gamma function for positive real argument."""
    if not z > 0:
        raise DomainError(f"gamma_fn needs z > 0, got {z}")
    return math.gamma(z)


def log_gamma_ratio(a: float, b: float) -> float:
    """log(Gamma(a) / Gamma(b)) for positive a, b."""
    return math.lgamma(a) - math.lgamma(b)


def _gamma_sign(x: float) -> float:
    if x > 0:
        return 1.0
    # Gamma alternates sign between consecutive negative integers
    return -1.0 if math.ceil(-x) % 2 == 1 else 1.0


def pochhammer(y: float, n: int) -> float:
    """Rising factorial (y)_n = y (y+1) ... (y+n-1)."""
    if n < 0:
        raise DomainError(f"pochhammer order must be non-negative, got {n}")
    out = 1.0
    for k in range(n):
        out *= y + k
    return out


# ----------------------------------------------------------------------
# Kummer 1F1
# ----------------------------------------------------------------------
def _poly_1f1(a, b, z):
    # a is a non-positive integer: finite sum
    s = t = 1.0
    for n in range(1, int(-a) + 1):
        t *= (a + n - 1) / ((b + n - 1) * n) * z
        s += t
    return s


def _log_1f1_asymptotic(a, b, z, rel_tol):
    """log M(a, b, z) for large positive z, or None when the expansion is not usable."""
    if z < 30.0:
        return None
    if not (_is_nonpositive_int(b - a)):
        # relative size of the algebraic term that the expansion drops
        drop = (math.lgamma(a) - math.lgamma(b - a)) - z + (b - 2.0 * a) * math.log(z)
        if drop > math.log(rel_tol) - 8.0:
            return None
    s = t = 1.0
    prev = math.inf
    for k in range(1, 400):
        t *= (b - a + k - 1) * (1 - a + k - 1) / (k * z)
        if abs(t) > prev:
            return None
        s += t
        prev = abs(t)
        if abs(t) <= 0.01 * rel_tol * abs(s):
            break
    else:
        return None
    if s <= 0:
        return None
    sign = _gamma_sign(b) * _gamma_sign(a)
    log_val = math.lgamma(b) - math.lgamma(a) + (a - b) * math.log(z) + math.log(s)
    return log_val, sign, z


def _log_1f1_positive(a, b, z, policy, strict=True):
    # returns (log_rest, sign, exp_part): value = sign * exp(log_rest + exp_part)
    if z == 0:
        return 0.0, 1.0, 0.0
    asym = _log_1f1_asymptotic(a, b, z, policy.rel_tol)
    if asym is not None:
        return asym
    if z > 0.9 * policy.max_terms:
        raise PrecisionError(f"1F1({a}, {b}, {z}): argument too large for the series")
    s, log_scale, m, n, ok = _kernels.hyp1f1_series(a, b, z, policy.rel_tol, policy.max_terms,
                                                     policy.window)
    if not ok:
        raise PrecisionError(f"1F1({a}, {b}, {z}) did not converge in {n} terms",
                             partial=s * math.exp(min(log_scale, 700.0)))
    if strict and 32.0 * _EPS * m > policy.rel_tol * abs(s):
        raise PrecisionError(f"1F1({a}, {b}, {z}) lost precision to cancellation",
                             partial=s * math.exp(min(log_scale, 700.0)))
    return log_scale + math.log(abs(s)), math.copysign(1.0, s), 0.0


def log_kummer_1f1(a: float, b: float, z: float, policy: PrecisionPolicy | None = None):
    """Return ``(log|1F1(a; b; z)|, sign)``; safe where the value over- or underflows."""
    return _log_kummer(a, b, z, _policy(policy), True)


def _log_kummer(a, b, z, policy, strict):
    # strict=False skips the relative-precision guard; quadrature kernels only
    # need accuracy relative to the integrand scale, not near its zeros
    if _is_nonpositive_int(b):
        raise DomainError(f"1F1 lower parameter may not be a non-positive integer, got {b}")
    if z == 0:
        return 0.0, 1.0
    if _is_nonpositive_int(a):
        v = _poly_1f1(a, b, z)
        return (math.log(abs(v)) if v != 0 else -math.inf), math.copysign(1.0, v)
    if z < 0:
        # M(a, b, z) = e^z M(b - a, b, -z); avoids alternating-sign cancellation
        if _is_nonpositive_int(b - a):
            v = _poly_1f1(b - a, b, -z)
            return z + (math.log(abs(v)) if v != 0 else -math.inf), math.copysign(1.0, v)
        lv, sg, ez = _log_1f1_positive(b - a, b, -z, policy, strict)
        return lv + (ez + z), sg
    lv, sg, ez = _log_1f1_positive(a, b, z, policy, strict)
    return lv + ez, sg


def kummer_1f1(a: float, b: float, z: float, policy: PrecisionPolicy | None = None) -> float:
    """Kummer confluent hypergeometric function 1F1(a; b; z) for real arguments."""
    lv, sg = log_kummer_1f1(a, b, z, policy)
    return sg * math.exp(lv) if lv < 709.7 else sg * math.inf


# ----------------------------------------------------------------------
# Total-degree series for F_D (and 2F1 as its one-variable case)
# ----------------------------------------------------------------------
@dataclass
class SeriesInfo:
    terms: int = 0
    rate: float = 0.0
    shift: float = 0.0
    method: str = ""
    notes: list = field(default_factory=list)


def _fd_series(a, b, c, x, policy, info=None):
    b = np.asarray(b, float)
    x = np.asarray(x, float)
    keep = (b != 0) & (x != 0)
    b, x = b[keep], x[keep]
    if info is None:
        info = SeriesInfo()
    info.method = "series"
    if b.size == 0:
        return 1.0
    # Adding a variable at x=0 with parameter c - sum(b) turns the series into a
    # Dirichlet average, which can be re-centred at any s < 1:
    #   F_D(a; b; c; x) = (1-s)^(-a) F_D(a; b'; c; (x' - s)/(1 - s))
    b0 = c - b.sum()
    if abs(b0) > 1e-14 * max(1.0, abs(c)):
        xa = np.concatenate(([0.0], x))
        ba = np.concatenate(([b0], b))
    else:
        xa, ba = x, b
    s = 0.5 * (xa.max() + xa.min())
    ya = (xa - s) / (1.0 - s)
    cands = []
    if np.abs(ya).max() < np.abs(x).max():
        cands.append((ya, ba, a, -a * math.log1p(-s), s))
    else:
        cands.append((x, b, a, 0.0, 0.0))
    if b0 < 0 and x.max() < 0.5:
        # a negative weight c - sum(b) makes the centred series cancel; the Euler
        # transform F_D = prod (1-x_i)^(-b_i) F_D(c-a; b; c; x/(x-1)) keeps b > 0
        cands.append((x / (x - 1.0), b, c - a, -float(np.dot(b, np.log1p(-x))), 0.0))
    err = None
    for y, beta, outer, log_pref, shift in cands:
        try:
            value = _fd_series_run(y, beta, outer, c, log_pref, policy, info)
        except PrecisionError as e:
            err = err or e
            continue
        info.shift = shift
        return value
    raise err


def _fd_series_run(y, beta, a, c, log_pref, policy, info):
    rate = float(np.abs(y).max())
    info.rate = rate
    if rate >= 1.0:
        raise DomainError(f"F_D series does not converge (rate {rate})")
    nmax = policy.max_order
    # terms eventually shrink like rate**n, so the neglected tail is about
    # term / (1 - rate); tighten the per-term threshold to match
    tol = policy.rel_tol * (1.0 - rate)
    total, maj, n, ok = _kernels.newton_series(y, beta, a, c, 0.0, 0.0, 0, 0, tol,
                                               nmax, policy.window)
    info.terms = n
    value = total * math.exp(log_pref)
    if not ok:
        raise PrecisionError(f"F_D series not converged after {n} terms (rate {rate:.4f})",
                             partial=value)
    if _EPS * maj > policy.rel_tol * abs(total):
        raise PrecisionError(f"F_D series lost precision (majorant/sum = {maj / abs(total):.3g})",
                             partial=value)
    return value


def gauss_2f1(a: float, b: float, c: float, x: float,
              policy: PrecisionPolicy | None = None) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; x) for real x < 1.

    Uses the power series for |x| <= 0.5, a re-centred series (an exact
    linear transformation of the argument) for moderate x and the Laplace
    integral of :func:`gauss_2f1_integral` once the re-centred series would
    converge slowly (x < -18 or x > 0.947).  For x < -2 the 1/x connection
    formula is tried first.  A route that loses precision
    hands over to the next one; when none reaches ``rel_tol`` a
    :class:`PrecisionError` is raised rather than returning a poor value.
    """
    policy = _policy(policy)
    if _is_nonpositive_int(c):
        raise DomainError(f"2F1 lower parameter may not be a non-positive integer, got {c}")
    if not x < 1.0:
        raise DomainError(f"2F1 needs x < 1, got {x}")
    if x == 0 or a == 0 or b == 0:
        return 1.0
    terminating = _is_nonpositive_int(a) or _is_nonpositive_int(b)
    if abs(x) <= 0.5 or terminating:
        s, m, n, ok = _kernels.hyp2f1_series(a, b, c, x, policy.rel_tol, policy.max_terms,
                                              policy.window)
        if ok and 32.0 * _EPS * m <= policy.rel_tol * abs(s):
            return s
        if terminating or not ok:
            raise PrecisionError(f"2F1({a}, {b}; {c}; {x}) lost precision", partial=s)
    if x < -2.0:
        v = _2f1_inverse_arg(a, b, c, x, policy)
        if v is not None:
            return v
    # the centred series converges like rate**n; far out the integral is cheaper
    rate = abs(x) / (2.0 - x)
    can_integrate = max(a, b) > 0
    if rate <= 0.9 or not can_integrate:
        # 2F1 is symmetric in (a, b); the smaller outer parameter conditions better
        u, v = (b, a) if abs(b) < abs(a) else (a, b)
        try:
            return _fd_series(u, [v], c, [x], policy)
        except PrecisionError:
            if not can_integrate:
                raise
    return gauss_2f1_integral(a, b, c, x, policy)


def _2f1_inverse_arg(a, b, c, x, policy):
    """2F1 for x < -1 through the 1/x connection formula, or None.

    None is returned when b - a is (close to) an integer, where the two
    terms blow up and cancel, or when either term sum loses precision.
    """
    if abs(b - a - round(b - a)) < 1e-3:
        return None
    terms = []
    for p, q in ((a, b), (b, a)):
        # Gamma(c) Gamma(q-p) / (Gamma(q) Gamma(c-p)) (-x)^-p 2F1(p, p-c+1; p-q+1; 1/x)
        if _is_nonpositive_int(c - p) or _is_nonpositive_int(p - q + 1):
            if _is_nonpositive_int(c - p):
                terms.append(0.0)
                continue
            return None
        s, m, n, ok = _kernels.hyp2f1_series(p, p - c + 1.0, p - q + 1.0, 1.0 / x,
                                              policy.rel_tol, policy.max_terms, policy.window)
        if not ok or 32.0 * _EPS * m > policy.rel_tol * abs(s):
            return None
        lg = (math.lgamma(c) + math.lgamma(q - p) - math.lgamma(q) - math.lgamma(c - p)
              - p * math.log(-x))
        sg = _gamma_sign(c) * _gamma_sign(q - p) * _gamma_sign(q) * _gamma_sign(c - p)
        terms.append(sg * s * math.exp(lg))
    total = terms[0] + terms[1]
    if 1e3 * _EPS * (abs(terms[0]) + abs(terms[1])) > policy.rel_tol * abs(total):
        return None
    return total


def gauss_2f1_integral(a: float, b: float, c: float, x: float,
                       policy: PrecisionPolicy | None = None) -> float:
    """2F1 through its Laplace representation over a 1F1 kernel.

        2F1(a, b; c; x) = 1/Gamma(a) int_0^inf e^-t t^(a-1) 1F1(b; c; x t) dt
    """
    policy = _policy(policy)
    if not x < 1.0:
        raise DomainError(f"2F1 needs x < 1, got {x}")
    if not a > 0:
        if b > 0:
            a, b = b, a
        else:
            raise DomainError("integral representation needs a positive outer parameter")
    lg = math.lgamma(a)

    def f(t):
        lv, sg = _log_kummer(b, c, x * t, policy, False)
        return sg * math.exp(lv - t - lg)

    def f_full(t):
        lv, sg = _log_kummer(b, c, x * t, policy, False)
        return sg * math.exp(lv - t - lg + (a - 1.0) * math.log(t))

    rate = 1.0 - max(x, 0.0)
    growth = max(b - c, 0.0) if x > 0 else max(-b, 0.0)
    peak = max(a - 1.0 + growth, 0.0) / rate
    return _laplace_quad(f, f_full, a, peak, rate, policy)


def _laplace_quad(f, f_full, a, peak, rate, policy):
    """Integrate t^(a-1) f(t) over (0, inf).

    ``f_full(t)`` must equal ``t^(a-1) f(t)``.  The head [0, t1] uses an
    algebraic weight so a singular t^(a-1) is integrated exactly.
    """
    if policy.quad_upper_cutoff is not None:
        upper = policy.quad_upper_cutoff
    else:
        shape = peak * rate + 1.0
        upper = (shape + 60.0 + 15.0 * math.sqrt(shape)) / rate
    t1 = min(max(1.0, 0.5 * peak), upper)
    opts = dict(epsabs=0.0, epsrel=policy.rel_tol, limit=policy.quad_nodes)
    pts = [p for p in (peak,) if t1 < p < upper] or None
    signs = set()

    def track(g):
        def inner(t):
            v = g(t)
            if v != 0.0:
                signs.add(v > 0)
            return v
        return inner

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        head, e1 = integrate.quad(track(f), 0.0, t1, weight="alg", wvar=(a - 1.0, 0.0), **opts)
        tail, e2 = integrate.quad(track(f_full), t1, upper, points=pts, **opts)
        total = head + tail
        if abs(e1) + abs(e2) > 10.0 * policy.rel_tol * abs(total):
            raise PrecisionError(f"quadrature error estimate {abs(e1) + abs(e2):.3g} "
                                 f"exceeds tolerance for value {total:.6g}", partial=total)
        if len(signs) > 1:
            # an oscillating integrand can cancel below the kernel's accuracy
            h2, _ = integrate.quad(lambda t: abs(f(t)), 0.0, t1, weight="alg",
                                   wvar=(a - 1.0, 0.0), **opts)
            t2, _ = integrate.quad(lambda t: abs(f_full(t)), t1, upper, points=pts, **opts)
            if 1e3 * _EPS * (h2 + t2) > policy.rel_tol * abs(total):
                raise PrecisionError(f"quadrature cancels too strongly (|f| integral "
                                     f"{h2 + t2:.3g} vs {total:.3g})", partial=total)
    return total


# ----------------------------------------------------------------------
# Confluent Lauricella Phi_2
# ----------------------------------------------------------------------
def _phi2_log(b, c, x, policy, info=None, strict=True):
    b = np.asarray(b, float)
    x = np.asarray(x, float)
    keep = (b != 0) & (x != 0)
    b, x = b[keep], x[keep]
    if info is None:
        info = SeriesInfo()
    if b.size == 0:
        return 0.0, 1.0
    log_pref = 0.0
    if x.min() < -policy.shift_threshold:
        # e^(-s) Phi_2 with an extra variable (0, c - sum b) is shift invariant;
        # centring the arguments bounds every term by e^(range/2)
        b0 = c - b.sum()
        if abs(b0) > 1e-14 * max(1.0, abs(c)):
            x = np.concatenate(([0.0], x))
            b = np.concatenate(([b0], b))
        s = 0.5 * (x.max() + x.min())
        x = x - s
        log_pref = s
        info.shift = s
    radius = float(np.abs(x).max())
    if radius == 0.0:
        return log_pref, 1.0
    yhat = x / radius
    log_r = math.log(radius)
    npeak = max(0, int(math.floor(radius - c + 1.0)))
    offset = npeak * log_r - (math.lgamma(c + npeak) - math.lgamma(c))
    nstart = int(math.ceil(radius))
    nmax = policy.max_order
    if nstart + 50 > nmax:
        raise PrecisionError(f"Phi_2 argument radius {radius:.3g} exceeds the series budget")
    total, maj, n, ok = _kernels.newton_series(yhat, b, 0.0, c, log_r, offset, 1, nstart,
                                               policy.rel_tol, nmax, policy.window)
    info.terms = n
    info.rate = radius
    if not ok or total == 0.0:
        raise PrecisionError(f"Phi_2 series not converged after {n} terms",
                             partial=total * math.exp(min(offset + log_pref, 700.0)))
    if strict and _EPS * maj > policy.rel_tol * abs(total):
        raise PrecisionError(f"Phi_2 series lost precision (majorant/sum = {maj / abs(total):.3g})",
                             partial=total * math.exp(min(offset + log_pref, 700.0)))
    return log_pref + offset + math.log(abs(total)), math.copysign(1.0, total)


def log_phi2_n(args: Phi2Arguments, policy: PrecisionPolicy | None = None):
    """Return ``(log|Phi_2|, sign)``."""
    return _phi2_log(args.b, args.c, args.x, _policy(policy))


def phi2_n(args: Phi2Arguments, policy: PrecisionPolicy | None = None) -> float:
    """Confluent Lauricella function Phi_2^(N)(b_1..b_N; c; x_1..x_N).

    Guaranteed domain: real b, c > 0 and real x with max |x_i| below about
    ``policy.max_order - 50`` (roughly 4400 with the default policy), where
    x is first centred whenever some x_i < -0.5.
    Outside that, or when the series cancels below ``rel_tol``,
    :class:`PrecisionError` is raised.
    """
    lv, sg = log_phi2_n(args, policy)
    return sg * math.exp(lv) if lv < 709.7 else sg * math.inf


# ----------------------------------------------------------------------
# Lauricella F_D
# ----------------------------------------------------------------------
def _fd_quadrature(a, b, c, x, policy):
    b = np.asarray(b, float)
    x = np.asarray(x, float)
    lg = math.lgamma(a)

    # kernel precision is judged by the final cross-check, not node by node
    def f(t):
        lv, sg = _phi2_log(b, c, x * t, policy, strict=False)
        return sg * math.exp(lv - t - lg)

    def f_full(t):
        lv, sg = _phi2_log(b, c, x * t, policy, strict=False)
        return sg * math.exp(lv - t - lg + (a - 1.0) * math.log(t))

    xmax = max(float(x.max()) if x.size else 0.0, 0.0)
    rate = 1.0 - xmax
    growth = float(np.abs(b).sum())
    peak = max(a - 1.0 + growth, 0.0) / rate
    return _laplace_quad(f, f_full, a, peak, rate, policy)


def lauricella_fd(args: FdArguments, policy: PrecisionPolicy | None = None,
                  method: str = "auto") -> float:
    """Fourth Lauricella function F_D^(N)(a; b; c; x), all x_i < 1.

    ``method`` is ``"series"`` (centred total-degree series, any x_i < 1;
    the Euler-transformed series is tried when c < sum(b) and all x_i < 0.5),
    ``"quadrature"`` (Laplace integral over a ``phi2_n`` kernel) or
    ``"auto"``: the series, cross-checked by quadrature when every
    |x_i| < 0.5.  A cross-check disagreement beyond ``10 * rel_tol`` raises
    :class:`PrecisionError`.  When the series rounding guard trips (its
    bound is a worst case and usually far from the real error) auto falls
    back to quadrature.
    """
    policy = _policy(policy)
    if method == "series":
        return _fd_series(args.a, args.b, args.c, args.x, policy)
    if method == "quadrature":
        return _fd_quadrature(args.a, args.b, args.c, args.x, policy)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    try:
        value = _fd_series(args.a, args.b, args.c, args.x, policy)
    except PrecisionError:
        return _fd_quadrature(args.a, args.b, args.c, args.x, policy)
    if args.x and max(abs(v) for v in args.x) < 0.5:
        check = _fd_quadrature(args.a, args.b, args.c, args.x, policy)
        if abs(check - value) > 10.0 * policy.rel_tol * abs(value):
            raise PrecisionError(f"F_D series ({value!r}) and quadrature ({check!r}) disagree",
                                 partial=value)
    return value


# ----------------------------------------------------------------------
# Tricomi U
# ----------------------------------------------------------------------
def tricomi_u_scaled(a: float, b: float, z: float, policy: PrecisionPolicy | None = None) -> float:
    """z**a * U(a, b, z), evaluated from the integral in the scaled variable s = z t.

        z^a U(a, b, z) = 1/Gamma(a) int_0^inf e^-s s^(a-1) (1 + s/z)^(b-a-1) ds
    """
    policy = _policy(policy)
    if not a > 0:
        raise DomainError(f"tricomi_u needs a > 0, got {a}")
    if not z > 0:
        raise DomainError(f"tricomi_u needs z > 0, got {z}")
    lg = math.lgamma(a)
    e = b - a - 1.0

    def f(s):
        return math.exp(-s - lg + e * math.log1p(s / z))

    def f_full(s):
        return math.exp(-s - lg + (a - 1.0) * math.log(s) + e * math.log1p(s / z))

    peak = max(a - 1.0 + max(e, 0.0), 0.0)
    return _laplace_quad(f, f_full, a, peak, 1.0, policy)


def tricomi_u(a: float, b: float, z: float, policy: PrecisionPolicy | None = None) -> float:
    """Tricomi confluent hypergeometric function U(a, b, z), a > 0, z > 0."""
    scaled = tricomi_u_scaled(a, b, z, policy)
    return math.exp(math.log(scaled) - a * math.log(z))


__all__ = [
    "DEFAULT_POLICY", "DomainError", "FdArguments", "Phi2Arguments", "PrecisionError",
    "PrecisionPolicy", "gamma_fn", "gauss_2f1", "gauss_2f1_integral", "kummer_1f1",
    "lauricella_fd", "log_gamma_ratio", "log_kummer_1f1", "log_phi2_n", "phi2_n",
    "pochhammer", "tricomi_u", "tricomi_u_scaled",
]
