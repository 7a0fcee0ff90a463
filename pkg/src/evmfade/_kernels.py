"""Hot inner loops, each in a numba flavour and a pure-numpy flavour.

The public names at the bottom of the module are bound to one flavour at
import time according to :data:`evmfade._accel.USE_NUMBA`.  Both flavours
are always importable (``*_nb`` / ``*_np``) so tests and the benchmark can
compare them directly.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit

# Series-stage return layout: (sum, majorant_sum, terms_used, converged)
# For the log-scaled 1F1 kernel an extra log-scale exponent is returned.

_RESCALE = 1e250
_LOG_RESCALE = math.log(_RESCALE)


# ----------------------------------------------------------------------
# Total-degree series  sum_n w_n e_n(y),  e_n = [t^n] prod (1 - y_i t)^(-b_i)
# ----------------------------------------------------------------------
def _newton_series_py(y, beta, a, c, log_r, offset, mode, nstart, rel_tol, nmax, window):
    # mode 0: w_n = (a)_n / (c)_n
    # mode 1: w_n = exp(n*log_r - log((c)_n) - offset)
    nvar = y.shape[0]
    ay = np.abs(y)
    ab = np.abs(beta)
    e = np.zeros(nmax + 1)
    ep = np.zeros(nmax + 1)
    p = np.zeros(nmax + 1)
    pp = np.zeros(nmax + 1)
    pw = np.ones(nvar)
    pwa = np.ones(nvar)
    e[0] = 1.0
    ep[0] = 1.0
    if mode == 0:
        w = 1.0
    else:
        logw = -offset
        w = math.exp(logw)
    s = w
    m = abs(w)
    quiet = 0
    for n in range(1, nmax + 1):
        pw = pw * y
        pwa = pwa * ay
        p[n] = np.dot(beta, pw)
        pp[n] = np.dot(ab, pwa)
        e[n] = np.dot(p[1:n + 1], e[n - 1::-1]) / n
        ep[n] = np.dot(pp[1:n + 1], ep[n - 1::-1]) / n
        if mode == 0:
            w *= (a + n - 1.0) / (c + n - 1.0)
        else:
            logw += log_r - math.log(c + n - 1.0)
            w = math.exp(logw)
        s += w * e[n]
        tm = abs(w) * ep[n]
        m += tm
        if n >= nstart and tm <= rel_tol * abs(s):
            quiet += 1
            if quiet >= window:
                return s, m, n, True
        else:
            quiet = 0
    return s, m, nmax, False


@njit(cache=True)
def _newton_series_jit(y, beta, a, c, log_r, offset, mode, nstart, rel_tol, nmax, window):
    nvar = y.shape[0]
    e = np.zeros(nmax + 1)
    ep = np.zeros(nmax + 1)
    p = np.zeros(nmax + 1)
    pp = np.zeros(nmax + 1)
    pw = np.ones(nvar)
    pwa = np.ones(nvar)
    e[0] = 1.0
    ep[0] = 1.0
    logw = -offset
    if mode == 0:
        w = 1.0
    else:
        w = math.exp(logw)
    s = w
    m = abs(w)
    quiet = 0
    for n in range(1, nmax + 1):
        acc = 0.0
        acca = 0.0
        for i in range(nvar):
            pw[i] *= y[i]
            pwa[i] *= abs(y[i])
            acc += beta[i] * pw[i]
            acca += abs(beta[i]) * pwa[i]
        p[n] = acc
        pp[n] = acca
        acc = 0.0
        acca = 0.0
        for j in range(1, n + 1):
            acc += p[j] * e[n - j]
            acca += pp[j] * ep[n - j]
        e[n] = acc / n
        ep[n] = acca / n
        if mode == 0:
            w *= (a + n - 1.0) / (c + n - 1.0)
        else:
            logw += log_r - math.log(c + n - 1.0)
            w = math.exp(logw)
        s += w * e[n]
        tm = abs(w) * ep[n]
        m += tm
        if n >= nstart and tm <= rel_tol * abs(s):
            quiet += 1
            if quiet >= window:
                return s, m, n, True
        else:
            quiet = 0
    return s, m, nmax, False


def newton_series_np(y, beta, a, c, log_r=0.0, offset=0.0, mode=0, nstart=0,
                     rel_tol=1e-10, nmax=1000, window=20):
    return _newton_series_py(np.asarray(y, float), np.asarray(beta, float), float(a), float(c),
                             float(log_r), float(offset), int(mode), int(nstart),
                             float(rel_tol), int(nmax), int(window))


def newton_series_nb(y, beta, a, c, log_r=0.0, offset=0.0, mode=0, nstart=0,
                     rel_tol=1e-10, nmax=1000, window=20):
    return _newton_series_jit(np.ascontiguousarray(y, dtype=np.float64),
                              np.ascontiguousarray(beta, dtype=np.float64),
                              float(a), float(c), float(log_r), float(offset), int(mode),
                              int(nstart), float(rel_tol), int(nmax), int(window))


# ----------------------------------------------------------------------
# Scalar Gauss 2F1 power series
# ----------------------------------------------------------------------
def _hyp2f1_series_py(a, b, c, x, rel_tol, nmax, window):
    t = 1.0
    s = 1.0
    m = 1.0
    quiet = 0
    for n in range(1, nmax + 1):
        t *= (a + n - 1.0) * (b + n - 1.0) / ((c + n - 1.0) * n) * x
        s += t
        m += abs(t)
        if abs(t) <= rel_tol * abs(s):
            quiet += 1
            if quiet >= window:
                return s, m, n, True
        else:
            quiet = 0
    return s, m, nmax, False


_hyp2f1_series_jit = njit(cache=True)(_hyp2f1_series_py)


def hyp2f1_series_np(a, b, c, x, rel_tol=1e-10, nmax=100000, window=20):
    return _hyp2f1_series_py(float(a), float(b), float(c), float(x), float(rel_tol), int(nmax),
                             int(window))


def hyp2f1_series_nb(a, b, c, x, rel_tol=1e-10, nmax=100000, window=20):
    return _hyp2f1_series_jit(float(a), float(b), float(c), float(x), float(rel_tol), int(nmax),
                              int(window))


# ----------------------------------------------------------------------
# Kummer 1F1 power series for z >= 0, rescaled to avoid overflow
# value = s * exp(log_scale)
# ----------------------------------------------------------------------
def _hyp1f1_series_py(a, b, z, rel_tol, nmax, window):
    t = 1.0
    s = 1.0
    m = 1.0
    log_scale = 0.0
    nstart = z - b
    quiet = 0
    for n in range(1, nmax + 1):
        t *= (a + n - 1.0) / ((b + n - 1.0) * n) * z
        s += t
        m += abs(t)
        if m > _RESCALE:
            t /= _RESCALE
            s /= _RESCALE
            m /= _RESCALE
            log_scale += _LOG_RESCALE
        if n >= nstart and abs(t) <= rel_tol * abs(s):
            quiet += 1
            if quiet >= window:
                return s, log_scale, m, n, True
        else:
            quiet = 0
    return s, log_scale, m, nmax, False


_hyp1f1_series_jit = njit(cache=True)(_hyp1f1_series_py)


def hyp1f1_series_np(a, b, z, rel_tol=1e-10, nmax=100000, window=20):
    return _hyp1f1_series_py(float(a), float(b), float(z), float(rel_tol), int(nmax), int(window))


def hyp1f1_series_nb(a, b, z, rel_tol=1e-10, nmax=100000, window=20):
    return _hyp1f1_series_jit(float(a), float(b), float(z), float(rel_tol), int(nmax),
                              int(window))


# ----------------------------------------------------------------------
# Monte Carlo: block EVM from interferer-pattern counts
# ----------------------------------------------------------------------
def block_evm_np(h_abs, hl, patterns, counts, w, resid, n_symbols):
    """Block EVM from interferer-pattern statistics.

    ``hl`` (B, L) holds the interferer gains, ``patterns`` (P, L) the
    interferer symbol tuples and ``counts`` (B, P) how often each tuple
    occurs in a block.  With A = sum_i |sum_l h_l I_l(i)|^2 the error energy
    of a block is |sqrt(A) + w|^2 + resid, where ``w`` is the noise component
    along the interference sequence and ``resid`` the noise energy orthogonal
    to it.
    """
    c = hl @ patterns.T
    a = np.sum(counts * (c.real ** 2 + c.imag ** 2), axis=1)
    ra = np.sqrt(a)
    energy = (ra + w.real) ** 2 + w.imag ** 2 + resid
    return np.sqrt(energy / n_symbols) / h_abs


@njit(cache=True)
def _block_evm_jit(h_abs, hl, patterns, counts, w, resid, n_symbols):
    nb, nl = hl.shape
    npat = patterns.shape[0]
    out = np.empty(nb)
    for k in range(nb):
        a = 0.0
        for q in range(npat):
            cnt = counts[k, q]
            if cnt == 0:
                continue
            cr = 0.0
            ci = 0.0
            for l in range(nl):
                v = hl[k, l] * patterns[q, l]
                cr += v.real
                ci += v.imag
            a += cnt * (cr * cr + ci * ci)
        ra = math.sqrt(a) + w[k].real
        energy = ra * ra + w[k].imag * w[k].imag + resid[k]
        out[k] = math.sqrt(energy / n_symbols) / h_abs[k]
    return out


def block_evm_nb(h_abs, hl, patterns, counts, w, resid, n_symbols):
    return _block_evm_jit(np.ascontiguousarray(h_abs, dtype=np.float64),
                          np.ascontiguousarray(hl, dtype=np.complex128),
                          np.ascontiguousarray(patterns, dtype=np.complex128),
                          np.ascontiguousarray(counts, dtype=np.float64),
                          np.ascontiguousarray(w, dtype=np.complex128),
                          np.ascontiguousarray(resid, dtype=np.float64),
                          float(n_symbols))


if USE_NUMBA:
    newton_series = newton_series_nb
    hyp2f1_series = hyp2f1_series_nb
    hyp1f1_series = hyp1f1_series_nb
    block_evm = block_evm_nb
else:
    newton_series = newton_series_np
    hyp2f1_series = hyp2f1_series_np
    hyp1f1_series = hyp1f1_series_np
    block_evm = block_evm_np
