"""Datasets for the standard EVM plots.

Each figure is a list of curves; a curve is a list of scenarios along an x
axis.  :func:`figure_dataset` evaluates the closed forms (and optionally the
Monte Carlo estimator) and returns flat rows plus a manifest describing
axes and curve parameters.  SNR is E_s / sigma2 = 1 / sigma2 throughout.

=====  ==============================================================
id     content
=====  ==============================================================
1      Rician desired and interferers, interference limited, EVM vs L
2      kappa-mu shadowed desired, one Nakagami(1) interferer, EVM vs SNR
3      several fading laws, i.i.d. interferers, interference limited, vs L
4      Nakagami, interference plus noise against interference limited, L=1
5      Nakagami, interference limited, EVM vs desired m (m_I = 5)
6      Rician / Nakagami / Rayleigh desired with Nakagami interferers and noise
=====  ==============================================================
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .evm import EvmScenario, evaluate
from .fading import INF, InterfererProfile, ShadowedFadingParams, nakagami, rayleigh, rician
from .mcsim import McConfig, empirical_evm

SNR_CONVENTION = "SNR = E_s / sigma2 = 1 / sigma2 (E_s = 1, unit-mean desired fading power)"
SNR_DB = [float(v) for v in range(0, 32, 2)]
L_RANGE = list(range(1, 11))


@dataclass
class Curve:
    label: str
    params: dict
    x: list
    scenarios: list


@dataclass
class Figure:
    fig_id: int
    title: str
    x_name: str
    x_label: str
    curves: list


def _sigma2(snr_db):
    return 10.0 ** (-snr_db / 10.0)


def _triple(p: ShadowedFadingParams):
    enc = lambda v: "inf" if v == INF else v
    return {"kappa": enc(p.kappa), "mu": enc(p.mu), "m": enc(p.m)}


def _vs_L(label, desired, interferer, sigma2=0.0, params=None):
    scen = [EvmScenario(desired, InterfererProfile.iid(interferer, L), sigma2) for L in L_RANGE]
    p = {"desired": _triple(desired), "interferer": _triple(interferer), "sigma2": sigma2}
    p.update(params or {})
    return Curve(label, p, list(L_RANGE), scen)


def _vs_snr(label, desired, interferer, L, params=None, snr_db=None):
    snr_db = SNR_DB if snr_db is None else snr_db
    prof = InterfererProfile.iid(interferer, L)
    scen = [EvmScenario(desired, prof, _sigma2(s)) for s in snr_db]
    p = {"desired": _triple(desired), "interferer": _triple(interferer), "L": L}
    p.update(params or {})
    return Curve(label, p, list(snr_db), scen)


def _fig1():
    curves = []
    for K_I in (0.0, 15.0):
        for K in (0.0, 5.0, 10.0, 15.0):
            curves.append(_vs_L(f"K={K:g}, K_I={K_I:g}", rician(K), rician(K_I),
                                params={"K": K, "K_I": K_I}))
    curves.append(_vs_L("no fading", ShadowedFadingParams(INF, 1.0), ShadowedFadingParams(INF, 1.0),
                        params={"K": "inf", "K_I": "inf"}))
    return Figure(1, "Rician desired link and Rician interferers, interference limited",
                  "L", "number of interferers L", curves)


def _fig2():
    grid = [(1.0, 1.0, 1.0), (5.0, 1.0, 1.0), (1.0, 2.0, 1.0), (1.0, 1.0, 10.0), (5.0, 2.0, 10.0)]
    curves = [_vs_snr(f"kappa={k:g}, mu={u:g}, m={m:g}", ShadowedFadingParams(k, u, m),
                      nakagami(1.0), 1) for k, u, m in grid]
    return Figure(2, "kappa-mu shadowed desired link, interference plus noise (m_I = 1, L = 1)",
                  "snr_db", "SNR [dB]", curves)


def _fig3():
    laws = [
        ("Rayleigh", rayleigh(), rayleigh()),
        ("Rician K=5", rician(5.0), rician(5.0)),
        ("Nakagami m=2", nakagami(2.0), nakagami(2.0)),
        ("kappa-mu kappa=2 mu=2", ShadowedFadingParams(2.0, 2.0), ShadowedFadingParams(2.0, 2.0)),
        ("kappa-mu shadowed (2,2,4)/(1,1,2)", ShadowedFadingParams(2.0, 2.0, 4.0),
         ShadowedFadingParams(1.0, 1.0, 2.0)),
    ]
    curves = [_vs_L(lbl, d, i) for lbl, d, i in laws]
    return Figure(3, "different fading laws, i.i.d. interferers, interference limited",
                  "L", "number of interferers L", curves)


def _fig4():
    snr = [float(v) for v in range(-10, 42, 2)]
    curves = []
    for m in (1.0, 2.0, 4.0):
        curves.append(_vs_snr(f"m={m:g}, interference + noise", nakagami(m), nakagami(1.0), 1,
                              {"m": m, "m_I": 1.0, "system": "interference+noise"}, snr))
        limited = EvmScenario(nakagami(m), InterfererProfile.iid(nakagami(1.0), 1), 0.0)
        curves.append(Curve(f"m={m:g}, interference limited",
                            {"m": m, "m_I": 1.0, "L": 1, "system": "interference-limited"},
                            list(snr), [limited] * len(snr)))
    return Figure(4, "Nakagami fading, interference plus noise against interference limited "
                     "(L = 1)", "snr_db", "SNR [dB]", curves)


def _fig5():
    ms = [0.6, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0]
    curves = []
    for L in (1, 2, 4, 8):
        scen = [EvmScenario(nakagami(m), InterfererProfile.iid(nakagami(5.0), L)) for m in ms]
        curves.append(Curve(f"L={L}", {"m_I": 5.0, "L": L}, list(ms), scen))
    return Figure(5, "Nakagami fading, interference limited, m_I = 5", "m",
                  "desired Nakagami parameter m", curves)


def _fig6():
    interferer = nakagami(2.0)
    laws = [("Rician K=5", rician(5.0)), ("Nakagami m=2", nakagami(2.0)), ("Rayleigh", rayleigh())]
    curves = [_vs_snr(lbl, d, interferer, 2, {"m_I": 2.0}) for lbl, d in laws]
    return Figure(6, "different desired fading laws, Nakagami interferers (m_I = 2, L = 2), "
                     "interference plus noise", "snr_db", "SNR [dB]", curves)


FIGURES = {1: _fig1, 2: _fig2, 3: _fig3, 4: _fig4, 5: _fig5, 6: _fig6}


def build_figure(fig_id: int) -> Figure:
    try:
        return FIGURES[int(fig_id)]()
    except (KeyError, ValueError):
        raise KeyError(f"unknown figure id {fig_id!r}; choose from {sorted(FIGURES)}") from None


def figure_dataset(fig_id: int, mc: McConfig | None = None, timing: bool = False):
    """Evaluate a figure; returns ``(rows, manifest)``.

    Rows carry ``curve, x, analytic_evm, mc_evm, mc_stderr, formula_used,
    eval_time_ms``; the Monte Carlo columns are None unless ``mc`` is given.
    """
    fig = build_figure(fig_id)
    rows = []
    for curve in fig.curves:
        for x, sc in zip(curve.x, curve.scenarios):
            t0 = time.perf_counter()
            res = evaluate(sc)
            dt = (time.perf_counter() - t0) * 1e3
            row = {"curve": curve.label, "x": x, "analytic_evm": res.value, "mc_evm": None,
                   "mc_stderr": None, "formula_used": res.formula_used,
                   "eval_time_ms": dt if timing else None}
            if mc is not None and math.isfinite(res.value):
                r = empirical_evm(sc, mc)
                row["mc_evm"], row["mc_stderr"] = r.mean, r.stderr
            rows.append(row)
    manifest = {
        "schema": 1,
        "figure": fig.fig_id,
        "title": fig.title,
        "x_axis": {"name": fig.x_name, "label": fig.x_label},
        "y_axis": {"name": "analytic_evm", "label": "EVM (linear)"},
        "snr_convention": SNR_CONVENTION,
        "curves": [{"label": c.label, "params": c.params} for c in fig.curves],
        "monte_carlo": None if mc is None else {
            "block_length": mc.block_length, "num_blocks": mc.num_blocks, "seed": mc.seed,
            "constellation": mc.constellation},
    }
    return rows, manifest


__all__ = ["FIGURES", "Figure", "SNR_CONVENTION", "build_figure", "figure_dataset"]
