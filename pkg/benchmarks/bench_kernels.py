"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5] [--blocks 20000] [--end-to-end]

Kernel timings are best-of-``repeat`` after one warm-up call, so numba
compilation is excluded.  ``--end-to-end`` also runs one Monte Carlo
estimate in a subprocess per ``EVMFADE_NUMBA`` setting.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from evmfade import _kernels as K


def _block_inputs(L, B, N=10_000, seed=0):
    r = np.random.default_rng(seed)
    syms = np.array([1.0, -1.0], dtype=complex)
    pats = np.array(np.meshgrid(*([syms] * L), indexing="ij")).reshape(L, -1).T
    counts = r.multinomial(N, np.full(len(pats), 1 / len(pats)), size=B).astype(float)
    h = np.sqrt(r.exponential(size=B))
    hl = (r.standard_normal((B, L)) + 1j * r.standard_normal((B, L))) / np.sqrt(2)
    w = r.standard_normal(B) + 1j * r.standard_normal(B)
    resid = r.gamma(N - 1, size=B)
    return h, hl, pats, counts, w, resid, N


def cases(blocks):
    y = np.array([0.3, -0.6, 0.1, 0.45])
    beta = np.array([1.5, -0.7, 2.0, 0.8])
    return [
        ("hyp2f1_series x=0.45", K.hyp2f1_series_np, K.hyp2f1_series_nb, (-0.5, 40.0, 12.0, 0.45)),
        ("hyp1f1_series z=300", K.hyp1f1_series_np, K.hyp1f1_series_nb, (2.5, 1.5, 300.0)),
        ("newton_series N=4", K.newton_series_np, K.newton_series_nb, (y, beta, 2.5, 3.0)),
        ("block_evm L=2", K.block_evm_np, K.block_evm_nb, _block_inputs(2, blocks)),
        ("block_evm L=6", K.block_evm_np, K.block_evm_nb, _block_inputs(6, blocks)),
    ]


def best(fn, args, repeat):
    fn(*args)
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def end_to_end():
    code = ("import time; from evmfade import *;"
            "s = EvmScenario(nakagami(2.0), InterfererProfile.iid(rayleigh(), 3), 0.1);"
            "empirical_evm(s, McConfig(num_blocks=2000));"
            "t = time.perf_counter(); empirical_evm(s, McConfig(num_blocks=200_000));"
            "print(time.perf_counter() - t)")
    out = {}
    for flag in ("1", "0"):
        env = dict(os.environ, EVMFADE_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                             text=True, check=True)
        out[flag] = float(res.stdout)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--blocks", type=int, default=20_000)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args(argv)

    print(f"{'kernel':<24}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, f_np, f_nb, fargs in cases(args.blocks):
        t_np, t_nb = best(f_np, fargs, args.repeat), best(f_nb, fargs, args.repeat)
        print(f"{name:<24}{t_np * 1e3:12.3f}{t_nb * 1e3:12.3f}{t_np / t_nb:10.1f}")
    if args.end_to_end:
        t = end_to_end()
        print(f"{'empirical_evm 2e5 blocks':<24}{t['0'] * 1e3:12.1f}{t['1'] * 1e3:12.1f}"
              f"{t['0'] / t['1']:10.1f}")


if __name__ == "__main__":
    main()
