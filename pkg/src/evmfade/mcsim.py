"""Monte Carlo link simulator and data-aided EVM estimator.

Each block draws one desired gain h and interferer gains h_l (constant over
the block), sends N symbols and measures

    EVM_block = sqrt(1/N sum_i |y(i)/h - D(i)|^2),
    y(i) = h D(i) + sum_l h_l I_l(i) + n(i).

The desired symbols cancel, so a block only depends on the interference
sequence a(i) = sum_l h_l I_l(i) and the noise.  :func:`empirical_evm` uses
exact per-block sufficient statistics instead of N explicit symbols:

* the interferer symbol tuples are i.i.d. uniform over P patterns, so their
  occurrence counts are multinomial and ``A = sum_i |a(i)|^2`` follows from
  them;
* for complex Gaussian noise, the error energy is ``|sqrt(A) + w|^2 + R``
  with ``w ~ CN(0, sigma2)`` the noise along a and ``R ~ sigma2 Gamma(N-1)``
  the rest.

Both are equal in distribution to the symbol-level simulation in
:func:`simulate_block`, which is kept as the literal reference.

Blocks are processed in fixed-size chunks; chunk ``k`` uses its own Philox
stream seeded by ``(seed, k)`` and chunk statistics are merged in chunk
order, so results do not depend on the number of workers.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .evm import EvmScenario
from .fading import ShadowedFadingParams, sample_power

MAX_PATTERNS = 1024


def _psk(m):
    return np.exp(2j * np.pi * np.arange(m) / m)


def _qam16():
    lv = np.array([-3.0, -1.0, 1.0, 3.0])
    pts = (lv[:, None] + 1j * lv[None, :]).ravel()
    return pts / math.sqrt(np.mean(np.abs(pts) ** 2))


CONSTELLATIONS = {
    "bpsk": np.array([1.0 + 0j, -1.0 + 0j]),
    "qpsk": np.exp(1j * (np.pi / 4 + np.pi / 2 * np.arange(4))),
    "8psk": _psk(8),
    "16qam": _qam16(),
}
# PSK sets: some rotation maps any symbol onto any other
_GROUP = {"bpsk", "qpsk", "8psk"}


@dataclass(frozen=True)
class McConfig:
    block_length: int = 10_000
    num_blocks: int = 1_000_000
    constellation: str = "bpsk"
    seed: int = 0
    workers: int = 1
    sampler: str = "mixture"

    def __post_init__(self):
        if int(self.block_length) != self.block_length or self.block_length < 2:
            raise ValueError(f"block_length must be an integer >= 2, got {self.block_length}")
        if int(self.num_blocks) != self.num_blocks or self.num_blocks < 1:
            raise ValueError(f"num_blocks must be a positive integer, got {self.num_blocks}")
        if self.constellation not in CONSTELLATIONS:
            raise ValueError(f"unknown constellation {self.constellation!r}; "
                             f"choose from {sorted(CONSTELLATIONS)}")
        if int(self.workers) != self.workers or self.workers < 1:
            raise ValueError(f"workers must be a positive integer, got {self.workers}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if self.sampler not in ("mixture", "physical"):
            raise ValueError(f"sampler must be 'mixture' or 'physical', got {self.sampler!r}")

    @property
    def symbols(self) -> np.ndarray:
        return CONSTELLATIONS[self.constellation]


@dataclass
class BlockRealization:
    h: complex
    h_l: np.ndarray
    noise_variance: float


@dataclass
class McResult:
    mean: float
    stderr: float
    num_blocks: int
    redraws: int = 0
    diagnostics: dict = field(default_factory=dict)

    def __iter__(self):
        # allows ``mean, stderr = empirical_evm(...)``
        return iter((self.mean, self.stderr))


def _stream(seed: int, key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(key)])))


# ----------------------------------------------------------------------
# channel draws
# ----------------------------------------------------------------------
def _powers(p: ShadowedFadingParams, rng, size, sampler):
    method = sampler if (sampler == "physical" and float(p.mu).is_integer()) else "mixture"
    return np.atleast_1d(np.asarray(sample_power(p, rng, size, method=method), float))


def _draw_gains(scenario: EvmScenario, rng, size, sampler):
    """Desired |h| (redrawn where it underflows to 0) and complex interferer gains."""
    g = _powers(scenario.desired, rng, size, sampler)
    redraws = 0
    bad = g <= 0.0
    while bad.any():
        redraws += int(bad.sum())
        g[bad] = _powers(scenario.desired, rng, int(bad.sum()), sampler)
        bad = g <= 0.0
    entries = tuple(scenario.interferers) if scenario.interferers is not None else ()
    hl = np.empty((size, len(entries)), dtype=complex)
    for l, e in enumerate(entries):
        amp = np.sqrt(_powers(e, rng, size, sampler))
        hl[:, l] = amp * np.exp(2j * np.pi * rng.random(size))
    return np.sqrt(g), hl, redraws


def _patterns(symbols, L, constellation):
    """Pattern table (P, L) whose uniform counts give the law of A."""
    if L == 0:
        return np.zeros((1, 0), dtype=complex)
    if constellation in _GROUP:
        # |sum h_l s_l| is unchanged when every s_l is rotated by a symmetry of
        # the constellation, so fixing the first symbol loses nothing
        free = L - 1
        grid = np.array(np.meshgrid(*([symbols] * free), indexing="ij")).reshape(free, -1).T \
            if free else np.zeros((1, 0), dtype=complex)
        first = np.full((grid.shape[0], 1), symbols[0], dtype=complex)
        return np.concatenate([first, grid], axis=1)
    return np.array(np.meshgrid(*([symbols] * L), indexing="ij")).reshape(L, -1).T


def _num_patterns(M, L, constellation):
    if L == 0:
        return 1
    return M ** (L - 1) if constellation in _GROUP else M ** L


def chunk_size(scenario: EvmScenario, cfg: McConfig) -> int:
    """Blocks per chunk; a function of the scenario and config only."""
    P = _num_patterns(len(cfg.symbols), scenario.L, cfg.constellation)
    if P > MAX_PATTERNS:
        return 256
    return max(256, min(16384, (1 << 22) // P))


def _chunk_stats(scenario: EvmScenario, cfg: McConfig, k: int, size: int):
    rng = _stream(cfg.seed, k)
    N = cfg.block_length
    h_abs, hl, redraws = _draw_gains(scenario, rng, size, cfg.sampler)
    L = hl.shape[1]
    symbols = cfg.symbols
    P = _num_patterns(len(symbols), L, cfg.constellation)
    s2 = scenario.noise_variance
    if P <= MAX_PATTERNS:
        pats = _patterns(symbols, L, cfg.constellation)
        counts = rng.multinomial(N, np.full(P, 1.0 / P), size=size).astype(float)
        if s2 > 0:
            w = math.sqrt(s2 / 2.0) * (rng.standard_normal(size) + 1j * rng.standard_normal(size))
            resid = s2 * rng.standard_gamma(N - 1, size)
        else:
            w = np.zeros(size, dtype=complex)
            resid = np.zeros(size)
        evm = _kernels.block_evm(h_abs, hl, pats, counts, w, resid, N)
    else:
        evm = np.empty(size)
        for b in range(size):
            idx = rng.integers(0, len(symbols), size=(N, L))
            a = symbols[idx] @ hl[b]
            if s2 > 0:
                a = a + math.sqrt(s2 / 2.0) * (rng.standard_normal(N) + 1j * rng.standard_normal(N))
            evm[b] = math.sqrt(np.mean(a.real ** 2 + a.imag ** 2)) / h_abs[b]
    mean = float(np.mean(evm))
    m2 = float(np.sum((evm - mean) ** 2))
    return size, mean, m2, redraws


def _run_chunk(args):
    scenario, cfg, k, size = args
    return _chunk_stats(scenario, cfg, k, size)


def _merge(acc, part):
    # Chan et al. pairwise update of (count, mean, sum of squared deviations)
    n1, m1, s1 = acc
    n2, m2, s2 = part
    n = n1 + n2
    d = m2 - m1
    return n, m1 + d * n2 / n, s1 + s2 + d * d * n1 * n2 / n


def empirical_evm(scenario: EvmScenario, cfg: McConfig) -> McResult:
    """Mean block EVM over ``cfg.num_blocks`` fading blocks and its standard error."""
    csize = chunk_size(scenario, cfg)
    nchunks = -(-cfg.num_blocks // csize)
    jobs = [(scenario, cfg, k, min(csize, cfg.num_blocks - k * csize)) for k in range(nchunks)]
    if cfg.workers > 1 and nchunks > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.workers, nchunks)) as ex:
            parts = list(ex.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(j) for j in jobs]
    acc = (0, 0.0, 0.0)
    redraws = 0
    for n, mean, m2, r in parts:
        acc = _merge(acc, (n, mean, m2))
        redraws += r
    n, mean, m2 = acc
    var = m2 / (n - 1) if n > 1 else math.nan
    stderr = math.sqrt(var / n) if n > 1 else math.nan
    return McResult(mean, stderr, n, redraws, {"chunks": nchunks, "chunk_size": csize})


# ----------------------------------------------------------------------
# literal symbol-level reference
# ----------------------------------------------------------------------
def draw_block(scenario: EvmScenario, rng: np.random.Generator,
               sampler: str = "mixture") -> BlockRealization:
    h_abs, hl, _ = _draw_gains(scenario, rng, 1, sampler)
    h = complex(h_abs[0] * np.exp(2j * np.pi * rng.random()))
    return BlockRealization(h, hl[0], scenario.noise_variance)


def _block_signals(real: BlockRealization, cfg: McConfig, rng):
    N = cfg.block_length
    symbols = cfg.symbols
    L = len(real.h_l)
    d = symbols[rng.integers(0, len(symbols), N)]
    interf = symbols[rng.integers(0, len(symbols), (N, L))]
    s = math.sqrt(real.noise_variance / 2.0)
    n = s * (rng.standard_normal(N) + 1j * rng.standard_normal(N))
    return d, interf, n


def simulate_block(scenario: EvmScenario, cfg: McConfig, rng: np.random.Generator,
                   realization: BlockRealization | None = None) -> float:
    """EVM of one block, simulated symbol by symbol."""
    real = realization or draw_block(scenario, rng, cfg.sampler)
    d, interf, n = _block_signals(real, cfg, rng)
    y = real.h * d + interf @ real.h_l + n
    err = y / real.h - d
    return float(math.sqrt(np.mean(err.real ** 2 + err.imag ** 2)))


def reduction_check(scenario: EvmScenario, cfg: McConfig, rng: np.random.Generator,
                    realization: BlockRealization | None = None) -> dict:
    """Empirical cross terms of one block.

    Returns the interferer Gram terms (1/N) sum (I_l h_l)^* (I_j h_j) as
    ``"interferer_gram"`` (expected diag |h_l|^2, off-diagonal 0), the
    interferer-noise terms (expected 0), the noise energy (expected sigma2),
    and the deviations of each from its expectation.
    """
    real = realization or draw_block(scenario, rng, cfg.sampler)
    N = cfg.block_length
    _, interf, n = _block_signals(real, cfg, rng)
    x = interf * real.h_l[None, :]
    gram = (x.conj().T @ x) / N
    cross = (x.conj().T @ n) / N
    noise = float(np.mean(n.real ** 2 + n.imag ** 2))
    expected = np.diag(np.abs(real.h_l) ** 2)
    dev = np.abs(gram - expected)
    L = len(real.h_l)
    off = dev[~np.eye(L, dtype=bool)] if L > 1 else np.zeros(0)
    return {
        "block_length": N,
        "interferer_gram": gram,
        "interferer_noise": cross,
        "noise_energy": noise,
        "max_offdiag": float(off.max()) if off.size else 0.0,
        "max_diag_rel": float(np.max(dev.diagonal() / np.abs(real.h_l) ** 2)) if L else 0.0,
        "max_noise_cross": float(np.abs(cross).max()) if L else 0.0,
        "noise_rel": (abs(noise - real.noise_variance) / real.noise_variance
                      if real.noise_variance > 0 else 0.0),
        "realization": real,
    }


__all__ = [
    "BlockRealization", "CONSTELLATIONS", "McConfig", "McResult", "chunk_size", "draw_block",
    "empirical_evm", "reduction_check", "simulate_block",
]
