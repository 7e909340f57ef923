"""Seeded, chunk-parallel Monte Carlo estimates of every BLER quantity.

Estimates are means of the instantaneous normal-approximation BLER (a
smooth, low-variance estimator of the averaged quantity); a Bernoulli
error-counting estimator is available behind a flag.  Chunk i draws from a
generator seeded by (seed, i), so results are bit-identical for a fixed
(seed, chunk_size) regardless of worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .blocklength import psi_exact, sinr_ceu, sinr_cu_sic
from .channel import CorrelationModel, SystemConfig, chunk_rng, draw_gain_matrix

__all__ = [
    "McConfig",
    "BlerEstimate",
    "SimulatedBlers",
    "simulate_blers",
    "empirical_cdf",
    "cc_sinr_map",
    "sic_sinr_map",
]


@dataclass(frozen=True)
class McConfig:
    """Simulation size and seeding; chunk_size fixes the substream layout."""

    seed: int = 20240901
    trials: int = 100_000
    chunk_size: int = 100_000

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.chunk_size < 1:
            raise ValueError(f"chunk_size must be >= 1, got {self.chunk_size}")


@dataclass(frozen=True)
class BlerEstimate:
    """Sample mean with its standard error (sample std / sqrt(n))."""

    mean: float
    stderr: float
    n: int
    method: str = "mc"


@dataclass(frozen=True)
class SimulatedBlers:
    """Estimates of the four averaged BLERs of one scenario."""

    eps_cc: BlerEstimate
    eps_ce: BlerEstimate
    eps_c: BlerEstimate
    eps_e: BlerEstimate


def _chunk_sums(cfg: SystemConfig, model_cu: CorrelationModel,
                model_ceu: CorrelationModel, seed: int, chunk_index: int,
                count: int, estimator: str) -> np.ndarray:
    """Per-chunk accumulator: [n, sum, sumsq] per metric (cc, ce, c, e)."""
    rng = chunk_rng(seed, chunk_index)
    g_cu = draw_gain_matrix(model_cu, rng, count)
    g_ceu = draw_gain_matrix(model_ceu, rng, count)
    x_cu = np.max(np.abs(g_cu), axis=1) ** 2
    x_ceu = np.max(np.abs(g_ceu), axis=1) ** 2
    gamma_ce, gamma_cc = sinr_cu_sic(x_cu, cfg)
    gamma_e = sinr_ceu(x_ceu, cfg)
    eps_cc = psi_exact(gamma_cc, cfg.Nc, cfg.L)
    eps_ce = psi_exact(gamma_ce, cfg.Ne, cfg.L)
    eps_e = psi_exact(gamma_e, cfg.Ne, cfg.L)
    if estimator == "bernoulli":
        u = rng.random((3, count))
        eps_ce = (u[0] < eps_ce).astype(float)
        eps_cc = (u[1] < eps_cc).astype(float)
        eps_e = (u[2] < eps_e).astype(float)
    eps_c = eps_ce + (1.0 - eps_ce) * eps_cc
    out = np.empty((4, 3))
    for i, vals in enumerate((eps_cc, eps_ce, eps_c, eps_e)):
        out[i] = (count, vals.sum(), np.square(vals).sum())
    return out


def _estimate(acc: np.ndarray) -> BlerEstimate:
    n, s, ss = acc
    n = int(n)
    mean = s / n
    if n > 1:
        var = max(ss / n - mean * mean, 0.0) * n / (n - 1)
        stderr = (var / n) ** 0.5
    else:
        stderr = float("nan")
    return BlerEstimate(mean=float(mean), stderr=float(stderr), n=n)


def simulate_blers(cfg: SystemConfig, model_cu: CorrelationModel,
                   model_ceu: CorrelationModel, mc: McConfig,
                   workers: int = 1, estimator: str = "psi") -> SimulatedBlers:
    """Monte Carlo averages of eps_cc, eps_ce, eps_c, eps_e.

    Per trial: independent CU and CEU gain draws, best-port power, SINRs,
    instantaneous BLERs, and the per-trial combination
    eps_c = eps_ce + (1 - eps_ce) eps_cc.  estimator = "psi" averages the
    smooth Psi values; "bernoulli" counts sampled decoding failures.
    """
    if estimator not in ("psi", "bernoulli"):
        raise ValueError(f"unknown estimator {estimator!r}")
    chunks = []
    remaining = mc.trials
    index = 0
    while remaining > 0:
        size = min(mc.chunk_size, remaining)
        chunks.append((index, size))
        remaining -= size
        index += 1

    def run(chunk):
        i, size = chunk
        return i, _chunk_sums(cfg, model_cu, model_ceu, mc.seed, i, size, estimator)

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = dict(pool.map(run, chunks))
    else:
        results = dict(map(run, chunks))
    # reduce in chunk order so float accumulation is worker-count invariant
    acc = np.zeros((4, 3))
    for i, _ in chunks:
        acc += results[i]
    return SimulatedBlers(eps_cc=_estimate(acc[0]), eps_ce=_estimate(acc[1]),
                          eps_c=_estimate(acc[2]), eps_e=_estimate(acc[3]))


def cc_sinr_map(cfg: SystemConfig) -> Callable[[np.ndarray], np.ndarray]:
    """Best-port power to CU own-symbol SNR gamma_cc."""
    return lambda x: sinr_cu_sic(x, cfg)[1]


def sic_sinr_map(cfg: SystemConfig, distance: float) -> Callable[[np.ndarray], np.ndarray]:
    """Best-port power to interference-limited SINR at the given distance."""
    scaled = cfg.replace(d_e=distance)
    return lambda x: sinr_ceu(x, scaled)


def empirical_cdf(model: CorrelationModel, mapping: Callable,
                  mc: McConfig, grid: Sequence[float]) -> np.ndarray:
    """Fraction of simulated SINR samples below each grid point.

    The grid must be nonempty and sorted ascending; the output is
    nondecreasing along it.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("empirical_cdf requires a nonempty grid")
    if np.any(np.diff(grid) < 0):
        raise ValueError("grid must be sorted ascending")
    counts = np.zeros(grid.size, dtype=np.int64)
    remaining = mc.trials
    index = 0
    while remaining > 0:
        size = min(mc.chunk_size, remaining)
        rng = chunk_rng(mc.seed, index)
        gains = draw_gain_matrix(model, rng, size)
        x = np.max(np.abs(gains), axis=1) ** 2
        sinr = np.sort(np.asarray(mapping(x), dtype=float))
        counts += np.searchsorted(sinr, grid, side="left")
        remaining -= size
        index += 1
    return counts / mc.trials
