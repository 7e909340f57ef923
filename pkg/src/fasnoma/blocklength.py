"""Finite-blocklength BLER kernels and the SINR algebra of the NOMA link.

The instantaneous BLER model is the normal approximation
Psi(gamma, k, L) = Q((C(gamma) - k/L) / sqrt(V(gamma)/L)), together with its
piecewise-linear surrogate used by the analytic averaging path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import SystemConfig
from .special import gaussian_q

__all__ = [
    "LinearApproxParams",
    "shannon_capacity",
    "channel_dispersion",
    "psi_exact",
    "linear_params",
    "psi_linear",
    "sinr_cu_sic",
    "sinr_ceu",
    "combine_cu_bler",
]

_LOG2E_SQ = math.log2(math.e) ** 2


def _require_nonnegative(gamma, name="gamma"):
    arr = np.asarray(gamma, dtype=float)
    if np.any(arr < 0) or np.isnan(arr).any():
        raise ValueError(f"{name} must be >= 0")
    return arr


def shannon_capacity(gamma):
    """Shannon capacity log2(1 + gamma) in bits per channel use."""
    arr = _require_nonnegative(gamma)
    out = np.log2(1.0 + arr)
    return float(out) if np.ndim(gamma) == 0 else out


def channel_dispersion(gamma):
    """Channel dispersion V(gamma) = (log2 e)^2 (1 - (1 + gamma)^-2).

    Zero at gamma = 0, increasing, with supremum (log2 e)^2.
    """
    arr = _require_nonnegative(gamma)
    out = _LOG2E_SQ * (1.0 - (1.0 + arr) ** -2)
    return float(out) if np.ndim(gamma) == 0 else out


def psi_exact(gamma, k: int, L: int):
    """Normal-approximation BLER for k bits in L channel uses at SNR gamma.

    Defined as 1 at gamma = 0 (the Q argument tends to -inf there) and
    strictly decreasing in gamma.  Accepts scalars or arrays.
    """
    if k < 1 or L < 1:
        raise ValueError("k and L must be positive integers")
    arr = _require_nonnegative(gamma)
    pos = arr > 0
    safe = np.where(pos, arr, 1.0)
    # V underflows to 0 for tiny positive gamma; the -inf argument then
    # lands on Q(-inf) = 1, which is the correct limit
    with np.errstate(divide="ignore"):
        arg = (np.log2(1.0 + safe) - k / L) / np.sqrt(
            _LOG2E_SQ * (1.0 - (1.0 + safe) ** -2) / L)
    out = np.where(pos, gaussian_q(arg), 1.0)
    return float(out) if np.ndim(gamma) == 0 else out


@dataclass(frozen=True)
class LinearApproxParams:
    """Constants of the piecewise-linear BLER surrogate for (k, L).

    beta = 2^(k/L) - 1 is the capacity threshold, delta the slope scale,
    and (v, u) the saturation breakpoints with u - v = 1 / (delta sqrt(L)).
    """

    beta: float
    delta: float
    v: float
    u: float
    k: int
    L: int


def linear_params(k: int, L: int) -> LinearApproxParams:
    """Linearisation constants for k bits in L channel uses."""
    if k < 1 or L < 1:
        raise ValueError("k and L must be positive integers")
    beta = 2.0 ** (k / L) - 1.0
    delta = (2.0 * math.pi * (2.0 ** (2.0 * k / L) - 1.0)) ** -0.5
    half = 0.5 / (delta * math.sqrt(L))
    return LinearApproxParams(beta=beta, delta=delta,
                              v=beta - half, u=beta + half, k=k, L=L)


def psi_linear(gamma, params: LinearApproxParams):
    """Piecewise-linear BLER: 1 below v, 0 above u, linear through (beta, 1/2)."""
    arr = _require_nonnegative(gamma)
    out = np.clip(0.5 - params.delta * math.sqrt(params.L) * (arr - params.beta),
                  0.0, 1.0)
    return float(out) if np.ndim(gamma) == 0 else out


def sinr_cu_sic(x, cfg: SystemConfig):
    """Central-user SINRs from channel power gain x = |g_FAS|^2.

    Returns (gamma_ce, gamma_cc): the SIC stage decoding the edge user's
    symbol under interference, then the interference-free own-symbol SNR.
    gamma_ce is capped below alpha_e / alpha_c for any finite x.
    """
    arr = _require_nonnegative(x, "channel power gain")
    s = cfg.rho * cfg.d_c ** -cfg.a * arr
    gamma_ce = cfg.alpha_e * s / (cfg.alpha_c * s + 1.0)
    gamma_cc = cfg.alpha_c * s
    if np.ndim(x) == 0:
        return float(gamma_ce), float(gamma_cc)
    return gamma_ce, gamma_cc


def sinr_ceu(x, cfg: SystemConfig):
    """Cell-edge-user SINR, decoding its symbol with the CU symbol as interference."""
    arr = _require_nonnegative(x, "channel power gain")
    s = cfg.rho * cfg.d_e ** -cfg.a * arr
    out = cfg.alpha_e * s / (cfg.alpha_c * s + 1.0)
    return float(out) if np.ndim(x) == 0 else out


def combine_cu_bler(eps_ce, eps_cc):
    """Overall CU block error rate eps_ce + (1 - eps_ce) * eps_cc."""
    a = np.asarray(eps_ce, dtype=float)
    b = np.asarray(eps_cc, dtype=float)
    if np.any((a < 0) | (a > 1)) or np.any((b < 0) | (b > 1)):
        raise ValueError("BLER inputs must lie in [0, 1]")
    out = a + (1.0 - a) * b
    return float(out) if np.ndim(eps_ce) == 0 and np.ndim(eps_cc) == 0 else out
