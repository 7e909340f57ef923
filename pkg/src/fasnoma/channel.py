"""Spatially correlated fluid-antenna channel model.

Builds the Jakes-type port correlation matrix sigma^2 * J0(2 pi (m-n) W / (N-1)),
eigendecomposes it, exposes determinant/cofactor data for the analytic path,
and draws correlated complex port gains for the Monte Carlo path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator

import numpy as np

from .special import bessel_j0

__all__ = [
    "SystemConfig",
    "CorrelationModel",
    "PortGainSample",
    "IllConditionedError",
    "build_correlation_matrix",
    "eigendecompose",
    "determinant_and_cofactor",
    "make_correlation_model",
    "sample_port_gains",
    "draw_gain_matrix",
    "chunk_rng",
    "select_best_port",
]


class IllConditionedError(ValueError):
    """Correlation matrix determinant too small for the analytic path."""


@dataclass(frozen=True)
class SystemConfig:
    """Scenario parameters of the two-user downlink.

    Power split satisfies alpha_c + alpha_e = 1; rho is carried in dB and
    converted once via the `rho` property.
    """

    N: int = 2             # number of antenna ports
    W: float = 0.5         # aperture length in wavelengths
    sigma2: float = 1.0    # large-scale fading power per port
    L: int = 100           # blocklength (channel uses)
    Nc: int = 300          # information bits to the central user
    Ne: int = 100          # information bits to the cell-edge user
    alpha_c: float = 0.1   # power fraction, central user
    alpha_e: float = 0.9   # power fraction, cell-edge user
    rho_db: float = 30.0   # transmit SNR in dB
    d_c: float = 5.0       # BS -> central user distance (m)
    d_e: float = 10.0      # BS -> cell-edge user distance (m)
    a: float = 3.9         # path-loss exponent

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if not self.W > 0:
            raise ValueError(f"W must be > 0, got {self.W}")
        if not self.sigma2 > 0:
            raise ValueError(f"sigma2 must be > 0, got {self.sigma2}")
        if self.L < 1 or self.Nc < 1 or self.Ne < 1:
            raise ValueError("L, Nc, Ne must be positive integers")
        if not (0.0 < self.alpha_c < 1.0 and 0.0 < self.alpha_e < 1.0):
            raise ValueError("alpha_c and alpha_e must lie in (0, 1)")
        if abs(self.alpha_c + self.alpha_e - 1.0) > 1e-12:
            raise ValueError(
                f"alpha_c + alpha_e must equal 1, got {self.alpha_c + self.alpha_e}")
        if not (self.d_c > 0 and self.d_e > 0):
            raise ValueError("distances must be positive")
        if not self.a > 0:
            raise ValueError(f"path-loss exponent must be > 0, got {self.a}")

    @property
    def rho(self) -> float:
        """Transmit SNR as a linear power ratio."""
        return 10.0 ** (self.rho_db / 10.0)

    def replace(self, **kwargs) -> "SystemConfig":
        return replace(self, **kwargs)


@dataclass(frozen=True, eq=False)
class CorrelationModel:
    """Immutable correlation data: J = U diag(lam) U^T, D = det J, K = cofactor."""

    J: np.ndarray = field(repr=False)
    U: np.ndarray = field(repr=False)
    lam: np.ndarray = field(repr=False)  # eigenvalues, descending
    D: float
    K: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return self.J.shape[0]

    @property
    def sigma2(self) -> float:
        return float(self.J[0, 0])


@dataclass(frozen=True, eq=False)
class PortGainSample:
    """One draw of the N complex port gains plus the selected port."""

    gains: np.ndarray
    best_port: int       # 1-based, lowest index on ties
    best_magnitude: float


def build_correlation_matrix(N: int, W: float, sigma2: float) -> np.ndarray:
    """Port correlation matrix; entry (m, n) is sigma2 * J0(2 pi (m-n) W / (N-1)).

    The single-port model degenerates to the 1x1 matrix [sigma2].
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not W > 0:
        raise ValueError(f"W must be > 0, got {W}")
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be > 0, got {sigma2}")
    if N == 1:
        return np.array([[float(sigma2)]])
    J = np.empty((N, N))
    # J0 depends on |m-n| only: fill by offset to keep exact symmetry.
    for off in range(N):
        val = sigma2 * bessel_j0(2.0 * math.pi * off * W / (N - 1))
        for m in range(N - off):
            J[m, m + off] = val
            J[m + off, m] = val
    return J


def _check_symmetric(J: np.ndarray) -> np.ndarray:
    J = np.asarray(J, dtype=float)
    if J.ndim != 2 or J.shape[0] != J.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {J.shape}")
    scale = max(1.0, float(np.max(np.abs(J))))
    if np.max(np.abs(J - J.T)) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric within 1e-12")
    return J


def eigendecompose(J: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvectors and descending eigenvalues of a symmetric matrix.

    Raises numpy.linalg.LinAlgError if the decomposition fails to converge.
    """
    J = _check_symmetric(J)
    lam, U = np.linalg.eigh(J)
    order = np.argsort(lam)[::-1]
    return U[:, order], lam[order]


def determinant_and_cofactor(J: np.ndarray) -> tuple[float, np.ndarray]:
    """Determinant D and cofactor matrix K of a symmetric J, with J K^T = D I.

    For symmetric J the cofactor matrix equals the adjugate, computed as
    D * inv(J) and guarded against near-singular input.
    """
    J = _check_symmetric(J)
    N = J.shape[0]
    sigma2 = float(J[0, 0])
    D = float(np.linalg.det(J))
    if abs(D) < 1e-12 * sigma2 ** N:
        raise IllConditionedError(
            f"det(J) = {D:.3e} is below 1e-12 * sigma2^N; analytic path unusable")
    if N == 1:
        return D, np.array([[1.0]])
    K = D * np.linalg.inv(J)
    return D, 0.5 * (K + K.T)  # symmetrise away inversion noise


def make_correlation_model(N: int, W: float, sigma2: float = 1.0) -> CorrelationModel:
    """Build, decompose, and package the correlation model for N ports."""
    J = build_correlation_matrix(N, W, sigma2)
    U, lam = eigendecompose(J)
    if lam[-1] < -1e-9 * sigma2:
        raise ValueError(
            f"correlation matrix has negative eigenvalue {lam[-1]:.3e}; "
            "the spatial model breaks down for this (N, W)")
    D, K = determinant_and_cofactor(J)
    for arr in (J, U, lam, K):
        arr.setflags(write=False)
    return CorrelationModel(J=J, U=U, lam=lam, D=D, K=K)


def chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    """Independent substream for one chunk, reproducible across worker counts."""
    if seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed}")
    return np.random.default_rng(np.random.SeedSequence((int(seed), int(chunk_index))))


def draw_gain_matrix(model: CorrelationModel, rng: np.random.Generator,
                     count: int) -> np.ndarray:
    """Draw `count` correlated gain vectors, shape (count, N) complex.

    omega has i.i.d. CN(0, 1) entries (variance 1/2 per real component);
    gains are U diag(sqrt(lam)) omega.  Slightly negative eigenvalues from
    numerical noise are clamped to zero before the square root.
    """
    lam = np.clip(model.lam, 0.0, None)
    re = rng.standard_normal((count, model.N))
    im = rng.standard_normal((count, model.N))
    omega = (re + 1j * im) * math.sqrt(0.5)
    return omega @ (model.U * np.sqrt(lam)).T


def select_best_port(gains) -> tuple[int, float]:
    """Port (1-based) with the largest |gain| and that magnitude.

    Ties break toward the lowest index.
    """
    mags = np.abs(np.asarray(gains))
    if mags.size == 0:
        raise ValueError("select_best_port requires a nonempty gain list")
    idx = int(np.argmax(mags))
    return idx + 1, float(mags[idx])


def sample_port_gains(model: CorrelationModel, seed: int,
                      count: int) -> Iterator[PortGainSample]:
    """Yield `count` PortGainSample draws, deterministic for a fixed seed."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = chunk_rng(seed, 0)
    gains = draw_gain_matrix(model, rng, count)
    for row in gains:
        port, mag = select_best_port(row)
        yield PortGainSample(gains=row, best_port=port, best_magnitude=mag)
