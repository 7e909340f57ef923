"""Analytic joint CDF of the correlated port magnitudes and the SINR CDFs.

The joint CDF of (|g_1|, ..., |g_N|) is evaluated by expanding the cross
terms of the complex-Gaussian density in powers of the off-diagonal
cofactors and integrating angles and radii per term:

    F(r_1..r_N) = sum over s* >= 0 of
        g(s*) / (pi^N D) * prod_t (-2 K_mn / D)^{s*_t} / s*_t!
        * prod_n (1/2) (K_nn / D)^{-(sbar_n + 1)/2}
          [Gamma((1+sbar_n)/2) - Gamma((1+sbar_n)/2, K_nn r_n^2 / D)]

with D = det(J), K the cofactor matrix, T = N(N-1)/2 pair terms, and
g(s*) the angular integral of prod_t cos^{s*_t}(theta_n - theta_m).  The
series is evaluated on the unit-diagonal normalisation of J (exact by the
scaling F_J(r) = F_{J/s2}(r/s), s2 = J_nn), order by order in |s*| with
log-magnitude/sign accumulation and compensated summation.

Where the expansion is numerically unusable (large radii under strong
correlation, where pre-decay terms grow beyond ~1e8), the evaluator falls
back to the tail bound 1 - sum_n exp(-r_n^2/s2), whose error is bounded by
the pairwise exceedance sum and is negligible at those radii.
"""

from __future__ import annotations

import math
import threading
from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .channel import CorrelationModel, IllConditionedError, SystemConfig
from .special import log_reg_lower_gamma

__all__ = [
    "MultiIndex",
    "TermTables",
    "ConvergenceError",
    "pair_index_map",
    "pair_from_index",
    "index_from_pair",
    "g_of_sstar",
    "term_tables",
    "joint_cdf_gains",
    "cdf_gamma_cc",
    "cdf_gamma_sic",
]

DEFAULT_CAP = 200      # hard cap on the outer summation order s0
ORDER_TOL = 1e-8       # absolute partial-sum change considered converged
_TAIL_EPS = 1e-7       # skip the series when 1 - F is provably below this
_TERM_ABORT = 1e8      # abort the series when term magnitudes pass this
_EXCURSION = 1e-6      # allowed pre-clamp overshoot outside [0, 1]


class ConvergenceError(RuntimeError):
    """Series did not settle; carries the last two partial sums."""

    def __init__(self, message: str, partial_sums: tuple[float, float]):
        super().__init__(f"{message} (last partial sums: {partial_sums[0]!r}, "
                         f"{partial_sums[1]!r})")
        self.partial_sums = partial_sums


# ---------------------------------------------------------------------------
# pair indexing t <-> (m, n), 1-based ports, m < n
# ---------------------------------------------------------------------------

def pair_index_map(N: int) -> list[tuple[int, int]]:
    """Ordered port pairs; position t-1 holds the pair (m, n) of term t.

    N < 2 yields the empty map (no cross terms).
    """
    return [(m, n) for m in range(1, N + 1) for n in range(m + 1, N + 1)]


def index_from_pair(m: int, n: int, N: int) -> int:
    """Term index t = n + (m-1) N - m (m+1) / 2 for ports m < n."""
    if not (1 <= m < n <= N):
        raise ValueError(f"need 1 <= m < n <= N, got m={m}, n={n}, N={N}")
    return n + (m - 1) * N - m * (m + 1) // 2


def pair_from_index(t: int, N: int) -> tuple[int, int]:
    """Inverse of index_from_pair: the (m, n) pair of term t.

    m is the smallest m' with sum_{i<=m'} (N - i) >= t (the strict '>'
    variant undercounts by one at each block boundary).
    """
    T = N * (N - 1) // 2
    if not (1 <= t <= T):
        raise ValueError(f"need 1 <= t <= {T}, got {t}")
    m, acc = 0, 0
    while acc < t:
        m += 1
        acc += N - m
    n = t - (m - 1) * N + m * (m + 1) // 2
    return m, n


# ---------------------------------------------------------------------------
# multi-index bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MultiIndex:
    """Nested summation index s_1 >= ... >= s_T >= 0 and its differences s*."""

    s: tuple[int, ...]
    s_star: tuple[int, ...]

    @classmethod
    def from_s(cls, s) -> "MultiIndex":
        s = tuple(int(v) for v in s)
        if any(a < b for a, b in zip(s, s[1:])) or (s and s[-1] < 0):
            raise ValueError(f"s must be nonincreasing and nonnegative, got {s}")
        star = tuple(a - b for a, b in zip(s, s[1:] + (0,)))
        return cls(s=s, s_star=star)

    @classmethod
    def from_s_star(cls, s_star) -> "MultiIndex":
        star = tuple(int(v) for v in s_star)
        if any(v < 0 for v in star):
            raise ValueError(f"s* entries must be nonnegative, got {star}")
        s = tuple(sum(star[i:]) for i in range(len(star)))
        return cls(s=s, s_star=star)

    @property
    def order(self) -> int:
        return self.s[0] if self.s else 0


def _sbar(s_star, N: int) -> np.ndarray:
    """Per-port radial exponents: cross-term degree touching the port, plus 1."""
    sbar = np.ones(N, dtype=np.int64)
    for (m, n), st in zip(pair_index_map(N), s_star):
        sbar[m - 1] += st
        sbar[n - 1] += st
    return sbar


@dataclass(frozen=True, eq=False)
class TermTables:
    """Per-term combinatorial data: pair map, port exponents, angular factor."""

    pair_map: list[tuple[int, int]]
    sbar: np.ndarray
    g_value: float


def term_tables(s_star, N: int) -> TermTables:
    return TermTables(pair_map=pair_index_map(N), sbar=_sbar(s_star, N),
                      g_value=g_of_sstar(s_star, N))


# ---------------------------------------------------------------------------
# the angular integral g(s*)
# ---------------------------------------------------------------------------

def g_of_sstar(s_star, N: int) -> float:
    """Angular integral over [0, 2pi)^N of prod_t cos^{s*_t}(theta_n - theta_m).

    Equals (1/2)^sum(s*) * sum over v in the box prod binom(s*_t, v_t)
    * (2 pi)^N restricted to net-zero phase exponents at every port.
    Evaluated by eliminating pairs one at a time over the lattice of phase
    exponents (with unreachable states pruned), which is exact and avoids
    enumerating the full v box.
    """
    s_star = tuple(int(v) for v in s_star)
    pairs = pair_index_map(N)
    if len(s_star) != len(pairs):
        raise ValueError(
            f"expected {len(pairs)} cross terms for N={N}, got {len(s_star)}")
    if any(v < 0 for v in s_star):
        raise ValueError(f"s* entries must be nonnegative, got {s_star}")
    # remaining per-port exponent budget, for pruning states that cannot
    # return to zero
    budget = [np.zeros(N, dtype=np.int64)]
    for (m, n), st in zip(reversed(pairs), reversed(s_star)):
        nxt = budget[-1].copy()
        nxt[m - 1] += st
        nxt[n - 1] += st
        budget.append(nxt)
    budget.reverse()

    state: dict[tuple[int, ...], float] = {(0,) * N: 1.0}
    for t, ((m, n), st) in enumerate(zip(pairs, s_star)):
        if st == 0:
            continue
        rem = budget[t + 1]
        new: dict[tuple[int, ...], float] = defaultdict(float)
        for expo, weight in state.items():
            for v in range(st + 1):
                gam = 2 * v - st
                e = list(expo)
                e[m - 1] -= gam
                e[n - 1] += gam
                if abs(e[m - 1]) > rem[m - 1] or abs(e[n - 1]) > rem[n - 1]:
                    continue
                new[tuple(e)] += weight * math.comb(st, v)
        state = new
        if not state:
            return 0.0
    zero_weight = state.get((0,) * N, 0.0)
    return 0.5 ** sum(s_star) * zero_weight * (2.0 * math.pi) ** N


# ---------------------------------------------------------------------------
# order tables: all s* of a given total order with nonzero g, shared per N
# ---------------------------------------------------------------------------

_COMB_LOCK = threading.Lock()
_COMB = np.array([[1.0]])


def _comb_matrix(smax: int) -> np.ndarray:
    """Pascal triangle as float64, C[s, v] = binom(s, v); rows grown on demand."""
    global _COMB
    with _COMB_LOCK:
        if _COMB.shape[0] <= smax:
            C = np.zeros((smax + 1, smax + 1))
            old = _COMB.shape[0]
            C[:old, :old] = _COMB
            for s in range(old, smax + 1):
                C[s, 0] = 1.0
                C[s, 1:s + 1] = C[s - 1, 1:s + 1] + C[s - 1, 0:s]
            _COMB = C
        return _COMB


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _order_entries(N: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """(s* array, g values) over all |s*| = q with g > 0, for one port count."""
    T = N * (N - 1) // 2
    if N == 1:
        if q == 0:
            return np.zeros((1, 0), dtype=np.int64), np.array([2.0 * math.pi])
        return np.zeros((0, 0), dtype=np.int64), np.empty(0)
    if N == 2:
        # single pair; the angular integral vanishes at odd powers
        if q % 2 == 1:
            return np.zeros((0, 1), dtype=np.int64), np.empty(0)
        C = _comb_matrix(q)
        g = 0.5 ** q * C[q, q // 2] * (2.0 * math.pi) ** 2
        return np.array([[q]], dtype=np.int64), np.array([g])
    if N == 3:
        return _order_entries_n3(q)
    comps, gs = [], []
    for comp in _compositions(q, T):
        g = g_of_sstar(comp, N)
        if g > 0.0:
            comps.append(comp)
            gs.append(g)
    return (np.array(comps, dtype=np.int64).reshape(len(gs), T), np.array(gs))


def _order_entries_n3(q: int) -> tuple[np.ndarray, np.ndarray]:
    """N = 3 closed form: the zero-phase constraint leaves one free integer.

    With pairs ((1,2), (1,3), (2,3)) the phase exponents must satisfy
    gamma_12 = -gamma_13 = gamma_23 = gamma, so
    g = (1/2)^q (2 pi)^3 sum_gamma binom(s1, (gamma+s1)/2)
        binom(s2, (s2-gamma)/2) binom(s3, (gamma+s3)/2),
    nonzero only when s1, s2, s3 share one parity.
    """
    comps = np.array([(s1, s2, q - s1 - s2)
                      for s1 in range(q + 1) for s2 in range(q - s1 + 1)],
                     dtype=np.int64).reshape(-1, 3)
    par = comps % 2
    comps = comps[(par[:, 0] == par[:, 1]) & (par[:, 1] == par[:, 2])]
    if len(comps) == 0:
        return np.zeros((0, 3), dtype=np.int64), np.empty(0)
    C = _comb_matrix(q)
    mmin = comps.min(axis=1)
    gam = np.arange(-q, q + 1, dtype=np.int64)[None, :]
    valid = (np.abs(gam) <= mmin[:, None]) & ((gam - comps[:, 0:1]) % 2 == 0)
    s1, s2, s3 = comps[:, 0:1], comps[:, 1:2], comps[:, 2:3]
    with np.errstate(invalid="ignore"):
        prod = (C[s1, np.clip((gam + s1) // 2, 0, s1)]
                * C[s2, np.clip((s2 - gam) // 2, 0, s2)]
                * C[s3, np.clip((gam + s3) // 2, 0, s3)])
    gsum = np.where(valid, prod, 0.0).sum(axis=1)
    g = 0.5 ** float(q) * gsum * (2.0 * math.pi) ** 3
    keep = g > 0.0
    return comps[keep], g[keep]


_G_TABLES: dict[int, list] = {}
_G_LOCK = threading.Lock()


def _g_table(N: int, order: int):
    with _G_LOCK:
        tables = _G_TABLES.setdefault(N, [])
        while len(tables) <= order:
            tables.append(_order_entries(N, len(tables)))
        return tables[order]


# ---------------------------------------------------------------------------
# the per-model series engine
# ---------------------------------------------------------------------------

class _SeriesEngine:
    """Precomputed per-model coefficient tables for the joint-CDF series.

    Works on the unit-diagonal normalisation of J.  Immutable inputs; the
    lazily grown order tables are guarded by a lock so concurrent
    evaluations at different radii stay safe.
    """

    def __init__(self, model: CorrelationModel, cap: int):
        J = np.asarray(model.J, dtype=float)
        diag = np.diag(J)
        if np.max(np.abs(diag - diag[0])) > 1e-12 * abs(diag[0]):
            raise ValueError("joint-CDF series requires equal per-port powers")
        self.N = model.N
        self.sigma2 = float(diag[0])
        Jt = J / self.sigma2
        self.D = float(np.linalg.det(Jt))
        if abs(self.D) < 1e-12:
            raise IllConditionedError(
                f"normalised determinant {self.D:.3e} too small for the series")
        K = self.D * np.linalg.inv(Jt)
        self.K = 0.5 * (K + K.T)
        self.cap = cap
        self.pairs = pair_index_map(self.N)
        self._coef: list = []
        self._lock = threading.Lock()

    def _order_coef(self, q: int):
        """(log|coef|, sign, sbar) arrays for all order-q terms."""
        with self._lock:
            while len(self._coef) <= q:
                qq = len(self._coef)
                comps, gs = _g_table(self.N, qq)
                n = len(gs)
                if n == 0:
                    self._coef.append((np.empty(0), np.empty(0),
                                       np.empty((0, self.N), dtype=np.int64)))
                    continue
                sbar = np.ones((n, self.N), dtype=np.int64)
                logc = (np.log(gs) - self.N * math.log(math.pi)
                        - math.log(self.D) + self.N * math.log(0.5))
                sign = np.ones(n)
                with np.errstate(divide="ignore"):
                    for t, (m, nn) in enumerate(self.pairs):
                        st = comps[:, t]
                        sbar[:, m - 1] += st
                        sbar[:, nn - 1] += st
                        kmn = self.K[m - 1, nn - 1]
                        if kmn == 0.0:
                            logc = np.where(st > 0, -np.inf, logc)
                            continue
                        logc = (logc + st * math.log(2.0 * abs(kmn) / self.D)
                                - gammaln(st + 1.0))
                        if -kmn < 0.0:
                            sign = np.where(st % 2 == 1, -sign, sign)
                for nn in range(self.N):
                    logc = logc - (sbar[:, nn] + 1) / 2.0 * math.log(
                        self.K[nn, nn] / self.D)
                self._coef.append((logc, sign, sbar))
            return self._coef[q]

    def _log_gamma_factor_row(self, x: float, smax: int) -> np.ndarray:
        """log[Gamma(a) P(a, x)] for a = (1 + sbar)/2, sbar = 1..smax."""
        avals = (1.0 + np.arange(1, smax + 1)) / 2.0
        out = np.empty(smax)
        for i, a in enumerate(avals):
            out[i] = gammaln(a) + log_reg_lower_gamma(a, x)
        return out

    def evaluate(self, radii, s0: int | None):
        """Raw series value and diagnostics for the given per-port radii.

        Returns (value, converged_order, status) with status one of
        "series", "tail", or "cap".
        """
        rt2 = (np.asarray(radii, dtype=float) ** 2) / self.sigma2
        tail_bound = float(np.sum(np.exp(-rt2)))
        adaptive = s0 is None
        if adaptive and tail_bound < _TAIL_EPS:
            return 1.0 - tail_bound, 0, "tail"
        cap = self.cap if adaptive else min(s0, self.cap)
        x = np.diag(self.K) * rt2 / self.D

        total = 0.0
        comp = 0.0  # Neumaier compensation
        below = 0
        prev_total = 0.0
        lgf = [np.empty(0)] * self.N  # per-port log gamma-factor tables
        for q in range(cap + 1):
            logc, sign, sbar = self._order_coef(q)
            smax = 2 * q + 1
            for n in range(self.N):
                if len(lgf[n]) < smax:
                    lgf[n] = np.concatenate(
                        [lgf[n], self._log_gamma_factor_row(x[n], smax)[len(lgf[n]):]])
            if len(logc) == 0:
                order_sum, max_term = 0.0, 0.0
            else:
                lm = logc.copy()
                for n in range(self.N):
                    lm += lgf[n][sbar[:, n] - 1]
                vals = sign * np.exp(lm)
                order_sum = float(np.sum(vals))
                max_term = float(np.max(np.abs(vals)))
            if adaptive and max_term > _TERM_ABORT:
                # pre-decay growth regime: the expansion is numerically
                # unusable here; the radii are necessarily large, so the
                # tail bound is the better estimate
                return 1.0 - tail_bound, q, "tail"
            prev_total = total
            y = order_sum + comp
            t = total + y
            comp = (total - t) + y if abs(total) >= abs(y) else (y - t) + total
            total = t
            if abs(order_sum) < ORDER_TOL:
                below += 1
                if below >= 2 and q >= 2:
                    return total, q, "series"
            else:
                below = 0
        if adaptive:
            raise ConvergenceError(
                f"series did not converge within s0 = {cap}",
                (prev_total, total))
        return total, cap, "series"


_ENGINES: dict[tuple, _SeriesEngine] = {}
_ENGINE_LOCK = threading.Lock()


def _engine_for(model: CorrelationModel, cap: int) -> _SeriesEngine:
    key = (model.N, cap, np.asarray(model.J).tobytes())
    with _ENGINE_LOCK:
        eng = _ENGINES.get(key)
        if eng is None:
            eng = _SeriesEngine(model, cap)
            _ENGINES[key] = eng
        return eng


def joint_cdf_gains(model: CorrelationModel, radii, s0: int | None = None,
                    cap: int = DEFAULT_CAP) -> float:
    """P(|g_1| < r_1, ..., |g_N| < r_N) for the correlated port gains.

    Adaptive truncation by default: orders are added until the partial sum
    change stays below 1e-8 (two consecutive orders), with a hard cap.
    Passing an explicit s0 sums exactly through that order instead.  Raises
    ConvergenceError when the adaptive evaluation cannot settle and
    IllConditionedError for near-singular models.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.shape != (model.N,):
        raise ValueError(f"expected {model.N} radii, got shape {radii.shape}")
    if np.any(radii < 0) or np.isnan(radii).any():
        raise ValueError("radii must be nonnegative")
    if np.all(radii == 0.0):
        return 0.0
    eng = _engine_for(model, cap)
    value, order, status = eng.evaluate(radii, s0)
    if status == "series" and s0 is None and not (
            -_EXCURSION <= value <= 1.0 + _EXCURSION):
        raise ConvergenceError(
            f"series value {value!r} strays beyond [0, 1] by more than "
            f"{_EXCURSION}", (value, value))
    return min(max(value, 0.0), 1.0)


def cdf_gamma_cc(tau: float, cfg: SystemConfig, model: CorrelationModel,
                 s0: int | None = None) -> float:
    """CDF of the CU own-symbol SNR gamma_cc at threshold tau.

    Equal-radii slice of the joint CDF at r = sqrt(d_c^a tau / (alpha_c rho)).
    """
    if tau < 0 or math.isnan(tau):
        raise ValueError(f"tau must be >= 0, got {tau}")
    if tau == 0.0:
        return 0.0
    r = math.sqrt(cfg.d_c ** cfg.a * tau / (cfg.alpha_c * cfg.rho))
    return joint_cdf_gains(model, np.full(model.N, r), s0=s0)


def cdf_gamma_sic(tau: float, cfg: SystemConfig, model: CorrelationModel,
                  distance: float, s0: int | None = None) -> float:
    """CDF of an interference-limited SINR (gamma_ce at d_c, gamma_e at d_e).

    The SINR cannot exceed alpha_e / alpha_c, so the CDF is exactly 1 from
    that ceiling on; below it the equal radius is
    sqrt(d^a tau / ((alpha_e - alpha_c tau) rho)).
    """
    if tau < 0 or math.isnan(tau):
        raise ValueError(f"tau must be >= 0, got {tau}")
    if tau == 0.0:
        return 0.0
    if tau >= cfg.alpha_e / cfg.alpha_c:
        return 1.0
    r = math.sqrt(distance ** cfg.a * tau / ((cfg.alpha_e - cfg.alpha_c * tau) * cfg.rho))
    return joint_cdf_gains(model, np.full(model.N, r), s0=s0)
