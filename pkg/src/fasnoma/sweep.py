"""Scenario sweeps over SNR or power allocation with CSV emission.

One row per (grid point, user, metric-method); rows are buffered and sorted
so the output is byte-identical across runs and worker counts.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .bler import asymptotic_blers, theoretical_blers
from .cdf_series import ConvergenceError
from .channel import IllConditionedError, SystemConfig, make_correlation_model
from .montecarlo import McConfig, simulate_blers

__all__ = ["SweepSpec", "SweepRow", "run_sweep", "write_csv", "CSV_HEADER"]

_METHODS = ("theory", "asymptotic", "mc")
_USERS = ("cu_cc", "cu_ce", "cu_bound", "ceu", "siso_cu", "siso_ceu")
_FAS_USERS = {"cu_cc", "cu_ce", "cu_bound", "ceu"}
_SISO_USERS = {"siso_cu", "siso_ceu"}

CSV_HEADER = ("scenario_id", "variable", "value", "user", "method",
              "bler", "stderr", "samples")


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep, over which grid, for which users and methods."""

    variable: str = "rho_db"
    start: float = 0.0
    stop: float = 60.0
    step: float = 5.0
    methods: tuple[str, ...] = ("theory", "asymptotic", "mc")
    users: tuple[str, ...] = ("cu_cc", "cu_ce", "cu_bound", "ceu")
    u_p: int = 10

    def __post_init__(self):
        if self.variable not in ("rho_db", "alpha_c"):
            raise ValueError(f"variable must be rho_db or alpha_c, got {self.variable!r}")
        if self.start > self.stop:
            raise ValueError(f"start {self.start} exceeds stop {self.stop}")
        if not self.step > 0:
            raise ValueError(f"step must be > 0, got {self.step}")
        if not self.methods or any(m not in _METHODS for m in self.methods):
            raise ValueError(f"methods must be a nonempty subset of {_METHODS}")
        if not self.users or any(u not in _USERS for u in self.users):
            raise ValueError(f"users must be a nonempty subset of {_USERS}")
        if self.u_p < 1:
            raise ValueError(f"u_p must be >= 1, got {self.u_p}")

    def grid(self) -> list[float]:
        """Ascending grid start, start+step, ..., through stop (inclusive)."""
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [self.start + i * self.step for i in range(count)]


@dataclass(frozen=True)
class SweepRow:
    """One CSV record; stderr and samples are populated for mc rows only."""

    scenario_id: str
    variable: str
    value: float
    user: str
    method: str
    bler: float | None   # None marks an analytic-engine failure
    stderr: float | None
    samples: int | None

    def as_csv(self) -> tuple:
        return (self.scenario_id, self.variable, f"{self.value:.9g}",
                self.user, self.method,
                "error" if self.bler is None else f"{self.bler:.9g}",
                "" if self.stderr is None else f"{self.stderr:.9g}",
                "" if self.samples is None else str(self.samples))


def _point_config(cfg: SystemConfig, spec: SweepSpec, value: float) -> SystemConfig:
    if spec.variable == "rho_db":
        return cfg.replace(rho_db=value)
    return cfg.replace(alpha_c=value, alpha_e=1.0 - value)


_BREAKDOWN_FIELD = {"cu_cc": "eps_cc", "cu_ce": "eps_ce",
                    "cu_bound": "eps_c_bound", "ceu": "eps_e",
                    "siso_cu": "eps_c_bound", "siso_ceu": "eps_e"}
_MC_FIELD = {"cu_cc": "eps_cc", "cu_ce": "eps_ce", "cu_bound": "eps_c",
             "ceu": "eps_e", "siso_cu": "eps_c", "siso_ceu": "eps_e"}


def _rows_for_point(cfg: SystemConfig, mc_cfg: McConfig, spec: SweepSpec,
                    scenario_id: str, value: float) -> list[SweepRow]:
    cfg_pt = _point_config(cfg, spec, value)
    fas_users = [u for u in spec.users if u in _FAS_USERS]
    siso_users = [u for u in spec.users if u in _SISO_USERS]
    rows: list[SweepRow] = []

    for users, N, W in ((fas_users, cfg.N, cfg.W), (siso_users, 1, cfg.W)):
        if not users:
            continue
        model = make_correlation_model(N, W, cfg.sigma2)
        analytic: dict[str, object] = {}
        for method in spec.methods:
            if method == "mc":
                sim = simulate_blers(cfg_pt, model, model, mc_cfg)
                for user in users:
                    est = getattr(sim, _MC_FIELD[user])
                    rows.append(SweepRow(scenario_id, spec.variable, value, user,
                                         "mc", est.mean, est.stderr, est.n))
                continue
            try:
                breakdown = (theoretical_blers(cfg_pt, model, spec.u_p)
                             if method == "theory" else
                             asymptotic_blers(cfg_pt, model))
            except (ConvergenceError, IllConditionedError):
                breakdown = None
            for user in users:
                bler = (None if breakdown is None
                        else getattr(breakdown, _BREAKDOWN_FIELD[user]))
                rows.append(SweepRow(scenario_id, spec.variable, value, user,
                                     method, bler, None, None))
    return rows


def run_sweep(cfg: SystemConfig, mc_cfg: McConfig, spec: SweepSpec,
              scenario_id: str = "scenario", workers: int = 1
              ) -> tuple[list[SweepRow], bool]:
    """All sweep rows, sorted by (value, user, method), plus a success flag.

    Grid points may be evaluated concurrently; the Monte Carlo substream
    layout makes every row independent of scheduling.  Analytic failures
    become per-row error markers rather than aborting the sweep.
    """
    grid = spec.grid()
    if workers > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(
                lambda v: _rows_for_point(cfg, mc_cfg, spec, scenario_id, v), grid))
    else:
        chunks = [_rows_for_point(cfg, mc_cfg, spec, scenario_id, v) for v in grid]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r.value, r.user, r.method))
    ok = all(row.bler is not None for row in rows)
    return rows, ok


def write_csv(rows, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.as_csv())
