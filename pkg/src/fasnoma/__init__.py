"""Average BLER analysis of a fluid-antenna-assisted NOMA short-packet link.

The library computes the averaged block error rates of a two-user downlink
where both receivers pick the strongest of N spatially correlated antenna
ports, three ways: an analytic series for the SINR CDFs integrated by
Gauss-Chebyshev quadrature, closed-form high-SNR asymptotics, and a seeded
Monte Carlo simulator used to cross-check the other two.
"""

from .bler import (BlerBreakdown, asymptotic_blers, avg_bler_cc, avg_bler_ce,
                   avg_bler_cu_bound, avg_bler_e, diversity_slope,
                   theoretical_blers)
from .blocklength import (LinearApproxParams, channel_dispersion,
                          combine_cu_bler, linear_params, psi_exact,
                          psi_linear, shannon_capacity, sinr_ceu, sinr_cu_sic)
from .cdf_series import (ConvergenceError, MultiIndex, TermTables,
                         cdf_gamma_cc, cdf_gamma_sic, g_of_sstar,
                         joint_cdf_gains, pair_index_map)
from .channel import (CorrelationModel, IllConditionedError, PortGainSample,
                      SystemConfig, build_correlation_matrix,
                      determinant_and_cofactor, eigendecompose,
                      make_correlation_model, sample_port_gains,
                      select_best_port)
from .config import PRESETS, ConfigError, load_config
from .montecarlo import (BlerEstimate, McConfig, SimulatedBlers,
                         empirical_cdf, simulate_blers)
from .special import (QuadratureNodes, bessel_j0, chebyshev_nodes, gamma_fn,
                      gaussian_q, upper_incomplete_gamma)
from .sweep import SweepRow, SweepSpec, run_sweep, write_csv

__version__ = "0.1.0"

__all__ = [
    "BlerBreakdown", "BlerEstimate", "ConfigError", "ConvergenceError",
    "CorrelationModel", "IllConditionedError", "LinearApproxParams",
    "McConfig", "MultiIndex", "PRESETS", "PortGainSample", "QuadratureNodes",
    "SimulatedBlers", "SweepRow", "SweepSpec", "SystemConfig", "TermTables",
    "asymptotic_blers", "avg_bler_cc", "avg_bler_ce", "avg_bler_cu_bound",
    "avg_bler_e", "bessel_j0", "build_correlation_matrix", "cdf_gamma_cc",
    "cdf_gamma_sic", "channel_dispersion", "chebyshev_nodes",
    "combine_cu_bler", "determinant_and_cofactor", "diversity_slope",
    "eigendecompose", "empirical_cdf", "g_of_sstar", "gamma_fn", "gaussian_q",
    "joint_cdf_gains", "linear_params", "load_config",
    "make_correlation_model", "pair_index_map", "psi_exact", "psi_linear",
    "run_sweep", "sample_port_gains", "select_best_port", "shannon_capacity",
    "simulate_blers", "sinr_ceu", "sinr_cu_sic", "theoretical_blers",
    "upper_incomplete_gamma", "write_csv",
]
