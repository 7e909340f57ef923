"""Correlation model and port-gain sampler tests.

Sampler checks use sample moments with their own standard errors as the
oracle; the N = 1 envelope-power distribution is checked against the
exponential law with a Kolmogorov-Smirnov statistic.
"""

import math

import numpy as np
import pytest

from fasnoma.channel import (IllConditionedError, SystemConfig,
                             build_correlation_matrix, chunk_rng,
                             determinant_and_cofactor, draw_gain_matrix,
                             eigendecompose, make_correlation_model,
                             sample_port_gains, select_best_port)
from fasnoma.special import bessel_j0

J0_PI = bessel_j0(math.pi)  # -0.304242...


class TestSystemConfig:
    def test_defaults_are_valid(self):
        cfg = SystemConfig()
        assert cfg.alpha_c + cfg.alpha_e == 1.0
        assert cfg.rho == pytest.approx(10.0 ** (cfg.rho_db / 10.0))

    def test_alpha_sum_enforced(self):
        with pytest.raises(ValueError):
            SystemConfig(alpha_c=0.6, alpha_e=0.6)

    @pytest.mark.parametrize("kwargs", [
        dict(N=0), dict(W=0.0), dict(sigma2=-1.0), dict(L=0),
        dict(d_c=0.0), dict(a=0.0), dict(alpha_c=0.0, alpha_e=1.0),
    ])
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValueError):
            SystemConfig(**kwargs)


class TestBuildCorrelationMatrix:
    def test_diagonal_is_sigma2(self):
        for N, sigma2 in ((1, 1.0), (3, 2.5), (5, 0.3)):
            J = build_correlation_matrix(N, 0.7, sigma2)
            assert np.allclose(np.diag(J), sigma2)

    def test_two_port_half_wavelength(self):
        J = build_correlation_matrix(2, 0.5, 1.0)
        assert J[0, 1] == pytest.approx(J0_PI, abs=1e-12)
        assert J[0, 1] == pytest.approx(-0.304242, abs=1e-6)

    def test_exact_symmetry(self):
        J = build_correlation_matrix(6, 1.3, 1.7)
        assert np.array_equal(J, J.T)

    def test_single_port(self):
        assert build_correlation_matrix(1, 0.5, 2.0).tolist() == [[2.0]]

    def test_positive_semidefinite_in_practice(self):
        for N in (2, 3, 4, 5, 6):
            for W in (0.3, 0.5, 1.0, 5.0, 10.0):
                lam = np.linalg.eigvalsh(build_correlation_matrix(N, W, 1.0))
                assert lam.min() > -1e-9

    def test_invalid_args(self):
        with pytest.raises(ValueError):
            build_correlation_matrix(0, 0.5, 1.0)
        with pytest.raises(ValueError):
            build_correlation_matrix(2, -1.0, 1.0)


class TestEigendecompose:
    def test_scalar_case(self):
        U, lam = eigendecompose(np.array([[1.0]]))
        assert lam == pytest.approx([1.0])
        assert abs(U[0, 0]) == pytest.approx(1.0)

    def test_two_port_closed_form(self):
        # lam = sigma2 * (1 +- rho_offdiag), sorted descending
        J = build_correlation_matrix(2, 0.5, 1.0)
        _, lam = eigendecompose(J)
        assert lam[0] == pytest.approx(1.0 - J0_PI, rel=1e-12)  # 1.304242
        assert lam[1] == pytest.approx(1.0 + J0_PI, rel=1e-12)  # 0.695758

    def test_descending_and_trace(self):
        J = build_correlation_matrix(5, 0.8, 1.9)
        U, lam = eigendecompose(J)
        assert np.all(np.diff(lam) <= 0)
        assert lam.sum() == pytest.approx(5 * 1.9, abs=1e-10)
        assert np.max(np.abs((U * lam) @ U.T - J)) < 1e-10 * 1.9

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            eigendecompose(np.array([[1.0, 0.5], [0.2, 1.0]]))


class TestDeterminantAndCofactor:
    def test_single_port(self):
        D, K = determinant_and_cofactor(np.array([[2.0]]))
        assert D == pytest.approx(2.0)
        assert K.tolist() == [[1.0]]

    def test_identity(self):
        D, K = determinant_and_cofactor(np.eye(4))
        assert D == pytest.approx(1.0)
        assert K == pytest.approx(np.eye(4))

    def test_two_port_closed_form(self):
        J = build_correlation_matrix(2, 0.5, 1.0)
        D, K = determinant_and_cofactor(J)
        assert D == pytest.approx(1.0 - J0_PI ** 2, rel=1e-12)  # 0.907437
        assert K[0, 0] == pytest.approx(1.0, rel=1e-12)
        assert K[0, 1] == pytest.approx(-J0_PI, rel=1e-12)  # +0.304242

    def test_cofactor_identity(self):
        for N, W in ((3, 0.5), (4, 1.2), (6, 5.0)):
            J = build_correlation_matrix(N, W, 1.4)
            D, K = determinant_and_cofactor(J)
            assert np.max(np.abs(J @ K.T - D * np.eye(N))) < 1e-8 * max(abs(D), 1.0)

    def test_determinant_scaling(self):
        # D(c J) = c^N D(J)
        J = build_correlation_matrix(3, 0.7, 1.0)
        D1, _ = determinant_and_cofactor(J)
        D2, _ = determinant_and_cofactor(2.0 * J)
        assert D2 == pytest.approx(2.0 ** 3 * D1, rel=1e-9)

    def test_ill_conditioned(self):
        J = np.array([[1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(IllConditionedError):
            determinant_and_cofactor(J)


class TestSampler:
    def test_moments_match_correlation(self):
        # E[g g^H] = J entrywise, within 3 standard errors of the sample
        model = make_correlation_model(3, 0.5, 1.0)
        g = draw_gain_matrix(model, chunk_rng(421, 0), 10 ** 6)
        n = g.shape[0]
        prod = g[:, :, None] * g[:, None, :].conj()
        est = prod.mean(axis=0).real
        se = prod.real.std(axis=0, ddof=1) / math.sqrt(n)
        assert np.all(np.abs(est - model.J) <= 3.0 * se)

    def test_per_port_variance(self):
        model = make_correlation_model(2, 5.0, 1.7)
        g = draw_gain_matrix(model, chunk_rng(77, 0), 10 ** 6)
        power = np.abs(g) ** 2
        est = power.mean(axis=0)
        se = power.std(axis=0, ddof=1) / math.sqrt(power.shape[0])
        assert np.all(np.abs(est - 1.7) <= 3.0 * se)

    def test_single_port_power_is_exponential(self):
        # KS statistic against 1 - exp(-x / sigma2); 1% critical value 1.63/sqrt(n)
        sigma2 = 1.0
        model = make_correlation_model(1, 0.5, sigma2)
        n = 10 ** 6
        g = draw_gain_matrix(model, chunk_rng(5, 0), n)
        x = np.sort(np.abs(g[:, 0]) ** 2)
        cdf = 1.0 - np.exp(-x / sigma2)
        i = np.arange(1, n + 1)
        ks = max(np.max(np.abs(i / n - cdf)), np.max(np.abs(cdf - (i - 1) / n)))
        assert ks < 1.63 / math.sqrt(n)

    def test_deterministic_stream(self):
        model = make_correlation_model(2, 0.5, 1.0)
        a = [s.best_magnitude for s in sample_port_gains(model, 99, 50)]
        b = [s.best_magnitude for s in sample_port_gains(model, 99, 50)]
        assert a == b
        c = [s.best_magnitude for s in sample_port_gains(model, 100, 50)]
        assert a != c

    def test_sample_fields_consistent(self):
        model = make_correlation_model(3, 1.0, 1.0)
        for s in sample_port_gains(model, 3, 20):
            assert 1 <= s.best_port <= 3
            assert s.best_magnitude == pytest.approx(np.abs(s.gains).max())

    def test_negative_seed_rejected(self):
        with pytest.raises(ValueError):
            chunk_rng(-1, 0)


class TestSelectBestPort:
    def test_singleton(self):
        assert select_best_port([1 + 0j]) == (1, 1.0)

    def test_magnitude(self):
        port, mag = select_best_port([3 + 4j, 1 + 0j])
        assert (port, mag) == (1, 5.0)

    def test_tie_breaks_low(self):
        assert select_best_port([1.0, 1.0]) == (1, 1.0)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            select_best_port([])
