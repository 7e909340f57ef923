"""Finite-blocklength kernel and SINR algebra tests."""

import math

import numpy as np
import pytest

from fasnoma.blocklength import (channel_dispersion, combine_cu_bler,
                                 linear_params, psi_exact, psi_linear,
                                 shannon_capacity, sinr_ceu, sinr_cu_sic)
from fasnoma.channel import SystemConfig

LOG2E_SQ = math.log2(math.e) ** 2


class TestCapacityAndDispersion:
    def test_capacity_values(self):
        assert shannon_capacity(0.0) == 0.0
        assert shannon_capacity(1.0) == 1.0
        assert shannon_capacity(3.0) == 2.0

    def test_dispersion_values(self):
        assert channel_dispersion(0.0) == 0.0
        assert channel_dispersion(3.0) == pytest.approx(
            LOG2E_SQ * (1 - 1 / 16), rel=1e-12)
        assert channel_dispersion(3.0) == pytest.approx(1.951283, abs=1e-5)
        assert channel_dispersion(1e12) == pytest.approx(2.081368, abs=1e-6)

    def test_dispersion_increasing(self):
        g = np.linspace(0, 50, 200)
        assert np.all(np.diff(channel_dispersion(g)) > 0)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            shannon_capacity(-0.1)
        with pytest.raises(ValueError):
            channel_dispersion(-0.1)


class TestPsiExact:
    def test_at_threshold_is_half(self):
        for k, L in ((100, 100), (300, 100), (64, 128)):
            beta = 2 ** (k / L) - 1
            assert psi_exact(beta, k, L) == pytest.approx(0.5, abs=1e-12)

    def test_at_zero_is_one(self):
        assert psi_exact(0.0, 100, 100) == 1.0

    def test_high_snr_value(self):
        # Q oracle applied to (2 - 1)/sqrt(1.951283/100) = Q(7.158793...)
        got = psi_exact(3.0, 100, 100)
        assert got == pytest.approx(4.0695e-13, rel=0.1)
        assert 4.1e-13 / 1.1 < got < 4.1e-13 * 1.1

    def test_monotone_decreasing(self):
        g = np.linspace(0.0, 40.0, 1000)
        eps = psi_exact(g, 300, 100)
        assert np.all(np.diff(eps) <= 0)

    def test_array_matches_scalar(self):
        g = np.array([0.0, 0.5, 7.0])
        out = psi_exact(g, 300, 100)
        assert out == pytest.approx([psi_exact(float(v), 300, 100) for v in g])


class TestLinearParams:
    def test_one_bit_per_use(self):
        p = linear_params(100, 100)
        assert p.beta == 1.0
        assert p.delta == pytest.approx((6 * math.pi) ** -0.5, rel=1e-12)
        assert p.delta == pytest.approx(0.230329, abs=1e-6)
        assert p.v == pytest.approx(0.782920, abs=1e-6)
        assert p.u == pytest.approx(1.217080, abs=1e-6)

    def test_three_bits_per_use(self):
        p = linear_params(300, 100)
        assert p.beta == 7.0
        assert p.delta == pytest.approx((126 * math.pi) ** -0.5, rel=1e-12)
        assert p.delta == pytest.approx(0.050262, abs=1e-6)
        assert p.v == pytest.approx(6.005213, abs=1e-6)
        assert p.u == pytest.approx(7.994787, abs=1e-6)

    @pytest.mark.parametrize("k,L", [(100, 100), (300, 100), (17, 250)])
    def test_breakpoint_width(self, k, L):
        p = linear_params(k, L)
        assert p.u - p.v == pytest.approx(1.0 / (p.delta * math.sqrt(L)), rel=1e-12)
        assert p.v < p.beta < p.u


class TestPsiLinear:
    def test_anchor_points(self):
        p = linear_params(300, 100)
        assert psi_linear(p.v, p) == pytest.approx(1.0, abs=1e-12)
        assert psi_linear(p.beta, p) == pytest.approx(0.5, abs=1e-12)
        assert psi_linear(p.u, p) == pytest.approx(0.0, abs=1e-12)

    def test_saturation(self):
        p = linear_params(100, 100)
        assert psi_linear(p.v / 2, p) == 1.0
        assert psi_linear(p.u * 2, p) == 0.0

    def test_matches_exact_at_beta(self):
        p = linear_params(300, 100)
        assert psi_linear(p.beta, p) == pytest.approx(
            psi_exact(p.beta, 300, 100), abs=1e-12)


class TestSinr:
    CFG = SystemConfig(N=2, W=0.5, alpha_c=0.1, alpha_e=0.9, rho_db=40.0)

    def test_zero_gain(self):
        assert sinr_cu_sic(0.0, self.CFG) == (0.0, 0.0)
        assert sinr_ceu(0.0, self.CFG) == 0.0

    def test_sic_ceiling(self):
        ceiling = self.CFG.alpha_e / self.CFG.alpha_c
        gamma_ce, _ = sinr_cu_sic(1e12, self.CFG)
        assert gamma_ce < ceiling
        assert gamma_ce == pytest.approx(ceiling, rel=1e-3)
        xs = np.linspace(0, 100, 50)
        assert np.all(sinr_cu_sic(xs, self.CFG)[0] < ceiling)

    def test_cc_value(self):
        # 0.1 * 1e4 * 5^-3.9 with 5^3.9 = exp(3.9 ln 5) = 532.0874515754903
        _, gamma_cc = sinr_cu_sic(1.0, self.CFG)
        assert gamma_cc == pytest.approx(1000.0 / 532.0874515754903, rel=1e-12)
        assert gamma_cc == pytest.approx(1.879390, abs=1e-6)

    def test_ceu_monotone(self):
        xs = np.linspace(0.0, 50.0, 200)
        vals = sinr_ceu(xs, self.CFG)
        assert np.all(np.diff(vals) > 0)


class TestCombine:
    def test_identities(self):
        assert combine_cu_bler(0.0, 0.3) == 0.3
        assert combine_cu_bler(1.0, 0.2) == 1.0
        assert combine_cu_bler(0.2, 0.5) == pytest.approx(0.6)

    def test_dominates_components(self):
        rng = np.random.default_rng(0)
        a = rng.random(500)
        b = rng.random(500)
        c = combine_cu_bler(a, b)
        assert np.all(c >= np.maximum(a, b) - 1e-15)
        assert np.all(c <= 1.0)

    def test_domain(self):
        with pytest.raises(ValueError):
            combine_cu_bler(1.2, 0.1)
        with pytest.raises(ValueError):
            combine_cu_bler(0.1, -0.2)
