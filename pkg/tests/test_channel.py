import dataclasses
import math

import numpy as np
import pytest

from remcr.channel import (
    LinkGain,
    calibrate,
    calibrate_cr_power,
    calibrate_pu_power,
    gudmundson_correlation,
    received_power,
    sample_shadow,
    sample_shadows,
)
from remcr.geometry import sample_annulus_points
from remcr.scenario import ScenarioConfig

LN10_OVER_10 = math.log(10.0) / 10.0


class TestReceivedPower:
    def test_identity_point(self):
        assert received_power(1.0, 0.0, 1.0, 3.5) == 1.0

    def test_hand_example(self):
        assert math.isclose(received_power(2.0, math.log(2.0), 2.0, 2.0), 1.0, rel_tol=1e-14)

    def test_vector_distance(self):
        got = received_power(1.0, 0.0, np.array([1.0, 2.0]), 2.0)
        assert np.allclose(got, [1.0, 0.25])

    def test_link_gain_self_evaluates(self):
        g = LinkGain(power_const=3.0, shadow_log=0.5, distance_m=7.0, pathloss_exp=3.5)
        assert math.isclose(g.power(), 3.0 * math.exp(0.5) * 7.0**-3.5, rel_tol=1e-14)


class TestShadowing:
    def test_db_scale_std(self):
        stream = np.random.default_rng(11)
        x = sample_shadows(stream, 100_000, 8.0)
        std_db = np.std(10.0 * np.log10(np.exp(x)))
        assert abs(std_db - 8.0) < 0.1

    def test_zero_mean(self):
        stream = np.random.default_rng(12)
        x = sample_shadows(stream, 1_000_000, 8.0)
        sigma_x = LN10_OVER_10 * 8.0
        assert abs(np.mean(x)) < 0.01 * sigma_x

    def test_natural_log_std(self):
        stream = np.random.default_rng(13)
        x = sample_shadows(stream, 200_000, 8.0)
        expected = LN10_OVER_10 * 8.0  # 1.8421
        assert math.isclose(expected, 1.8421, rel_tol=1e-4)
        assert abs(np.std(x) - expected) < 0.01 * expected

    def test_lognormal_mean(self):
        stream = np.random.default_rng(14)
        x = sample_shadows(stream, 1_000_000, 8.0)
        sigma_x = LN10_OVER_10 * 8.0
        expected = math.exp(sigma_x**2 / 2.0)  # 5.4554
        assert math.isclose(expected, 5.455, rel_tol=1e-4)
        assert abs(np.mean(np.exp(x)) - expected) < 0.02 * expected

    def test_scalar_form(self):
        stream = np.random.default_rng(15)
        assert isinstance(sample_shadow(stream, 8.0), float)


class TestGudmundson:
    def test_no_displacement(self):
        assert gudmundson_correlation(0.0, 0.0, 100.0) == 1.0

    def test_decorrelation_distance_halves(self):
        assert math.isclose(gudmundson_correlation(100.0, 0.0, 100.0), 0.5, rel_tol=1e-14)

    def test_product_of_factors(self):
        assert math.isclose(gudmundson_correlation(100.0, 100.0, 100.0), 0.25, rel_tol=1e-14)

    def test_vector_form(self):
        got = gudmundson_correlation(np.array([0.0, 100.0]), np.array([0.0, 0.0]), 100.0)
        assert np.allclose(got, [1.0, 0.5])


class TestCalibration:
    def test_protected_link_coverage_self_consistency(self, base_cfg, consts):
        stream = np.random.default_rng(16)
        n = 200_000
        pts = sample_annulus_points(stream, n, base_cfg.R0, base_cfg.R)
        r = np.hypot(pts[:, 0], pts[:, 1])
        x = sample_shadows(stream, n, base_cfg.sigma_dB)
        snr = consts.pu * np.exp(x) * r**-base_cfg.gamma_pl / base_cfg.noise_power
        frac = np.mean(snr >= 10.0**0.5)
        assert abs(frac - 0.95) < 0.005

    def test_secondary_link_percentile_self_consistency(self, base_cfg):
        # larger calibration sample: the check compounds calibration noise
        # with re-simulation noise
        a = calibrate_pu_power(base_cfg, n_samples=1_000_000)
        b = calibrate_cr_power(base_cfg, a, n_samples=1_000_000)
        stream = np.random.default_rng(17)
        n = 1_000_000
        pts = sample_annulus_points(stream, n, base_cfg.R0, base_cfg.Rc)
        r = np.hypot(pts[:, 0], pts[:, 1])
        x = sample_shadows(stream, n, base_cfg.sigma_dB)
        snr_db = 10.0 * np.log10(b * np.exp(x) * r**-base_cfg.gamma_pl / base_cfg.noise_power)
        assert abs(np.percentile(snr_db, 5.0) - 5.0) < 0.1

    def test_thin_annulus_deterministic_limit(self):
        cfg = ScenarioConfig(R0=999.0, Rc=999.5, R=1000.0, sigma_dB=1e-9)
        a = calibrate_pu_power(cfg)
        expected = 10.0**0.5 * cfg.noise_power * 1000.0**3.5
        assert math.isclose(a, expected, rel_tol=0.01)

    def test_scales_with_noise_power(self, base_cfg):
        doubled = dataclasses.replace(base_cfg, noise_power=2.0)
        a1 = calibrate_pu_power(base_cfg, n_samples=50_000)
        a2 = calibrate_pu_power(doubled, n_samples=50_000)
        assert math.isclose(a2, 2.0 * a1, rel_tol=1e-12)

    def test_power_ratio_deterministic_limit(self):
        cfg = ScenarioConfig(sigma_dB=1e-9)
        a = calibrate_pu_power(cfg)
        b = calibrate_cr_power(cfg, a)
        # 95th-percentile radii by area of each annulus fix the quantiles
        r95_pu = math.sqrt(0.95 * (cfg.R**2 - cfg.R0**2) + cfg.R0**2)
        r95_cr = math.sqrt(0.95 * (cfg.Rc**2 - cfg.R0**2) + cfg.R0**2)
        expected = (r95_pu / r95_cr) ** -cfg.gamma_pl
        assert math.isclose(b / a, expected, rel_tol=0.005)
        assert math.isclose(b / a, 10.0**-3.5, rel_tol=0.015)

    def test_zero_pu_power_gives_zero(self, base_cfg):
        assert calibrate_cr_power(base_cfg, 0.0) == 0.0

    def test_reproducible(self, base_cfg, consts):
        again = calibrate(base_cfg)
        assert again == consts
