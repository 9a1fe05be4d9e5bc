import math

import numpy as np

from remcr.channel import LinkGain, sample_shadows
from remcr.geometry import Point
from remcr.rem import estimate_link, estimate_links

SIGMA_X = math.log(10.0) / 10.0 * 8.0


def _link(shadow, r):
    return LinkGain(power_const=1.0, shadow_log=shadow, distance_m=r, pathloss_exp=3.5)


class TestEstimateLink:
    def test_perfect_map_reproduces_truth(self):
        stream = np.random.default_rng(20)
        g = _link(0.7, 321.0)
        est = estimate_link(
            stream, g,
            true_pos=Point(300.0, 100.0), snapped_pos=Point(300.0, 100.0),
            receiver_true=Point(0.0, 0.0), receiver_snapped=Point(0.0, 0.0),
            decorr_m=100.0, sigma_db=8.0, min_distance_m=10.0,
        )
        assert est.rho == 1.0
        assert not est.clamped
        expected_r = math.hypot(300.0, 100.0)
        assert math.isclose(est.grid_distance_m, expected_r, rel_tol=1e-14)
        assert math.isclose(est.power_est, math.exp(0.7) * expected_r**-3.5, rel_tol=1e-12)

    def test_receiver_cell_collision_clamped(self):
        stream = np.random.default_rng(21)
        g = _link(0.0, 30.0)
        est = estimate_link(
            stream, g,
            true_pos=Point(20.0, 20.0), snapped_pos=Point(25.0, 25.0),
            receiver_true=Point(4.0, 4.0), receiver_snapped=Point(25.0, 25.0),
            decorr_m=100.0, sigma_db=8.0, min_distance_m=10.0,
        )
        assert est.clamped
        assert est.grid_distance_m == 10.0

    def test_decorrelated_estimate_keeps_marginal(self):
        stream = np.random.default_rng(22)
        n = 100_000
        shadows = sample_shadows(np.random.default_rng(23), n, 8.0)
        # displacements huge compared to the decorrelation distance
        est, rho, r_hat, clamped = estimate_links(
            stream, 1.0, 3.5, shadows,
            true_xy=np.tile([5000.0, 0.0], (n, 1)),
            snapped_xy=np.tile([0.0, 0.0], (n, 1)),
            receiver_true=Point(0.0, -500.0),
            receiver_snapped=Point(0.0, -500.0),
            decorr_m=100.0, sigma_db=8.0, min_distance_m=10.0,
        )
        assert np.allclose(rho, 0.5**50)
        shadow_est = np.log(est) + 3.5 * np.log(r_hat)
        assert abs(np.corrcoef(shadows, shadow_est)[0, 1]) < 0.01
        assert abs(np.std(shadow_est) - SIGMA_X) < 0.01 * SIGMA_X

    def test_correlation_matches_displacement_product(self):
        # both endpoints displaced by one decorrelation distance
        stream = np.random.default_rng(24)
        n = 100_000
        shadows = sample_shadows(np.random.default_rng(25), n, 8.0)
        est, rho, r_hat, clamped = estimate_links(
            stream, 1.0, 3.5, shadows,
            true_xy=np.tile([400.0, 0.0], (n, 1)),
            snapped_xy=np.tile([300.0, 0.0], (n, 1)),
            receiver_true=Point(0.0, 100.0),
            receiver_snapped=Point(0.0, 0.0),
            decorr_m=100.0, sigma_db=8.0, min_distance_m=10.0,
        )
        assert np.allclose(rho, 0.25)
        shadow_est = np.log(est) + 3.5 * np.log(r_hat)
        corr = np.corrcoef(shadows, shadow_est)[0, 1]
        assert abs(corr - 0.25) < 0.01

    def test_vector_matches_scalar(self):
        shadows = sample_shadows(np.random.default_rng(26), 5, 8.0)
        true_xy = np.array([[200.0, 50.0], [150.0, -80.0], [90.0, 90.0], [400.0, 10.0], [60.0, -60.0]])
        snapped_xy = np.array([[225.0, 75.0], [125.0, -75.0], [75.0, 75.0], [375.0, 25.0], [75.0, -75.0]])
        rx_true, rx_snap = Point(0.0, 0.0), Point(25.0, 25.0)
        vec = estimate_links(
            np.random.default_rng(27), 1.0, 3.5, shadows, true_xy, snapped_xy,
            rx_true, rx_snap, 100.0, 8.0, 10.0,
        )
        stream = np.random.default_rng(27)
        for i in range(5):
            one = estimate_link(
                stream, _link(shadows[i], math.nan),
                true_pos=Point(*true_xy[i]), snapped_pos=Point(*snapped_xy[i]),
                receiver_true=rx_true, receiver_snapped=rx_snap,
                decorr_m=100.0, sigma_db=8.0, min_distance_m=10.0,
            )
            assert math.isclose(one.power_est, vec[0][i], rel_tol=1e-12)
            assert math.isclose(one.rho, vec[1][i], rel_tol=1e-12)
