import math

import numpy as np
import pytest

from remcr.allocation import (
    InterferenceProfile,
    allocate,
    degradation_db,
    select_extreme_profiles,
)
from remcr.channel import LinkGain
from remcr.engine import trial_profile
from remcr.rem import RemEstimate
from remcr.scenario import interference_threshold


def _candidate(true_power, est_power):
    # distance 1 and no shadowing make power_const the true power
    gain = LinkGain(power_const=true_power, shadow_log=0.0, distance_m=1.0, pathloss_exp=3.5)
    est = RemEstimate(power_est=est_power, rho=1.0, grid_distance_m=1.0, clamped=False)
    return gain, est


class TestAllocate:
    def test_no_candidates(self):
        prof = allocate([], s_est=1.0, buffer_db=2.0, noise_power=1.0)
        assert len(prof) == 0
        assert degradation_db(prof, 1.0) == 0.0

    def test_single_over_budget_rejected(self):
        budget = interference_threshold(2.0, 1.0)
        prof = allocate([_candidate(0.1, budget * 1.01)], 1.0, 2.0, 1.0)
        assert len(prof) == 0

    def test_greedy_prefix_on_estimates(self):
        # estimates 0.1, 0.2, 0.3, 0.4: budget 0.5849 admits 0.1+0.2 only
        cands = [_candidate(t, e) for t, e in [(9.0, 0.4), (9.0, 0.1), (9.0, 0.3), (9.0, 0.2)]]
        prof = allocate(cands, 1.0, 2.0, 1.0)
        assert np.allclose(prof.est_weights, [0.1, 0.2])
        assert float(np.sum(prof.est_weights)) <= interference_threshold(2.0, 1.0)

    def test_ties_keep_candidate_order(self):
        cands = [_candidate(t, 0.2) for t in (1.0, 2.0, 3.0)]
        prof = allocate(cands, 1.0, 2.0, 1.0)
        # budget fits two of the three equal estimates: first two by index
        assert np.allclose(prof.weights, [1.0, 2.0])

    def test_true_weights_follow_admitted_candidates(self):
        cands = [_candidate(t, e) for t, e in [(5.0, 0.5), (7.0, 0.05)]]
        prof = allocate(cands, 1.0, 2.0, 1.0)
        assert np.allclose(prof.est_weights, [0.05, 0.5])
        assert np.allclose(prof.weights, [7.0, 5.0])

    def test_perfect_map_never_violates_true_budget(self, base_cfg, consts):
        budget = interference_threshold(base_cfg.buffer_dB, base_cfg.noise_power)
        for i in range(2000):
            prof = trial_profile(base_cfg, consts, i)
            assert float(np.sum(prof.weights)) <= budget * (1.0 + 1e-12)


class TestProfile:
    def test_rejects_mismatched_lengths(self):
        with pytest.raises(ValueError):
            InterferenceProfile(weights=np.array([1.0]), est_weights=np.array([1.0, 2.0]))

    def test_rejects_nonpositive_weights(self):
        with pytest.raises(ValueError):
            InterferenceProfile(weights=np.array([0.0]), est_weights=np.array([1.0]))


class TestDegradation:
    def test_empty_profile(self):
        prof = InterferenceProfile(weights=np.empty(0), est_weights=np.empty(0))
        assert degradation_db(prof, 1.0) == 0.0

    def test_budget_boundary_reaches_buffer(self):
        total = interference_threshold(2.0, 1.0)
        prof = InterferenceProfile(weights=np.array([total]), est_weights=np.array([total]))
        assert math.isclose(degradation_db(prof, 1.0), 2.0, rel_tol=1e-12)

    def test_interference_equal_noise_doubles(self):
        prof = InterferenceProfile(weights=np.array([1.0]), est_weights=np.array([1.0]))
        assert math.isclose(degradation_db(prof, 1.0), 10.0 * math.log10(2.0), rel_tol=1e-12)


class TestExtremeProfiles:
    @staticmethod
    def _prof(*weights):
        w = np.asarray(weights, dtype=float)
        return InterferenceProfile(weights=w, est_weights=w)

    def test_hand_ranking(self):
        dom, nod = select_extreme_profiles([self._prof(3.0), self._prof(1.0, 1.0, 1.0)])
        assert np.allclose(dom.weights, [3.0])
        assert np.allclose(nod.weights, [1.0, 1.0, 1.0])

    def test_equal_sums_spread_decides(self):
        a = self._prof(2.0, 0.1)
        b = self._prof(1.05, 1.05)
        dom, nod = select_extreme_profiles([b, a])
        assert np.allclose(dom.weights, [2.0, 0.1])
        assert np.allclose(nod.weights, [1.05, 1.05])

    def test_empty_profiles_ignored(self):
        empty = InterferenceProfile(weights=np.empty(0), est_weights=np.empty(0))
        dom, nod = select_extreme_profiles([empty, self._prof(2.0), self._prof(1.0, 1.0)])
        assert np.allclose(dom.weights, [2.0])

    def test_too_few_raises(self):
        with pytest.raises(ValueError):
            select_extreme_profiles([self._prof(1.0)])

    def test_dominant_has_larger_max_share(self, base_cfg, consts):
        profiles = [trial_profile(base_cfg, consts, i) for i in range(300)]
        dom, nod = select_extreme_profiles(profiles)
        dom_share = np.max(dom.weights) / np.sum(dom.weights)
        nod_share = np.max(nod.weights) / np.sum(nod.weights)
        assert dom_share >= nod_share
