"""Per-trial admission pipeline shared by every study and Monte Carlo oracle.

One trial: place transmitters, draw true shadowing, derive the map estimates,
admit greedily against the estimated budget, and report true and estimated
quantities.  Everything is vectorized over the candidate set; streams are
derived per (trial, purpose) so trials are order-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from remcr.allocation import InterferenceProfile, _admit_prefix
from remcr.channel import PowerConstants, calibrate, gudmundson_correlation, sample_shadows
from remcr.geometry import Placement, sample_placement
from remcr.rem import estimate_links
from remcr.scenario import ScenarioConfig, derive_stream, interference_threshold

__all__ = [
    "TrialCandidates",
    "draw_candidates",
    "trial_profile",
    "degradation_samples",
    "critical_budgets",
]

_PLACE_TAG = "place"
_SHADOW_TAG = "shadow"
_REM_TAG = "rem"


@dataclass(frozen=True)
class TrialCandidates:
    """All candidate links of one trial, sorted by estimated interference.

    est_sorted / true_sorted are aligned; cumulative sums over the sorted
    estimates drive admission for any budget, which lets budget sweeps reuse
    one trial draw.
    """

    est_sorted: np.ndarray
    true_sorted: np.ndarray
    s_true: float
    s_est: float
    n_active: int
    clamped: int


def draw_candidates(
    cfg: ScenarioConfig, consts: PowerConstants, trial_index: int
) -> TrialCandidates:
    """Draw one trial's geometry, shadowing, and map estimates."""
    place_stream = derive_stream(cfg.master_seed, trial_index, _PLACE_TAG)
    shadow_stream = derive_stream(cfg.master_seed, trial_index, _SHADOW_TAG)
    rem_stream = derive_stream(cfg.master_seed, trial_index, _REM_TAG)

    placement: Placement = sample_placement(place_stream, cfg)
    n = len(placement.crs)

    shadows = sample_shadows(shadow_stream, n, cfg.sigma_dB) if n else np.empty(0)
    shadow_pu = sample_shadows(shadow_stream, 1, cfg.sigma_dB)[0]

    r_true = np.hypot(placement.crs[:, 0], placement.crs[:, 1]) if n else np.empty(0)
    true_powers = consts.cr * np.exp(shadows) * r_true ** (-cfg.gamma_pl) if n else np.empty(0)

    est_powers, _, _, clamped = estimate_links(
        rem_stream,
        consts.cr,
        cfg.gamma_pl,
        shadows,
        placement.crs,
        placement.crs_snapped,
        placement.pu_rx,
        placement.pu_rx_snapped,
        cfg.D_d,
        cfg.sigma_dB,
        cfg.R0,
    )

    # Protected link, estimated through the same mechanism (transmitter and
    # receiver cell displacements both decorrelate the map value).
    r_pu = math.hypot(*placement.pu_tx)
    s_true = consts.pu * math.exp(shadow_pu) * r_pu ** (-cfg.gamma_pl)
    d_tx = math.hypot(
        placement.pu_tx[0] - placement.pu_tx_snapped[0],
        placement.pu_tx[1] - placement.pu_tx_snapped[1],
    )
    d_rx = math.hypot(*placement.pu_rx_snapped)
    rho_pu = float(gudmundson_correlation(d_tx, d_rx, cfg.D_d))
    fresh_pu = sample_shadows(rem_stream, 1, cfg.sigma_dB)[0]
    shadow_pu_est = rho_pu * shadow_pu + math.sqrt(1.0 - rho_pu * rho_pu) * fresh_pu
    r_pu_hat = math.hypot(
        placement.pu_tx_snapped[0] - placement.pu_rx_snapped[0],
        placement.pu_tx_snapped[1] - placement.pu_rx_snapped[1],
    )
    if r_pu_hat == 0.0:
        r_pu_hat = cfg.R0
    s_est = consts.pu * math.exp(shadow_pu_est) * r_pu_hat ** (-cfg.gamma_pl)

    order = np.argsort(est_powers, kind="stable")
    return TrialCandidates(
        est_sorted=est_powers[order],
        true_sorted=true_powers[order],
        s_true=s_true,
        s_est=s_est,
        n_active=n,
        clamped=clamped,
    )


def trial_profile(
    cfg: ScenarioConfig,
    consts: PowerConstants,
    trial_index: int,
    buffer_db: float | None = None,
) -> InterferenceProfile:
    """Admitted profile of one trial for the given (or configured) buffer."""
    cands = draw_candidates(cfg, consts, trial_index)
    budget = interference_threshold(
        cfg.buffer_dB if buffer_db is None else buffer_db, cfg.noise_power
    )
    k = _admit_prefix(cands.est_sorted, budget)
    return InterferenceProfile(
        weights=cands.true_sorted[:k],
        est_weights=cands.est_sorted[:k],
        s_true=cands.s_true,
        s_est=cands.s_est,
    )


def degradation_samples(
    cfg: ScenarioConfig,
    n_trials: int,
    consts: PowerConstants | None = None,
    buffer_db: float | None = None,
) -> np.ndarray:
    """Realized degradation (dB) over independent trials."""
    if consts is None:
        consts = calibrate(cfg)
    budget = interference_threshold(
        cfg.buffer_dB if buffer_db is None else buffer_db, cfg.noise_power
    )
    out = np.empty(n_trials)
    for i in range(n_trials):
        cands = draw_candidates(cfg, consts, i)
        k = _admit_prefix(cands.est_sorted, budget)
        total = float(np.sum(cands.true_sorted[:k]))
        out[i] = 10.0 * math.log10((total + cfg.noise_power) / cfg.noise_power)
    return out


def critical_budgets(
    cfg: ScenarioConfig, n_trials: int, consts: PowerConstants | None = None
) -> np.ndarray:
    """Smallest estimated budget at which each trial's realized interference
    exceeds the true threshold for the configured buffer.

    For budgets below a trial's critical value the degradation stays within
    buffer_dB; at or above it, it exceeds.  Backoff searches reduce to a
    quantile of these values because greedy admission is a prefix rule:
    shrinking the budget can only drop the last-admitted candidates.
    Trials that never exceed map to +inf.
    """
    if consts is None:
        consts = calibrate(cfg)
    true_cap = interference_threshold(cfg.buffer_dB, cfg.noise_power)
    out = np.empty(n_trials)
    for i in range(n_trials):
        cands = draw_candidates(cfg, consts, i)
        cum_est = np.cumsum(cands.est_sorted)
        cum_true = np.cumsum(cands.true_sorted)
        bad = np.nonzero(cum_true > true_cap)[0]
        out[i] = cum_est[bad[0]] if len(bad) else math.inf
    return out
