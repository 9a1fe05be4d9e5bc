"""Analytic level-crossing rates and exceedance durations for the aggregate.

With N admitted transmitters the instantaneous aggregate interference is
sum_i w_i * |h_i(t)|**2 with unit-power fading per path.  Two moment-matched
approximations make the crossing statistics tractable:

* Rayleigh fading: the aggregate is approximated by a gamma process whose
  shape/rate reproduce the exact mean and variance.  Its crossing rate at
  level T is
      (1 / (2*Gamma(shape))) * sqrt(2*|acf_curv| / pi)
      * (rate*T)**(shape - 1/2) * exp(-rate*T),
  where acf_curv is the curvature of the aggregate autocorrelation at lag 0.

* Rician fading: the aggregate is approximated by a scaled noncentral
  chi-square process with real (possibly fractional) degrees of freedom,
  matched to the first three moments.  Its crossing rate at level T is
      pdf(T) * sqrt(4*pi * f_D**2 * T / scale).

Both formulas are evaluated in log space; moment fits that admit no valid
noncentral chi-square parameters raise FitFailureError, mirroring a real
limitation of the three-moment method for some weight profiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from remcr import specfun

__all__ = [
    "GammaFit",
    "NcChiSqFit",
    "LcrCurve",
    "FitFailureError",
    "ZeroNoncentralityError",
    "fit_gamma",
    "fit_ncx2",
    "rician_component_moments",
    "acf_curvature_at_zero",
    "aggregate_acf",
    "lcr_rayleigh",
    "lcr_rician",
    "exceedance_duration",
    "default_threshold_grid",
    "rayleigh_curve",
    "rician_curve",
]


class FitFailureError(ValueError):
    """The three-moment noncentral chi-square fit has no admissible solution
    for this weight profile."""


class ZeroNoncentralityError(ValueError):
    """The fitted process is central; the gamma-process crossing rate applies
    instead of the Rician formula."""


@dataclass(frozen=True)
class GammaFit:
    """Gamma approximation of the aggregate: mean shape/rate, variance
    shape/rate**2."""

    shape: float
    rate: float


@dataclass(frozen=True)
class NcChiSqFit:
    """Scaled noncentral chi-square approximation of the aggregate.

    The variate is (chi-square with `dof` d.o.f., noncentrality lam) / scale:
    mean (dof + noncentrality)/scale, variance 2*(dof + 2*noncentrality)/scale**2.
    """

    dof: float
    noncentrality: float
    scale: float


@dataclass(frozen=True)
class LcrCurve:
    """Crossing rate and exceedance duration over a threshold grid.

    thresholds are linear interference levels; lcr entries are crossing rates
    per second (divide by the Doppler frequency for the normalized form);
    aed entries are seconds, NaN where the crossing rate is zero.
    """

    thresholds: np.ndarray
    lcr: np.ndarray
    aed: np.ndarray


def _weights_of(profile) -> np.ndarray:
    w = np.asarray(getattr(profile, "weights", profile), dtype=float)
    if w.ndim != 1 or len(w) == 0:
        raise ValueError("profile must hold at least one weight")
    if np.any(w <= 0.0):
        raise ValueError("weights must be positive")
    return w


def fit_gamma(profile) -> GammaFit:
    """Moment-match a gamma law to the aggregate under Rayleigh fading.

    Mean sum(w) and variance sum(w**2) give shape = sum(w)**2 / sum(w**2)
    and rate = sum(w) / sum(w**2).
    """
    w = _weights_of(profile)
    s1 = float(np.sum(w))
    s2 = float(np.sum(w * w))
    return GammaFit(shape=s1 * s1 / s2, rate=s1 / s2)


def rician_component_moments(k_factor: float) -> tuple[float, float, float]:
    """(mean, variance, third central moment) of one unit-power Rician
    squared envelope with linear K factor.

    k_factor = 0 reduces to the exponential values (1, 1, 2).
    """
    if k_factor < 0.0:
        raise ValueError("k_factor must be non-negative")
    kp1 = 1.0 + k_factor
    var = (1.0 + 2.0 * k_factor) / kp1**2
    third = 2.0 * (1.0 + 3.0 * k_factor) / kp1**3
    return 1.0, var, third


def fit_ncx2(profile, k_factor: float) -> NcChiSqFit:
    """Three-moment fit of a scaled noncentral chi-square to the aggregate
    under Rician fading with the given linear K factor.

    Matching mean m1, variance m2 and third central moment m3 of the
    aggregate eliminates dof and noncentrality and leaves
        (m3/8)*scale**2 - m2*scale + m1 = 0.
    A root must satisfy dof > 0 and noncentrality >= 0 to define a process;
    when no root does (which genuinely happens for moderately dominant
    profiles), FitFailureError is raised.  k_factor = 0 degenerates to the
    central case: the first two moments fix dof = 2*shape, scale = 2*rate of
    the gamma fit and the third moment is no longer free.
    """
    w = _weights_of(profile)
    if k_factor < 0.0:
        raise ValueError("k_factor must be non-negative")
    if k_factor == 0.0:
        g = fit_gamma(w)
        return NcChiSqFit(dof=2.0 * g.shape, noncentrality=0.0, scale=2.0 * g.rate)
    _, c2, c3 = rician_component_moments(k_factor)
    m1 = float(np.sum(w))
    m2 = c2 * float(np.sum(w**2))
    m3 = c3 * float(np.sum(w**3))
    # (m3/8) a^2 - m2 a + m1 = 0
    disc = m2 * m2 - 0.5 * m1 * m3
    if disc < 0.0:
        raise FitFailureError(
            f"no real scale solves the moment equations (discriminant {disc:.3e}) "
            f"for weights {np.array2string(w, precision=6)}"
        )
    root = math.sqrt(disc)
    candidates = []
    for a in ((m2 + root) / (0.25 * m3), (m2 - root) / (0.25 * m3)):
        lam = 0.5 * a * a * m2 - a * m1
        dof = a * m1 - lam
        if a > 0.0 and dof > 0.0 and lam >= 0.0:
            candidates.append(NcChiSqFit(dof=dof, noncentrality=lam, scale=a))
    if not candidates:
        raise FitFailureError(
            f"no admissible (dof, noncentrality) for weights {np.array2string(w, precision=6)}"
        )
    # Both roots reproduce all three moments; prefer the larger scale, which
    # is the exact solution in the single-component case.
    return max(candidates, key=lambda f: f.scale)


def aggregate_acf(profile, doppler_hz, tau):
    """Normalized autocovariance of the aggregate at lags tau.

    Each path contributes the squared zeroth-order Bessel function of
    2*pi*f*tau; weights enter through their squares.  doppler_hz may be a
    scalar (shared Doppler, weights cancel) or one value per path.
    """
    w = _weights_of(profile)
    tau_arr = np.asarray(tau, dtype=float)
    f = np.asarray(doppler_hz, dtype=float)
    if f.ndim == 0:
        out = specfun.bessel_j0(2.0 * math.pi * float(f) * tau_arr) ** 2
        return float(out) if np.isscalar(tau) else out
    if f.shape != w.shape:
        raise ValueError("per-path Doppler array must match the weight count")
    w2 = w * w
    j0sq = specfun.bessel_j0(2.0 * math.pi * np.outer(f, tau_arr)) ** 2
    out = (w2 @ j0sq) / np.sum(w2)
    return float(out[0]) if np.isscalar(tau) else out


def acf_curvature_at_zero(profile, doppler_hz) -> float:
    """Second derivative at lag zero of the aggregate autocovariance,
    -4*pi**2 * sum(w**2 f**2) / sum(w**2); the weights cancel for a shared
    Doppler frequency."""
    w = _weights_of(profile)
    f = np.asarray(doppler_hz, dtype=float)
    if f.ndim == 0:
        return -4.0 * math.pi**2 * float(f) ** 2
    if f.shape != w.shape:
        raise ValueError("per-path Doppler array must match the weight count")
    w2 = w * w
    return float(-4.0 * math.pi**2 * np.sum(w2 * f * f) / np.sum(w2))


def lcr_rayleigh(fit: GammaFit, acf_curv: float, thresholds):
    """Crossing rate of the gamma-process approximation at the thresholds.

    Evaluated in log space; the single-path case collapses to the classical
    sqrt(2*pi)*f_D*sqrt(rate*T)*exp(-rate*T).
    """
    if fit.shape <= 0.0 or fit.rate <= 0.0:
        raise ValueError("gamma fit parameters must be positive")
    if acf_curv >= 0.0:
        raise ValueError("autocovariance curvature at zero must be negative")
    t = np.asarray(thresholds, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("thresholds must be non-negative")
    out = np.zeros_like(t)
    pos = t > 0.0
    x = fit.rate * t[pos]
    loglcr = (
        -math.log(2.0)
        - specfun.ln_gamma(fit.shape)
        + 0.5 * math.log(2.0 * abs(acf_curv) / math.pi)
        + (fit.shape - 0.5) * np.log(x)
        - x
    )
    out[pos] = np.exp(loglcr)
    if np.any(~pos):
        if fit.shape < 0.5:
            limit = math.inf
        elif fit.shape > 0.5:
            limit = 0.0
        else:
            limit = math.sqrt(2.0 * abs(acf_curv) / math.pi) / (2.0 * math.sqrt(math.pi))
        out[~pos] = limit
    return float(out) if np.isscalar(thresholds) else out


def lcr_rician(fit: NcChiSqFit, doppler_hz: float, thresholds):
    """Crossing rate of the scaled noncentral chi-square approximation.

    Equals pdf(T) * sqrt(4*pi * f_D**2 * T / scale), evaluated in log space.
    A central fit (zero noncentrality) is signaled with
    ZeroNoncentralityError; use the gamma path for it.
    """
    if fit.noncentrality == 0.0:
        raise ZeroNoncentralityError(
            "fit is central; use lcr_rayleigh with the matching gamma fit"
        )
    if fit.dof <= 0.0 or fit.scale <= 0.0 or fit.noncentrality < 0.0:
        raise ValueError("invalid noncentral chi-square fit")
    if doppler_hz <= 0.0:
        raise ValueError("doppler_hz must be positive")
    t = np.asarray(thresholds, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("thresholds must be non-negative")
    out = np.zeros_like(t)
    pos = t > 0.0
    x = t[pos]
    order = 0.5 * (fit.dof - 2.0)
    z = np.sqrt(fit.noncentrality * fit.scale * x)
    logi = specfun._log_bessel_i_vec(order, z)
    with np.errstate(over="ignore"):
        loglcr = (
            0.5 * math.log(math.pi)
            + math.log(doppler_hz)
            + 0.25 * fit.dof * np.log(fit.scale * x)
            - 0.5 * order * math.log(fit.noncentrality)
            - 0.5 * (fit.noncentrality + fit.scale * x)
            + logi
        )
        out[pos] = np.exp(loglcr)
    return float(out) if np.isscalar(thresholds) else out


def exceedance_duration(crossing_rate, survival_prob):
    """Mean time above a level: probability of being above divided by the
    rate of upward crossings.  NaN where the crossing rate is zero."""
    rate = np.asarray(crossing_rate, dtype=float)
    sf = np.asarray(survival_prob, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.where(rate > 0.0, sf / rate, math.nan)
    if np.isscalar(crossing_rate) and np.isscalar(survival_prob):
        return float(out)
    return out


def default_threshold_grid(noise_power: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Threshold sweep used by the studies: -15 dB to +8 dB relative to the
    noise power in 0.1 dB steps.  Returns (grid in dB, grid in linear)."""
    db = np.round(np.arange(-150, 81) * 0.1, 10)
    return db, noise_power * 10.0 ** (db / 10.0)


def rayleigh_curve(profile, doppler_hz: float, noise_power: float = 1.0,
                   thresholds=None) -> LcrCurve:
    """Analytic LCR/AED curve for Rayleigh fading over a threshold grid."""
    fit = fit_gamma(profile)
    curv = acf_curvature_at_zero(profile, doppler_hz)
    t = default_threshold_grid(noise_power)[1] if thresholds is None else np.asarray(thresholds, float)
    lcr = lcr_rayleigh(fit, curv, t)
    sf = specfun.gamma_sf(t, fit.shape, fit.rate)
    return LcrCurve(thresholds=t, lcr=lcr, aed=exceedance_duration(lcr, sf))


def rician_curve(profile, k_factor: float, doppler_hz: float, noise_power: float = 1.0,
                 thresholds=None) -> LcrCurve:
    """Analytic LCR/AED curve for Rician fading over a threshold grid."""
    fit = fit_ncx2(profile, k_factor)
    t = default_threshold_grid(noise_power)[1] if thresholds is None else np.asarray(thresholds, float)
    lcr = lcr_rician(fit, doppler_hz, t)
    sf = specfun.ncx2_sf(t, fit.dof, fit.noncentrality, fit.scale)
    return LcrCurve(thresholds=t, lcr=lcr, aed=exceedance_duration(lcr, sf))
