"""Transmitter placement in the annulus, grid snapping, and distances."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from remcr.scenario import ScenarioConfig

__all__ = [
    "Point",
    "Placement",
    "distance",
    "snap_to_grid",
    "sample_annulus_point",
    "sample_cr_count",
    "cr_population",
    "sample_placement",
]


class Point(NamedTuple):
    x: float
    y: float


def distance(a: Point, b: Point) -> float:
    """Euclidean distance between two points."""
    return math.hypot(a[0] - b[0], a[1] - b[1])


def snap_to_grid(p: Point, delta: float) -> Point:
    """Map a point to the center of its grid cell of side delta.

    Cells are anchored at the origin, i.e. cell (i, j) covers
    [i*delta, (i+1)*delta) x [j*delta, (j+1)*delta) and is represented by its
    center.  delta = 0 disables snapping and returns the point unchanged.
    The positional error is at most delta/sqrt(2).
    """
    if delta < 0.0:
        raise ValueError("grid size must be non-negative")
    if delta == 0.0:
        return Point(float(p[0]), float(p[1]))
    return Point(
        (math.floor(p[0] / delta) + 0.5) * delta,
        (math.floor(p[1] / delta) + 0.5) * delta,
    )


def snap_points(xy: np.ndarray, delta: float) -> np.ndarray:
    """Vectorized snap_to_grid over an (n, 2) array of positions."""
    if delta < 0.0:
        raise ValueError("grid size must be non-negative")
    xy = np.asarray(xy, dtype=float)
    if delta == 0.0:
        return xy.copy()
    return (np.floor(xy / delta) + 0.5) * delta


def sample_annulus_point(stream: np.random.Generator, r_inner: float, r_outer: float) -> Point:
    """Uniform point in the annulus r_inner <= r <= r_outer around the origin.

    Uniformity in area means the squared radius is uniform on
    [r_inner**2, r_outer**2]; the angle is uniform on [0, 2*pi).
    """
    if not (0.0 <= r_inner < r_outer):
        raise ValueError("need 0 <= r_inner < r_outer")
    rr = stream.uniform(r_inner * r_inner, r_outer * r_outer)
    ang = stream.uniform(0.0, 2.0 * math.pi)
    r = math.sqrt(rr)
    return Point(r * math.cos(ang), r * math.sin(ang))


def sample_annulus_points(
    stream: np.random.Generator, n: int, r_inner: float, r_outer: float
) -> np.ndarray:
    """Vector form of sample_annulus_point; returns an (n, 2) array."""
    if not (0.0 <= r_inner < r_outer):
        raise ValueError("need 0 <= r_inner < r_outer")
    rr = stream.uniform(r_inner * r_inner, r_outer * r_outer, size=n)
    ang = stream.uniform(0.0, 2.0 * math.pi, size=n)
    r = np.sqrt(rr)
    return np.column_stack((r * np.cos(ang), r * np.sin(ang)))


def cr_population(density_per_km2: float, coverage_radius_m: float) -> int:
    """Fixed number of secondary transmitters in the disc: density times
    disc area, rounded half-up to an integer."""
    if density_per_km2 < 0.0 or coverage_radius_m <= 0.0:
        raise ValueError("need density >= 0 and radius > 0")
    mean = density_per_km2 * math.pi * coverage_radius_m**2 / 1e6
    return int(math.floor(mean + 0.5))


def sample_cr_count(
    stream: np.random.Generator,
    density_per_km2: float,
    coverage_radius_m: float,
    activity_p: float,
) -> int:
    """Number of secondary transmitters contending for the channel.

    The population is fixed at density * area; each member is independently
    active with probability activity_p, so the active count is binomial.
    """
    if not (0.0 <= activity_p <= 1.0):
        raise ValueError("activity_p must lie in [0, 1]")
    pop = cr_population(density_per_km2, coverage_radius_m)
    if pop == 0:
        return 0
    return int(stream.binomial(pop, activity_p))


@dataclass(frozen=True)
class Placement:
    """One trial's transmitter geometry.

    crs holds the active secondary transmitters as an (n, 2) array; the
    protected receiver sits at the origin.  Snapped counterparts are the
    positions the discretized map attributes to each node.
    """

    pu_rx: Point
    pu_tx: Point
    crs: np.ndarray
    pu_rx_snapped: Point
    pu_tx_snapped: Point
    crs_snapped: np.ndarray


def sample_placement(stream: np.random.Generator, cfg: ScenarioConfig) -> Placement:
    """Draw the licensed transmitter and the active secondary transmitters.

    Draw order (licensed position, active count, secondary positions) is part
    of the determinism contract for a given stream.
    """
    pu_rx = Point(0.0, 0.0)
    pu_tx = sample_annulus_point(stream, cfg.R0, cfg.R)
    n_active = sample_cr_count(stream, cfg.cr_density, cfg.R, cfg.activity_p)
    crs = sample_annulus_points(stream, n_active, cfg.R0, cfg.R)
    delta = cfg.delta_grid
    return Placement(
        pu_rx=pu_rx,
        pu_tx=pu_tx,
        crs=crs,
        pu_rx_snapped=snap_to_grid(pu_rx, delta),
        pu_tx_snapped=snap_to_grid(pu_tx, delta),
        crs_snapped=snap_points(crs, delta),
    )
