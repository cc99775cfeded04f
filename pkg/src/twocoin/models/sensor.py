"""Sensor network localization posterior.

Six sensors in the plane; the first ``unknown_count`` locations are
unknown, the rest are anchors. A pair (i, j) is observed with probability
exp(-|x_i - x_j|^2 / (2 * 0.3^2)); an observed pair reports the distance
with N(0, 0.02^2) noise. Unknown locations get independent N(0, 10^2 I)
priors.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..distributions import RngStream

# Shipped configuration: first four unknown, last two anchors.
TRUE_LOCATIONS = np.array([
    [0.57, 0.91],
    [0.10, 0.37],
    [0.26, 0.14],
    [0.85, 0.04],
    [0.50, 0.30],
    [0.30, 0.70],
])
_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)


@dataclass
class SensorData:
    known_locations: np.ndarray
    w: np.ndarray
    y_dist: np.ndarray
    unknown_count: int = 4
    obs_scale: float = 0.3
    noise_sd: float = 0.02
    prior_sd: float = 10.0
    _pairs: tuple = field(init=False, repr=False)

    def __post_init__(self):
        self.known_locations = np.asarray(self.known_locations, dtype=float).reshape(-1, 2)
        self.w = np.asarray(self.w, dtype=int)
        self.y_dist = np.asarray(self.y_dist, dtype=float)
        n = self.unknown_count + len(self.known_locations)
        if self.w.shape != (n, n) or self.y_dist.shape != (n, n):
            raise ValueError(f"w and y_dist must be {n}x{n}")
        if (self.w != self.w.T).any() or self.w.diagonal().any():
            raise ValueError("w must be symmetric with zero diagonal")
        iu, ju = np.triu_indices(n, 1)
        obs = self.w[iu, ju] == 1
        y = self.y_dist[iu, ju]
        if np.isnan(y[obs]).any() or (y[obs] < 0).any():
            raise ValueError("observed distances must be present and nonnegative")
        self._pairs = (iu, ju, obs, np.where(obs, y, 0.0))

    @property
    def n_sensors(self) -> int:
        return self.unknown_count + len(self.known_locations)

    def positions(self, locations) -> np.ndarray:
        unknown = np.asarray(locations, dtype=float).reshape(self.unknown_count, 2)
        return np.vstack([unknown, self.known_locations])


def observation_probability(d, obs_scale: float = 0.3):
    return np.exp(-np.square(d) / (2 * obs_scale**2))


def simulate_sensor_data(true_locations, rng: RngStream, unknown_count: int = 4,
                         obs_scale: float = 0.3, noise_sd: float = 0.02,
                         prior_sd: float = 10.0) -> SensorData:
    """Draw the observation indicators and noisy distances for all pairs."""
    pos = np.asarray(true_locations, dtype=float).reshape(-1, 2)
    n = len(pos)
    w = np.zeros((n, n), dtype=int)
    y = np.full((n, n), np.nan)
    for i in range(n):
        for j in range(i + 1, n):
            d = float(np.hypot(*(pos[i] - pos[j])))
            if rng.uniform() < observation_probability(d, obs_scale):
                w[i, j] = w[j, i] = 1
                y[i, j] = y[j, i] = d + noise_sd * rng.normal()
    return SensorData(pos[unknown_count:], w, y, unknown_count, obs_scale, noise_sd, prior_sd)


def sensor_log_posterior(data: SensorData, locations) -> float:
    """Log posterior of the unknown locations (flattened 2k-vector), up to a constant."""
    locations = np.asarray(locations, dtype=float)
    pos = data.positions(locations)
    iu, ju, obs, y = data._pairs
    diff = pos[iu] - pos[ju]
    d2 = np.einsum("ij,ij->i", diff, diff)
    a = d2 / (2 * data.obs_scale**2)
    with np.errstate(divide="ignore"):
        log_unobs = np.log(-np.expm1(-a))
    d = np.sqrt(d2)
    s = data.noise_sd
    log_obs = -a - 0.5 * ((y - d) / s) ** 2 - math.log(s) - _LOG_SQRT_2PI
    ll = float(np.where(obs, log_obs, log_unobs).sum())
    prior = -0.5 * float(locations @ locations) / data.prior_sd**2
    return ll + prior


def write_sensor_csv(data: SensorData, path) -> None:
    """Pairs file with columns ``i, j, w, y`` (y empty when w = 0)."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["i", "j", "w", "y"])
        n = data.n_sensors
        for i in range(n):
            for j in range(i + 1, n):
                wij = int(data.w[i, j])
                out.writerow([i, j, wij, repr(float(data.y_dist[i, j])) if wij else ""])


def read_sensor_csv(path, known_locations, unknown_count: int = 4, **kwargs) -> SensorData:
    known = np.asarray(known_locations, dtype=float).reshape(-1, 2)
    n = unknown_count + len(known)
    w = np.zeros((n, n), dtype=int)
    y = np.full((n, n), np.nan)
    with Path(path).open(newline="") as fh:
        for row in csv.DictReader(fh):
            i, j, wij = int(row["i"]), int(row["j"]), int(row["w"])
            w[i, j] = w[j, i] = wij
            if wij:
                y[i, j] = y[j, i] = float(row["y"])
    return SensorData(known, w, y, unknown_count, **kwargs)
