"""Cox process with a positivity-constrained, hat-basis GP intensity.

The intensity on S = [0, L] is approximated by Lambda(x) = sum_j phi_j(x) xi_j
with hat functions phi_j on equispaced knots t_j = j * L / (m - 1)
(0-based j). The prior on xi is N(0, Gamma) restricted to the positive
orthant, Gamma_ij = sigma2 * exp(-(t_i - t_j)^2 / (2 l^2)).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from ..distributions import RngStream
from ..proposals import TruncGaussOrthant

NEG_INF = -math.inf


def benchmark_intensity(x):
    """2 exp(-x/15) + exp(-((x - 25)/10)^2), the benchmark intensity."""
    x = np.asarray(x, dtype=float)
    return 2.0 * np.exp(-x / 15.0) + np.exp(-(((x - 25.0) / 10.0) ** 2))


@dataclass
class CoxModel:
    m: int = 10
    observations: list = field(default_factory=list)
    domain_length: float = 50.0
    sigma2: float = 1.0
    lengthscale: float = 5.0
    jitter: float = 1e-8

    knots: np.ndarray = field(init=False, repr=False)
    delta: float = field(init=False, repr=False)
    c_weights: np.ndarray = field(init=False, repr=False)
    gamma: np.ndarray = field(init=False, repr=False)
    gamma_chol: np.ndarray = field(init=False, repr=False)
    _gamma_chol_inv: np.ndarray = field(init=False, repr=False)
    _phi: np.ndarray = field(init=False, repr=False)
    _weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("need at least two knots")
        L = float(self.domain_length)
        self.delta = L / (self.m - 1)
        self.knots = np.linspace(0.0, L, self.m)
        c = np.full(self.m, self.delta)
        c[0] = c[-1] = self.delta / 2
        self.c_weights = c
        diff = self.knots[:, None] - self.knots[None, :]
        self.gamma = self.sigma2 * np.exp(-(diff**2) / (2 * self.lengthscale**2))
        jittered = self.gamma + self.jitter * self.sigma2 * np.eye(self.m)
        self.gamma_chol = np.linalg.cholesky(jittered)
        self._gamma_chol_inv = np.linalg.inv(self.gamma_chol)
        self.observations = [np.asarray(o, dtype=float).ravel() for o in self.observations]
        for obs in self.observations:
            if obs.size and (obs.min() < 0 or obs.max() > L):
                raise ValueError("event outside the domain")
        events = np.concatenate(self.observations) if self.observations else np.empty(0)
        self._phi = self.basis_matrix(events)
        # Linear term of the log-likelihood summed over replicates.
        self._weights = len(self.observations) * self.c_weights

    @property
    def n_replicates(self) -> int:
        return len(self.observations)

    @property
    def n_events(self) -> int:
        return self._phi.shape[0]

    def basis_matrix(self, x) -> np.ndarray:
        """phi_j(x) for every point in ``x`` (rows) and knot j (columns)."""
        x = np.asarray(x, dtype=float).reshape(-1, 1)
        return np.clip(1.0 - np.abs((x - self.knots[None, :]) / self.delta), 0.0, None)

    def intensity(self, xi, x):
        return self.basis_matrix(x) @ np.asarray(xi, dtype=float)

    def log_posterior(self, xi) -> float:
        if not (xi > 0).all():
            return NEG_INF
        lam = self._phi @ xi
        if lam.size and lam.min() <= 0:
            return NEG_INF
        w = self._gamma_chol_inv @ xi
        return float(np.log(lam).sum()) - float(self._weights @ xi) - 0.5 * float(w @ w)

    def __call__(self, xi) -> float:
        return self.log_posterior(xi)

    def proposal(self, eta: float) -> TruncGaussOrthant:
        """Orthant-truncated proposal with covariance eta * Gamma."""
        return TruncGaussOrthant(eta * (self.gamma + self.jitter * self.sigma2 * np.eye(self.m)))


def cox_basis(x: float, j: int, model: CoxModel) -> float:
    """Hat function of knot ``j`` (0-based) evaluated at ``x``."""
    u = abs((x - model.knots[j]) / model.delta)
    return 1.0 - u if u <= 1.0 else 0.0


def cox_log_posterior(model: CoxModel, xi) -> float:
    """Log-likelihood over all replicates plus the Gaussian prior exponent.

    -inf outside the positive orthant; the truncated prior's normalizer does
    not depend on xi and is dropped.
    """
    return model.log_posterior(np.asarray(xi, dtype=float))


def grid_max(fn: Callable, length: float, points: int = 10001) -> float:
    return float(np.max(fn(np.linspace(0.0, length, points))))


def simulate_cox_data(intensity: Callable, rng: RngStream, n0: int = 10,
                      domain_length: float = 50.0, lam_max: float | None = None) -> list:
    """``n0`` replicate point patterns from an inhomogeneous Poisson process.

    Thinning: Poisson(lam_max * L) uniform candidates, each kept with
    probability intensity(x) / lam_max. ``lam_max`` defaults to a grid
    maximum inflated by 0.1% and must bound the intensity.
    """
    if lam_max is None:
        lam_max = grid_max(intensity, domain_length) * 1.001
    gen = rng.generator
    out = []
    for _ in range(n0):
        if lam_max <= 0:
            out.append(np.empty(0))
            continue
        k = gen.poisson(lam_max * domain_length)
        cand = gen.uniform(0.0, domain_length, size=k)
        lam = np.asarray(intensity(cand), dtype=float)
        if (lam > lam_max * (1 + 1e-12)).any():
            raise ValueError("intensity exceeds lam_max; thinning would be biased")
        keep = gen.uniform(size=k) * lam_max < lam
        out.append(np.sort(cand[keep]))
    return out


def write_events_csv(observations, path) -> None:
    """Point patterns as ``replicate_id, location`` rows."""
    with Path(path).open("w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["replicate_id", "location"])
        for r, obs in enumerate(observations):
            for x in obs:
                out.writerow([r, repr(float(x))])


def read_events_csv(path, n_replicates: int | None = None) -> list:
    rows: dict[int, list] = {}
    with Path(path).open(newline="") as fh:
        for row in csv.DictReader(fh):
            rows.setdefault(int(row["replicate_id"]), []).append(float(row["location"]))
    n = n_replicates if n_replicates is not None else (max(rows) + 1 if rows else 0)
    return [np.asarray(rows.get(r, []), dtype=float) for r in range(n)]


class DegenerateEstimateError(RuntimeError):
    pass


def orthant_mass_estimate(center, chol, mc_samples: int, rng: RngStream) -> float:
    """Fraction of ``mc_samples`` draws from N(center, L L^T) inside the orthant."""
    m = len(center)
    z = rng.normals(mc_samples * m).reshape(mc_samples, m)
    pts = center + z @ chol.T
    return float((pts > 0).all(axis=1).mean())


class InexactCoxMH:
    """MH with plug-in Monte Carlo estimates of both proposal normalizers.

    This is the inexact baseline: both r(xi) and r(chi) are re-estimated at
    every step from ``mc_samples`` untruncated draws, and the chain targets
    the wrong distribution when the estimates are noisy. ``zero_policy``
    decides what a zero estimate does: ``"raise"`` stops the chain,
    ``"limit"`` uses the limiting ratio (accept when only r(chi) is zero,
    reject when r(xi) is zero).
    """

    name = "mh-inexact-cox"

    def __init__(self, log_target, proposal: TruncGaussOrthant, rng: RngStream,
                 mc_samples: int = 200, zero_policy: str = "raise"):
        if mc_samples < 1:
            raise ValueError("mc_samples must be positive")
        if zero_policy not in ("raise", "limit"):
            raise ValueError("zero_policy is 'raise' or 'limit'")
        self.lp, self.prop, self.rng = log_target, proposal, rng
        self.mc_samples = mc_samples
        self.zero_policy = zero_policy

    def step(self, x, lpx):
        prop, rng = self.prop, self.rng
        y = prop.sample(x, rng)
        lpy = self.lp(y)
        r_x = orthant_mass_estimate(x, prop.chol, self.mc_samples, rng)
        r_y = orthant_mass_estimate(y, prop.chol, self.mc_samples, rng)
        u = rng.uniform()
        if r_x == 0.0 or r_y == 0.0:
            if self.zero_policy == "raise":
                raise DegenerateEstimateError(
                    f"normalizer estimate is 0 with mc_samples={self.mc_samples}; increase it"
                )
            accept = r_x > 0.0 and lpy > NEG_INF
        elif lpy == NEG_INF:
            accept = False
        else:
            log_ratio = lpy - lpx + math.log(r_x) - math.log(r_y)
            accept = log_ratio >= 0 or u < math.exp(log_ratio)
        if accept:
            return y, lpy, 1, 0
        return x, lpx, 0, 0


def inexact_mh_cox_step(model: CoxModel, state, Sigma, rng: RngStream, mc_samples: int = 200,
                        zero_policy: str = "raise"):
    """Single inexact-MH update; returns ``(next_state, accepted)``."""
    stepper = InexactCoxMH(model.log_posterior, TruncGaussOrthant(Sigma), rng, mc_samples,
                           zero_policy)
    x, _, a, _ = stepper.step(np.asarray(state, dtype=float), model.log_posterior(state))
    return x, a
