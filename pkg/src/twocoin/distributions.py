"""Random streams and elementary distribution primitives.

Every sampler in the package draws from an :class:`RngStream`. A stream is
keyed by ``(seed, stream_id)``: the same key always replays the same draws,
and distinct stream ids are spawned through :class:`numpy.random.SeedSequence`
onto a counter-based Philox generator, so replicated chains never share a
stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_U64 = 2**64


class RngStream:
    """Single-owner random stream with block-buffered scalar draws.

    Scalars are served from pre-drawn blocks because per-call overhead of the
    numpy generator dominates the inner loops of the two-coin algorithm.
    """

    def __init__(self, seed: int = 0, stream_id: int = 0, block: int = 8192):
        if not (0 <= seed < _U64 and 0 <= stream_id < _U64):
            raise ValueError("seed and stream_id must be 64-bit unsigned integers")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.Philox(seq))
        self._block = int(block)
        self._u: list[float] = []
        self._ui = 0
        self._z = np.empty(0)
        self._zl: list[float] = []
        self._zi = 0

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    def spawn(self, stream_id: int) -> RngStream:
        """Independent stream sharing this stream's seed."""
        return RngStream(self.seed, stream_id, self._block)

    def uniform(self) -> float:
        i = self._ui
        if i >= len(self._u):
            self._u = self.generator.random(self._block).tolist()
            i = 0
        self._ui = i + 1
        return self._u[i]

    def _refill_normals(self) -> None:
        self._z = self.generator.standard_normal(self._block)
        self._zl = self._z.tolist()
        self._zi = 0

    def normal(self) -> float:
        if self._zi >= len(self._zl):
            self._refill_normals()
        i = self._zi
        self._zi = i + 1
        return self._zl[i]

    def normals(self, k: int) -> np.ndarray:
        """``k`` iid standard normals (a read-only view into the buffer)."""
        if k > self._block:
            return self.generator.standard_normal(k)
        if self._zi + k > len(self._zl):
            self._refill_normals()
        i = self._zi
        self._zi = i + k
        return self._z[i : i + k]


@dataclass(frozen=True)
class GaussianParams:
    """Mean and covariance of a (multivariate) normal.

    A scalar covariance is read as the variance of a 1-d normal.
    """

    mean: np.ndarray
    cov: np.ndarray
    chol: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        cov = np.asarray(self.cov, dtype=float)
        if cov.ndim == 0:
            cov = cov.reshape(1, 1)
        if cov.shape != (mean.size, mean.size):
            raise ValueError(f"covariance shape {cov.shape} does not match mean of size {mean.size}")
        if not np.allclose(cov, cov.T):
            raise ValueError("covariance must be symmetric")
        try:
            chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as err:
            raise ValueError("covariance is not positive definite") from err
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "chol", chol)

    @property
    def dim(self) -> int:
        return self.mean.size


def draw_uniform(rng: RngStream) -> float:
    return rng.uniform()


def draw_gaussian(rng: RngStream, params: GaussianParams) -> np.ndarray:
    """Exact normal draw: mean + L z with L the Cholesky factor."""
    return params.mean + params.chol @ rng.normals(params.dim)


def draw_bernoulli(rng: RngStream, p: float) -> int:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Bernoulli probability {p!r} outside [0, 1]")
    return 1 if rng.uniform() < p else 0


def log_gamma_density(x: float, alpha: float, beta: float) -> float:
    """Unnormalized Gamma(alpha, beta) log density (rate parametrization)."""
    if x <= 0:
        return -math.inf
    return (alpha - 1.0) * math.log(x) - beta * x
