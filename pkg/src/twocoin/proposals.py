"""Proposal kernels whose normalizing function r(x) is unknown.

Each proposal exposes

* ``sample(x, rng)``: a draw from Q(.|x), always inside the support A;
* ``log_qtilde(y, x)``: log of the unnormalized density q~(y|x);
* ``log_bound(x)``: log b_x with r(x) <= b_x;
* ``normalizer_coin(x)``: a coin with success probability r(x)/b_x.

Tractable kernels additionally implement ``log_normalizer(x)`` so the exact
MH and Barker kernels can run on them (``tractable = True``); intractable
ones raise :class:`NotImplementedError` there.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from .distributions import RngStream
from .factory import IndicatorCoin, NormalizerCoin

_LOG_2PI = math.log(2.0 * math.pi)


class ProposalSamplingError(RuntimeError):
    pass


def _logaddexp(a: float, b: float) -> float:
    if a < b:
        a, b = b, a
    if b == -math.inf:
        return a
    return a + math.log1p(math.exp(b - a))


class Proposal:
    """Base interface; bounds default to b_x = 1."""

    dim = 1
    symmetric = False
    tractable = False

    def sample(self, x, rng: RngStream):
        raise NotImplementedError

    def log_qtilde(self, y, x) -> float:
        raise NotImplementedError

    def log_bound(self, x) -> float:
        return 0.0

    def bound(self, x) -> float:
        return math.exp(self.log_bound(x))

    def normalizer_coin(self, x, lp_x: float | None = None):
        raise NotImplementedError

    def log_normalizer(self, x) -> float:
        raise NotImplementedError(f"{type(self).__name__} has an intractable normalizer")


class _AlwaysHeads:
    def flip(self, rng: RngStream) -> int:
        return 1


ALWAYS_HEADS = _AlwaysHeads()


class GaussianRandomWalk(Proposal):
    """Untruncated Gaussian random walk; r(x) = 1 so it is tractable.

    A scalar ``cov`` gives a 1-d walk on floats, a matrix gives a walk on
    vectors.
    """

    symmetric = True
    tractable = True

    def __init__(self, cov):
        cov = np.asarray(cov, dtype=float)
        self.scalar = cov.ndim == 0
        if self.scalar:
            if not cov > 0:
                raise ValueError("variance must be positive")
            self.sd = math.sqrt(float(cov))
            self.dim = 1
            self._log_norm = -0.5 * (_LOG_2PI + math.log(float(cov)))
        else:
            self.chol = np.linalg.cholesky(cov)
            self.chol_inv = np.linalg.inv(self.chol)
            self.dim = cov.shape[0]
            self._log_norm = -0.5 * self.dim * _LOG_2PI - float(np.log(np.diag(self.chol)).sum())
        self.cov = cov

    def draw(self, center, rng: RngStream):
        if self.scalar:
            return center + self.sd * rng.normal()
        return center + self.chol @ rng.normals(self.dim)

    def logpdf(self, y, x) -> float:
        if self.scalar:
            d = (y - x) / self.sd
            return self._log_norm - 0.5 * d * d
        w = self.chol_inv @ (y - x)
        return self._log_norm - 0.5 * float(w @ w)

    def sample(self, x, rng):
        return self.draw(x, rng)

    def log_qtilde(self, y, x):
        return self.logpdf(y, x)

    def normalizer_coin(self, x, lp_x=None):
        return ALWAYS_HEADS

    def log_normalizer(self, x):
        return 0.0


class _Gauss1DCoin:
    __slots__ = ("x", "sd", "lo", "hi")

    def __init__(self, x, sd, lo, hi):
        self.x, self.sd, self.lo, self.hi = x, sd, lo, hi

    def flip(self, rng: RngStream) -> int:
        m = self.x + self.sd * rng.normal()
        return 1 if self.lo < m < self.hi else 0


class TruncGauss1D(Proposal):
    """N(x, h) truncated to the interval ``(lower, upper)``.

    The normalizer coin draws M ~ N(x, h) and reports 1(M in A), which is
    the general envelope coin with F = N(x, h) and b = 1.
    """

    symmetric = True
    tractable = True

    def __init__(self, h: float, lower: float = -math.inf, upper: float = math.inf,
                 max_attempts: int = 10**5):
        if not h > 0:
            raise ValueError("h must be positive")
        if not lower < upper:
            raise ValueError("empty support interval")
        self.h = float(h)
        self.sd = math.sqrt(self.h)
        self.lower = float(lower)
        self.upper = float(upper)
        self.max_attempts = max_attempts
        self._log_norm = -0.5 * (_LOG_2PI + math.log(self.h))

    def __repr__(self):
        return f"TruncGauss1D(h={self.h}, lower={self.lower}, upper={self.upper})"

    def support(self, y) -> bool:
        return self.lower < y < self.upper

    def sample(self, x, rng):
        lo, hi, sd = self.lower, self.upper, self.sd
        normal = rng.normal
        for _ in range(self.max_attempts):
            y = x + sd * normal()
            if lo < y < hi:
                return y
        raise ProposalSamplingError(
            f"no draw from N({x}, {self.h}) landed in ({lo}, {hi}) after "
            f"{self.max_attempts} attempts; reduce the truncation or move x"
        )

    def log_qtilde(self, y, x):
        if not self.lower < y < self.upper:
            return -math.inf
        d = (y - x) / self.sd
        return self._log_norm - 0.5 * d * d

    def normalizer_coin(self, x, lp_x=None):
        return _Gauss1DCoin(x, self.sd, self.lower, self.upper)

    def envelope_coin(self, x) -> NormalizerCoin:
        """Same coin built through the generic importance-sampling construction."""
        f = GaussianRandomWalk(self.h)
        return NormalizerCoin(
            lambda m: self.log_qtilde(m, x),
            1.0,
            lambda rng: f.draw(x, rng),
            lambda m: f.logpdf(m, x),
        )

    def log_normalizer(self, x):
        # Gaussian CDF via scipy; only the exact MH/Barker baselines call this.
        a = (self.lower - x) / self.sd
        b = (self.upper - x) / self.sd
        if self.upper == math.inf:
            return float(special.log_ndtr(-a))
        if self.lower == -math.inf:
            return float(special.log_ndtr(b))
        return math.log(float(special.ndtr(b) - special.ndtr(a)))


class TruncGaussOrthant(Proposal):
    """N(x, Sigma) truncated to the open positive orthant.

    Sampling is plain rejection from the untruncated normal, which is cheap
    because the proposal is centred at the current in-orthant state.
    """

    symmetric = True

    def __init__(self, Sigma, max_attempts: int = 10**5):
        Sigma = np.atleast_2d(np.asarray(Sigma, dtype=float))
        if Sigma.shape[0] != Sigma.shape[1]:
            raise ValueError("Sigma must be square")
        self.Sigma = Sigma
        self.dim = Sigma.shape[0]
        self.chol = np.linalg.cholesky(Sigma)
        self.chol_inv = np.linalg.inv(self.chol)
        self._log_norm = -0.5 * self.dim * _LOG_2PI - float(np.log(np.diag(self.chol)).sum())
        self.max_attempts = max_attempts

    def support(self, y) -> bool:
        return bool((y > 0).all())

    def sample(self, x, rng):
        L, m = self.chol, self.dim
        for _ in range(self.max_attempts):
            y = x + L @ rng.normals(m)
            if (y > 0).all():
                return y
        raise ProposalSamplingError(
            f"orthant mass of N(x, Sigma) looks below {1 / self.max_attempts:g}: "
            f"no in-orthant draw in {self.max_attempts} attempts; reduce eta or m"
        )

    def log_qtilde(self, y, x):
        if not (y > 0).all():
            return -math.inf
        w = self.chol_inv @ (y - x)
        return self._log_norm - 0.5 * float(w @ w)

    def normalizer_coin(self, x, lp_x=None):
        L, m = self.chol, self.dim
        return IndicatorCoin(lambda rng: x + L @ rng.normals(m), self.support)


class RamProposal(Proposal):
    """Repelling-attracting down-up proposal with Gaussian inner kernel s.

    The inner kernel is symmetric, so the Barker ratio reduces to
    pi(y) A_D(x) / (pi(x) A_D(y)) with A_D the acceptance mass of the forced
    downhill move. Accordingly ``log_qtilde`` is identically 0, b = 1 and the
    normalizer coin succeeds with probability A_D(x).
    """

    symmetric = True

    def __init__(self, log_target, cov, epsilon: float | None = None,
                 log_epsilon: float | None = None, max_inner_loops: int = 10**6):
        if (epsilon is None) == (log_epsilon is None):
            raise ValueError("give exactly one of epsilon / log_epsilon")
        if epsilon is not None:
            if not epsilon > 0:
                raise ValueError("epsilon must be positive")
            log_epsilon = math.log(epsilon)
        self.log_target = log_target
        self.inner = GaussianRandomWalk(cov)
        self.dim = self.inner.dim
        self.log_epsilon = float(log_epsilon)
        self.max_inner_loops = max_inner_loops

    @property
    def epsilon(self) -> float:
        return math.exp(self.log_epsilon)

    def lpe(self, x) -> float:
        """log(pi~(x) + epsilon)."""
        return _logaddexp(self.log_target(x), self.log_epsilon)

    def forced_down(self, x, lpe_x: float, rng: RngStream):
        """Draw x' ~ s(.|x) filtered by min{1, (pi(x)+eps)/(pi(x')+eps)}."""
        draw, lpe, uniform = self.inner.draw, self.lpe, rng.uniform
        for k in range(1, self.max_inner_loops + 1):
            xp = draw(x, rng)
            lpe_xp = lpe(xp)
            d = lpe_x - lpe_xp
            if d >= 0 or uniform() < math.exp(d):
                return xp, lpe_xp, k
        raise ProposalSamplingError(f"forced-down move exceeded {self.max_inner_loops} attempts")

    def forced_up(self, xp, lpe_xp: float, rng: RngStream):
        """Draw y ~ s(.|x') filtered by min{1, (pi(y)+eps)/(pi(x')+eps)}."""
        draw, lpe, uniform = self.inner.draw, self.lpe, rng.uniform
        for k in range(1, self.max_inner_loops + 1):
            y = draw(xp, rng)
            lpe_y = lpe(y)
            d = lpe_y - lpe_xp
            if d >= 0 or uniform() < math.exp(d):
                return y, lpe_y, k
        raise ProposalSamplingError(f"forced-up move exceeded {self.max_inner_loops} attempts")

    def downup(self, x, rng: RngStream):
        xp, lpe_xp, down = self.forced_down(x, self.lpe(x), rng)
        y, _, up = self.forced_up(xp, lpe_xp, rng)
        return y, down, up

    def sample(self, x, rng):
        return self.downup(x, rng)[0]

    def log_qtilde(self, y, x):
        return 0.0

    def normalizer_coin(self, x, lp_x=None):
        lpe_x = self.lpe(x) if lp_x is None else _logaddexp(lp_x, self.log_epsilon)
        return _RamDownCoin(self, x, lpe_x)


class _RamDownCoin:
    __slots__ = ("prop", "x", "lpe_x")

    def __init__(self, prop: RamProposal, x, lpe_x: float):
        self.prop, self.x, self.lpe_x = prop, x, lpe_x

    def flip(self, rng: RngStream) -> int:
        m = self.prop.inner.draw(self.x, rng)
        d = self.lpe_x - self.prop.lpe(m)
        if d >= 0:
            return 1
        return 1 if rng.uniform() < math.exp(d) else 0


def default_log_epsilon(log_target, x0, scale: float = 1e-6) -> float:
    """log of ``scale * pi~(x0)``, the default RAM epsilon."""
    lp = log_target(x0)
    if not math.isfinite(lp):
        raise ValueError("initial state must have finite target density")
    return math.log(scale) + lp


def trunc_gauss_1d(support: tuple[float, float], h: float) -> TruncGauss1D:
    return TruncGauss1D(h, support[0], support[1])


def trunc_gauss_orthant(m: int, Sigma) -> TruncGaussOrthant:
    prop = TruncGaussOrthant(Sigma)
    if prop.dim != m:
        raise ValueError(f"Sigma is {prop.dim}x{prop.dim}, expected m={m}")
    return prop


def ram_downup_sample(prop: RamProposal, x, rng: RngStream):
    """Returns ``(y, down_loops, up_loops)``."""
    return prop.downup(x, rng)


def ram_normalizer_coin(prop: RamProposal, x):
    return prop.normalizer_coin(x)
