"""Two-coin Bernoulli factory for the Barker acceptance function.

Given weights ``c_x, c_y > 0`` and coins with unknown success probabilities
``p_x, p_y``, :func:`two_coin` returns 1 with probability

    c_y p_y / (c_x p_x + c_y p_y)

using only coin flips. Weights are carried in log space; only the outer coin
probability ``c_y / (c_x + c_y)`` is ever exponentiated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Protocol

import numpy as np

from .distributions import RngStream

DEFAULT_MAX_LOOPS = 10**6
BOUND_TOLERANCE = 1e-12
_LOG_BOUND_TOL = math.log1p(BOUND_TOLERANCE)


class CoinOracle(Protocol):
    """A coin with success probability that is never computed explicitly."""

    def flip(self, rng: RngStream) -> int: ...


class FactoryTimeout(RuntimeError):
    """Raised when the two-coin loop exceeds its cap; carries partial stats."""

    def __init__(self, stats: LoopStats, step: int | None = None):
        self.stats = stats
        self.step = step
        where = "" if step is None else f" at chain step {step}"
        super().__init__(
            f"two-coin factory exceeded {stats.loops} loops{where}; "
            "the normalizer bound is probably far too loose"
        )


class BoundViolation(ValueError):
    """A normalizer coin produced a conditional probability above 1."""

    def __init__(self, point, prob: float):
        self.point = point
        self.prob = prob
        super().__init__(
            f"normalizer coin conditional probability {prob!r} > 1 at M={point!r}; "
            "the bound b or the envelope F is invalid"
        )


@dataclass(frozen=True)
class LoopStats:
    """Loop accounting for one two-coin call; ``outcome`` is -1 on timeout."""

    loops: int
    inner_flips: int
    outcome: int


@dataclass(frozen=True)
class TwoCoinInputs:
    """Log weights and coins for one two-coin call.

    ``log_cx``/``coin_x`` drive the reject branch, ``log_cy``/``coin_y`` the
    accept branch.
    """

    log_cx: float
    log_cy: float
    coin_x: CoinOracle
    coin_y: CoinOracle

    def __post_init__(self):
        for name in ("log_cx", "log_cy"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite (c > 0 and finite), got {v!r}")


def outer_probability(log_cx: float, log_cy: float) -> float:
    """c_y / (c_x + c_y) evaluated as a stable logistic."""
    d = log_cx - log_cy
    if d >= 0:
        e = math.exp(-d)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(d))


def two_coin_raw(
    log_cx: float,
    log_cy: float,
    coin_x: CoinOracle,
    coin_y: CoinOracle,
    rng: RngStream,
    max_loops: int | None = DEFAULT_MAX_LOOPS,
) -> tuple[int, int]:
    """Hot-path two-coin returning ``(outcome, loops)`` without validation."""
    p1 = outer_probability(log_cx, log_cy)
    flip_x = coin_x.flip
    flip_y = coin_y.flip
    uniform = rng.uniform
    loops = 0
    while True:
        if max_loops is not None and loops >= max_loops:
            raise FactoryTimeout(LoopStats(loops, loops, -1))
        loops += 1
        if uniform() < p1:
            if flip_y(rng):
                return 1, loops
        elif flip_x(rng):
            return 0, loops


def two_coin(
    inputs: TwoCoinInputs,
    rng: RngStream,
    max_loops: int | None = DEFAULT_MAX_LOOPS,
) -> tuple[int, LoopStats]:
    """Draw Bern(c_y p_y / (c_x p_x + c_y p_y)) by the two-coin algorithm.

    Each loop flips the outer coin Bern(c_y / (c_x + c_y)); heads flips
    ``coin_y`` and outputs 1 on success, tails flips ``coin_x`` and outputs 0
    on success. A failed inner flip starts the next loop. ``max_loops=None``
    removes the cap.
    """
    out, loops = two_coin_raw(
        inputs.log_cx, inputs.log_cy, inputs.coin_x, inputs.coin_y, rng, max_loops
    )
    return out, LoopStats(loops=loops, inner_flips=loops, outcome=out)


def expected_loops(cx: float, cy: float, px: float, py: float) -> float:
    """Mean loop count (c_x + c_y) / (c_x p_x + c_y p_y)."""
    denom = cx * px + cy * py
    if not (cx > 0 and cy > 0) or not denom > 0:
        raise ValueError("expected_loops needs c_x, c_y > 0 and c_x p_x + c_y p_y > 0")
    return (cx + cy) / denom


class BernoulliCoin:
    """Coin with a known success probability; used by tests and oracles."""

    def __init__(self, p: float):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability {p!r} outside [0, 1]")
        self.p = p

    def flip(self, rng: RngStream) -> int:
        return 1 if rng.uniform() < self.p else 0


class NormalizerCoin:
    """Bern(r(x)/b) coin built from an envelope F with density f.

    A flip draws M ~ F and returns Bern(q~(M|x) / (f(M) b)); marginally this
    succeeds with probability r(x)/b whenever q~ <= f b on the support of F.
    """

    def __init__(
        self,
        qtilde_log: Callable,
        bound_b: float,
        envelope_sampler: Callable[[RngStream], object],
        envelope_logdensity: Callable,
    ):
        if not bound_b > 0:
            raise ValueError("bound_b must be positive")
        self.qtilde_log = qtilde_log
        self.log_b = math.log(bound_b)
        self.envelope_sampler = envelope_sampler
        self.envelope_logdensity = envelope_logdensity

    def flip(self, rng: RngStream) -> int:
        m = self.envelope_sampler(rng)
        lq = self.qtilde_log(m)
        if lq == -math.inf:
            return 0
        lp = lq - self.envelope_logdensity(m) - self.log_b
        if lp > _LOG_BOUND_TOL:
            raise BoundViolation(m, math.exp(lp))
        if lp >= 0.0:
            return 1
        return 1 if rng.uniform() < math.exp(lp) else 0


def make_normalizer_coin(qtilde_log, bound_b, envelope_sampler, envelope_logdensity) -> NormalizerCoin:
    return NormalizerCoin(qtilde_log, bound_b, envelope_sampler, envelope_logdensity)


class IndicatorCoin:
    """Membership coin 1(M in A) with M drawn from the untruncated kernel.

    This is the normalizer coin for a truncated kernel with envelope equal to
    the untruncated kernel and b = 1: the conditional probability is exactly
    the indicator of A.
    """

    def __init__(self, sampler: Callable[[RngStream], object], member: Callable[[object], bool]):
        self.sampler = sampler
        self.member = member

    def flip(self, rng: RngStream) -> int:
        return 1 if self.member(self.sampler(rng)) else 0


class LoopAccumulator:
    """Streaming mean/max of two-coin loop counts, with optional full record."""

    def __init__(self, keep: bool = False):
        self.calls = 0
        self.total = 0
        self.max = 0
        self.history: list[int] | None = [] if keep else None

    def add(self, loops: int) -> None:
        self.calls += 1
        self.total += loops
        if loops > self.max:
            self.max = loops
        if self.history is not None:
            self.history.append(loops)

    @property
    def mean(self) -> float:
        return self.total / self.calls if self.calls else math.nan

    def as_array(self) -> np.ndarray:
        if self.history is None:
            raise ValueError("per-call loop counts were not recorded")
        return np.asarray(self.history, dtype=np.int64)
