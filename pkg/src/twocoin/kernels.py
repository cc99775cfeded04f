"""Accept-reject chain drivers.

Kernels
-------
``mh-exact``      Metropolis-Hastings; needs ``proposal.log_normalizer``.
``barker-exact``  Barker acceptance evaluated directly; same requirement.
``barker-bf``     Barker acceptance realised by the two-coin factory; only
                  needs bounds and normalizer coins.
``ram-aux``       Repelling-attracting Metropolis with an auxiliary variable;
                  needs a :class:`~twocoin.proposals.RamProposal`.

A kernel is a small stepper object with ``step(x, lp_x) -> (x', lp_x',
accepted, loops)``; :func:`run_chain` and :func:`run_block_chain` accept a
kernel name, such an object, or a factory ``(log_target, proposal, rng) ->
stepper``, so model-specific kernels plug in the same way.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .distributions import RngStream
from .factory import DEFAULT_MAX_LOOPS, FactoryTimeout, LoopAccumulator, two_coin_raw
from .proposals import Proposal, RamProposal, _logaddexp

log = logging.getLogger(__name__)

KERNELS = ("mh-exact", "barker-exact", "barker-bf", "ram-aux")
NEG_INF = -math.inf


class InvalidStateError(ValueError):
    """The chain state (or both Barker terms) has zero target density."""


class TuningFailure(RuntimeError):
    def __init__(self, last_scale: float, last_rate: float, goal: float):
        self.last_scale = last_scale
        self.last_rate = last_rate
        super().__init__(
            f"tuning did not reach acceptance {goal:.3f}; last rate {last_rate:.3f} "
            f"at scale {last_scale:.4g}"
        )


@dataclass
class TargetDensity:
    """Unnormalized log target; ``log_unnorm`` is -inf exactly off the support."""

    log_unnorm: Callable
    support: Callable
    dimension: int = 1

    def __call__(self, x) -> float:
        return self.log_unnorm(x)


@dataclass
class AuxiliaryState:
    x: object
    z: object


@dataclass
class ChainTrace:
    """Output of a chain run.

    ``states`` has shape ``(n + 1, d)``. ``accepted`` and ``loops`` have shape
    ``(n,)``, or ``(n, B)`` for block chains. ``loops`` holds two-coin loop
    counts for ``barker-bf``, forced-down loops of the auxiliary draw for
    ``ram-aux`` and zeros otherwise; it is ``None`` unless requested.
    """

    states: np.ndarray
    accepted: np.ndarray
    loop_stats: list[LoopAccumulator]
    kernel: str
    seed: int | None = None
    stream_id: int | None = None
    tuning: float | None = None
    wall_time: float = 0.0
    loops: np.ndarray | None = None
    extra: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.accepted.shape[0]


def mh_acceptance(log_pi_x: float, log_pi_y: float, log_q_x_given_y: float,
                  log_q_y_given_x: float) -> float:
    """min{1, pi(y) q(x|y) / (pi(x) q(y|x))}."""
    if log_pi_x == NEG_INF:
        raise InvalidStateError("current state has zero target density")
    if log_pi_y == NEG_INF:
        return 0.0
    r = log_pi_y + log_q_x_given_y - log_pi_x - log_q_y_given_x
    return 1.0 if r >= 0 else math.exp(r)


def barker_acceptance(log_num: float, log_den: float) -> float:
    """num / (num + den) as a stable logistic in the log terms."""
    if log_num == NEG_INF and log_den == NEG_INF:
        raise InvalidStateError("both Barker terms are zero")
    if log_num == NEG_INF:
        return 0.0
    if log_den == NEG_INF:
        return 1.0
    d = log_den - log_num
    if d >= 0:
        e = math.exp(-d)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(d))


class MHExact:
    name = "mh-exact"

    def __init__(self, log_target, proposal: Proposal, rng: RngStream):
        if not proposal.tractable:
            raise ValueError("mh-exact needs a proposal with an evaluable normalizer")
        self.lp, self.prop, self.rng = log_target, proposal, rng
        self._x = self._lr = None

    def _log_r(self, x):
        if x is self._x:
            return self._lr
        return self.prop.log_normalizer(x)

    def _log_q_pair(self, x, y):
        q = self.prop
        lq_yx = q.log_qtilde(y, x) - self._log_r(x)
        lr_y = q.log_normalizer(y)
        lq_xy = q.log_qtilde(x, y) - lr_y
        return lq_yx, lq_xy, lr_y

    def step(self, x, lpx):
        y = self.prop.sample(x, self.rng)
        lpy = self.lp(y)
        if lpy == NEG_INF:
            return x, lpx, 0, 0
        lq_yx, lq_xy, lr_y = self._log_q_pair(x, y)
        if self.rng.uniform() < mh_acceptance(lpx, lpy, lq_xy, lq_yx):
            self._x, self._lr = y, lr_y
            return y, lpy, 1, 0
        return x, lpx, 0, 0


class BarkerExact(MHExact):
    name = "barker-exact"

    def step(self, x, lpx):
        y = self.prop.sample(x, self.rng)
        lpy = self.lp(y)
        if lpy == NEG_INF:
            return x, lpx, 0, 0
        lq_yx, lq_xy, lr_y = self._log_q_pair(x, y)
        if self.rng.uniform() < barker_acceptance(lpy + lq_xy, lpx + lq_yx):
            self._x, self._lr = y, lr_y
            return y, lpy, 1, 0
        return x, lpx, 0, 0


class BarkerTwoCoin:
    """Barker step with the acceptance coin drawn by the two-coin factory.

    For a proposal y ~ Q(.|x):
    c_x = pi~(x) q~(y|x) b_y with coin_x ~ Bern(r(y)/b_y), and
    c_y = pi~(y) q~(x|y) b_x with coin_y ~ Bern(r(x)/b_x).
    """

    name = "barker-bf"

    def __init__(self, log_target, proposal: Proposal, rng: RngStream,
                 max_loops: int | None = DEFAULT_MAX_LOOPS, cache: bool = True):
        self.lp, self.prop, self.rng = log_target, proposal, rng
        self.max_loops = max_loops
        self.cache = cache
        self._x = self._coin_x = None

    def step(self, x, lpx):
        q, rng = self.prop, self.rng
        y = q.sample(x, rng)
        lpy = self.lp(y)
        if lpy == NEG_INF:
            return x, lpx, 0, 0
        log_cx = lpx + q.log_qtilde(y, x) + q.log_bound(y)
        log_cy = lpy + q.log_qtilde(x, y) + q.log_bound(x)
        if self.cache and x is self._x:
            coin_y = self._coin_x
        else:
            coin_y = q.normalizer_coin(x, lpx)
        coin_x = q.normalizer_coin(y, lpy)
        out, loops = two_coin_raw(log_cx, log_cy, coin_x, coin_y, rng, self.max_loops)
        if out:
            self._x, self._coin_x = y, coin_x
            return y, lpy, 1, loops
        self._x, self._coin_x = x, coin_y
        return x, lpx, 0, loops


class RamAuxiliary:
    """Auxiliary-variable RAM step on the joint (x, z).

    With ``refresh=True`` the auxiliary z is redrawn by a forced-down move
    from x before every update, an exact Gibbs move on the joint; block
    chains need this because the conditional target of a block changes
    between its updates.
    """

    name = "ram-aux"

    def __init__(self, log_target, proposal: RamProposal, rng: RngStream, refresh: bool = False):
        if not isinstance(proposal, RamProposal) or not proposal.symmetric:
            raise ValueError("ram-aux needs a RamProposal with a symmetric inner kernel")
        self.lp, self.prop, self.rng = log_target, proposal, rng
        self.refresh = refresh
        self.z = None

    def init_z(self, x, lpx) -> None:
        lpe_x = _logaddexp(lpx, self.prop.log_epsilon)
        self.z = self.prop.forced_down(x, lpe_x, self.rng)[0]

    def step(self, x, lpx):
        if self.z is None or self.refresh:
            self.init_z(x, lpx)
        state, accepted, zloops, lpx = ram_auxiliary_step(
            AuxiliaryState(x, self.z), self.prop, self.rng, lpx
        )
        self.z = state.z
        return state.x, lpx, accepted, zloops


def ram_auxiliary_step(state: AuxiliaryState, prop: RamProposal, rng: RngStream,
                       lp_x: float | None = None):
    """One auxiliary-variable RAM update.

    Forced-down x' from x, forced-up y from x', forced-down z* from y, then
    accept (y, z*) with probability

        min{1, pi(y) min{1, (pi(x)+e)/(pi(z)+e)} / (pi(x) min{1, (pi(y)+e)/(pi(z*)+e)})}.

    Returns ``(new_state, accepted, zstar_loops, lp_new)``.
    """
    lp, le = prop.log_target, prop.log_epsilon
    x, z = state.x, state.z
    lpx = lp(x) if lp_x is None else lp_x
    if lpx == NEG_INF:
        raise InvalidStateError("auxiliary RAM state has zero target density")
    lpe_x = _logaddexp(lpx, le)
    xp, lpe_xp, _ = prop.forced_down(x, lpe_x, rng)
    y, lpe_y, _ = prop.forced_up(xp, lpe_xp, rng)
    zs, lpe_zs, zloops = prop.forced_down(y, lpe_y, rng)
    lpy = lp(y)
    lpe_z = prop.lpe(z)
    log_ratio = lpy + min(0.0, lpe_x - lpe_z) - lpx - min(0.0, lpe_y - lpe_zs)
    if rng.uniform() < (1.0 if log_ratio >= 0 else math.exp(log_ratio)):
        return AuxiliaryState(y, zs), 1, zloops, lpy
    return state, 0, zloops, lpx


def two_coin_pair(log_target, proposal: Proposal, x, y, n: int, rng: RngStream,
                  max_loops: int | None = DEFAULT_MAX_LOOPS) -> tuple[float, float]:
    """Run the Barker two-coin decision for a fixed pair (x, y) ``n`` times.

    Returns the empirical acceptance frequency and mean loop count.
    """
    q = proposal
    lpx, lpy = log_target(x), log_target(y)
    log_cx = lpx + q.log_qtilde(y, x) + q.log_bound(y)
    log_cy = lpy + q.log_qtilde(x, y) + q.log_bound(x)
    coin_x = q.normalizer_coin(y, lpy)
    coin_y = q.normalizer_coin(x, lpx)
    hits = total = 0
    for _ in range(n):
        out, loops = two_coin_raw(log_cx, log_cy, coin_x, coin_y, rng, max_loops)
        hits += out
        total += loops
    return hits / n, total / n


def make_stepper(kernel, log_target, proposal, rng: RngStream,
                 max_loops: int | None = DEFAULT_MAX_LOOPS, cache: bool = True):
    if not isinstance(kernel, str):
        if hasattr(kernel, "step"):
            return kernel
        return kernel(log_target, proposal, rng)
    if kernel == "mh-exact":
        return MHExact(log_target, proposal, rng)
    if kernel == "barker-exact":
        return BarkerExact(log_target, proposal, rng)
    if kernel == "barker-bf":
        return BarkerTwoCoin(log_target, proposal, rng, max_loops, cache=cache)
    if kernel == "ram-aux":
        return RamAuxiliary(log_target, proposal, rng, refresh=not cache)
    raise ValueError(f"unknown kernel {kernel!r}; expected one of {KERNELS}")


def _stack_states(states: list) -> np.ndarray:
    arr = np.asarray(states, dtype=float)
    return arr.reshape(len(states), -1)


def run_chain(target, proposal, kernel, n: int, rng: RngStream, x0,
              burn_in: int = 0, keep_loops: bool = False, tuning: float | None = None,
              max_loops: int | None = DEFAULT_MAX_LOOPS) -> ChainTrace:
    """Run ``burn_in + n`` steps from ``x0`` and keep the last ``n + 1`` states."""
    if n < 1:
        raise ValueError("n must be positive")
    log_target = target.log_unnorm if isinstance(target, TargetDensity) else target
    stepper = make_stepper(kernel, log_target, proposal, rng, max_loops)
    step = stepper.step
    x = x0
    lpx = log_target(x)
    if lpx == NEG_INF:
        raise InvalidStateError(f"initial state {x0!r} is outside the target support")
    for k in range(burn_in):
        try:
            x, lpx, _, _ = step(x, lpx)
        except FactoryTimeout as err:
            err.step = k - burn_in
            raise
    states = [x]
    accepted = np.zeros(n, dtype=bool)
    loops = np.zeros(n, dtype=np.int64)
    acc = LoopAccumulator()
    t0 = time.perf_counter()
    for k in range(n):
        try:
            x, lpx, a, nl = step(x, lpx)
        except FactoryTimeout as err:
            err.step = k
            raise
        states.append(x)
        accepted[k] = a
        if nl:
            loops[k] = nl
            acc.add(nl)
    wall = time.perf_counter() - t0
    return ChainTrace(
        states=_stack_states(states),
        accepted=accepted,
        loop_stats=[acc],
        kernel=getattr(stepper, "name", str(kernel)),
        seed=rng.seed,
        stream_id=rng.stream_id,
        tuning=tuning,
        wall_time=wall,
        loops=loops if keep_loops else None,
    )


class BlockConditional:
    """Log target of one coordinate block, other coordinates read from ``base``.

    ``base`` is shared and updated in place by :func:`run_block_chain`; up to
    a constant the conditional equals the joint log target.
    """

    def __init__(self, log_target, base: np.ndarray, idx):
        self.log_target = log_target
        self.base = base
        self.idx = idx

    def __call__(self, xb) -> float:
        full = self.base.copy()
        full[self.idx] = xb
        return self.log_target(full)


def run_block_chain(log_target, x0, blocks, make_proposal, kernel, n: int, rng: RngStream,
                    burn_in: int = 0, keep_loops: bool = False,
                    max_loops: int | None = DEFAULT_MAX_LOOPS) -> ChainTrace:
    """Metropolis-within-Gibbs: one accept-reject update per block per sweep.

    ``make_proposal(conditional)`` builds the block proposal from the block's
    :class:`BlockConditional`.
    """
    base = np.array(x0, dtype=float)
    conds = [BlockConditional(log_target, base, idx) for idx in blocks]
    steppers = [
        make_stepper(kernel, c, make_proposal(c), rng, max_loops, cache=False) for c in conds
    ]
    lp = log_target(base)
    if lp == NEG_INF:
        raise InvalidStateError("initial state is outside the target support")
    nb = len(blocks)
    accepted = np.zeros((n, nb), dtype=bool)
    loops = np.zeros((n, nb), dtype=np.int64)
    accs = [LoopAccumulator() for _ in blocks]
    states = np.empty((n + 1, base.size))
    t0 = 0.0
    for k in range(-burn_in, n):
        if k == 0:
            states[0] = base
            t0 = time.perf_counter()
        for j, (idx, st) in enumerate(zip(blocks, steppers)):
            try:
                xb, lp, a, nl = st.step(base[idx].copy(), lp)
            except FactoryTimeout as err:
                err.step = k
                raise
            base[idx] = xb
            if k >= 0:
                accepted[k, j] = a
                if nl:
                    loops[k, j] = nl
                    accs[j].add(nl)
        if k >= 0:
            states[k + 1] = base
    wall = time.perf_counter() - t0
    return ChainTrace(
        states=states,
        accepted=accepted,
        loop_stats=accs,
        kernel=getattr(steppers[0], "name", str(kernel)),
        seed=rng.seed,
        stream_id=rng.stream_id,
        wall_time=wall,
        loops=loops if keep_loops else None,
    )


def tune_scale(target, proposal_family: Callable[[float], Proposal], kernel, goal_rate: float,
               pilot_n: int, rng: RngStream, x0, scale0: float = 1.0, tol: float = 0.02,
               max_rounds: int = 60, gain: float = 10.0) -> float:
    """Robbins-Monro search for the proposal scale hitting ``goal_rate``.

    Each round runs a pilot chain of ``pilot_n`` steps (continuing from the
    last pilot state) and moves ``log(scale)`` by ``gain * (rate - goal) / k``.
    Returns once two consecutive pilot rates fall within ``tol`` of the goal.
    """
    if not 0.0 < goal_rate < 1.0:
        raise ValueError("goal_rate must lie in (0, 1)")
    log_s = math.log(scale0)
    x = x0
    hits = 0
    rate = math.nan
    for k in range(1, max_rounds + 1):
        scale = math.exp(log_s)
        trace = run_chain(target, proposal_family(scale), kernel, pilot_n, rng, x)
        rate = float(trace.accepted.mean())
        last = trace.states[-1]
        x = float(last[0]) if np.ndim(x0) == 0 else last.copy()
        log.debug("tune round %d: scale=%.4g rate=%.4f", k, scale, rate)
        if abs(rate - goal_rate) <= tol:
            hits += 1
            if hits == 2:
                return scale
        else:
            hits = 0
        log_s += gain * (rate - goal_rate) / k
    raise TuningFailure(math.exp(log_s), rate, goal_rate)
