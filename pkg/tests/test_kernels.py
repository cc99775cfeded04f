import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twocoin.distributions import RngStream
from twocoin.factory import FactoryTimeout
from twocoin.kernels import (
    AuxiliaryState,
    InvalidStateError,
    TuningFailure,
    barker_acceptance,
    make_stepper,
    mh_acceptance,
    ram_auxiliary_step,
    run_block_chain,
    run_chain,
    tune_scale,
    two_coin_pair,
)
from twocoin.models import discrete, gamma_target
from twocoin.proposals import GaussianRandomWalk, RamProposal, TruncGauss1D

logs = st.floats(-50, 50)


@given(logs, logs, logs, logs)
def test_mh_acceptance_matches_naive(lx, ly, lqxy, lqyx):
    naive = min(1.0, math.exp(ly + lqxy) / math.exp(lx + lqyx))
    assert mh_acceptance(lx, ly, lqxy, lqyx) == pytest.approx(naive, rel=1e-9, abs=1e-300)


@given(logs, logs)
def test_barker_acceptance_matches_naive(a, b):
    naive = math.exp(a) / (math.exp(a) + math.exp(b))
    assert barker_acceptance(a, b) == pytest.approx(naive, rel=1e-9, abs=1e-300)


def test_barker_acceptance_large_magnitudes():
    assert barker_acceptance(-2000.0, -2000.0) == 0.5
    assert barker_acceptance(-1000.0, -1001.0) == pytest.approx(1 / (1 + math.exp(-1)))
    assert barker_acceptance(1e4, -1e4) == 1.0


def test_acceptance_edge_cases():
    assert mh_acceptance(0.0, -math.inf, 0.0, 0.0) == 0.0
    with pytest.raises(InvalidStateError):
        mh_acceptance(-math.inf, 0.0, 0.0, 0.0)
    with pytest.raises(InvalidStateError):
        barker_acceptance(-math.inf, -math.inf)
    assert barker_acceptance(0.0, -math.inf) == 1.0


@pytest.mark.parametrize("kernel", ["mh-exact", "barker-exact", "barker-bf"])
def test_chain_shapes_and_moves(rng, kernel):
    t = gamma_target()
    trace = run_chain(t, TruncGauss1D(9.0, 0.0, math.inf), kernel, 3000, rng, 1.0, keep_loops=True)
    s = trace.states[:, 0]
    assert trace.states.shape == (3001, 1)
    assert trace.accepted.shape == (3000,)
    moved = s[1:] != s[:-1]
    # continuous state: a repeat happens exactly on rejection
    assert np.array_equal(moved, trace.accepted)
    assert (s > 0).all()
    if kernel == "barker-bf":
        assert (trace.loops >= 1).all()
    else:
        assert (trace.loops == 0).all()


def test_run_chain_rejects_bad_start(rng):
    with pytest.raises(InvalidStateError):
        run_chain(gamma_target(), TruncGauss1D(1.0, 0.0, math.inf), "barker-bf", 10, rng, -1.0)


def test_unknown_kernel(rng):
    with pytest.raises(ValueError):
        make_stepper("nope", lambda x: 0.0, GaussianRandomWalk(1.0), rng)


def test_mh_exact_needs_tractable_proposal(rng):
    prop = RamProposal(lambda x: 0.0, 1.0, epsilon=1.0)
    with pytest.raises(ValueError):
        make_stepper("mh-exact", lambda x: 0.0, prop, rng)


def test_timeout_reports_chain_step():
    class Hopeless:
        tractable = False

        def sample(self, x, rng):
            return x

        def log_qtilde(self, y, x):
            return 0.0

        def log_bound(self, x):
            return 0.0

        def normalizer_coin(self, x, lp_x=None):
            class Never:
                def flip(self, rng):
                    return 0
            return Never()

    with pytest.raises(FactoryTimeout) as info:
        run_chain(lambda x: 0.0, Hopeless(), "barker-bf", 5, RngStream(1), 0.0, max_loops=20)
    assert info.value.step == 0


def test_two_coin_chain_reproduces_discrete_transition_matrix():
    t = discrete.discrete_target()
    prop = discrete.DiscreteProposal()
    n = 60000
    trace = run_chain(t, prop, "barker-bf", n, RngStream(3), 0)
    s = trace.states[:, 0].astype(int)
    counts = np.zeros((3, 3))
    np.add.at(counts, (s[:-1], s[1:]), 1)
    P_hat = counts / counts.sum(axis=1, keepdims=True)
    P = discrete.exact_transition_matrix()
    se = np.sqrt(P * (1 - P) / counts.sum(axis=1, keepdims=True))
    assert (np.abs(P_hat - P) < 4 * se + 1e-12).all()


def test_ram_aux_symmetric_case_always_accepts(rng):
    # flat target: pi(y) = pi(x) and pi(z) = pi(z*), so the ratio is 1
    prop = RamProposal(lambda x: 0.0, 1.0, epsilon=1.0)
    state = AuxiliaryState(0.0, 0.3)
    for _ in range(100):
        state, acc, loops, _ = ram_auxiliary_step(state, prop, rng)
        assert acc == 1 and loops == 1


def test_ram_aux_chain_runs(rng):
    t = gamma_target()
    prop = RamProposal(t, 1.0, epsilon=1e-4)
    trace = run_chain(t, prop, "ram-aux", 2000, rng, 1.0, keep_loops=True)
    assert 0 < trace.accepted.mean() <= 1
    assert (trace.loops >= 1).all()


def test_block_chain_shapes(rng):
    target = lambda x: -0.5 * float(x @ x)  # noqa: E731
    blocks = [slice(0, 2), slice(2, 4)]
    trace = run_block_chain(target, np.zeros(4), blocks, lambda c: RamProposal(c, np.eye(2), epsilon=1e-3),
                            "barker-bf", 500, rng, burn_in=10, keep_loops=True)
    assert trace.states.shape == (501, 4)
    assert trace.accepted.shape == (500, 2)
    assert trace.loops.shape == (500, 2)
    assert len(trace.loop_stats) == 2
    # a block that rejects leaves its coordinates unchanged
    for j, idx in enumerate(blocks):
        still = ~trace.accepted[:, j]
        assert np.array_equal(trace.states[1:][still][:, idx], trace.states[:-1][still][:, idx])


def test_tune_scale_hits_goal(rng):
    t = gamma_target()
    family = lambda h: TruncGauss1D(h, 0.0, math.inf)  # noqa: E731
    h = tune_scale(t, family, "barker-exact", 0.3, 3000, rng, 1.0, scale0=4.0)
    rate = run_chain(t, family(h), "barker-exact", 20000, RngStream(9), 1.0).accepted.mean()
    assert abs(rate - 0.3) < 0.03


def test_tune_scale_failure_is_explicit(rng):
    t = gamma_target()
    family = lambda h: TruncGauss1D(h, 0.0, math.inf)  # noqa: E731
    with pytest.raises(TuningFailure):
        tune_scale(t, family, "barker-exact", 0.99, 500, rng, 1.0, max_rounds=3)


def test_exact_and_two_coin_barker_agree_per_pair():
    t = discrete.discrete_target()
    prop = discrete.DiscreteProposal()
    rng_bf, rng_ex = RngStream(12, 0), RngStream(12, 1)
    n = 20000
    for x in range(3):
        for y in range(3):
            f_bf, _ = two_coin_pair(t, prop, x, y, n, rng_bf)
            lq_yx = prop.log_qtilde(y, x) - prop.log_normalizer(x)
            lq_xy = prop.log_qtilde(x, y) - prop.log_normalizer(y)
            a = barker_acceptance(t(y) + lq_xy, t(x) + lq_yx)
            f_ex = sum(rng_ex.uniform() < a for _ in range(n)) / n
            pooled = (f_bf + f_ex) / 2
            z = (f_bf - f_ex) / math.sqrt(2 * pooled * (1 - pooled) / n)
            assert abs(z) < 3, (x, y, z)
