import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from twocoin.distributions import RngStream
from twocoin.models import mixture_target
from twocoin.proposals import (
    GaussianRandomWalk,
    ProposalSamplingError,
    RamProposal,
    TruncGauss1D,
    TruncGaussOrthant,
    default_log_epsilon,
)


def _erf_mass(x, h, lo, hi):
    """P(lo < N(x, h) < hi) from math.erf, independent of scipy."""
    s = math.sqrt(2 * h)
    F = lambda t: 0.5 * (1 + math.erf((t - x) / s))  # noqa: E731
    return (F(hi) if hi < math.inf else 1.0) - (F(lo) if lo > -math.inf else 0.0)


@given(st.floats(-3, 6), st.floats(0.1, 30))
@settings(max_examples=60)
def test_truncgauss_normalizer_matches_erf(x, h):
    prop = TruncGauss1D(h, 0.0, math.inf)
    assert math.exp(prop.log_normalizer(x)) == pytest.approx(_erf_mass(x, h, 0.0, math.inf), rel=1e-9)


def test_truncgauss_two_sided_normalizer():
    prop = TruncGauss1D(2.0, -1.0, 3.0)
    assert math.exp(prop.log_normalizer(0.5)) == pytest.approx(_erf_mass(0.5, 2.0, -1.0, 3.0), rel=1e-12)


def test_truncgauss_samples_in_support(rng):
    prop = TruncGauss1D(4.0, 0.0, math.inf)
    ys = [prop.sample(0.1, rng) for _ in range(2000)]
    assert min(ys) > 0


@pytest.mark.parametrize("x", [0.2, 1.0, 3.0])
def test_truncgauss_coins_hit_normalizer(rng, x):
    prop = TruncGauss1D(9.0, 0.0, math.inf)
    r = _erf_mass(x, 9.0, 0.0, math.inf)
    n = 20000
    se = math.sqrt(r * (1 - r) / n)
    for coin in (prop.normalizer_coin(x), prop.envelope_coin(x)):
        freq = sum(coin.flip(rng) for _ in range(n)) / n
        assert abs(freq - r) < 4 * se


def test_truncgauss_log_qtilde_off_support():
    prop = TruncGauss1D(1.0, 0.0, math.inf)
    assert prop.log_qtilde(-0.5, 1.0) == -math.inf


def test_truncgauss_sampling_error():
    prop = TruncGauss1D(1e-4, 0.0, 1.0, max_attempts=100)
    with pytest.raises(ProposalSamplingError):
        prop.sample(-5.0, RngStream(0))


def test_truncgauss_invalid_parameters():
    with pytest.raises(ValueError):
        TruncGauss1D(0.0)
    with pytest.raises(ValueError):
        TruncGauss1D(1.0, 2.0, 1.0)


def test_random_walk_logpdf_matches_formula():
    prop = GaussianRandomWalk(np.array([[2.0, 0.3], [0.3, 1.0]]))
    x, y = np.array([0.1, -0.2]), np.array([1.0, 0.5])
    cov = prop.cov
    d = y - x
    ref = -math.log(2 * math.pi) - 0.5 * math.log(np.linalg.det(cov)) - 0.5 * d @ np.linalg.solve(cov, d)
    assert prop.log_qtilde(y, x) == pytest.approx(ref, abs=1e-12)


def test_orthant_samples_and_coin(rng):
    Sigma = np.array([[1.0, 0.5], [0.5, 1.0]])
    prop = TruncGaussOrthant(Sigma)
    x = np.array([0.0, 0.0]) + 1e-12
    ys = np.array([prop.sample(x, rng) for _ in range(500)])
    assert (ys > 0).all()
    # Orthant mass of a bivariate normal at the origin: 1/4 + arcsin(rho) / (2 pi)
    r = 0.25 + math.asin(0.5) / (2 * math.pi)
    n = 20000
    coin = prop.normalizer_coin(x)
    freq = sum(coin.flip(rng) for _ in range(n)) / n
    assert abs(freq - r) < 4 * math.sqrt(r * (1 - r) / n)


def test_ram_flat_target_always_accepts_inner_moves(rng):
    prop = RamProposal(lambda x: 0.0, 1.0, epsilon=1e-3)
    for _ in range(200):
        _, down, up = prop.downup(0.0, rng)
        assert (down, up) == (1, 1)


def test_ram_flat_target_step_is_two_step_walk(rng):
    prop = RamProposal(lambda x: 0.0, 1.0, epsilon=1e-3)
    ys = np.array([prop.sample(0.0, rng) for _ in range(20000)])
    assert abs(ys.var() - 2.0) < 0.1


def _downhill_mass(log_target, x, sd, log_eps):
    lpe = lambda v: np.logaddexp(log_target(v), log_eps)  # noqa: E731
    lx = lpe(x)

    def integrand(v):
        dens = math.exp(-0.5 * ((v - x) / sd) ** 2) / (sd * math.sqrt(2 * math.pi))
        return dens * min(1.0, math.exp(lx - lpe(v)))

    return integrate.quad(integrand, x - 12 * sd, x + 12 * sd, points=[-5, 5], limit=200)[0]


@pytest.mark.parametrize("x", [5.0, 3.0, 0.0])
def test_ram_down_coin_matches_quadrature(rng, x):
    t = mixture_target()
    log_eps = default_log_epsilon(t, 5.0)
    prop = RamProposal(t, 1.5**2, log_epsilon=log_eps)
    mass = _downhill_mass(t, x, 1.5, log_eps)
    n = 20000
    coin = prop.normalizer_coin(x, t(x))
    freq = sum(coin.flip(rng) for _ in range(n)) / n
    mass = min(mass, 1.0)
    assert abs(freq - mass) < 4 * math.sqrt(mass * (1 - mass) / n) + 1e-6


def test_ram_epsilon_arguments():
    with pytest.raises(ValueError):
        RamProposal(lambda x: 0.0, 1.0)
    with pytest.raises(ValueError):
        RamProposal(lambda x: 0.0, 1.0, epsilon=1.0, log_epsilon=0.0)
    assert RamProposal(lambda x: 0.0, 1.0, epsilon=0.5).epsilon == pytest.approx(0.5)


def _phi(z):
    return 0.5 * (1 + math.erf(z / math.sqrt(2)))


def _coin_freq(coin, rng, n):
    return sum(coin.flip(rng) for _ in range(n)) / n


def test_halfline_coin_hits_phi_one(rng):
    n = 100000
    p = _phi(1.0)
    freq = _coin_freq(TruncGauss1D(1.0, 0.0, math.inf).normalizer_coin(1.0), rng, n)
    assert abs(freq - p) < 3 * math.sqrt(p * (1 - p) / n)


def test_untruncated_coin_always_heads(rng):
    prop = TruncGauss1D(2.0)
    assert _coin_freq(prop.normalizer_coin(0.3), rng, 1000) == 1.0


@pytest.mark.parametrize("x, p", [((1.0, 1.0), _phi(1.0) ** 2), ((0.0, 0.0), 0.25)])
def test_orthant_coin_independent_case(rng, x, p):
    n = 100000
    freq = _coin_freq(TruncGaussOrthant(np.eye(2)).normalizer_coin(np.array(x)), rng, n)
    assert abs(freq - p) < 3 * math.sqrt(p * (1 - p) / n)


def test_orthant_1d_matches_halfline(rng):
    a, b = TruncGaussOrthant(np.array([[2.0]])), TruncGauss1D(2.0, 0.0, math.inf)
    y = np.array([0.7])
    assert a.log_qtilde(y, np.array([0.4])) == pytest.approx(b.log_qtilde(0.7, 0.4), abs=1e-14)


def test_ram_down_coin_standard_normal_against_plain_mc(rng):
    log_target = lambda x: -0.5 * x * x  # noqa: E731
    prop = RamProposal(log_target, 1.0, epsilon=1e-6)
    g = np.random.default_rng(99)
    m = g.standard_normal(10**6)
    eps = 1e-6
    oracle = np.minimum(1.0, (1.0 + eps) / (np.exp(-0.5 * m * m) + eps)).mean()
    n = 100000
    freq = _coin_freq(prop.normalizer_coin(0.0), rng, n)
    assert abs(freq - oracle) < 3 * math.sqrt(oracle * (1 - oracle) / n) + 1e-12


def test_ram_down_step_moves_toward_valley(rng):
    t = mixture_target()
    prop = RamProposal(t, 1.0, log_epsilon=default_log_epsilon(t, 5.0))
    lpe5 = prop.lpe(5.0)
    downs = [prop.forced_down(5.0, lpe5, rng)[1] for _ in range(10000)]
    assert np.median(downs) < lpe5


def test_truncgauss_conditional_mean_against_naive_rejection(rng):
    prop = TruncGauss1D(1.0, 0.0, math.inf)
    g = np.random.default_rng(7)
    z = 0.3 + g.standard_normal(10**6)
    ref = z[z > 0]
    n = 50000
    ys = np.array([prop.sample(0.3, rng) for _ in range(n)])
    se = math.sqrt(ref.var() / n + ref.var() / ref.size)
    assert abs(ys.mean() - ref.mean()) < 3 * se


def test_orthant_conditional_mean_against_naive_rejection(rng):
    Sigma = np.array([[1.0, 0.4], [0.4, 0.5]])
    prop = TruncGaussOrthant(Sigma)
    x = np.array([0.2, 0.4])
    g = np.random.default_rng(8)
    z = x + g.multivariate_normal(np.zeros(2), Sigma, size=10**6)
    ref = z[(z > 0).all(axis=1)]
    n = 30000
    ys = np.array([prop.sample(x, rng) for _ in range(n)])
    se = np.sqrt(ref.var(axis=0) / n + ref.var(axis=0) / len(ref))
    assert (np.abs(ys.mean(axis=0) - ref.mean(axis=0)) < 3 * se).all()


def test_normalizer_coins_never_violate_bounds(rng):
    # b = 1 for every shipped proposal, so the envelope coin never exceeds 1
    coin = TruncGauss1D(3.0, 0.0, 2.0).envelope_coin(0.5)
    for _ in range(20000):
        coin.flip(rng)
