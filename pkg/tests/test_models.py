import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from twocoin.distributions import RngStream
from twocoin.models import cox, discrete, sensor
from twocoin.models import gamma_target, mixture_target


# ---------------------------------------------------------------- Cox process


def _naive_cox_log_posterior(model, xi):
    """Loop-based re-implementation: sum log Lambda(x) - N0 * int Lambda - prior."""
    if any(v <= 0 for v in xi):
        return -math.inf
    ll = 0.0
    for obs in model.observations:
        for x in obs:
            lam = sum(cox.cox_basis(x, j, model) * xi[j] for j in range(model.m))
            ll += math.log(lam)
    integral = float(np.trapezoid(xi, model.knots))
    ll -= len(model.observations) * integral
    cov = model.gamma + model.jitter * model.sigma2 * np.eye(model.m)
    ll -= 0.5 * float(xi @ np.linalg.solve(cov, xi))
    return ll


@pytest.fixture(scope="module")
def cox_model():
    obs = cox.simulate_cox_data(cox.benchmark_intensity, RngStream(11), n0=3)
    return cox.CoxModel(6, obs)


def test_cox_knots_and_weights(cox_model):
    assert cox_model.knots[0] == 0.0 and cox_model.knots[-1] == 50.0
    assert cox_model.c_weights.sum() == pytest.approx(50.0)


@given(st.lists(st.floats(0.05, 3.0), min_size=6, max_size=6))
@settings(max_examples=30, deadline=None)
def test_cox_log_posterior_matches_naive(cox_model, xi):
    xi = np.array(xi)
    ref = _naive_cox_log_posterior(cox_model, xi)
    assert cox.cox_log_posterior(cox_model, xi) == pytest.approx(ref, rel=1e-10, abs=1e-10)


def test_cox_log_posterior_off_orthant(cox_model):
    xi = np.ones(6)
    xi[2] = -0.1
    assert cox.cox_log_posterior(cox_model, xi) == -math.inf


def test_cox_integral_is_exact_for_piecewise_linear(cox_model):
    xi = np.linspace(0.2, 1.7, 6)
    quad = integrate.quad(lambda x: cox_model.intensity(xi, [x])[0], 0, 50,
                          points=cox_model.knots[1:-1], limit=200)[0]
    assert float(cox_model.c_weights @ xi) == pytest.approx(quad, rel=1e-10)


def test_cox_basis_partition_of_unity(cox_model):
    x = np.linspace(0, 50, 101)
    assert np.allclose(cox_model.basis_matrix(x).sum(axis=1), 1.0)


def test_thinning_counts_match_intensity_integral():
    n0 = 40
    obs = cox.simulate_cox_data(cox.benchmark_intensity, RngStream(5), n0=n0)
    mass = integrate.quad(cox.benchmark_intensity, 0, 50)[0]
    total = sum(len(o) for o in obs)
    assert abs(total - n0 * mass) < 4 * math.sqrt(n0 * mass)
    assert all(((o >= 0) & (o <= 50)).all() for o in obs)


def test_thinning_rejects_bad_bound():
    with pytest.raises(ValueError):
        cox.simulate_cox_data(cox.benchmark_intensity, RngStream(5), n0=2, lam_max=0.5)


def test_events_csv_roundtrip(tmp_path):
    obs = cox.simulate_cox_data(cox.benchmark_intensity, RngStream(5), n0=3)
    cox.write_events_csv(obs, tmp_path / "ev.csv")
    back = cox.read_events_csv(tmp_path / "ev.csv", 3)
    assert all(np.array_equal(a, b) for a, b in zip(obs, back))


def test_inexact_mh_zero_policy(cox_model):
    prop = cox_model.proposal(5.0)
    x = np.full(6, 1e-3)
    raising = cox.InexactCoxMH(cox_model.log_posterior, prop, RngStream(1), mc_samples=1)
    with pytest.raises(cox.DegenerateEstimateError):
        for _ in range(200):
            x, lp, _, _ = raising.step(x, cox_model.log_posterior(x))
    limiting = cox.InexactCoxMH(cox_model.log_posterior, prop, RngStream(1), mc_samples=1,
                                zero_policy="limit")
    x = np.full(6, 1e-3)
    for _ in range(200):
        x, lp, _, _ = limiting.step(x, cox_model.log_posterior(x))
    assert (x > 0).all()


def test_inexact_mh_step_wrapper(cox_model):
    x, a = cox.inexact_mh_cox_step(cox_model, np.ones(6), cox_model.proposal(0.01).Sigma,
                                   RngStream(2), mc_samples=50)
    assert x.shape == (6,) and a in (0, 1)


# ---------------------------------------------------------------- sensors


def _naive_sensor_log_posterior(data, locations):
    pos = data.positions(locations)
    n = len(pos)
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            d = math.dist(pos[i], pos[j])
            p = math.exp(-d * d / (2 * data.obs_scale**2))
            if data.w[i, j]:
                s = data.noise_sd
                total += math.log(p) - 0.5 * ((data.y_dist[i, j] - d) / s) ** 2 \
                    - math.log(s * math.sqrt(2 * math.pi))
            elif p == 1.0:
                return -math.inf
            else:
                total += math.log(1 - p)
    total -= 0.5 * sum(v * v for v in locations) / data.prior_sd**2
    return total


@pytest.fixture(scope="module")
def sensor_data():
    return sensor.simulate_sensor_data(sensor.TRUE_LOCATIONS, RngStream(4))


@given(st.lists(st.floats(-1.0, 2.0), min_size=8, max_size=8))
@settings(max_examples=30, deadline=None)
def test_sensor_log_posterior_matches_naive(sensor_data, locs):
    locs = np.array(locs)
    ref = _naive_sensor_log_posterior(sensor_data, locs)
    assert sensor.sensor_log_posterior(sensor_data, locs) == pytest.approx(ref, rel=1e-10, abs=1e-10)


def test_sensor_csv_roundtrip(tmp_path, sensor_data):
    sensor.write_sensor_csv(sensor_data, tmp_path / "pairs.csv")
    back = sensor.read_sensor_csv(tmp_path / "pairs.csv", sensor_data.known_locations)
    assert np.array_equal(back.w, sensor_data.w)
    obs = sensor_data.w == 1
    assert np.array_equal(back.y_dist[obs], sensor_data.y_dist[obs])


def test_sensor_data_validation():
    w = np.zeros((6, 6), dtype=int)
    w[0, 1] = 1
    with pytest.raises(ValueError):
        sensor.SensorData(sensor.TRUE_LOCATIONS[4:], w, np.zeros((6, 6)))


# ---------------------------------------------------------------- toy targets


def test_gamma_target_support():
    t = gamma_target()
    assert t(-1.0) == -math.inf
    assert t(2.0) - t(1.0) == pytest.approx(math.log(2) - 1)


def test_mixture_is_normalized():
    t = mixture_target()
    mass = integrate.quad(lambda x: math.exp(t(x)), -20, 20, points=[-5, 5])[0]
    assert mass == pytest.approx(1.0, abs=1e-10)


# ---------------------------------------------------------------- discrete oracle


def test_exact_barker_single_pair_by_hand():
    # x=0, y=2: pi(2) q(0|2) = 0.5 * 1/6, pi(0) q(2|0) = 0.2 * 3/6
    num, den = 0.5 / 6, 0.2 * 0.5
    assert discrete.exact_barker()[0, 2] == pytest.approx(num / (num + den), abs=1e-15)


@pytest.mark.parametrize("q", [discrete.QTILDE, discrete.QTILDE_ALT])
def test_transition_matrix_detailed_balance(q):
    P = discrete.exact_transition_matrix(qtilde=q)
    pi = np.array(discrete.PI)
    assert np.allclose(P.sum(axis=1), 1.0)
    flow = pi[:, None] * P
    assert np.allclose(flow, flow.T, atol=1e-15)


def test_discrete_proposal_samples_row_law(rng):
    prop = discrete.DiscreteProposal()
    n = 30000
    counts = np.bincount([prop.sample(0, rng) for _ in range(n)], minlength=3)
    expect = np.array(discrete.QTILDE[0]) / sum(discrete.QTILDE[0])
    assert (np.abs(counts / n - expect) < 4 * np.sqrt(expect * (1 - expect) / n)).all()
