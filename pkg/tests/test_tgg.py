import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tggfdr import DistributionSpec, DomainError, inverse_survival, log_survival, sample, survival
from tggfdr import tgg

G1 = DistributionSpec(gamma=1.0)
G2 = DistributionSpec(gamma=2.0)


def test_survival_examples():
    assert survival(G2, 0.0) == 0.5
    assert survival(G1, math.log(2)) == pytest.approx(0.25, rel=1e-15)
    # 0.5 * exp(-4.5), evaluated with mpmath at 40 digits
    assert survival(G2, 3.0) == pytest.approx(0.005554498269121153248, rel=1e-14)


def test_log_survival_examples():
    assert log_survival(G2, 0.0) == pytest.approx(math.log(0.5), rel=1e-15)
    assert log_survival(G1, 40.0) == pytest.approx(-40 - math.log(2), rel=1e-15)
    assert log_survival(G2, 10.0) == pytest.approx(-50 - math.log(2), rel=1e-15)


def test_log_survival_matches_log_of_survival():
    t = np.linspace(-30, 30, 601)
    for spec in (G1, G2, DistributionSpec(gamma=1.5)):
        s = survival(spec, t)
        ok = s > 1e-300
        np.testing.assert_allclose(log_survival(spec, t)[ok], np.log(s[ok]), rtol=1e-12, atol=1e-15)


def test_survival_saturates_below_floor():
    assert survival(G1, 800.0) == 0.0
    assert log_survival(G1, 800.0) == pytest.approx(-800 - math.log(2))


def test_inverse_survival_examples():
    assert inverse_survival(G2, 0.5) == 0.0
    assert inverse_survival(G1, 0.25) == pytest.approx(math.log(2), rel=1e-15)
    # sqrt(2 log 5000) from mpmath
    assert inverse_survival(G2, 1e-4) == pytest.approx(4.127273480499259920, rel=1e-14)


@pytest.mark.parametrize("gamma", [1.0, 1.5, 2.0, 3.0])
def test_round_trip_grid(gamma):
    spec = DistributionSpec(gamma=gamma)
    for k in range(1, 13):
        p = 10.0 ** -k
        assert abs(survival(spec, inverse_survival(spec, p)) - p) <= 1e-10
        assert abs(survival(spec, inverse_survival(spec, 1 - p)) - (1 - p)) <= 1e-10


@settings(max_examples=200, deadline=None)
@given(st.floats(-20, 20), st.floats(1e-6, 5), st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_survival_strictly_decreasing(t, dt, gamma):
    spec = DistributionSpec(gamma=gamma)
    lo, hi = log_survival(spec, t), log_survival(spec, t + dt)
    assert hi <= lo
    # strict once the step is visible at double precision
    if dt > 1e-3 and t > -3:
        assert hi < lo


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-12, 1 - 1e-12), st.floats(1e-12, 1 - 1e-12))
def test_inverse_survival_monotone(p1, p2):
    if p1 < p2:
        assert inverse_survival(G2, p1) >= inverse_survival(G2, p2)


def test_tail_sandwich_has_constant_two():
    for spec in (G1, G2, DistributionSpec(gamma=3.0)):
        t = np.linspace(-6, 6, 121)
        s = survival(spec, t)
        expected = np.exp(-np.abs(t) ** spec.gamma / spec.gamma) / 2
        np.testing.assert_allclose(np.minimum(s, 1 - s), expected, rtol=1e-12, atol=1e-16)


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_non_finite_t_rejected(bad):
    with pytest.raises(DomainError):
        survival(G2, bad)
    with pytest.raises(DomainError):
        log_survival(G2, bad)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_inverse_survival_domain(p):
    with pytest.raises(DomainError):
        inverse_survival(G2, p)


def test_spec_invariants():
    with pytest.raises(DomainError):
        DistributionSpec(gamma=0.5)
    with pytest.raises(DomainError):
        DistributionSpec(gamma=2.0, z_lower=1.0, z_upper=2.0)
    DistributionSpec(gamma=2.0, z_lower=1.0, z_upper=1.0)


def test_sample_deterministic_and_count():
    a = sample(G2, np.random.default_rng(7), 1000)
    b = sample(G2, np.random.default_rng(7), 1000)
    assert a.shape == (1000,)
    np.testing.assert_array_equal(a, b)
    with pytest.raises(DomainError):
        sample(G2, np.random.default_rng(7), 0)


def test_sign_balance(spec):
    draws = sample(spec, np.random.default_rng(99), 10**6)
    assert abs(np.mean(draws > 0) - 0.5) <= 0.002


def test_dkw_bound_value():
    assert tgg.dkw_bound(10**6, 0.001) == pytest.approx(1.95e-3, abs=5e-6)


@pytest.mark.parametrize("gamma", [1.0, 1.5, 2.0, 3.0])
def test_sampler_matches_survival(gamma):
    spec = DistributionSpec(gamma=gamma)
    draws = sample(spec, np.random.default_rng(int(gamma * 10)), 10**6)
    assert tgg.ks_distance(spec, draws) <= tgg.dkw_bound(10**6, 0.001)
