import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tggfdr import (
    DistributionSpec,
    DomainError,
    estimate_risk,
    fixed_threshold,
    make_config,
    survival,
    trial_metrics,
)
from tggfdr.instance import Dataset
from tggfdr.metrics import simulate_trials, summarize

G2 = DistributionSpec(2.0)


def test_trial_metrics_examples():
    cfg = make_config(4, 0.5, 0.5, 2)
    d = Dataset(x=np.array([3.0, 0.5, 2.5, -1.0]),
                is_signal=np.array([True, True, False, False]), config=cfg)
    tm = trial_metrics(fixed_threshold(d, 2.0), 2)
    assert tm.fdp == 0.5 and tm.fnp == 0.5
    tm = trial_metrics(fixed_threshold(d, 10.0), 2)
    assert tm.fdp == 0.0 and tm.fnp == 1.0
    with pytest.raises(DomainError):
        trial_metrics(fixed_threshold(d, 2.0), 3)


def test_reject_all_gives_null_fraction():
    cfg = make_config(1000, 0.5, 0.6, 2)
    est = estimate_risk(cfg, G2, "fixed", -1e9, trials=20, master_seed=3)
    assert est.fdr == pytest.approx((cfg.n - cfg.m) / cfg.n, rel=1e-15)
    assert est.fnr == 0.0 and est.fdr_se == 0.0


def test_infinite_threshold_is_pure_miss():
    cfg = make_config(1000, 0.5, 0.6, 2)
    est = estimate_risk(cfg, G2, "fixed", math.inf, trials=5, master_seed=3)
    assert (est.fdr, est.fnr, est.risk) == (0.0, 1.0, 1.0)


def test_fixed_threshold_fnr_matches_closed_form():
    # each signal is missed with probability 1 - Psi(tau - mu)
    cfg = make_config(400, 0.5, 0.6, 2)
    tau = 3.0
    est = estimate_risk(cfg, G2, "fixed", tau, trials=10_000, master_seed=11)
    expected = 1.0 - survival(G2, tau - cfg.mu)
    assert abs(est.fnr - expected) <= 4 * est.fnr_se
    assert est.risk == est.fdr + est.fnr


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31))
def test_summary_is_order_independent(seed):
    rng = np.random.default_rng(seed)
    fdp, fnp = rng.random(257), rng.random(257) ** 3
    base = summarize(fdp, fnp)
    perm = rng.permutation(257)
    assert summarize(fdp[perm], fnp[perm]) == base
    assert summarize(fdp[::-1], fnp[::-1]) == base


def test_parallel_matches_serial():
    cfg = make_config(500, 0.4, 0.7, 2)
    a = simulate_trials(cfg, G2, "bh", 0.1, 37, master_seed=5, n_jobs=1)
    b = simulate_trials(cfg, G2, "bh", 0.1, 37, master_seed=5, n_jobs=2)
    assert a.tobytes() == b.tobytes()
    c = simulate_trials(cfg, G2, "bh", 0.1, 37, master_seed=6, n_jobs=1)
    assert a.tobytes() != c.tobytes()


def test_prefix_of_trials_is_stable():
    cfg = make_config(300, 0.4, 0.7, 2)
    a = simulate_trials(cfg, G2, "bc", 0.2, 10, master_seed=9)
    b = simulate_trials(cfg, G2, "bc", 0.2, 25, master_seed=9)
    np.testing.assert_array_equal(a, b[:10])


def test_domain_errors():
    cfg = make_config(100, 0.4, 0.7, 2)
    with pytest.raises(DomainError):
        estimate_risk(cfg, G2, "bh", 0.1, trials=1, master_seed=0)
    with pytest.raises(DomainError):
        summarize([0.1], [0.2])
    with pytest.raises(DomainError):
        estimate_risk(cfg, G2, "bh", 1.5, trials=3, master_seed=0)
    with pytest.raises(DomainError):
        estimate_risk(cfg, G2, "magic", 0.1, trials=3, master_seed=0)
