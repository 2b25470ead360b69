import math

import numpy as np
import pytest

from tggfdr import DistributionSpec, DomainError, from_pi1, generate, make_config
from tggfdr import instance, tgg


def test_make_config_examples():
    cfg = make_config(10_000, 0.5, 0.5, 2)
    assert cfg.m == 100
    # sqrt(log 10000), mpmath
    assert cfg.mu == pytest.approx(3.034854258770292702, rel=1e-14)
    assert cfg.pi1 == 0.01
    assert make_config(16, 0.5, 1.0, 1).m == 4
    assert make_config(100, 0.999999, 1.0, 2).m == 1


def test_make_config_rounds_half_to_even_and_clamps():
    assert make_config(2, 0.01, 1.0, 1).m == 2
    # 9^(1/2) = 3 exactly; 1e6^(1 - 0.9) = 3.98... rounds to 4
    assert make_config(9, 0.5, 1.0, 1).m == 3
    assert make_config(10**6, 0.9, 1.0, 1).m == 4


@pytest.mark.parametrize("args", [(1, 0.5, 0.5, 2), (100, 0.0, 0.5, 2), (100, 1.0, 0.5, 2),
                                  (100, 0.5, 0.0, 2), (100, 0.5, 0.5, 0.5)])
def test_make_config_domain(args):
    with pytest.raises(DomainError):
        make_config(*args)


def test_from_pi1():
    cfg = from_pi1(1000, 0.1, 0.5, 2)
    assert cfg.beta == pytest.approx(1 / 3, rel=1e-14)
    assert cfg.m == 100
    assert from_pi1(100, 0.5, 0.5, 2).beta == pytest.approx(0.150514997831990598, rel=1e-14)
    with pytest.raises(DomainError):
        from_pi1(1000, 0.6, 0.5, 2)
    with pytest.raises(DomainError):
        from_pi1(1000, 0.0, 0.5, 2)


def test_generate_labels_and_determinism():
    cfg = make_config(1000, 0.4, 0.7, 2)
    spec = DistributionSpec(2)
    a = generate(cfg, spec, 5)
    b = generate(cfg, spec, 5)
    assert a.x.shape == a.is_signal.shape == (1000,)
    assert a.is_signal.sum() == cfg.m
    assert a.is_signal[: cfg.m].all()
    assert a.x.tobytes() == b.x.tobytes()


def test_generate_random_placement():
    cfg = make_config(1000, 0.4, 0.7, 2)
    d = generate(cfg, DistributionSpec(2), 5, placement="random")
    assert d.is_signal.sum() == cfg.m
    assert not d.is_signal[: cfg.m].all()
    with pytest.raises(DomainError):
        generate(cfg, DistributionSpec(2), 5, placement="middle")


def test_all_signals_edge():
    cfg = make_config(2, 0.01, 1.0, 1)
    d = generate(cfg, DistributionSpec(1), 0)
    assert d.is_signal.all()


def test_gamma_mismatch():
    with pytest.raises(DomainError):
        generate(make_config(100, 0.5, 0.5, 2), DistributionSpec(1), 0)


def test_shift_property():
    cfg = make_config(10**6, 0.1, 0.5, 2)
    spec = DistributionSpec(2)
    d = generate(cfg, spec, 11)
    shifted = np.where(d.is_signal, d.x - cfg.mu, d.x)
    assert tgg.ks_distance(spec, shifted[d.is_signal]) <= tgg.dkw_bound(cfg.m, 0.001)


def test_signal_mean_clt_band():
    cfg = make_config(16, 0.5, 1.0, 2)
    spec = DistributionSpec(2)
    values = np.concatenate([generate(cfg, spec, np.random.default_rng(k)).x[:cfg.m]
                             for k in range(10_000)])
    sigma = values.std(ddof=1)
    assert abs(values.mean() - cfg.mu) <= 4 * sigma / math.sqrt(values.size)


def test_dataset_dump_round_trip(tmp_path):
    cfg = make_config(50, 0.5, 0.5, 2)
    d = generate(cfg, DistributionSpec(2), 3)
    path = tmp_path / "d.tsv"
    instance.write_dataset(d, path)
    assert path.read_text().splitlines()[0] == "index\tx\tis_signal"
    back = instance.read_dataset(path, cfg)
    np.testing.assert_array_equal(back.x, d.x)
    np.testing.assert_array_equal(back.is_signal, d.is_signal)
