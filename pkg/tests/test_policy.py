import numpy as np
import pytest

from conftest import make_link
from uplinksim.outage import outage_batch, outage_probability
from uplinksim.policy import (
    MTFR,
    OCFR,
    PolicyConfig,
    allocate_rates,
    fixed_rate_select,
    mtvr_rate,
    mtvr_rates,
    ocvr_rate,
    ocvr_rates,
    rate_to_threshold,
    threshold_to_rate,
)
from uplinksim.power import UplinkBatch

CFG = PolicyConfig()


def test_rate_threshold_map():
    assert rate_to_threshold(0.0) == 0.0
    assert rate_to_threshold(1.0) == pytest.approx(1.0, rel=1e-15)
    assert rate_to_threshold(2.0) == pytest.approx(3.0, rel=1e-15)


def test_rate_threshold_roundtrip():
    rng = np.random.default_rng(31)
    rates = rng.uniform(0.0, 10.0, 200)
    back = threshold_to_rate(rate_to_threshold(rates))
    assert np.allclose(back, rates, rtol=1e-12, atol=1e-12)


def test_ocvr_analytic_interference_free():
    # m0=1, no interference: outage = 1 - exp(-beta/(snr*signal))
    link = make_link(signal_power=1.0, m_desired=1, snr=10.0)
    rate, threshold, eps = ocvr_rate(link, 0.1)
    beta_star = -10.0 * np.log(0.9)
    assert threshold == pytest.approx(beta_star, abs=5e-4)
    assert rate == pytest.approx(np.log2(1.0 + beta_star), abs=2e-4)
    assert rate == pytest.approx(1.038, abs=2e-3)
    assert eps <= 0.1


def test_ocvr_maximality_postcheck():
    rng = np.random.default_rng(32)
    for _ in range(15):
        n = int(rng.integers(0, 8))
        link = make_link(
            signal_power=float(rng.lognormal(0, 1)),
            powers=rng.lognormal(-2.5, 1.2, n),
            m_desired=int(rng.integers(1, 4)),
            ms=rng.choice([1.0, 2.0, 3.0], n),
            snr=float(rng.uniform(2, 50)),
        )
        rate, _, eps = ocvr_rate(link, 0.1)
        assert eps <= 0.1
        if rate < CFG.rate_max:
            bumped = outage_probability(link, rate_to_threshold(rate + 10 * CFG.rate_tol))
            assert bumped > 0.1


def test_ocvr_caps_at_rate_max():
    link = make_link(signal_power=100.0, m_desired=1, snr=1e6)
    rate, _, eps = ocvr_rate(link, 0.5)
    assert rate == CFG.rate_max
    assert eps <= 0.5


def test_mtvr_saturates_without_interference():
    link = make_link(signal_power=10.0, m_desired=1, snr=1e8)
    rate, _, eps = mtvr_rate(link)
    assert rate == pytest.approx(CFG.rate_max, abs=1e-3)
    assert eps < 1e-3


def test_mtvr_collapses_when_snr_vanishes():
    link = make_link(signal_power=1e-3, m_desired=1, snr=1e-3)
    rate, _, eps = mtvr_rate(link)
    throughput = rate * (1.0 - eps)
    assert throughput < 1e-6


def test_mtvr_matches_dense_scan():
    # interference-free m0=1: throughput R * exp(-(2^R - 1)/(snr*signal))
    snr, signal = 10.0, 1.0
    link = make_link(signal_power=signal, m_desired=1, snr=snr)
    grid = np.arange(0.0, 10.0, 1e-4)
    scores = grid * np.exp(-(np.exp2(grid) - 1.0) / (snr * signal))
    best = grid[np.argmax(scores)]
    rate, _, eps = mtvr_rate(link)
    assert rate == pytest.approx(best, abs=1e-3)
    assert rate * (1.0 - eps) == pytest.approx(scores.max(), rel=1e-6)


def _batch(rng, n=12):
    links = []
    for _ in range(n):
        k = int(rng.integers(0, 10))
        links.append(
            make_link(
                signal_power=float(rng.lognormal(0, 0.7)),
                powers=float(rng.lognormal(0, 0.7)) * rng.lognormal(-3.3, 1.0, k),
                m_desired=int(rng.integers(1, 4)),
                ms=rng.choice([1.0, 2.0, 3.0], k),
                snr=float(rng.uniform(5, 20)),
            )
        )
    return UplinkBatch.from_instances(links)


def test_ocvr_batch_respects_constraint_everywhere():
    rng = np.random.default_rng(33)
    batch = _batch(rng, 30)
    rates, thresholds, eps = ocvr_rates(batch, CFG)
    assert np.all(eps <= CFG.outage_limit + 1e-12)
    assert np.allclose(thresholds, rate_to_threshold(rates), rtol=1e-12)


def test_mtvr_dominates_ocvr_throughput():
    rng = np.random.default_rng(34)
    batch = _batch(rng, 30)
    r_m, _, e_m = mtvr_rates(batch, CFG)
    r_o, _, e_o = ocvr_rates(batch, CFG)
    assert np.all(r_m * (1 - e_m) >= r_o * (1 - e_o) - 2e-3)


def test_throughput_identity_bounds():
    rng = np.random.default_rng(35)
    batch = _batch(rng, 20)
    for kind in ("mtfr", "ocfr", "mtvr", "ocvr"):
        rates, thresholds, eps, fixed = allocate_rates(
            batch, PolicyConfig(kind=kind)
        )
        throughput = rates * (1.0 - eps)
        assert np.all(throughput >= 0.0)
        assert np.all(throughput <= rates + 1e-15)
        if kind in ("mtfr", "ocfr"):
            assert fixed is not None and np.all(rates == fixed)
        else:
            assert fixed is None


def test_single_uplink_ocfr_equals_ocvr():
    rng = np.random.default_rng(36)
    link = make_link(
        signal_power=1.2, powers=rng.lognormal(-3, 1, 5), m_desired=2,
        ms=rng.choice([1.0, 2.0], 5), snr=10.0,
    )
    batch = UplinkBatch.from_instances([link])
    common = fixed_rate_select(batch, OCFR, CFG)
    rate, _, _ = ocvr_rate(link, CFG.outage_limit)
    assert common == pytest.approx(rate, abs=CFG.rate_tol)


def test_ocfr_meets_mean_constraint():
    rng = np.random.default_rng(37)
    batch = _batch(rng, 25)
    rate = fixed_rate_select(batch, OCFR, CFG)
    mean_eps = float(np.mean(outage_batch(batch, rate_to_threshold(rate))))
    assert mean_eps <= CFG.outage_limit + 1e-9


def test_mtfr_beats_nearby_rates():
    rng = np.random.default_rng(38)
    batch = _batch(rng, 25)
    rate = fixed_rate_select(batch, MTFR, CFG)

    def mean_throughput(r):
        return r * float(np.mean(1.0 - outage_batch(batch, rate_to_threshold(r))))

    best = mean_throughput(rate)
    for delta in (-0.2, -0.05, 0.05, 0.2):
        r = min(max(rate + delta, CFG.rate_min), CFG.rate_max)
        assert best >= mean_throughput(r) - 1e-9


def test_policy_config_validation():
    with pytest.raises(ValueError):
        PolicyConfig(kind="bogus")
    with pytest.raises(ValueError):
        PolicyConfig(outage_limit=0.0)
    with pytest.raises(ValueError):
        PolicyConfig(rate_min=2.0, rate_max=1.0)
    with pytest.raises(ValueError):
        PolicyConfig(rate_ladder=())
    assert PolicyConfig(rate_ladder=(2.0, 0.5, 1.0)).rate_ladder == (0.5, 1.0, 2.0)


def test_rate_ladder_selection():
    rng = np.random.default_rng(39)
    batch = _batch(rng, 20)
    ladder = (0.25, 0.5, 1.0, 2.0, 4.0)
    cfg = PolicyConfig(rate_ladder=ladder)

    rates, _, eps = ocvr_rates(batch, cfg)
    assert np.all(np.isin(rates, (0.0,) + ladder))
    assert np.all(eps <= cfg.outage_limit + 1e-12)
    # maximality: the next ladder step violates the constraint
    steps = np.array([min([r for r in ladder if r > rate], default=np.nan) for rate in rates])
    has_next = ~np.isnan(steps)
    if np.any(has_next):
        eps_next = outage_batch(batch, rate_to_threshold(np.where(has_next, steps, 1.0)))
        assert np.all(eps_next[has_next] > cfg.outage_limit)

    rates_m, _, eps_m = mtvr_rates(batch, cfg)
    assert np.all(np.isin(rates_m, (0.0,) + ladder))
    scores = rates_m * (1 - eps_m)
    for r in ladder:
        other = r * (1 - outage_batch(batch, rate_to_threshold(r)))
        assert np.all(scores >= other - 1e-12)

    common = fixed_rate_select(batch, OCFR, cfg)
    assert common in (0.0,) + ladder
    assert float(np.mean(outage_batch(batch, rate_to_threshold(common)))) <= cfg.outage_limit
    best_fixed = fixed_rate_select(batch, MTFR, cfg)
    assert best_fixed in ladder
