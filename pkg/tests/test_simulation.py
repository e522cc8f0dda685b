import json
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from echoalign.channel import FixedDelay
from echoalign.scenario import load_scenario
from echoalign.simulation import TrialRecord, run_monte_carlo, run_trial, with_overrides

BASELINE = json.loads((Path(__file__).parent / "data" / "noise_baseline.json").read_text())


def test_noiseless_fig5_all_trials_succeed(fig5):
    result = run_monte_carlo(with_overrides(fig5, trials=300))
    assert result.summary.success_rate == 1.0
    for r in result.records:
        assert r.reference_detected == r.delay_drawn
        assert r.aligned_peak_bins == (0, 16, 32)
    assert result.aligned_magnitudes.shape == (300, 128)


def test_fixed_delay_zero_single_trial(fig5):
    sc = replace(fig5, trials=1, channel=replace(fig5.channel, delay_model=FixedDelay(0)))
    result = run_monte_carlo(sc)
    assert len(result.records) == 1
    assert result.records[0].reference_detected == 0
    assert result.records[0].delay_drawn == 0


def test_same_seed_same_hash(fig5):
    sc = with_overrides(fig5, trials=200)
    assert run_monte_carlo(sc).summary.reproducibility_hash == \
        run_monte_carlo(sc).summary.reproducibility_hash


def test_different_seed_different_hash():
    sc = with_overrides(load_scenario("fig5_noisy"), trials=50)
    a = run_monte_carlo(sc).summary.reproducibility_hash
    b = run_monte_carlo(with_overrides(sc, seed=1)).summary.reproducibility_hash
    assert a != b


def test_parallel_run_matches_serial():
    sc = with_overrides(load_scenario("fig5_noisy"), trials=120)
    serial = run_monte_carlo(sc)
    parallel = run_monte_carlo(sc, workers=4)
    assert serial.records == parallel.records
    assert serial.summary == parallel.summary
    assert serial.aligned_magnitudes.tobytes() == parallel.aligned_magnitudes.tobytes()


def test_trial_is_independent_of_run_length():
    sc = load_scenario("fig5_noisy")
    full = run_monte_carlo(with_overrides(sc, trials=40))
    record, mags = run_trial(sc, 33)
    assert record == full.records[33]
    assert np.array_equal(mags, full.aligned_magnitudes[33])


def test_summary_histograms(fig5):
    result = run_monte_carlo(with_overrides(fig5, trials=500))
    s = result.summary
    assert sum(s.delay_histogram) == 500
    assert len(s.delay_histogram) == 128
    assert s.peak_histogram[0] == s.peak_histogram[16] == s.peak_histogram[32] == 500
    assert sum(s.peak_histogram) == 1500
    assert s.expected_bins == (16, 32)


def test_success_means_superset():
    r = TrialRecord(0, 3, 3, (0, 5, 16, 32), True)
    assert set((16, 32)) <= set(r.aligned_peak_bins)


@pytest.mark.parametrize("run", BASELINE["runs"], ids=lambda r: f"sigma={r['noise_sigma']}")
def test_noisy_success_rate_regression(run):
    sc = load_scenario(run["scenario"])
    sc = replace(sc, trials=run["trials"],
                 channel=replace(sc.channel, noise_sigma=run["noise_sigma"], seed=run["seed"]))
    rate = run_monte_carlo(sc).summary.success_rate
    assert abs(rate - run["success_rate"]) * 100 <= BASELINE["tolerance_pp"]


def test_noisy_targets_recovered_in_99_percent():
    result = run_monte_carlo(load_scenario("fig5_noisy"))
    assert result.summary.trials == 1000
    assert result.summary.success_rate >= 0.99
