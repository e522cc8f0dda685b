import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from echoalign.alignment import (
    AlignmentError,
    RangeEntry,
    RangeReport,
    detect_reference,
    realign,
    report_ranges,
)
from echoalign.channel import ChannelConfig, RadarParams, simulate_received, trial_rng
from echoalign.correlator import circular_xcorr_fft, to_ascan
from echoalign.simulation import process_window
from oracles import local_peaks, three_path_magnitudes

# Peaks of the noiseless direct + 240 m + 480 m scan at relative threshold 0.1,
# computed with the brute-force oracle (see test_threshold_0p1_oracle).
PEAKS_AT_0P1 = [0, 6, 8, 10, 16, 18, 22, 32, 40, 120, 122, 126]


def _scan_for_delay(fig5, pnc, d):
    cfg = fig5.channel
    y = simulate_received(pnc, d, cfg, fig5.params, trial_rng(cfg.seed, 0))
    return to_ascan(circular_xcorr_fft(y, pnc.as_complex()))


def test_detect_reference_impulse():
    m = np.zeros(128)
    m[37] = 1.0
    assert detect_reference(to_ascan(m)) == 37


def test_detect_reference_tie_goes_to_lowest_bin():
    m = np.zeros(128)
    m[[10, 50]] = 4.0
    assert detect_reference(to_ascan(m)) == 10


def test_detect_reference_all_zero():
    with pytest.raises(AlignmentError, match="no reference detectable"):
        detect_reference(to_ascan(np.zeros(16)))


def test_detect_reference_every_delay(fig5, pnc):
    for d in range(128):
        assert detect_reference(_scan_for_delay(fig5, pnc, d)) == d


def test_realign_zero_is_identity(rng):
    scan = to_ascan(rng.standard_normal(32) + 1j * rng.standard_normal(32))
    out = realign(scan, 0)
    assert out.aligned and out.reference_bin == 0
    assert np.array_equal(out.correlation, scan.correlation)
    assert np.array_equal(out.magnitudes, scan.magnitudes)


def test_realign_inverts_shift(rng):
    a = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    for d in (1, 17, 63):
        out = realign(to_ascan(np.roll(a, d)), d)
        assert np.array_equal(out.correlation, a)


def test_realign_refuses_double_alignment(rng):
    scan = realign(to_ascan(rng.standard_normal(8)), 3)
    with pytest.raises(AlignmentError, match="already aligned"):
        realign(scan, 0)


def test_realign_bounds(rng):
    scan = to_ascan(rng.standard_normal(8))
    for bad in (-1, 8):
        with pytest.raises(AlignmentError):
            realign(scan, bad)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([1, 2, 8, 128]))
def test_realign_properties(seed, n):
    rng = np.random.default_rng(seed)
    scan = to_ascan(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    ref = detect_reference(scan)
    out = realign(scan, ref)
    assert detect_reference(out) == 0
    assert np.array_equal(np.sort(out.magnitudes), np.sort(scan.magnitudes))
    for k in range(n):
        assert out.magnitudes[k] == scan.magnitudes[(k + ref) % n]


def test_aligned_peaks_every_delay(fig5, pnc):
    for d in range(128):
        scan = _scan_for_delay(fig5, pnc, d)
        report = report_ranges(realign(scan, detect_reference(scan)), fig5.threshold, fig5.params)
        assert report.bins == [0, 16, 32]


def test_threshold_0p1_oracle():
    mags = three_path_magnitudes(0)
    assert mags[0] == pytest.approx(123.0)
    assert mags[16] == pytest.approx(75.4)
    assert mags[32] == pytest.approx(51.6)
    assert local_peaks(mags, 0.1) == PEAKS_AT_0P1
    assert local_peaks(mags, 0.25) == [0, 16, 32]


def test_aligned_report_at_0p1_includes_superposed_sidelobes(fig5, pnc):
    scan = _scan_for_delay(fig5, pnc, 77)
    report = report_ranges(realign(scan, 77), 0.1, fig5.params)
    assert report.bins == PEAKS_AT_0P1


def test_report_ranges_fig5(fig5, pnc):
    scan = _scan_for_delay(fig5, pnc, 91)
    report = report_ranges(realign(scan, detect_reference(scan)), 0.25, fig5.params)
    assert [(e.bin, e.range_m) for e in report.entries] == [(0, 0.0), (16, 240.0), (32, 480.0)]
    assert report.reference_bin_pre_alignment == 91
    assert report.entries[0].magnitude == pytest.approx(123.0)
    assert [e.range_m for e in report.target_entries] == [240.0, 480.0]


def test_report_direct_path_only(pnc, params):
    y = simulate_received(pnc, 12, ChannelConfig(), params, trial_rng(0, 0))
    report = process_window(y, pnc, params, 0.1).report
    assert [(e.bin, e.range_m) for e in report.entries] == [(0, 0.0)]


def test_report_requires_aligned_scan(params):
    with pytest.raises(AlignmentError, match="aligned"):
        report_ranges(to_ascan(np.ones(128)), 0.5, params)


def test_report_count_monotone_in_threshold(fig5, pnc):
    scan = _scan_for_delay(fig5, pnc, 5)
    aligned = realign(scan, detect_reference(scan))
    counts = [len(report_ranges(aligned, t, fig5.params).entries) for t in np.linspace(0.01, 1, 60)]
    assert all(a >= b for a, b in zip(counts, counts[1:]))
    assert counts[-1] == 1


def test_range_report_invariants():
    p = RadarParams()
    with pytest.raises(ValueError):
        RangeReport((RangeEntry(16, 240.0, 1.0),), 0, p)
    with pytest.raises(ValueError):
        RangeReport((RangeEntry(0, 0.0, 1.0), RangeEntry(16, 240.0, 2.0)), 0, p)
    with pytest.raises(ValueError):
        RangeReport((RangeEntry(0, 0.0, 3.0), RangeEntry(32, 480.0, 2.0), RangeEntry(16, 240.0, 1.0)), 0, p)


def test_delay_invariance_direct_correlator_is_bit_exact(fig5, pnc):
    base = None
    for d in range(128):
        cfg = fig5.channel
        y = simulate_received(pnc, d, cfg, fig5.params, trial_rng(0, 0))
        res = process_window(y, pnc, fig5.params, fig5.threshold, method="direct")
        if base is None:
            base = res.aligned.magnitudes
        assert res.aligned.magnitudes.tobytes() == base.tobytes()

