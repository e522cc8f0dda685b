"""Pulse-compression radar DSP with direct-path referencing of uncertain transmit delay."""

__version__ = "0.1.0"

from .alignment import RangeEntry, RangeReport, detect_reference, realign, report_ranges
from .channel import (
    ChannelConfig,
    FixedDelay,
    RadarParams,
    Target,
    UniformDelay,
    bin_to_range,
    draw_delay,
    range_to_bin,
    simulate_received,
    trial_rng,
)
from .codes import BipolarSequence, PaddedCode, barker, build_pnc128, kronecker_product, repeat_symbols
from .correlator import AScan, circular_xcorr_direct, circular_xcorr_fft, find_peaks, to_ascan
from .iq import ingest_iq, read_iq, write_iq
from .scenario import Scenario, load_scenario
from .simulation import TrialRecord, process_window, run_monte_carlo
from .export import export_results
