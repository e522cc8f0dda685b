"""Raw IQ capture files: interleaved little-endian float32 (I, Q) pairs."""

from __future__ import annotations

import logging
import os

import numpy as np

from .channel import RadarParams

log = logging.getLogger(__name__)

IQ_DTYPE = np.dtype("<f4")
BYTES_PER_SAMPLE = 2 * IQ_DTYPE.itemsize


class IQFormatError(ValueError):
    pass


def write_iq(path, samples) -> None:
    """Write complex samples as interleaved float32 pairs.

    Samples are cast to single precision; values already representable in
    float32 survive a write/read round trip bit-for-bit.
    """
    x = np.asarray(samples, dtype=np.complex128).reshape(-1)
    pairs = np.empty(2 * x.size, dtype=IQ_DTYPE)
    pairs[0::2] = x.real
    pairs[1::2] = x.imag
    with open(path, "wb") as fh:
        fh.write(pairs.tobytes())


def read_iq(path) -> np.ndarray:
    """All samples in the file as ``complex64``."""
    size = os.path.getsize(path)
    if size % BYTES_PER_SAMPLE:
        whole = size - size % BYTES_PER_SAMPLE
        raise IQFormatError(
            f"{path}: size {size} bytes is not a multiple of {BYTES_PER_SAMPLE} "
            f"(one I/Q float32 pair); {size - whole} trailing bytes at offsets {whole}..{size - 1}"
        )
    raw = np.fromfile(path, dtype=IQ_DTYPE)
    return (raw[0::2] + 1j * raw[1::2]).astype(np.complex64)


def segment_windows(samples, n_bins: int) -> tuple[list[np.ndarray], int]:
    """Split into consecutive ``n_bins`` windows; returns ``(windows, dropped)``."""
    x = np.asarray(samples)
    count = x.size // n_bins
    windows = [x[i * n_bins:(i + 1) * n_bins] for i in range(count)]
    return windows, x.size - count * n_bins


def ingest_iq(path, params: RadarParams) -> list[np.ndarray]:
    """Read a capture and cut it into correlation windows of ``params.n_bins``.

    A trailing partial window is dropped and logged.

    Raises:
        IQFormatError: for a truncated pair or fewer than ``n_bins`` samples.
    """
    samples = read_iq(path)
    n = params.n_bins
    if samples.size < n:
        raise IQFormatError(
            f"{path}: holds {samples.size} samples ({samples.size * BYTES_PER_SAMPLE} bytes); "
            f"need at least {n} ({n * BYTES_PER_SAMPLE} bytes) for one window"
        )
    windows, dropped = segment_windows(samples, n)
    if dropped:
        log.warning(
            "%s: dropped %d trailing samples (bytes %d..%d) short of a full window",
            path, dropped, len(windows) * n * BYTES_PER_SAMPLE,
            samples.size * BYTES_PER_SAMPLE - 1,
        )
    return windows
