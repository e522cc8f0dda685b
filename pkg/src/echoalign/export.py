"""CSV/JSON persistence of Monte Carlo runs.

Outputs carry no timestamps, so a scenario file plus seed determines every
output byte.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .simulation import RunSummary, TrialRecord

CSV_COLUMNS = ("trial", "delay_drawn", "reference_detected", "aligned_peak_bins", "success")
FORMATS = ("csv", "json")


def _record_row(r: TrialRecord) -> list[str]:
    return [
        str(r.trial_index),
        str(r.delay_drawn),
        str(r.reference_detected),
        ";".join(str(b) for b in r.aligned_peak_bins),
        "true" if r.success else "false",
    ]


def write_csv(records, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow(_record_row(r))


def read_csv(path) -> list[TrialRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected CSV header {reader.fieldnames}")
        return [
            TrialRecord(
                trial_index=int(row["trial"]),
                delay_drawn=int(row["delay_drawn"]),
                reference_detected=int(row["reference_detected"]),
                aligned_peak_bins=tuple(int(b) for b in row["aligned_peak_bins"].split(";") if b),
                success=row["success"] == "true",
            )
            for row in reader
        ]


def results_to_json(records, summary: RunSummary) -> str:
    doc = {
        "summary": summary.to_dict(),
        "records": [r.to_dict() for r in records],
    }
    return json.dumps(doc, indent=2) + "\n"


def read_json(path) -> tuple[list[TrialRecord], dict]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return [TrialRecord.from_dict(d) for d in doc["records"]], doc["summary"]


def write_ascans(magnitudes, path) -> None:
    """One row per trial of aligned A-scan magnitudes, for plotting."""
    mags = np.atleast_2d(np.asarray(magnitudes, dtype=np.float64))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["trial"] + [f"bin_{k}" for k in range(mags.shape[1])])
        for i, row in enumerate(mags):
            w.writerow([i] + [repr(float(v)) for v in row])


def read_ascans(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)[:, 1:]


def ascan_path_for(out) -> Path:
    out = Path(out)
    return out.with_name(out.stem + ".ascans.csv")


def export_results(records, summary: RunSummary, format: str, path, magnitudes=None) -> None:
    """Write ``records`` as CSV or JSON; optionally dump A-scans alongside.

    Raises:
        ValueError: for an unknown format.
        OSError: if ``path`` cannot be written.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; choose from {FORMATS}")
    if format == "csv":
        write_csv(records, path)
    else:
        Path(path).write_text(results_to_json(records, summary), encoding="utf-8")
    if magnitudes is not None:
        write_ascans(magnitudes, ascan_path_for(path))
