"""Command line entry point.

Exit codes: 0 success, 1 self-test failure, 2 usage or parse error,
3 validation error, 4 I/O error, 5 other runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings

from . import __version__
from .channel import RadarParams
from .codes import build_pnc128
from .export import FORMATS, ascan_path_for, export_results
from .iq import IQFormatError, ingest_iq
from .scenario import ScenarioParseError, ScenarioValidationError, load_scenario
from .selftest import run_selftest
from .simulation import process_window, radar_code, run_monte_carlo, with_overrides

EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_IO = 4
EXIT_RUNTIME = 5

log = logging.getLogger("echoalign")


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="echoalign",
        description="Pulse-compression radar with direct-path delay correction.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Monte Carlo run of a scenario")
    sim.add_argument("--scenario", required=True,
                     help="scenario file, or the name of a bundled scenario (e.g. fig5)")
    sim.add_argument("--trials", type=_positive_int, help="override the scenario's trial count")
    sim.add_argument("--seed", type=_u64, help="override the scenario's seed")
    sim.add_argument("--out", help="write per-trial records here")
    sim.add_argument("--format", choices=FORMATS, default="csv")
    sim.add_argument("--dump-ascans", action="store_true",
                     help="also write aligned A-scan magnitudes to <out stem>.ascans.csv")
    sim.add_argument("--workers", type=_positive_int, default=1)

    proc = sub.add_parser("process", help="align and range an IQ capture file")
    proc.add_argument("capture", help="interleaved float32 little-endian I/Q file")
    proc.add_argument("--scenario", help="take radar parameters and threshold from this scenario")
    proc.add_argument("--threshold", type=float, help="relative peak threshold in (0, 1]")
    proc.add_argument("--out", help="write the per-window report as JSON")

    sub.add_parser("code", help="print the 128-chip code")

    st = sub.add_parser("selftest", help="correlator oracle suite and delay-invariance sweep")
    st.add_argument("--scenario", default="fig5")
    return p


def _print_summary(summary) -> None:
    covered = sum(1 for c in summary.delay_histogram if c)
    print(f"scenario {summary.label!r}: {summary.trials} trials, seed {summary.seed}")
    print(f"expected target bins: {list(summary.expected_bins)}")
    print(f"success rate: {summary.success_rate:.3f} ({summary.successes}/{summary.trials})")
    print(f"delay histogram: {covered}/{len(summary.delay_histogram)} bins covered")
    top = sorted(range(len(summary.peak_histogram)), key=lambda k: -summary.peak_histogram[k])[:5]
    print("most frequent aligned peak bins: "
          + ", ".join(f"{k} ({summary.peak_histogram[k]})" for k in top))
    print(f"reproducibility hash: {summary.reproducibility_hash}")


def cmd_simulate(args) -> int:
    if args.dump_ascans and not args.out:
        print("error: --dump-ascans needs --out", file=sys.stderr)
        return EXIT_PARSE
    scenario = with_overrides(load_scenario(args.scenario), trials=args.trials, seed=args.seed)
    result = run_monte_carlo(scenario, workers=args.workers)
    _print_summary(result.summary)
    if args.out:
        mags = result.aligned_magnitudes if args.dump_ascans else None
        export_results(result.records, result.summary, args.format, args.out, mags)
        print(f"wrote {args.out}")
        if mags is not None:
            print(f"wrote {ascan_path_for(args.out)}")
    return EXIT_OK


def cmd_process(args) -> int:
    if args.scenario:
        scenario = load_scenario(args.scenario)
        params, threshold = scenario.params, scenario.threshold
    else:
        params, threshold = RadarParams(), 0.1
    if args.threshold is not None:
        threshold = args.threshold
    code = radar_code(params)
    windows = ingest_iq(args.capture, params)
    out = []
    for i, w in enumerate(windows):
        report = process_window(w, code, params, threshold).report
        print(f"window {i}: reference bin {report.reference_bin_pre_alignment}; "
              + ", ".join(f"bin {e.bin} = {e.range_m:g} m (|r| {e.magnitude:.3g})"
                          for e in report.entries))
        out.append({
            "window": i,
            "reference_bin": report.reference_bin_pre_alignment,
            "entries": [{"bin": e.bin, "range_m": e.range_m, "magnitude": e.magnitude}
                        for e in report.entries],
        })
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({"windows": out}, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def cmd_code(args) -> int:
    print(",".join(str(s) for s in build_pnc128().tolist()))
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = run_selftest(load_scenario(args.scenario))
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_SELFTEST_FAILED


COMMANDS = {
    "simulate": cmd_simulate,
    "process": cmd_process,
    "code": cmd_code,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    warnings.simplefilter("default")
    try:
        return COMMANDS[args.command](args)
    except ScenarioParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ScenarioValidationError, IQFormatError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # noqa: BLE001
        log.debug("unhandled error", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
