"""Command-line front end: ``detect``, ``bench`` and ``dump-acc``.

Exit codes: 0 success, 1 runtime or I/O error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import __version__
from .bench import DEFAULT_SIZES, scaling_study, speedups
from .edge import DEFAULT_THRESHOLD
from .errors import LaneHoughError
from .hough import (
    DEFAULT_BLOCK,
    STRATEGY_NAMES,
    TRIG_MODES,
    VoteStrategy,
    build_trig_table,
    dump_accumulator,
)
from .imgio import load_gray, save_image
from .lanes import DEFAULT_FILL_GAP, DEFAULT_MIN_LEN, PeakParams, render_overlay
from .pipeline import detect_lanes, hough_stages

PROG = "lanehough"


def _int_in(lo, hi=None):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if v < lo or (hi is not None and v > hi):
            bound = f"[{lo}, {hi}]" if hi is not None else f">= {lo}"
            raise argparse.ArgumentTypeError(f"{v} not in {bound}")
        return v
    return parse


def _odd(text):
    v = _int_in(1)(text)
    if v % 2 == 0:
        raise argparse.ArgumentTypeError(f"{v} is not odd")
    return v


def _ratio(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not 0 < v <= 1:
        raise argparse.ArgumentTypeError(f"{v} not in (0, 1]")
    return v


def _non_negative(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"{v} is negative")
    return v


def parse_sizes(text: str) -> list[tuple[int, int]]:
    """``"128x128,512x256"`` -> ``[(128, 128), (512, 256)]``."""
    sizes = []
    for item in text.split(","):
        w, sep, h = item.strip().lower().partition("x")
        if not sep or not w.isdigit() or not h.isdigit() or int(w) < 1 or int(h) < 1:
            raise argparse.ArgumentTypeError(f"bad size {item!r}, expected WxH")
        sizes.append((int(w), int(h)))
    return sizes


def parse_strategies(text: str) -> list[str]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    bad = [n for n in names if n not in STRATEGY_NAMES]
    if bad or not names:
        raise argparse.ArgumentTypeError(
            f"unknown strategy {', '.join(bad) or text!r}; choose from {', '.join(STRATEGY_NAMES)}")
    return names


def _color(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("color must be R,G,B")
    return tuple(_int_in(0, 255)(p) for p in parts)


def _add_hough_flags(p):
    p.add_argument("--threshold", type=_int_in(0, 256), default=DEFAULT_THRESHOLD,
                   help="binarization threshold; edge >= threshold goes white (default %(default)s)")
    p.add_argument("--strategy", choices=STRATEGY_NAMES, default="reference")
    p.add_argument("--workers", type=_int_in(1), default=1,
                   help="worker threads for angle-partitioned/atomic (default %(default)s)")
    p.add_argument("--trig", choices=TRIG_MODES, default="float")
    p.add_argument("--block", type=_int_in(1), default=DEFAULT_BLOCK,
                   help="tile edge for atomic voting (default %(default)s)")
    p.add_argument("--n-theta", type=_int_in(2), default=180,
                   help="angle bins over [0, 180) degrees; must be even (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("detect", help="find lane lines and write an overlay plus CSVs")
    d.add_argument("input", help="PGM (P5) or PNG image")
    d.add_argument("-o", "--output", help="overlay PNG (default <stem>_lanes.png)")
    d.add_argument("--peaks-csv", help="default <stem>_peaks.csv")
    d.add_argument("--segments-csv", help="default <stem>_segments.csv")
    _add_hough_flags(d)
    d.add_argument("--max-peaks", type=_int_in(0), default=2)
    d.add_argument("--peak-ratio", type=_ratio, default=0.5,
                   help="minimum peak height as a fraction of the global max")
    d.add_argument("--nhood-theta", type=_odd, help="suppression window in theta bins")
    d.add_argument("--nhood-rho", type=_odd, help="suppression window in rho bins")
    d.add_argument("--fill-gap", type=_non_negative, default=DEFAULT_FILL_GAP)
    d.add_argument("--min-len", type=_non_negative, default=DEFAULT_MIN_LEN)
    d.add_argument("--color", type=_color, default=(255, 0, 0), help="overlay R,G,B")
    d.add_argument("--dump-edge", metavar="PATH", help="also write the edge image (PGM/PNG)")
    d.add_argument("--dump-binary", metavar="PATH", help="also write the binary image")
    d.add_argument("--dump-acc", metavar="PATH", help="also write the HACC1 accumulator")

    b = sub.add_parser("bench", help="latency/memory scaling study to CSV")
    b.add_argument("--sizes", type=parse_sizes, default=list(DEFAULT_SIZES),
                   help="comma-separated WxH list (default 128x128..1024x1024)")
    b.add_argument("--strategies", type=parse_strategies, default=list(STRATEGY_NAMES))
    b.add_argument("--workers", type=_int_in(1), default=4,
                   help="workers for the parallel strategies (default %(default)s)")
    b.add_argument("--repeats", type=_int_in(1), default=5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--csv", default="bench.csv", help="output path (default %(default)s)")
    b.add_argument("--trig", choices=TRIG_MODES, default="float")
    b.add_argument("--threshold", type=_int_in(0, 256), default=DEFAULT_THRESHOLD)
    b.add_argument("--block", type=_int_in(1), default=DEFAULT_BLOCK)

    a = sub.add_parser("dump-acc", help="run up to the Hough matrix and write it as HACC1")
    a.add_argument("input")
    a.add_argument("output")
    _add_hough_flags(a)
    return parser


def _fmt(v: float) -> str:
    return f"{v:g}"


def _write_peaks(path, peaks):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["theta_deg", "rho", "votes"])
        for p in peaks:
            w.writerow([_fmt(p.theta_deg), p.rho, p.votes])


def _write_segments(path, segments):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x0", "y0", "x1", "y1", "theta_deg", "rho"])
        for s in segments:
            w.writerow([*s.p0, *s.p1, _fmt(s.source_peak.theta_deg), s.source_peak.rho])


def _strategy(args, workers=None) -> VoteStrategy:
    return VoteStrategy(args.strategy, workers or args.workers, args.block)


def run_detect(args) -> int:
    stem = Path(args.input).stem
    gray = load_gray(args.input)
    table = build_trig_table(args.n_theta, args.trig)
    params = PeakParams(args.max_peaks, args.peak_ratio, args.nhood_theta, args.nhood_rho)
    result = detect_lanes(gray, args.threshold, table, _strategy(args), params,
                          args.fill_gap, args.min_len)
    stages = result.stages
    if args.dump_edge:
        save_image(stages.edge, args.dump_edge)
    if args.dump_binary:
        save_image(stages.binary, args.dump_binary)
    if args.dump_acc:
        dump_accumulator(stages.accumulator, args.dump_acc)

    overlay = render_overlay(gray, result.segments, args.color)
    save_image(overlay, args.output or f"{stem}_lanes.png", "png")
    _write_peaks(args.peaks_csv or f"{stem}_peaks.csv", result.peaks)
    _write_segments(args.segments_csv or f"{stem}_segments.csv", result.segments)
    print(f"{len(result.peaks)} peak(s), {len(result.segments)} segment(s)")
    return 0


def run_bench(args) -> int:
    strategies = [VoteStrategy(name, args.workers if name in ("angle-partitioned", "atomic") else 1,
                               args.block)
                  for name in args.strategies]
    rows = scaling_study(args.sizes, strategies, args.repeats, args.csv, args.seed,
                         args.threshold, args.trig)
    for (w, h, name, workers), s in speedups(rows).items():
        if name != "reference":
            print(f"{w}x{h} {name} (workers={workers}): {s:.2f}x vs reference")
    print(f"wrote {len(rows)} row(s) to {args.csv}")
    return 0


def run_dump_acc(args) -> int:
    gray = load_gray(args.input)
    stages = hough_stages(gray, args.threshold, build_trig_table(args.n_theta, args.trig),
                          _strategy(args))
    dump_accumulator(stages.accumulator, args.output)
    return 0


_COMMANDS = {"detect": run_detect, "bench": run_bench, "dump-acc": run_dump_acc}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n_theta", 180) % 2:
        parser.error("--n-theta must be even")
    try:
        return _COMMANDS[args.command](args)
    except (OSError, LaneHoughError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
