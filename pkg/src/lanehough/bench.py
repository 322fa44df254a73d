"""Latency, memory and resolution-scaling measurements.

The timed span runs from the first pixel entering Sobel to the finished
Hough matrix. Image loading, peak picking and rendering are outside it.

Memory numbers are closed-form byte counts for this software pipeline.
They are not comparable to the on-device figures of hardware builds
(e.g. 2.88 MB of FPGA block RAM or 6.5 MB of GPU memory for a
512x512 frame). Those are device-specific measurements, not targets
this harness tries to reproduce. Power is not measured at all.
"""

from __future__ import annotations

import csv
import os
import statistics
import time
from dataclasses import dataclass, field
from typing import Sequence

from .edge import DEFAULT_THRESHOLD
from .errors import ParameterError
from .hough import HoughAccumulator, VoteStrategy, build_trig_table, n_rho_for
from .imgio import GrayImage
from .pipeline import hough_stages
from .synth import synthetic_lane_scene

CSV_COLUMNS = (
    "width", "height", "strategy", "workers", "trig_mode",
    "median_us", "min_us", "max_us",
    "accumulator_bytes", "pipeline_bytes", "white_pixels",
)
TIMING_COLUMNS = ("median_us", "min_us", "max_us")
DEFAULT_SIZES = ((128, 128), (256, 256), (512, 512), (1024, 1024))
# byte counts are modelled as signed 64-bit sizes
_MAX_BYTES = 2**63 - 1


@dataclass
class LatencyReport:
    strategy: VoteStrategy
    width: int
    height: int
    repeats: int
    samples_us: list[float]
    trig_mode: str = "float"
    white_pixels: int = 0
    accumulator: HoughAccumulator | None = field(default=None, repr=False)

    @property
    def median_us(self) -> float:
        return statistics.median(self.samples_us)

    @property
    def min_us(self) -> float:
        return min(self.samples_us)

    @property
    def max_us(self) -> float:
        return max(self.samples_us)


@dataclass(frozen=True)
class MemoryReport:
    width: int
    height: int
    n_theta: int
    counter_bytes: int
    accumulator_bytes: int
    stage_bytes: dict

    @property
    def pipeline_bytes(self) -> int:
        return sum(self.stage_bytes.values())


def time_pipeline(img: GrayImage, threshold: int = DEFAULT_THRESHOLD,
                  strategy: VoteStrategy | None = None, repeats: int = 5,
                  trig: str = "float", n_theta: int = 180) -> LatencyReport:
    """Median-of-N wall clock for Sobel -> binarize -> accumulate.

    One untimed warm-up run precedes the samples. The accumulator of the
    last timed run is kept on the report.
    """
    if repeats < 1:
        raise ParameterError(f"repeats must be >= 1, got {repeats}")
    strategy = strategy or VoteStrategy()
    table = build_trig_table(n_theta, trig)
    hough_stages(img, threshold, table, strategy)

    samples = []
    stages = None
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        stages = hough_stages(img, threshold, table, strategy)
        samples.append((time.perf_counter_ns() - t0) / 1000.0)
    return LatencyReport(strategy, img.width, img.height, repeats, samples, trig,
                         stages.binary.white_count, stages.accumulator)


def memory_footprint(width: int, height: int, n_theta: int = 180,
                     counter_bytes: int = 4) -> MemoryReport:
    """Byte counts of the Hough matrix and of every pipeline buffer.

    Pure arithmetic, nothing is allocated. Stage buffers: the 8-bit gray
    input, its 1-pixel zero-padded copy, the two int16 Sobel planes, the
    8-bit edge and binary planes, and the accumulator.
    """
    for name, v in (("width", width), ("height", height), ("n_theta", n_theta),
                    ("counter_bytes", counter_bytes)):
        if v < 1:
            raise ParameterError(f"{name} must be >= 1, got {v}")
    pixels = width * height
    accumulator_bytes = n_theta * n_rho_for(width, height) * counter_bytes
    stages = {
        "gray": pixels,
        "padded": (width + 2) * (height + 2),
        "sobel_x": 2 * pixels,
        "sobel_y": 2 * pixels,
        "edge": pixels,
        "binary": pixels,
        "accumulator": accumulator_bytes,
    }
    if sum(stages.values()) > _MAX_BYTES:
        raise ParameterError("byte count overflows a 64-bit size")
    return MemoryReport(width, height, n_theta, counter_bytes, accumulator_bytes, stages)


def _row(latency: LatencyReport, memory: MemoryReport) -> dict:
    return {
        "width": latency.width,
        "height": latency.height,
        "strategy": latency.strategy.name,
        "workers": latency.strategy.workers,
        "trig_mode": latency.trig_mode,
        "median_us": f"{latency.median_us:.1f}",
        "min_us": f"{latency.min_us:.1f}",
        "max_us": f"{latency.max_us:.1f}",
        "accumulator_bytes": memory.accumulator_bytes,
        "pipeline_bytes": memory.pipeline_bytes,
        "white_pixels": latency.white_pixels,
    }


def scaling_study(sizes: Sequence[tuple[int, int]], strategies: Sequence[VoteStrategy],
                  repeats: int = 3, out: str | os.PathLike | None = None, seed: int = 0,
                  threshold: int = DEFAULT_THRESHOLD, trig: str = "float",
                  n_theta: int = 180) -> list[dict]:
    """Time every (size, strategy) pair on a seeded synthetic scene.

    Returns the rows and, when ``out`` is given, writes them as CSV with
    header :data:`CSV_COLUMNS`.
    """
    if not sizes or not strategies:
        raise ParameterError("scaling_study needs at least one size and one strategy")
    rows = []
    for width, height in sizes:
        img, _ = synthetic_lane_scene(width, height, seed, n_theta)
        memory = memory_footprint(width, height, n_theta)
        for strategy in strategies:
            latency = time_pipeline(img, threshold, strategy, repeats, trig, n_theta)
            rows.append(_row(latency, memory))
    if out is not None:
        write_csv(rows, out)
    return rows


def write_csv(rows: Sequence[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def speedups(rows: Sequence[dict]) -> dict:
    """Reference median / strategy median, keyed by (width, height, strategy, workers)."""
    base = {(r["width"], r["height"]): float(r["median_us"])
            for r in rows if r["strategy"] == "reference"}
    out = {}
    for r in rows:
        ref = base.get((r["width"], r["height"]))
        med = float(r["median_us"])
        if ref is not None and med > 0:
            out[(r["width"], r["height"], r["strategy"], r["workers"])] = ref / med
    return out
