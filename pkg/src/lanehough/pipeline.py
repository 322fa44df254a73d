"""The detection chain: Sobel -> binarize -> Hough, then peak/segment recovery."""

from __future__ import annotations

from dataclasses import dataclass, field

from .edge import DEFAULT_THRESHOLD, BinaryImage, EdgeImage, binarize, sobel_magnitude
from .hough import HoughAccumulator, TrigTable, VoteStrategy, accumulate, build_trig_table
from .imgio import GrayImage
from .lanes import (
    DEFAULT_FILL_GAP,
    DEFAULT_MIN_LEN,
    LineSegment,
    Peak,
    PeakParams,
    extract_segments,
    find_peaks,
)


@dataclass
class HoughStages:
    edge: EdgeImage
    binary: BinaryImage
    accumulator: HoughAccumulator


@dataclass
class Detection:
    stages: HoughStages
    peaks: list[Peak]
    segments: list[LineSegment] = field(default_factory=list)


def hough_stages(gray: GrayImage, threshold: int = DEFAULT_THRESHOLD,
                 table: TrigTable | None = None,
                 strategy: VoteStrategy | None = None) -> HoughStages:
    """Everything from the first input pixel up to the finished Hough matrix."""
    table = table or build_trig_table()
    edge = sobel_magnitude(gray)
    binary = binarize(edge, threshold)
    return HoughStages(edge, binary, accumulate(binary, table, strategy))


def detect_lanes(gray: GrayImage, threshold: int = DEFAULT_THRESHOLD,
                 table: TrigTable | None = None, strategy: VoteStrategy | None = None,
                 peak_params: PeakParams | None = None,
                 fill_gap: float = DEFAULT_FILL_GAP,
                 min_len: float = DEFAULT_MIN_LEN) -> Detection:
    stages = hough_stages(gray, threshold, table, strategy)
    peaks = find_peaks(stages.accumulator, peak_params)
    segments = [s for p in peaks for s in extract_segments(stages.binary, p, fill_gap, min_len)]
    return Detection(stages, peaks, segments)
