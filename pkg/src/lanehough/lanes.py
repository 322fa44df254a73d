"""Turning a Hough matrix into lane lines: peaks, segments and an overlay."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ParameterError
from .hough import HoughAccumulator, build_trig_table
from .imgio import GrayImage, RgbImage

DEFAULT_FILL_GAP = 20
DEFAULT_MIN_LEN = 40
DEFAULT_COLOR = (255, 0, 0)
_EPS = 1e-9


@dataclass(frozen=True)
class Peak:
    """One selected accumulator cell.

    ``n_theta`` and ``rho_offset`` carry the accumulator geometry so a
    peak can be turned back into a line without the accumulator.
    """

    theta_bin: int
    rho_bin: int
    votes: int
    n_theta: int = 180
    rho_offset: int = 0

    @property
    def theta_deg(self) -> float:
        return self.theta_bin * 180.0 / self.n_theta

    @property
    def rho(self) -> int:
        return self.rho_bin - self.rho_offset

    def cos_sin(self) -> tuple[float, float]:
        cos, sin = build_trig_table(self.n_theta, "float").values()
        return float(cos[self.theta_bin]), float(sin[self.theta_bin])


def _odd_at_least(v: float) -> int:
    n = max(1, math.ceil(v))
    return n if n % 2 else n + 1


@dataclass(frozen=True)
class PeakParams:
    """Peak picking knobs. ``None`` neighbourhoods scale with the accumulator."""

    max_peaks: int = 2
    threshold_ratio: float = 0.5
    nhood_theta: int | None = None
    nhood_rho: int | None = None

    def __post_init__(self):
        if self.max_peaks < 0:
            raise ParameterError("max_peaks must be >= 0")
        if not 0 < self.threshold_ratio <= 1:
            raise ParameterError("threshold_ratio must lie in (0, 1]")
        for name in ("nhood_theta", "nhood_rho"):
            v = getattr(self, name)
            if v is not None and (v < 1 or v % 2 == 0):
                raise ParameterError(f"{name} must be an odd count >= 1, got {v}")

    def resolved(self, acc: HoughAccumulator) -> "PeakParams":
        return replace(
            self,
            nhood_theta=self.nhood_theta or _odd_at_least(acc.n_theta / 50),
            nhood_rho=self.nhood_rho or _odd_at_least(acc.n_rho / 50),
        )


@dataclass(frozen=True)
class LineSegment:
    p0: tuple[int, int]
    p1: tuple[int, int]
    source_peak: Peak

    @property
    def length(self) -> float:
        return math.hypot(self.p1[0] - self.p0[0], self.p1[1] - self.p0[1])


def find_peaks(acc: HoughAccumulator, params: PeakParams | None = None) -> list[Peak]:
    """Greedy maximum picking with rectangular neighbourhood suppression.

    Ties go to the lower theta bin, then the lower rho bin. No wraparound
    across theta = 0/180.
    """
    params = (params or PeakParams()).resolved(acc)
    work = acc.counts.astype(np.int64)
    top = int(work.max(initial=0))
    if top == 0:
        return []
    floor_votes = max(1.0, params.threshold_ratio * top)
    half_t = params.nhood_theta // 2
    half_r = params.nhood_rho // 2
    peaks = []
    while len(peaks) < params.max_peaks:
        flat = int(np.argmax(work))  # first max in row-major order = tie rule
        k, r = divmod(flat, acc.n_rho)
        votes = int(work[k, r])
        if votes < floor_votes:
            break
        peaks.append(Peak(k, r, votes, acc.n_theta, acc.rho_offset))
        work[max(0, k - half_t):k + half_t + 1, max(0, r - half_r):r + half_r + 1] = -1
    return peaks


def _direction(cos: float, sin: float) -> tuple[float, float]:
    """Unit direction along the line, pointing toward increasing x (or y if steep)."""
    dx, dy = -sin, cos
    if abs(sin) >= abs(cos):
        if dx < 0:
            dx, dy = -dx, -dy
    elif dy < 0:
        dx, dy = -dx, -dy
    return dx, dy


def _round_half_up(v: float) -> int:
    return math.floor(v + 0.5)


def peak_to_line(peak: Peak, dims: tuple[int, int]) -> LineSegment | None:
    """Clip the peak's infinite line to the image; ``None`` if it misses."""
    width, height = dims
    cos, sin = peak.cos_sin()
    r = peak.rho
    ox, oy = r * cos, r * sin
    dx, dy = _direction(cos, sin)
    t_lo, t_hi = -math.inf, math.inf
    for d, o, hi in ((dx, ox, width - 1), (dy, oy, height - 1)):
        if abs(d) < _EPS:
            if o < -_EPS or o > hi + _EPS:
                return None
            continue
        a, b = (0 - o) / d, (hi - o) / d
        if a > b:
            a, b = b, a
        t_lo, t_hi = max(t_lo, a), min(t_hi, b)
    if t_lo > t_hi + _EPS:
        return None
    t_hi = max(t_hi, t_lo)

    def snap(t):
        x = min(max(_round_half_up(ox + t * dx), 0), width - 1)
        y = min(max(_round_half_up(oy + t * dy), 0), height - 1)
        return x, y

    return LineSegment(snap(t_lo), snap(t_hi), peak)


def line_pixels(peak: Peak, dims: tuple[int, int]) -> np.ndarray:
    """Rasterise the peak's line across the image, ordered along the line.

    Steps one pixel at a time along the dominant axis and rounds the other
    coordinate, so each pixel is within 0.5 px of the line. Returns an
    ``(n, 2)`` array of (x, y).
    """
    width, height = dims
    cos, sin = peak.cos_sin()
    r = peak.rho
    if abs(sin) >= abs(cos):
        xs = np.arange(width, dtype=np.float64)
        ys = np.floor((r - xs * cos) / sin + 0.5)
        keep = (ys >= 0) & (ys < height)
    else:
        ys = np.arange(height, dtype=np.float64)
        xs = np.floor((r - ys * sin) / cos + 0.5)
        keep = (xs >= 0) & (xs < width)
    return np.stack([xs[keep], ys[keep]], axis=1).astype(np.int64)


def extract_segments(bin_img, peak: Peak, fill_gap: float = DEFAULT_FILL_GAP,
                     min_len: float = DEFAULT_MIN_LEN) -> list[LineSegment]:
    """White runs along the peak's line, gap-merged and length-filtered.

    A white pixel belongs to the line when its distance r rounds to the
    peak's rho bin, i.e. it lies within 0.5 px of the line (these are
    exactly the pixels that voted for the peak). Pixels are ordered by
    position along the line; neighbours further apart than ``fill_gap``
    start a new run, and runs shorter than ``min_len`` are dropped.
    """
    ys, xs = np.nonzero(bin_img.pixels == 255)
    if xs.size == 0:
        return []
    cos, sin = peak.cos_sin()
    r = xs * cos + ys * sin
    on_line = np.floor(r + 0.5).astype(np.int64) == peak.rho
    xs, ys = xs[on_line], ys[on_line]
    if xs.size == 0:
        return []
    dx, dy = _direction(cos, sin)
    order = np.argsort(xs * dx + ys * dy, kind="stable")
    white = np.stack([xs[order], ys[order]], axis=1).astype(np.int64)
    steps = np.hypot(*np.diff(white, axis=0).T)
    breaks = np.flatnonzero(steps > fill_gap) + 1
    segments = []
    for run in np.split(white, breaks):
        p0, p1 = tuple(int(v) for v in run[0]), tuple(int(v) for v in run[-1])
        if math.hypot(p1[0] - p0[0], p1[1] - p0[1]) >= min_len:
            segments.append(LineSegment(p0, p1, peak))
    return segments


def bresenham(p0: tuple[int, int], p1: tuple[int, int]) -> list[tuple[int, int]]:
    """Integer raster of the closed segment p0..p1."""
    x0, y0 = p0
    x1, y1 = p1
    dx, dy = abs(x1 - x0), -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    out = []
    while True:
        out.append((x0, y0))
        if x0 == x1 and y0 == y1:
            return out
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy


def render_overlay(gray: GrayImage, segments, color=DEFAULT_COLOR) -> RgbImage:
    rgb = np.repeat(gray.pixels[:, :, None], 3, axis=2)
    for seg in segments:
        pts = np.array(bresenham(seg.p0, seg.p1))
        rgb[pts[:, 1], pts[:, 0]] = color
    return RgbImage(rgb)
