"""Hough voting: every white pixel casts one vote per angle bin.

Four strategies share one white-pixel list, one trig table and one
rounding rule (``floor(r + 0.5)``), which is what makes their
accumulators bin-for-bin identical:

``reference``
    One sequential sweep over the angle bins; the correctness oracle.
``symmetric``
    Multiplies only for bins ``0..n_theta/2``. The bin ``n_theta - k``
    reuses the products of bin ``k`` because ``r' = y*sin(k) - x*cos(k)``.
``angle-partitioned``
    Contiguous angle slices, one per worker thread. Each worker owns its
    rows of the accumulator outright, so writes never collide.
``atomic``
    White pixels are dealt to workers tile by tile (see ``tiling``); all
    workers vote into one shared accumulator via atomic increments.
"""

from __future__ import annotations

import enum
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import ParameterError
from .accumulator import COUNT_DTYPE, HoughAccumulator
from .atomic import AtomicCounterArray
from .tiling import DEFAULT_BLOCK, tile_grid, tile_ids, tiles_for_worker
from .trig import Q15_ONE, TrigTable

# pixels per vectorised batch; bounds the (pixels x angles) temporaries
_CHUNK = 4096
_Q15_HALF = Q15_ONE // 2
_Q15_SHIFT = 15
# theta rows per lock stripe in the shared atomic accumulator
_ROWS_PER_STRIPE = 8


class Strategy(str, enum.Enum):
    REFERENCE = "reference"
    SYMMETRIC = "symmetric"
    ANGLE_PARTITIONED = "angle-partitioned"
    ATOMIC = "atomic"


STRATEGY_NAMES = tuple(s.value for s in Strategy)


@dataclass(frozen=True)
class VoteStrategy:
    kind: Strategy = Strategy.REFERENCE
    workers: int = 1
    block: int = DEFAULT_BLOCK

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", Strategy(self.kind))
        except ValueError:
            raise ParameterError(
                f"unknown strategy {self.kind!r}; choose from {', '.join(STRATEGY_NAMES)}") from None
        if self.workers < 1:
            raise ParameterError(f"workers must be >= 1, got {self.workers}")
        if self.block < 1:
            raise ParameterError(f"block must be >= 1, got {self.block}")

    @property
    def name(self) -> str:
        return self.kind.value

    @property
    def is_parallel(self) -> bool:
        return self.kind in (Strategy.ANGLE_PARTITIONED, Strategy.ATOMIC)


@dataclass
class MulCounter:
    """Counts trig multiplications (``x*cos`` and ``y*sin`` products)."""

    trig_multiplies: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def add(self, n: int) -> None:
        with self._lock:
            self.trig_multiplies += n


def white_pixels(bin_img) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates (xs, ys) of every 255 pixel, in raster order."""
    pixels = bin_img.pixels
    if not np.isin(pixels, (0, 255)).all():
        raise ParameterError("voting input must be binary (pixels 0 or 255)")
    ys, xs = np.nonzero(pixels == 255)
    return xs.astype(np.int64), ys.astype(np.int64)


def _products(xs, ys, cos, sin, counter):
    p1 = xs[:, None] * cos[None, :]
    p2 = ys[:, None] * sin[None, :]
    if counter is not None:
        counter.add(p1.size + p2.size)
    return p1, p2


def _quantize(r, fixed_point: bool) -> np.ndarray:
    """floor(r + 0.5); for Q1.15 sums r is the raw integer numerator."""
    if fixed_point:
        return (r + _Q15_HALF) >> _Q15_SHIFT
    return np.floor(r + 0.5).astype(np.int64)


def _bins(xs, ys, cos, sin, table, rho_offset, counter):
    p1, p2 = _products(xs, ys, cos, sin, counter)
    return _quantize(p1 + p2, table.is_fixed_point) + rho_offset


def rho_of(x: int, y: int, theta_bin: int, table: TrigTable, rho_offset: int) -> int:
    """Rho bin index of pixel (x, y) at one angle bin."""
    c = table.cos[theta_bin].item()
    s = table.sin[theta_bin].item()
    if table.is_fixed_point:
        return ((x * c + y * s + _Q15_HALF) >> _Q15_SHIFT) + rho_offset
    r = x * c + y * s
    return int(np.floor(r + 0.5)) + rho_offset


def vote_bins(xs, ys, table: TrigTable, rho_offset: int) -> np.ndarray:
    """Rho bin for every (pixel, angle) pair, shape ``(len(xs), n_theta)``."""
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    return _bins(xs, ys, table.cos, table.sin, table, rho_offset, None)


def _tally_rows(bins: np.ndarray, n_rho: int) -> np.ndarray:
    """Histogram each column of ``bins`` into its own row of length n_rho."""
    n_k = bins.shape[1]
    flat = bins + (np.arange(n_k, dtype=np.int64) * n_rho)[None, :]
    return np.bincount(flat.ravel(), minlength=n_k * n_rho).reshape(n_k, n_rho)


def _chunks(xs, ys):
    for i in range(0, xs.size, _CHUNK):
        yield xs[i:i + _CHUNK], ys[i:i + _CHUNK]


def _vote_reference(xs, ys, table, acc, counter):
    counts = acc.counts
    for k in range(table.n_theta):
        c = table.cos[k:k + 1]
        s = table.sin[k:k + 1]
        for cx, cy in _chunks(xs, ys):
            b = _bins(cx, cy, c, s, table, acc.rho_offset, counter)
            counts[k] += np.bincount(b[:, 0], minlength=acc.n_rho).astype(COUNT_DTYPE)


def _vote_symmetric(xs, ys, table, acc, counter):
    n = table.n_theta
    half = n // 2
    fixed = table.is_fixed_point
    direct = slice(0, half + 1)
    mirrored = np.arange(n - 1, half, -1)  # bins n-1 .. half+1 pair with k = 1 .. half-1
    for cx, cy in _chunks(xs, ys):
        p1, p2 = _products(cx, cy, table.cos[direct], table.sin[direct], counter)
        bins = np.empty((cx.size, n), dtype=np.int64)
        bins[:, direct] = _quantize(p1 + p2, fixed)
        # x*cos(n-k) + y*sin(n-k) == p2 - p1, no further multiplies
        bins[:, mirrored] = _quantize(p2[:, 1:half] - p1[:, 1:half], fixed)
        bins += acc.rho_offset
        acc.counts += _tally_rows(bins, acc.n_rho).astype(COUNT_DTYPE)


def _vote_angle_partitioned(xs, ys, table, acc, counter, workers):
    slices = [s for s in np.array_split(np.arange(table.n_theta), workers) if s.size]

    def run(ks):
        rows = acc.counts[ks[0]:ks[-1] + 1]  # this worker's private view
        cos, sin = table.cos[ks], table.sin[ks]
        for cx, cy in _chunks(xs, ys):
            b = _bins(cx, cy, cos, sin, table, acc.rho_offset, counter)
            rows += _tally_rows(b, acc.n_rho).astype(COUNT_DTYPE)

    _run_workers(run, slices)


def _vote_atomic(xs, ys, table, acc, counter, workers, block):
    grid = tile_grid(acc.width, acc.height, block)
    tid = tile_ids(xs, ys, grid)
    order = np.argsort(tid, kind="stable")
    xs, ys, tid = xs[order], ys[order], tid[order]
    starts = np.searchsorted(tid, np.arange(grid.n_tiles + 1))
    shared = AtomicCounterArray(acc.counts.shape, dtype=COUNT_DTYPE,
                                stripe_size=_ROWS_PER_STRIPE * acc.n_rho)
    row_base = (np.arange(table.n_theta, dtype=np.int64) * acc.n_rho)[None, :]

    def run(worker):
        for t in tiles_for_worker(grid, worker, workers):
            lo, hi = starts[t], starts[t + 1]
            if lo == hi:
                continue
            b = _bins(xs[lo:hi], ys[lo:hi], table.cos, table.sin, table, acc.rho_offset, counter)
            shared.add_many((b + row_base).ravel())

    _run_workers(run, range(workers))
    acc.counts += shared.values


def _run_workers(fn, jobs) -> None:
    jobs = list(jobs)
    if len(jobs) == 1:
        fn(jobs[0])
        return
    with ThreadPoolExecutor(max_workers=len(jobs)) as pool:
        for fut in [pool.submit(fn, j) for j in jobs]:
            fut.result()


def accumulate(bin_img, table: TrigTable, strategy: VoteStrategy | None = None,
               counter: MulCounter | None = None) -> HoughAccumulator:
    """Vote every white pixel of ``bin_img`` into a fresh accumulator.

    ``counter``, when given, is incremented by the number of trig
    multiplications performed.
    """
    strategy = strategy or VoteStrategy()
    if not isinstance(table, TrigTable):
        raise ParameterError("table must be a TrigTable")
    xs, ys = white_pixels(bin_img)
    acc = HoughAccumulator.empty(bin_img.width, bin_img.height, table.n_theta)
    if xs.size == 0:
        return acc
    kind = strategy.kind
    if kind is Strategy.REFERENCE:
        _vote_reference(xs, ys, table, acc, counter)
    elif kind is Strategy.SYMMETRIC:
        _vote_symmetric(xs, ys, table, acc, counter)
    elif kind is Strategy.ANGLE_PARTITIONED:
        _vote_angle_partitioned(xs, ys, table, acc, counter, strategy.workers)
    else:
        _vote_atomic(xs, ys, table, acc, counter, strategy.workers, strategy.block)
    return acc
