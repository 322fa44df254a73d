"""Sobel edge detection on a shift-add datapath, then threshold binarization.

The convolution never multiplies: every kernel coefficient is 0, +-1 or
+-2, so each tap is either skipped, added/subtracted as-is, or shifted
left by one bit first. The result is bit-identical to a plain
multiply-accumulate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .imgio import GrayImage, zero_pad

DEFAULT_THRESHOLD = 128


@dataclass(frozen=True)
class Kernel3x3:
    """3x3 integer kernel with coefficients restricted to {-2, -1, 0, 1, 2}."""

    coefficients: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(c) for c in row) for row in self.coefficients)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ParameterError("kernel must be 3x3")
        if any(abs(c) > 2 for r in rows for c in r):
            raise ParameterError("shift-add kernel coefficients must lie in {-2..2}")
        object.__setattr__(self, "coefficients", rows)

    def as_array(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=np.int64)


SOBEL_X = Kernel3x3(((-1, 0, 1), (-2, 0, 2), (-1, 0, 1)))
SOBEL_Y = Kernel3x3(((1, 2, 1), (0, 0, 0), (-1, -2, -1)))


class EdgeImage(GrayImage):
    """Gradient magnitude plane, saturated to [0, 255]."""


class BinaryImage(GrayImage):
    """Plane whose every pixel is exactly 0 or 255."""

    def __post_init__(self):
        super().__post_init__()
        if not np.isin(self.pixels, (0, 255)).all():
            raise ParameterError("BinaryImage pixels must be 0 or 255")

    @property
    def white_count(self) -> int:
        return int(np.count_nonzero(self.pixels))


def convolve3x3(padded: GrayImage, kernel: Kernel3x3) -> np.ndarray:
    """Correlate ``padded`` with ``kernel`` at every fully-covered position.

    Returns an int16 plane of shape ``(h - 2, w - 2)``; Sobel outputs lie
    in [-1020, 1020]. Coefficient magnitude 2 is realised as ``<< 1``.
    """
    src = padded.pixels if isinstance(padded, GrayImage) else np.asarray(padded)
    h, w = src.shape
    if h < 3 or w < 3:
        raise DimensionError(f"convolution needs at least a 3x3 input, got {w}x{h}")
    src = src.astype(np.int16)
    acc = np.zeros((h - 2, w - 2), dtype=np.int16)
    for i, row in enumerate(kernel.coefficients):
        for j, c in enumerate(row):
            if c == 0:
                continue
            tap = src[i:i + h - 2, j:j + w - 2]
            if abs(c) == 2:
                tap = np.left_shift(tap, 1)
            if c > 0:
                acc += tap
            else:
                acc -= tap
    return acc


def sobel_gradients(img: GrayImage) -> tuple[np.ndarray, np.ndarray]:
    """Horizontal and vertical Sobel responses on a 1-pixel zero-padded copy."""
    padded = zero_pad(img, 1)
    return convolve3x3(padded, SOBEL_X), convolve3x3(padded, SOBEL_Y)


def sobel_magnitude(img: GrayImage) -> EdgeImage:
    """|gx| + |gy| clamped to 8 bits; same size as ``img``."""
    gx, gy = sobel_gradients(img)
    mag = np.abs(gx.astype(np.int32)) + np.abs(gy.astype(np.int32))
    return EdgeImage(np.minimum(mag, 255).astype(np.uint8))


def binarize(edge: GrayImage, threshold: int = DEFAULT_THRESHOLD) -> BinaryImage:
    """Comparator + select: 255 where ``edge >= threshold``, else 0.

    ``threshold`` may be 0 (everything white) through 256 (everything black).
    """
    if not 0 <= threshold <= 256:
        raise ParameterError(f"threshold must be in [0, 256], got {threshold}")
    white = edge.pixels.astype(np.int16) >= threshold
    return BinaryImage(np.where(white, np.uint8(255), np.uint8(0)))
