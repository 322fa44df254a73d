"""The Hough matrix and its HACC1 on-disk format.

HACC1 layout::

    HACC1 <n_theta> <n_rho> <rho_offset> <width> <height>\\n
    n_theta * n_rho little-endian uint32 counts, row-major by theta
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..errors import FormatError

PathLike = Union[str, os.PathLike]

HACC_MAGIC = b"HACC1"
COUNT_DTYPE = np.uint32


def rho_max_for(width: int, height: int) -> int:
    """Smallest integer bounding |r| for any pixel of a width x height image."""
    # isqrt keeps this exact where float sqrt could land a hair below an integer
    sq = width * width + height * height
    root = math.isqrt(sq)
    return root if root * root == sq else root + 1


def n_rho_for(width: int, height: int) -> int:
    return 2 * rho_max_for(width, height) + 1


@dataclass(eq=False)
class HoughAccumulator:
    """Vote counts indexed ``counts[theta_bin, rho_bin]``.

    ``rho_bin - rho_offset`` is the signed distance r in pixels.
    """

    counts: np.ndarray
    rho_offset: int
    width: int
    height: int

    @classmethod
    def empty(cls, width: int, height: int, n_theta: int) -> "HoughAccumulator":
        rho_max = rho_max_for(width, height)
        counts = np.zeros((n_theta, 2 * rho_max + 1), dtype=COUNT_DTYPE)
        return cls(counts, rho_max, width, height)

    @property
    def n_theta(self) -> int:
        return self.counts.shape[0]

    @property
    def n_rho(self) -> int:
        return self.counts.shape[1]

    @property
    def source_dims(self) -> tuple[int, int]:
        return self.width, self.height

    @property
    def total_votes(self) -> int:
        return int(self.counts.sum(dtype=np.uint64))

    def same_geometry(self, other: "HoughAccumulator") -> bool:
        return (self.counts.shape == other.counts.shape
                and self.rho_offset == other.rho_offset
                and self.source_dims == other.source_dims)

    def __eq__(self, other):
        if not isinstance(other, HoughAccumulator):
            return NotImplemented
        return self.same_geometry(other) and np.array_equal(self.counts, other.counts)

    def __repr__(self):
        return (f"HoughAccumulator(n_theta={self.n_theta}, n_rho={self.n_rho}, "
                f"source={self.width}x{self.height}, votes={self.total_votes})")


def dump_accumulator(acc: HoughAccumulator, path: PathLike) -> None:
    header = b"%s %d %d %d %d %d\n" % (
        HACC_MAGIC, acc.n_theta, acc.n_rho, acc.rho_offset, acc.width, acc.height)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(acc.counts, dtype="<u4").tobytes())


def load_accumulator(path: PathLike) -> HoughAccumulator:
    with open(path, "rb") as fh:
        header = fh.readline(256)
        payload = fh.read()
    fields = header.split()
    if not header.endswith(b"\n") or len(fields) != 6 or fields[0] != HACC_MAGIC:
        raise FormatError(f"{path}: not a HACC1 accumulator file")
    try:
        n_theta, n_rho, offset, width, height = (int(f) for f in fields[1:])
    except ValueError:
        raise FormatError(f"{path}: non-numeric HACC1 header field") from None
    if min(n_theta, n_rho, width, height) < 1 or not 0 <= offset < n_rho:
        raise FormatError(f"{path}: inconsistent HACC1 header {header!r}")
    expected = n_theta * n_rho * 4
    if len(payload) != expected:
        raise FormatError(f"{path}: expected {expected} payload bytes, got {len(payload)}")
    counts = np.frombuffer(payload, dtype="<u4").astype(COUNT_DTYPE).reshape(n_theta, n_rho)
    return HoughAccumulator(counts, offset, width, height)
