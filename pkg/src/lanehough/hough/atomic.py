"""Shared counter array with atomic read-modify-write increments.

CPython has no hardware atomics on numpy memory, so atomicity comes from
lock striping: the flat index space is cut into contiguous stripes, each
guarded by its own lock. A batched add groups its indices by stripe and
performs one locked read-modify-write per stripe touched.
"""

from __future__ import annotations

import threading

import numpy as np


class AtomicCounterArray:
    def __init__(self, shape, dtype=np.uint32, stripe_size: int = 4096):
        if stripe_size < 1:
            raise ValueError("stripe_size must be >= 1")
        self._values = np.zeros(shape, dtype=dtype)
        self._flat = self._values.reshape(-1)
        self.stripe_size = stripe_size
        n_stripes = -(-self._flat.size // stripe_size)
        self._locks = [threading.Lock() for _ in range(max(n_stripes, 1))]

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def n_stripes(self) -> int:
        return len(self._locks)

    def fetch_add(self, index: int, delta: int = 1) -> int:
        """Add ``delta`` to one flat cell and return its previous value."""
        with self._locks[index // self.stripe_size]:
            old = int(self._flat[index])
            self._flat[index] = old + delta
        return old

    def add_many(self, indices: np.ndarray) -> None:
        """Increment each flat cell once per occurrence in ``indices``."""
        if indices.size == 0:
            return
        cells, hits = np.unique(indices, return_counts=True)
        stripe_of = cells // self.stripe_size
        bounds = np.flatnonzero(np.diff(stripe_of)) + 1
        starts = np.concatenate(([0], bounds))
        stops = np.concatenate((bounds, [cells.size]))
        for lo, hi in zip(starts.tolist(), stops.tolist()):
            with self._locks[int(stripe_of[lo])]:
                # cells are unique, so fancy-index += is a true gather-add-scatter
                self._flat[cells[lo:hi]] += hits[lo:hi].astype(self._flat.dtype)
