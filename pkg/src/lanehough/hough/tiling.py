"""Ceil-division tiling of an image into square blocks (GPU grid analog)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ..errors import ParameterError

DEFAULT_BLOCK = 16


@dataclass(frozen=True)
class GridDims:
    tiles_x: int
    tiles_y: int
    block: int = DEFAULT_BLOCK

    @property
    def n_tiles(self) -> int:
        return self.tiles_x * self.tiles_y


def tile_grid(width: int, height: int, block: int = DEFAULT_BLOCK) -> GridDims:
    if block < 1:
        raise ParameterError(f"block must be >= 1, got {block}")
    return GridDims((width + block - 1) // block, (height + block - 1) // block, block)


def tile_ids(xs: np.ndarray, ys: np.ndarray, grid: GridDims) -> np.ndarray:
    """Row-major tile index of each pixel coordinate."""
    return (ys // grid.block) * grid.tiles_x + xs // grid.block


def tiles_for_worker(grid: GridDims, worker: int, workers: int) -> Iterator[int]:
    """Tiles dealt round-robin: worker ``w`` gets tiles ``w, w + workers, ...``."""
    return iter(range(worker, grid.n_tiles, workers))
