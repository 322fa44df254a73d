"""Hough transform engine: trig tables, rho quantisation, voting strategies."""

from .accumulator import (
    HoughAccumulator,
    dump_accumulator,
    load_accumulator,
    n_rho_for,
    rho_max_for,
)
from .atomic import AtomicCounterArray
from .tiling import DEFAULT_BLOCK, GridDims, tile_grid
from .trig import TRIG_MODES, TrigTable, build_trig_table
from .voting import (
    STRATEGY_NAMES,
    MulCounter,
    Strategy,
    VoteStrategy,
    accumulate,
    rho_of,
    vote_bins,
    white_pixels,
)

__all__ = [
    "AtomicCounterArray",
    "DEFAULT_BLOCK",
    "GridDims",
    "HoughAccumulator",
    "MulCounter",
    "STRATEGY_NAMES",
    "Strategy",
    "TRIG_MODES",
    "TrigTable",
    "VoteStrategy",
    "accumulate",
    "build_trig_table",
    "dump_accumulator",
    "load_accumulator",
    "n_rho_for",
    "rho_max_for",
    "rho_of",
    "tile_grid",
    "vote_bins",
    "white_pixels",
]
