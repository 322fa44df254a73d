"""Per-angle cosine/sine tables, in float64 or emulated Q1.15 fixed point.

Bin ``k`` stands for ``theta = k * 180 / n_theta`` degrees over the
half-open range [0, 180). Only bins ``0..n_theta/2`` are evaluated;
the rest are filled from the supplementary-angle identities

    sin(180 - t) =  sin(t)
    cos(180 - t) = -cos(t)

so that pairing holds exactly in both modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import ParameterError

Q15_ONE = 1 << 15
Q15_MAX = Q15_ONE - 1
Q15_MIN = -Q15_ONE
TRIG_MODES = ("float", "q15")


@dataclass(frozen=True, eq=False)
class TrigTable:
    """cos/sin per angle bin.

    In ``float`` mode ``cos``/``sin`` are float64 values. In ``q15`` mode
    they are int64 raw Q1.15 words (real value ``raw / 32768``), so rho
    can be computed with integer multiply-adds.
    """

    n_theta: int
    mode: str
    cos: np.ndarray
    sin: np.ndarray

    @property
    def is_fixed_point(self) -> bool:
        return self.mode == "q15"

    def values(self) -> tuple[np.ndarray, np.ndarray]:
        """Real-valued (float64) view of the table, whatever the mode."""
        if self.is_fixed_point:
            return self.cos / Q15_ONE, self.sin / Q15_ONE
        return self.cos, self.sin

    def theta_deg(self, k) -> float:
        return k * 180.0 / self.n_theta


def _to_q15(v: float) -> int:
    # 1.0 itself is not representable in Q1.15; saturate
    return max(Q15_MIN, min(Q15_MAX, math.floor(v * Q15_ONE + 0.5)))


@lru_cache(maxsize=None)
def build_trig_table(n_theta: int = 180, mode: str = "float") -> TrigTable:
    if n_theta < 2 or n_theta % 2:
        raise ParameterError(f"n_theta must be an even count >= 2, got {n_theta}")
    if mode not in TRIG_MODES:
        raise ParameterError(f"trig mode must be one of {TRIG_MODES}, got {mode!r}")
    half = n_theta // 2

    cos_f = [0.0] * n_theta
    sin_f = [0.0] * n_theta
    for k in range(half + 1):
        rad = math.radians(k * 180.0 / n_theta)
        cos_f[k], sin_f[k] = math.cos(rad), math.sin(rad)
    cos_f[0], sin_f[0] = 1.0, 0.0
    cos_f[half], sin_f[half] = 0.0, 1.0

    if mode == "float":
        cos_v, sin_v, dtype = cos_f, sin_f, np.float64
    else:
        cos_v = [_to_q15(c) for c in cos_f]
        sin_v = [_to_q15(s) for s in sin_f]
        dtype = np.int64

    for k in range(1, half):
        cos_v[n_theta - k] = -cos_v[k]
        sin_v[n_theta - k] = sin_v[k]

    cos_a = np.array(cos_v, dtype=dtype)
    sin_a = np.array(sin_v, dtype=dtype)
    cos_a.flags.writeable = False
    sin_a.flags.writeable = False
    return TrigTable(n_theta, mode, cos_a, sin_a)
