"""Seeded synthetic road scenes with two planted lane lines of known (theta, r)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hough import rho_max_for
from .imgio import GrayImage
from .lanes import Peak, line_pixels

BACKGROUND = 20
LANE = 230
NOISE_SIGMA = 3.0
# zero padding makes the border an edge of strength ~4*BACKGROUND; keep it under threshold
SALT_DENSITY = 5e-4


@dataclass(frozen=True)
class PlantedLine:
    theta_bin: int
    rho: int
    pixels: np.ndarray  # (n, 2) x, y of the drawn raster

    @property
    def length(self) -> float:
        """Euclidean span of the drawn raster."""
        return float(math.hypot(*(self.pixels[-1] - self.pixels[0])))


def lane_parameters(width: int, height: int, n_theta: int = 180):
    """(theta_bin, rho) of a left and right lane meeting above image centre.

    Normals sit at 45 and 135 degrees; both lines pass (to within rounding
    of rho) through the vanishing point (width/2, 0.35*height).
    """
    vx, vy = width / 2, 0.35 * height
    c = math.cos(math.radians(45))
    return [(n_theta // 4, round((vx + vy) * c)),
            (3 * n_theta // 4, round((vy - vx) * c))]


def synthetic_lane_scene(width: int = 512, height: int = 512, seed: int = 0,
                         n_theta: int = 180,
                         salt_density: float = SALT_DENSITY) -> tuple[GrayImage, list[PlantedLine]]:
    rng = np.random.default_rng(seed)
    img = rng.normal(BACKGROUND, NOISE_SIGMA, size=(height, width))
    salt = rng.random((height, width)) < salt_density
    img[salt] = 255
    offset = rho_max_for(width, height)
    horizon = 0.35 * height
    planted = []
    for k, rho in lane_parameters(width, height, n_theta):
        pts = line_pixels(Peak(k, rho + offset, 0, n_theta, offset), (width, height))
        pts = pts[pts[:, 1] >= horizon]
        img[pts[:, 1], pts[:, 0]] = LANE
        planted.append(PlantedLine(k, rho, pts))
    pixels = np.clip(np.rint(img), 0, 255).astype(np.uint8)
    return GrayImage(pixels), planted
