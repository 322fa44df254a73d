"""Grayscale/RGB image containers plus PGM (P5) and PNG load/save.

Pixel planes are stored as numpy arrays of shape ``(height, width)``
(``(height, width, 3)`` for RGB), row-major, with ``x`` the column
index and ``y`` the row index, origin at the top-left corner.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .errors import DimensionError, FormatError, UsageError

PathLike = Union[str, os.PathLike]

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
# netpbm header tokens, with '#' comments allowed between them
_PGM_TOKEN = re.compile(rb"(?:\s|#[^\n]*\n?)*(\S+)")


def _frozen_plane(data, ndim: int, name: str) -> np.ndarray:
    arr = np.asarray(data)
    if arr.ndim != ndim:
        raise DimensionError(f"{name} needs a {ndim}-D array, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} must be at least 1x1, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueError(f"{name} values must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    else:
        arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale plane; ``pixels[y, x]``."""

    pixels: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pixels", _frozen_plane(self.pixels, 2, type(self).__name__))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def data(self) -> bytes:
        """Row-major raster bytes, ``width * height`` long."""
        return self.pixels.tobytes()

    @classmethod
    def from_bytes(cls, width: int, height: int, data: bytes) -> "GrayImage":
        if len(data) != width * height:
            raise DimensionError(f"expected {width * height} bytes, got {len(data)}")
        return cls(np.frombuffer(data, dtype=np.uint8).reshape(height, width))

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    def __repr__(self):
        return f"{type(self).__name__}({self.width}x{self.height})"


@dataclass(frozen=True, eq=False)
class RgbImage:
    """8-bit RGB plane; ``pixels[y, x] == (r, g, b)``."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = _frozen_plane(self.pixels, 3, "RgbImage")
        if arr.shape[2] != 3:
            raise DimensionError(f"RgbImage needs 3 channels, got {arr.shape[2]}")
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def data(self) -> bytes:
        return self.pixels.tobytes()

    def __eq__(self, other):
        if not isinstance(other, RgbImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    def __repr__(self):
        return f"RgbImage({self.width}x{self.height})"


def rgb_to_luma(rgb: np.ndarray) -> np.ndarray:
    """BT.601 luma, rounded to the nearest integer (halves round up)."""
    rgb = np.asarray(rgb, dtype=np.int64)
    weighted = 299 * rgb[..., 0] + 587 * rgb[..., 1] + 114 * rgb[..., 2]
    return ((weighted + 500) // 1000).astype(np.uint8)


def _parse_pgm(raw: bytes, path) -> GrayImage:
    if not raw.startswith(b"P5"):
        raise FormatError(f"{path}: not a binary PGM (magic {raw[:2]!r})")
    pos = 2
    fields = []
    for _ in range(3):
        m = _PGM_TOKEN.match(raw, pos)
        if m is None:
            raise FormatError(f"{path}: truncated PGM header")
        fields.append(m.group(1))
        pos = m.end()
    try:
        width, height, maxval = (int(f) for f in fields)
    except ValueError:
        raise FormatError(f"{path}: non-numeric PGM header field") from None
    if width < 1 or height < 1:
        raise FormatError(f"{path}: bad PGM dimensions {width}x{height}")
    if maxval != 255:
        raise FormatError(f"{path}: PGM maxval must be 255, got {maxval}")
    # exactly one whitespace byte separates the header from the raster
    if pos >= len(raw) or not raw[pos:pos + 1].isspace():
        raise FormatError(f"{path}: truncated PGM header")
    payload = raw[pos + 1:pos + 1 + width * height]
    if len(payload) != width * height:
        raise FormatError(
            f"{path}: truncated PGM payload ({len(payload)} of {width * height} bytes)")
    return GrayImage.from_bytes(width, height, payload)


def _parse_png(path) -> GrayImage:
    from PIL import Image, UnidentifiedImageError

    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode in ("L", "1"):
                return GrayImage(np.asarray(im.convert("L")))
            if mode == "LA":
                return GrayImage(np.asarray(im)[..., 0])
            if mode in ("RGB", "RGBA", "P", "PA"):
                rgb = np.asarray(im.convert("RGB"))
                return GrayImage(rgb_to_luma(rgb))
    except (UnidentifiedImageError, SyntaxError, OSError) as exc:
        if isinstance(exc, (FileNotFoundError, PermissionError)):
            raise
        raise FormatError(f"{path}: unreadable PNG ({exc})") from exc
    raise FormatError(f"{path}: unsupported PNG mode {mode!r}, need 8-bit gray or RGB")


def load_gray(path: PathLike) -> GrayImage:
    """Load a binary PGM or 8-bit PNG as grayscale.

    Colour PNGs are reduced with :func:`rgb_to_luma`. Raises
    ``FileNotFoundError`` for a missing file and :class:`FormatError`
    for anything malformed.
    """
    with open(path, "rb") as fh:
        head = fh.read(8)
        if head.startswith(_PNG_SIGNATURE):
            fh.close()
            return _parse_png(path)
        raw = head + fh.read()
    return _parse_pgm(raw, path)


def save_image(img: Union[GrayImage, RgbImage], path: PathLike, format: str | None = None) -> None:
    """Write ``img`` as ``pgm`` or ``png``; format defaults from the suffix."""
    if format is None:
        format = "png" if Path(path).suffix.lower() == ".png" else "pgm"
    format = format.lower()
    if format not in ("pgm", "png"):
        raise UsageError(f"unknown image format {format!r}")
    if format == "pgm":
        if not isinstance(img, GrayImage):
            raise UsageError("PGM output requires a GrayImage")
        header = b"P5\n%d %d\n255\n" % (img.width, img.height)
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(img.data)
        return

    from PIL import Image

    im = Image.fromarray(np.ascontiguousarray(img.pixels))
    with open(path, "wb") as fh:
        im.save(fh, format="PNG")


def zero_pad(img: GrayImage, border: int) -> GrayImage:
    if border < 0:
        raise ValueError("border must be >= 0")
    if border == 0:
        return img
    return GrayImage(np.pad(img.pixels, border, mode="constant", constant_values=0))
