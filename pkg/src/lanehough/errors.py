"""Exception types raised across the pipeline.

I/O failures are left as the builtin ``OSError`` family so callers can
tell a missing file apart from a malformed one.
"""


class LaneHoughError(Exception):
    """Base class for every error this package raises on purpose."""


class FormatError(LaneHoughError, ValueError):
    """Image or accumulator file has a bad header or a truncated payload."""


class ParameterError(LaneHoughError, ValueError):
    """An argument lies outside the range an operation accepts."""


class DimensionError(ParameterError):
    """An image is too small (or mis-shaped) for the requested operation."""


class UsageError(LaneHoughError, ValueError):
    """A request that contradicts an operation's contract, e.g. RGB to PGM."""
