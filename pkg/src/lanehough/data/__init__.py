"""Bundled sample input."""

from importlib import resources

SAMPLE_NAME = "sample_lanes.png"


def sample_path():
    """Path to the bundled 512x512 two-lane gray test image."""
    return resources.files(__name__) / SAMPLE_NAME
