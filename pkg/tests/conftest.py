import numpy as np
import pytest

from lanehough.edge import BinaryImage

ACCEPTANCE_RESULTS = []


def random_binary(rng, height, width, density):
    return BinaryImage(np.where(rng.random((height, width)) < density, 255, 0).astype(np.uint8))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
