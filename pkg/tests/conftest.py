import math

import numpy as np
import pytest

from twistlab import construct

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_alpha(rng, n, margin=0.05):
    return construct.sample_alpha(n, rng, margin=margin)


def random_rep(rng, n, margin=0.05):
    alpha = random_alpha(rng, n, margin)
    return construct.random_dt_rep(alpha, int(rng.integers(2**62)))


SYMMETRIC_ALPHA = (7.0 * math.pi / 4.0,) * 4


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
