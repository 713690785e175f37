from pathlib import Path

import numpy as np
import pytest

from mswave.spectral import make_grid

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"
SCHEMAS = ROOT / "docs" / "schema"


def random_modes(grid, seed=1, modes=3, scale=0.05):
    """Sum of `modes` low Fourier modes with seeded coefficients in [-scale, scale]."""
    rng = np.random.default_rng(seed)
    x = grid.nodes
    u = np.zeros(grid.n)
    for m in range(1, modes + 1):
        a, b = rng.uniform(-scale, scale, size=2)
        u += a * np.cos(2 * np.pi * m * x) + b * np.sin(2 * np.pi * m * x)
    return u


@pytest.fixture
def grid256():
    return make_grid(256)


@pytest.fixture
def sine_fixture(grid256):
    return 0.1 * np.sin(2 * np.pi * grid256.nodes)


@pytest.fixture
def random_fixture(grid256):
    return random_modes(grid256)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
