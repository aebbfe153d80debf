import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def complex_matrices(draw, rows=st.integers(1, 4), cols=None, scale=1.0):
    """Complex matrices with entries drawn through a seeded numpy generator."""
    r = draw(rows) if not isinstance(rows, int) else rows
    if cols is None:
        c = r
    else:
        c = draw(cols) if not isinstance(cols, int) else cols
    seed = draw(st.integers(0, 2**32 - 1))
    g = np.random.default_rng(seed)
    return scale * (g.uniform(-1, 1, (r, c)) + 1j * g.uniform(-1, 1, (r, c)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
