import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from longest_ap.sequence import BitSequence

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# lines recorded by the acceptance module, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def bit_lists(min_size=1, max_size=40):
    return st.lists(st.integers(0, 1), min_size=min_size, max_size=max_size)


@st.composite
def sequences(draw, min_size=1, max_size=40):
    return BitSequence.from_bits(np.array(draw(bit_lists(min_size, max_size)), dtype=np.uint8))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def seq_of():
    from longest_ap.sequence import from_text

    return from_text
