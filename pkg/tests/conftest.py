import math
import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from qubitmech import Pulse, PulseSequence

TWO_PI = 2 * math.pi


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


pulses = st.builds(
    Pulse,
    st.floats(min_value=0, max_value=TWO_PI, allow_nan=False),
    st.floats(min_value=0, max_value=TWO_PI, exclude_max=True, allow_nan=False),
)


def sequences(min_size=1, max_size=6):
    return st.lists(pulses, min_size=min_size, max_size=max_size).map(lambda ps: PulseSequence(tuple(ps)))


transitions = st.sampled_from(["00", "01", "10", "11"])


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for criterion in sorted(verdicts):
            terminalreporter.write_line(verdicts[criterion])
