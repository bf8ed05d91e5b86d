import numpy as np
import pytest

from barrier_resonances.barrier import BarrierParams
from barrier_resonances.polefinder import lowest_poles
from barrier_resonances.resonance import approximate_state, default_xgrid, spatial_state

# published pole locations, rounded to four decimals
MU1 = 1.8213 - 0.0023j
MU2 = 7.0237 - 0.0564j
MU3 = 14.2336 - 0.8923j
MU3_PRIME = 17.4652 - 4.4029j


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance(request, capsys):
    """Records and prints one PASS/FAIL line per criterion."""
    def report(number, ok, message):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {message}"
        request.config._acceptance_lines.append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok
    return report


@pytest.fixture(scope="session")
def p1():
    return BarrierParams(2.0, 3.0, 10.0)


@pytest.fixture(scope="session")
def p2():
    return BarrierParams(2.0, 2.1, 10.0)


@pytest.fixture(scope="session")
def poles1(p1):
    return lowest_poles(p1, 10)


@pytest.fixture(scope="session")
def poles2(p2):
    return lowest_poles(p2, 10)


@pytest.fixture(scope="session")
def states1(p1, poles1):
    """Normalised samples for poles 0, 1, 2 at orders 0 and 9: {(j, order): state}."""
    x = default_xgrid(p1)
    out = {}
    for j in range(3):
        for order in (0, 9):
            st = approximate_state(poles1, j, order)
            out[j, order] = spatial_state(st.j, st.poles, x, p1)
    return out


@pytest.fixture(scope="session")
def mu3_prime_sequence(p2, poles2):
    """Samples of the state for the third pole of the narrow barrier, orders 0..9."""
    x = default_xgrid(p2)
    seq = []
    for order in range(10):
        st = approximate_state(poles2, 2, order)
        seq.append(spatial_state(st.j, st.poles, x, p2))
    return seq


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
