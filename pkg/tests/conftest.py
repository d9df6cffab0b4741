import pytest

from groverline.absorb import table1
from groverline.localize import oscillation_trace, two_peak_profile


@pytest.fixture(scope="session")
def table1_rows():
    return table1(max_n=6)


@pytest.fixture(scope="session")
def trace500():
    return oscillation_trace(500)


@pytest.fixture(scope="session")
def profile500():
    return two_peak_profile(500)
