import os
from importlib import resources

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = resources.files("isoprimes.data")
CUBIC = str(DATA.joinpath("3.3.49.1.json"))
QUARTIC = str(DATA.joinpath("4.0.125.1.json"))

# criterion number -> (passed, detail), filled in by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def cubic_path():
    return CUBIC


@pytest.fixture(scope="session")
def quartic_path():
    return QUARTIC


@pytest.fixture(scope="session")
def cubic():
    from isoprimes.galois import load_field_data
    return load_field_data(CUBIC)


@pytest.fixture(scope="session")
def quartic():
    from isoprimes.galois import load_field_data
    return load_field_data(QUARTIC)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


def data_path(name: str) -> str:
    return os.path.join(os.path.dirname(CUBIC), name)
