import pytest

from squidsim.params import derive, reference_device
from squidsim.two_level import derive_coupling, extract_two_level

NOMINAL_BETA_L = 1.9
NOMINAL_BETA_C = 0.78

_ACCEPTANCE_LINES = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def device():
    return reference_device()


@pytest.fixture(scope="session")
def derived(device):
    return derive(device)


@pytest.fixture(scope="session")
def model(derived):
    return extract_two_level(NOMINAL_BETA_L, NOMINAL_BETA_C, derived.U0)


@pytest.fixture(scope="session")
def coupling(model, device, derived):
    return derive_coupling(model, device, derived)
