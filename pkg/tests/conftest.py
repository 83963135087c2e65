import pytest

from htp.codec import CodecConfig
from htp.modular_math import generate_basis


@pytest.fixture(scope="session")
def default_codec():
    return CodecConfig()


@pytest.fixture
def tiny_codec():
    # basis [3, 5, 7]; not reversible for any l_max, only for arithmetic checks
    return CodecConfig(generate_basis(3), l_max=2)


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE_LINES

    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
