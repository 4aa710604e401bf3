import pytest

from stacked_codes.lattice import build_hex_color_code
from stacked_codes.stacked import build_stacked_code


@pytest.fixture(scope="session")
def code3():
    return build_hex_color_code(3)


@pytest.fixture(scope="session")
def code5():
    return build_hex_color_code(5)


@pytest.fixture(scope="session")
def stacked3():
    return build_stacked_code(3)


@pytest.fixture(scope="session")
def stacked5():
    return build_stacked_code(5)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
