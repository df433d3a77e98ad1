import pytest

from quadtwist.arith import build_factor_tables
from quadtwist.lfunctions import LSeriesAccessor
from quadtwist.modform import lambda_table
from quadtwist.pipeline import Workspace
from quadtwist.windows import SmoothWindow


@pytest.fixture(scope="session")
def small_tables():
    return build_factor_tables(10**4)


@pytest.fixture(scope="session")
def workspace():
    """Full-size tables and cached contour values, shared by every test."""
    return Workspace()


@pytest.fixture(scope="session")
def coeffs(workspace):
    return workspace.coeffs


@pytest.fixture(scope="session")
def tables(workspace):
    return workspace.tables


@pytest.fixture(scope="session")
def acc(workspace):
    return workspace.acc


@pytest.fixture(scope="session")
def coeffs_small():
    return lambda_table(2000)


@pytest.fixture(scope="session")
def acc_small(coeffs_small):
    return LSeriesAccessor.from_eigenform(coeffs_small)


@pytest.fixture
def window():
    return SmoothWindow()


ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def acceptance_results(request):
    return request.config.stash.setdefault(ACCEPTANCE, {})


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(ACCEPTANCE, {})
    if results:
        terminalreporter.section("acceptance criteria")
        for name in sorted(results):
            terminalreporter.write_line(results[name].line())
