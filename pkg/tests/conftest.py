import pytest

from sasfwm import _accel
from sasfwm.susceptibility import diamond_params

BACKENDS = ["numpy"] + (["numba"] if _accel.HAVE_NUMBA else [])

# filled by tests/test_acceptance.py, echoed at the end of the run
ACCEPTANCE_LINES = {}


@pytest.fixture(params=BACKENDS)
def backend(request):
    with _accel.use_backend(request.param):
        yield request.param


@pytest.fixture
def diamond():
    return diamond_params()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
