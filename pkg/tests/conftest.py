import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from hompath import DelayConfig, default_source  # noqa: E402
from hompath import _backend  # noqa: E402


@pytest.fixture
def src():
    return default_source()


@pytest.fixture
def matched():
    """Equal birefringent delays of the quartz elements, equal arm lengths."""
    return DelayConfig(tau=0.0, tau1=668.0, tau2=668.0)


@pytest.fixture(params=_backend.available())
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
