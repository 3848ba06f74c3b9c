import pytest
from hypothesis import settings

from subchain.model import SfcSpec

settings.register_profile("repo", derandomize=True, deadline=None, max_examples=200)
settings.load_profile("repo")

# evaluation parameters: lambda = 100, mu = 200, SLA = 0.125 s, p = 0.9, four VNFs
LAM, MU, SLA, P, N = 100.0, 200.0, 0.125, 0.9, 4


@pytest.fixture
def table1():
    return SfcSpec.homogeneous(N, MU, P, LAM, SLA)


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if any(acceptance_log.RESULTS.values()):
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.summary_lines():
            terminalreporter.write_line(line)
