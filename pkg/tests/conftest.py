import pytest


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Shared list of per-criterion PASS/FAIL lines, echoed after the run."""
    lines = []
    request.config.acceptance_lines = lines
    return lines
