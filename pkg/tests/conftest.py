import pytest

_ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.fixture
def acceptance(request):
    """Record one acceptance verdict; all verdicts are printed in the summary."""
    lines = request.config.stash[_ACCEPTANCE_KEY]

    def record(number, title, passed, detail):
        verdict = "PASS" if passed else "FAIL"
        lines.append((number, f"[{verdict}] criterion {number}: {title} -- {detail}"))
        return passed

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[_ACCEPTANCE_KEY]
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
