import pytest

from keygraph.montecarlo import implication_tally

_acceptance_lines: list[str] = []


@pytest.fixture
def report():
    """Record one summary line per acceptance criterion."""
    def add(criterion: int, passed: bool, detail: str) -> None:
        line = f"criterion {criterion}: {'PASS' if passed else 'FAIL'} {detail}"
        _acceptance_lines.append(line)
        print(line)
    return add


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    checked, violations = implication_tally()
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)
    terminalreporter.section("k-connected implies min degree >= k")
    terminalreporter.write_line(f"outcomes checked={checked} violations={violations}")


def pytest_sessionfinish(session, exitstatus):
    if implication_tally()[1]:
        session.exitstatus = pytest.ExitCode.TESTS_FAILED
