import pytest

CRITERIA: dict[int, tuple[str, str, float]] = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        verdict, title, secs = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d} {verdict}  {title}  ({secs:.2f} s)")


@pytest.fixture
def record():
    return CRITERIA
