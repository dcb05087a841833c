import pytest

# Acceptance tests append (criterion, verdict, detail) here; the lines are
# printed after the run so they appear in the normal pytest output.
ACCEPTANCE_LINES: list[tuple[int, str, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, verdict, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {detail}")


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for the acceptance criterion under test.

    The test calls ``criterion(number, detail)`` once it has computed its
    figures; the verdict is taken from the test outcome.
    """
    state = {}

    def record(number: int, detail: str = "") -> None:
        state["number"], state["detail"] = number, detail

    yield record
    # a test that failed before calling record still reports its number
    number = state.get("number", getattr(request.function, "criterion_number", 0))
    failed = request.node.rep_call.failed if hasattr(request.node, "rep_call") else True
    line = (number, "FAIL" if failed else "PASS", state.get("detail", ""))
    ACCEPTANCE_LINES.append(line)
    print(f"criterion {line[0]}: {line[1]} {line[2]}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep
