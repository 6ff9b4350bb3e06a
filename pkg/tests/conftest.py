import pytest

from elltor import DEFAULT


@pytest.fixture(scope="session")
def params():
    return DEFAULT


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, in criterion order."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid or rep.when != "call" and outcome == "passed":
                continue
            num = int(nodeid.split("test_criterion_")[1].split("_")[0])
            lines.append((num, "PASS" if outcome == "passed" else "FAIL", nodeid))
    if lines:
        terminalreporter.section("acceptance criteria")
        for num, verdict, nodeid in sorted(set(lines)):
            terminalreporter.write_line(f"criterion {num:2d}: {verdict}  {nodeid.split('::')[1]}")
