import pytest

# filled by tests/test_acceptance.py: (criterion id, title, passed, seconds, limit, detail)
ACCEPTANCE_RESULTS: list[tuple] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid, title, passed, secs, limit, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] AC{cid:<2} {title} ({secs:.2f} s, limit {limit} s) {detail}")
