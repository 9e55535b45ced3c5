import pytest

ACCEPTANCE: dict[int, tuple[str, bool]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(n, title)(ok, detail)."""
    def start(number, title):
        ACCEPTANCE[number] = (title, False)

        def finish(ok, detail=""):
            label = f"{title} ({detail})" if detail else title
            ACCEPTANCE[number] = (label, bool(ok))
            assert ok, label
        return finish
    return start


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n}. {title}")
