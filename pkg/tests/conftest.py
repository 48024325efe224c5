import pytest

_ACCEPTANCE = {}
N_CRITERIA = 7


@pytest.fixture
def acceptance():
    """``record(n, ok, detail)`` stores one criterion's outcome for the terminal summary."""

    def record(n, ok, detail):
        _ACCEPTANCE[n] = (bool(ok), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, N_CRITERIA + 1):
        if n in _ACCEPTANCE:
            ok, detail = _ACCEPTANCE[n]
            terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            terminalreporter.write_line(f"criterion {n}: NOT RUN  (deselected, or raised before recording)")
