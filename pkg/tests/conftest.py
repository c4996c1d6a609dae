import pytest


@pytest.fixture
def verdict_line(capsys):
    """Print one PASS/FAIL line straight to the terminal, bypassing capture."""
    def emit(tag, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {tag}: {detail}")
        return ok
    return emit
