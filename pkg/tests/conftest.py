from __future__ import annotations

import functools
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = Path(__file__).resolve().parent / "fixtures"

# Filled by tests/test_acceptance.py; reported after the run.
ACCEPTANCE_RESULTS: list[tuple[str, bool]] = []


def criterion(name: str):
    """Mark a test as one acceptance criterion; records PASS/FAIL for the
    terminal summary."""

    def decorator(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                ACCEPTANCE_RESULTS.append((name, False))
                raise
            ACCEPTANCE_RESULTS.append((name, True))
            return result

        return wrapper

    return decorator


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}")


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def repo_root() -> Path:
    return REPO_ROOT
