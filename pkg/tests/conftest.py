import time
from contextlib import contextmanager

import pytest

RESULTS: dict[int, list] = {}


@contextmanager
def _record(number: int, label: str):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        dt = time.perf_counter() - t0
        RESULTS.setdefault(number, []).append((label, ok, dt))
        print(f"criterion {number} [{label}]: {'PASS' if ok else 'FAIL'} ({dt:.1f} s)")


@pytest.fixture
def criterion():
    return _record


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        parts = RESULTS[number]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{label} {'ok' if good else 'failed'} {dt:.1f}s" for label, good, dt in parts)
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  ({detail})")
