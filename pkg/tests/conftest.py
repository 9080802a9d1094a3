"""Shared brute-force oracles.

These work on plain Python strings and never call into the package's
window keys, so they stay independent of the code they check.
"""

from collections import Counter
from functools import lru_cache

import pytest


@lru_cache(maxsize=None)
def brute_prefix(n: int) -> str:
    s = "0"
    while len(s) < n:
        s = "".join("01" if c == "0" else "00" for c in s)
    return s[:n]


def brute_windows(m: int, count: int) -> list:
    s = brute_prefix(count + m - 1)
    return [s[i : i + m] for i in range(count)]


def brute_first_occurrences(m: int, count: int) -> dict:
    first = {}
    for i, w in enumerate(brute_windows(m, count), start=1):
        first.setdefault(w, i)
    return first


def brute_counts(m: int, count: int) -> Counter:
    return Counter(brute_windows(m, count))


ACCEPTANCE_RESULTS = []


@pytest.fixture
def record():
    def _record(label: str, passed: bool, detail: str = ""):
        ACCEPTANCE_RESULTS.append((label, passed, detail))
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {label}" + (f" -- {detail}" if detail else ""))
