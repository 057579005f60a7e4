"""Shared fixtures and the acceptance summary printer."""

from __future__ import annotations

import numpy as np
import pytest

from catqae.ingest import generate_pareto
from catqae.standin import write_standin_cache

# (criterion, passed, detail) appended by tests/test_acceptance.py
ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def synthetic_losses() -> np.ndarray:
    return generate_pareto(20000, 1.5, 50000.0, 42).losses


@pytest.fixture(scope="session")
def noaa_cache(tmp_path_factory):
    """Offline NOAA cache populated with the deterministic stand-in files."""
    cache = tmp_path_factory.mktemp("noaa_cache")
    write_standin_cache(cache)
    return cache


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for crit, ok, detail in sorted(ACCEPTANCE_LINES, key=lambda t: _order(t[0])):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {crit}: {detail}")


def _order(crit: str):
    digits = "".join(c for c in crit if c.isdigit())
    return (int(digits) if digits else 99, crit)
