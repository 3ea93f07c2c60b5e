import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES: list[str] = []


def _fmt(value) -> str:
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(_fmt(v) for v in value) + ")"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    if isinstance(value, np.bool_):
        return str(bool(value))
    return str(value)


@pytest.fixture
def report_criterion():
    """Record a one-line verdict for the acceptance summary and return whether it passed."""

    def record(label: str, value, target, tol, passed: bool) -> bool:
        verdict = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"{verdict}  {label}: value={_fmt(value)} target={_fmt(target)} tol={_fmt(tol)}")
        print(ACCEPTANCE_LINES[-1])
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
