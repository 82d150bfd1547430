import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

_acceptance_lines: list[str] = []


def pytest_addoption(parser):
    parser.addoption(
        "--pdc-path",
        default=None,
        help="directory holding the Process Discovery Contest 2019 logs (enables the optional integration test)",
    )


@pytest.fixture
def samples() -> Path:
    return SAMPLES


@pytest.fixture
def pdc_path(request):
    return request.config.getoption("--pdc-path")


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL/SKIP line per acceptance criterion; ``None`` means skipped."""

    def record(criterion: str, passed: bool | None, detail: str = "") -> None:
        status = "SKIP" if passed is None else "PASS" if passed else "FAIL"
        _acceptance_lines.append(f"[{status}] {criterion}" + (f" -- {detail}" if detail else ""))

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
