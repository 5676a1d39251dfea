import re

import pytest

_ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    idx, label = int(m.group(1)), m.group(2).replace("_", " ")
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = dict(report.user_properties).get("detail", "")
        _ACCEPTANCE[idx] = (label, "PASS" if report.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for idx in sorted(_ACCEPTANCE):
        label, outcome, detail = _ACCEPTANCE[idx]
        line = f"criterion {idx}: {outcome} {label}"
        terminalreporter.write_line(f"{line} ({detail})" if detail else line)


@pytest.fixture(scope="session")
def golden_dir():
    from pathlib import Path

    return Path(__file__).parent / "golden"
