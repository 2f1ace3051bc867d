import json
import os

import pytest

# filled by the acceptance suite; echoed after the run so the criterion
# verdicts survive output capture
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def make_manifest(tmp_path):
    """Write a JSONL manifest from record dicts; returns its path."""

    def _make(rows, name="manifest.jsonl"):
        path = tmp_path / name
        with open(path, "w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
        return str(path)

    return _make


@pytest.fixture
def data_dir():
    return os.path.join(os.path.dirname(__file__), "data")
