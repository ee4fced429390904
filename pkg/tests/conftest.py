from __future__ import annotations

import json
from importlib import resources

import pytest

from matchfield.documents import parse, validate_document


def fixture_doc(name: str) -> dict:
    text = resources.files("matchfield").joinpath("fixtures", f"{name}.json").read_text()
    return validate_document(json.loads(text))


def fixture(name: str):
    return parse(fixture_doc(name))


@pytest.fixture
def load():
    return fixture


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
