import io
import json
from pathlib import Path

import jsonschema
import pytest

from projbound.cli import main

SCHEMAS = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def load_schema(name):
    return json.loads((SCHEMAS / f"{name}.json").read_text())


def validate(payload, name):
    jsonschema.validate(payload, load_schema(name))


@pytest.fixture
def cli():
    return run_cli


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
