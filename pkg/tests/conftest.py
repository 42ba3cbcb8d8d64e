import json
from importlib import resources

import pytest

from g2tcs.blocks import derive_block, load_catalog
from g2tcs.matching import assemble_configuration


def _data(name):
    return json.loads(resources.files("g2tcs").joinpath("data", name).read_text())


@pytest.fixture(scope="session")
def blocks():
    return {Y.id: derive_block(Y) for Y in load_catalog()}


@pytest.fixture(scope="session")
def reference():
    return {row["id"]: row for row in _data("reference_table.json")}


@pytest.fixture(scope="session")
def configs(blocks, reference):
    out = {}
    for rid, row in reference.items():
        rec = _data(f"configs/{row['config']}")
        out[rid] = assemble_configuration(blocks[rec["plus"]], blocks[rec["minus"]], rec["D"])
    return out


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:  # pragma: no cover
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
