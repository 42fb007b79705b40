from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from casegraph.graph import CausalEdge, FactorCategory, FactorNode, build_graph  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"
DATA = Path(__file__).parent.parent / "src" / "casegraph" / "data"

# acceptance lines collected by test_acceptance and printed at the end of the run
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def make_graph(nodes, edges, session_id="s", categories=None, labels=None):
    """Graph from plain ids. Nodes default to Presenting with the id as label."""
    categories = categories or {}
    labels = labels or {}
    fn = [FactorNode(v, labels.get(v, v), FactorCategory(categories.get(v, "presenting"))) for v in nodes]
    return build_graph(session_id, fn, [CausalEdge(a, b) for a, b in edges])


@pytest.fixture
def golden():
    return GOLDEN


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE_RESULTS, key=lambda r: int(r[0][2:].split()[0])):
        terminalreporter.write_line(f"{name}: {'PASS' if ok else 'FAIL'}  {detail}")
