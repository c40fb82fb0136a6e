import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from contextgraph.loader import load_corpus, load_source  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus" / "pvh.cg"

ACCEPTANCE_RESULTS: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture(scope="session")
def corpus():
    res = load_corpus()
    assert res.ok, [str(d) for d in res.diagnostics]
    return res


@pytest.fixture(scope="session")
def pvh(corpus):
    return corpus.graph


def load_ok(source: str):
    res = load_source(source)
    assert res.ok, [str(d) for d in res.diagnostics]
    return res.graph


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        name, ok, detail = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {k}. {name}: {detail}")
