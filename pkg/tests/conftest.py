from __future__ import annotations

import re
import sys
from importlib import resources
from pathlib import Path

import pytest

TESTS = Path(__file__).parent
DATA = TESTS / "data"
MUTATIONS = DATA / "mutations"
FIXTURES = Path(str(resources.files("wfav") / "fixtures"))

sys.path.insert(0, str(TESTS))  # oracles and generators


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def corpus_models() -> list[Path]:
    return sorted(FIXTURES.glob("*.gqm"))


def corpus_nets() -> list[Path]:
    return sorted(DATA.glob("*.wfa")) + sorted(MUTATIONS.glob("*.wfa"))


@pytest.fixture
def load():
    from wfav.parser import parse_goal_model

    def _load(name_or_text: str):
        text = fixture_path(name_or_text).read_text() if name_or_text.endswith(".gqm") else name_or_text
        m = parse_goal_model(text)
        assert not isinstance(m, list), "\n".join(map(str, m))
        return m

    return _load


# ---- one summary line per acceptance criterion

_CRITERION = re.compile(r"test_criterion_(\d+)_")
_results: dict[int, list[tuple[str, str, str]]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m or "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        reason = ""
        if report.failed and report.longrepr is not None:
            crash = getattr(report.longrepr, "reprcrash", None)
            reason = (crash.message if crash else str(report.longrepr)).splitlines()[0][:160]
        _results.setdefault(int(m.group(1)), []).append((report.nodeid, report.outcome, reason))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_results):
        rows = _results[n]
        ok = all(outcome == "passed" for _, outcome, _ in rows)
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({sum(o == 'passed' for _, o, _ in rows)}/{len(rows)} checks)"
        reasons = [r for _, o, r in rows if o != "passed" and r]
        if reasons:
            line += f" - {reasons[0]}"
        tr.write_line(line)
