import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).parent
sys.path.insert(0, str(TESTS))

DATA = TESTS / "data"


@pytest.fixture(scope="session")
def metric_fixture():
    rows = DATA.joinpath("metric_fixture.tsv").read_text(encoding="utf-8").splitlines()[1:]
    out = []
    for line in rows:
        kind, hyp, refs = line.split("\t")
        out.append((kind, hyp, refs.split(" ||| ")))
    return out


# ------------------------------------------------------ acceptance summary


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by this test")
    config._acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (rep.when != "call" and rep.passed):
        return
    number, title = marker.args
    detail = dict(item.user_properties).get("detail", "")
    status = "PASS" if rep.passed else "FAIL"
    previous = item.config._acceptance.get(number)
    if previous is None or previous[1] == "PASS":
        item.config._acceptance[number] = (title, status, rep.duration if rep.when == "call" else 0.0, detail)


def pytest_terminal_summary(terminalreporter, config):
    results = config._acceptance
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, status, duration, detail = results[number]
        line = f"AC-{number:02d} {status}  {title} ({duration:.2f}s)"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
