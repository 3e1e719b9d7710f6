import random

import pytest

from rankfuse.core import RankedList, make_ranked_list

ACCEPTANCE_RESULTS = {}


def rl(query_id="q1", **scores):
    return make_ranked_list(query_id, scores.items())


def random_list(rng: random.Random, n: int, query_id: str = "q", pool: int | None = None,
                lo: float = -50.0, hi: float = 50.0, ties: bool = False) -> RankedList:
    """Random canonical list of ``n`` labels drawn from ``pool`` candidates."""
    pool = max(pool or n, n)
    labels = rng.sample([f"d{i:03d}" for i in range(pool)], n)
    if ties:
        values = [round(rng.uniform(lo, hi)) for _ in range(n)]
    else:
        values = [rng.uniform(lo, hi) for _ in range(n)]
    return make_ranked_list(query_id, zip(labels, values))


@pytest.fixture
def r1r2():
    return rl(A=1.0, B=0.5), rl(B=1.0, C=0.4)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        prev = ACCEPTANCE_RESULTS.get(number, (title, True))
        ACCEPTANCE_RESULTS[number] = (title, prev[1] and report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, ok = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  [{number:2d}] {title}")
