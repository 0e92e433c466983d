import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from adsboundary.ads import AdsSpec  # noqa: E402
from adsboundary.monoid import MonoidKind, MonoidSpec  # noqa: E402

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when not in ("setup", "call"):
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, {"title": title, "ok": True, "ran": False})
    if report.failed:
        entry["ok"] = False
    if report.when == "call":
        entry["ran"] = True


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "PASS" if entry["ok"] and entry["ran"] else "FAIL"
        terminalreporter.write_line(f"{status} criterion {number}: {entry['title']}")


@pytest.fixture
def z2():
    return AdsSpec(1, MonoidSpec(MonoidKind.FREE_ABELIAN, ("2",)), {"2": [[2]]})


@pytest.fixture
def z23():
    return AdsSpec(1, MonoidSpec(MonoidKind.FREE_ABELIAN, ("2", "3")), {"2": [[2]], "3": [[3]]})


@pytest.fixture
def diag21():
    return AdsSpec(2, MonoidSpec(MonoidKind.FREE_ABELIAN, ("a",)), {"a": [[2, 0], [0, 1]]})


@pytest.fixture
def free2():
    return AdsSpec(1, MonoidSpec(MonoidKind.FREE, ("a", "b")), {"a": [[2]], "b": [[3]]})
