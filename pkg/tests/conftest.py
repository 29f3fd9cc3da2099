import pytest

from spdc_hom import SetupConfig


@pytest.fixture(scope="session")
def setup():
    return SetupConfig()


def pytest_configure(config):
    config.stash[_CRITERIA] = []


_CRITERIA = pytest.StashKey[list]()


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _config.stash[_CRITERIA].append((props["criterion"], report.outcome))


def pytest_sessionstart(session):
    global _config
    _config = session.config


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = config.stash.get(_CRITERIA, [])
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome in sorted(rows, key=lambda r: int(r[0].split()[0])):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {label}: {status}")
