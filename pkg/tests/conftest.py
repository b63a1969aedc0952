import pytest

# acceptance test name -> criterion label, and label -> outcome
_LABELS = {}
_CRITERIA = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            _LABELS[item.name] = mark.args[0]


def pytest_runtest_logreport(report):
    failed_setup = report.when == "setup" and report.outcome != "passed"
    if report.when != "call" and not failed_setup:
        return
    label = _LABELS.get(report.nodeid.split("::")[-1])
    if label is not None:
        _CRITERIA[label] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(f"{_CRITERIA[label]}  criterion {label}")


@pytest.fixture
def two_user_pair():
    from fairband.model import Scenario, UserModel

    users = [UserModel(1.0, 1.0, 0.5, 1e-3, 1 - 1e-3), UserModel(2.0, 1.0, 0.5, 1e-3, 1 - 1e-3)]
    return Scenario(users, 1.0, alpha=1.0, p=1, delta=0.1)


@pytest.fixture
def table_scenario():
    from fairband.model import Scenario, sample_physical_users

    return Scenario(sample_physical_users(5, seed=1), 1e7, alpha=0.5, p=2, delta=0.6)
