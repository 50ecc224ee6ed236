import re

import pytest

from drivenspin.partition import build_lambda_table, difference_weights


@pytest.fixture(scope="session")
def table_2():
    return build_lambda_table(2.0)


@pytest.fixture(scope="session")
def weights_2(table_2):
    return difference_weights(table_2)


@pytest.fixture(scope="session")
def table_20():
    return build_lambda_table(20.0)


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion and assert on it."""
    lines = request.config.stash[_ACCEPTANCE]

    def record(label, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} {label}: {detail}"
        lines.append(line)
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=_criterion_order):
            terminalreporter.write_line(line)


def _criterion_order(line):
    tag = re.search(r"\[(\d+)([a-z]?)\]", line)
    return (int(tag.group(1)), tag.group(2)) if tag else (99, line)
