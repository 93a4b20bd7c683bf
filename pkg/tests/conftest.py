import pytest

from multlattice import divisor_lattice, idempotent_chain, product


@pytest.fixture(scope="session")
def d12():
    return divisor_lattice(12)


@pytest.fixture(scope="session")
def d8():
    return divisor_lattice(8)


@pytest.fixture(scope="session")
def d30():
    return divisor_lattice(30)


@pytest.fixture(scope="session")
def d900():
    return divisor_lattice(900)


@pytest.fixture(scope="session")
def chain3():
    return idempotent_chain(3)


@pytest.fixture(scope="session")
def d4xd9():
    return product([divisor_lattice(4), divisor_lattice(9)])


def idx(L, *labels):
    return tuple(L.index(x) for x in labels)


# -- acceptance reporting ----------------------------------------------------------

_criteria: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        verdict = "PASS" if report.passed else "FAIL"
        _criteria[number] = (title, verdict, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, verdict, seconds = _criteria[number]
        terminalreporter.write_line(f"[{verdict}] criterion {number}: {title} ({seconds:.2f}s)")
