import itertools

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")


def brute_point_sum(perm, ell):
    """Sum of |perm[g] - perm[g ^ bit]| over every genotype and bit, written out longhand."""
    total = 0
    for g in range(1 << ell):
        for i in range(ell):
            total += abs(perm[g] - perm[g ^ (1 << i)])
    return total


def brute_general_sum(perm, ell):
    total = 0
    for x, y in itertools.combinations(range(1 << ell), 2):
        total += abs(abs(perm[x] - perm[y]) - bin(x ^ y).count("1"))
    return total


@pytest.fixture
def tmp_repr_file(tmp_path):
    def write(text, name="r.json"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return write


# outcomes of the acceptance property tests, keyed "passed"/"failed"
PROPERTY_OUTCOMES: dict[str, list[str]] = {"passed": [], "failed": []}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_property_" in report.nodeid:
        PROPERTY_OUTCOMES["passed" if report.passed else "failed"].append(report.nodeid)


def pytest_terminal_summary(terminalreporter):
    import sys
    results = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
