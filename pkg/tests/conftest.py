import pytest

from matroid_csm.corpus import BUILTINS, builtin_names
from matroid_csm.matroid import MatroidSpec, build_matroid


@pytest.fixture(scope="session")
def m_ex():
    return BUILTINS["example-2.4"].matroid()


@pytest.fixture(scope="session")
def corpus():
    return {name: BUILTINS[name].matroid() for name in builtin_names()}


def uniform(r, n):
    return build_matroid(MatroidSpec.uniform(r, n))


def mask(*elems):
    out = 0
    for e in elems:
        out |= 1 << e
    return out


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance as acc
    except ImportError:
        return
    if not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acc.RESULTS):
        terminalreporter.write_line(acc.format_line(n))
