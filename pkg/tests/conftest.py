import pytest

from ncbrackets import dcd
from ncbrackets.search import search_corpus

FIXDIR = "fixtures"


@pytest.fixture(scope="session")
def hyp():
    return dcd.fixture_hyp()


@pytest.fixture(scope="session")
def zero():
    return dcd.fixture_zero()


@pytest.fixture(scope="session")
def bad():
    return dcd.fixture_bad()


@pytest.fixture(scope="session")
def small_corpus():
    """A modest corpus for unit tests; the acceptance suite runs the full one."""
    return search_corpus(seed=7, count=12)
