import sys

import pytest

from qdomain.models import CATALOG, quantaloid_of
from qdomain.presheaf import Copresheaf, Presheaf


def gid(Q, name, p="*", q="*"):
    return Q.arrow(p, q, name)


def lower(A, members):
    """Presheaf over 2 that is 1 exactly on ``members``."""
    Q = A.quantaloid
    return Presheaf(A, "*", [gid(Q, "1" if x in members else "0") for x in A.elements])


def upper(A, members):
    Q = A.quantaloid
    return Copresheaf(A, "*", [gid(Q, "1" if x in members else "0") for x in A.elements])


def as_set(A, w):
    """Support of a weight over 2."""
    top = A.quantaloid.top("*", "*")
    return frozenset(x for x, v in zip(A.elements, w.values) if v == top)


@pytest.fixture
def V():
    return CATALOG["fix-v"]


@pytest.fixture
def antichain():
    return CATALOG["fix-antichain2"]


@pytest.fixture
def two():
    return quantaloid_of(CATALOG["fix-2"])


@pytest.fixture
def G3():
    return CATALOG["fix-g3"]


@pytest.fixture
def BG3():
    return CATALOG["fix-bg3"]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
