from __future__ import annotations

import pytest

from qmatroids.algebra import Matrix, make_field
from qmatroids.directsum import compute_direct_sum
from qmatroids.lattice import get_lattice
from qmatroids.qmatroid import QMatroid

GF2 = make_field(2)
GF4 = make_field(2, 2)
# omega is code 2 in GF(4) = GF(2)[x]/(x^2+x+1)
G1 = "1,2,0,3;0,0,1,2"
G1_HAT = "1,3,0,2;0,0,1,3"
Y_SPACES = (
    "1,0,0,0;0,1,0,0",
    "1,0,1,1;0,1,0,1",
    "1,0,0,1;0,0,1,1",
    "0,1,1,0;0,0,0,1",
    "1,1,0,1;0,0,1,0",
)


@pytest.fixture(scope="session")
def lat24():
    return get_lattice(2, 4)


@pytest.fixture(scope="session")
def m1(lat24):
    return QMatroid.from_matrix(Matrix.from_text(GF4, G1), lat24)


@pytest.fixture(scope="session")
def family(lat24):
    return [lat24.canonicalize(Matrix.from_text(GF2, t)) for t in Y_SPACES]


@pytest.fixture(scope="session")
def u12():
    return QMatroid.uniform(1, get_lattice(2, 2))


@pytest.fixture(scope="session")
def big_sum(m1):
    """M1 (+) M1 on F_2^8, shared by every test that needs it."""
    return compute_direct_sum(m1, m1)


ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion; printed at the end of the run."""
    label = request.node.get_closest_marker("criterion").args[0]
    yield
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    line = f"criterion {label}: {'PASS' if ok else 'FAIL'}"
    ACCEPTANCE.append(line)
    print(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].split(":")[0].split(".")[0])):
            terminalreporter.write_line(line)
