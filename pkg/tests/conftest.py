import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import pytest

from heckekit.coxeter import CoxeterSystem
from heckekit.fields import QQ, GF
from heckekit.realization import Realization


_SYSTEMS: dict = {}
_REALIZATIONS: dict = {}
_CALCULI: dict = {}


def make_calculus(name: str, field=QQ):
    from heckekit.soergelcalc import Calculus

    key = (name, field.characteristic)
    if key not in _CALCULI:
        _CALCULI[key] = Calculus(make_realization(name, field))
    return _CALCULI[key]


def make_system(name: str) -> CoxeterSystem:
    # one shared instance per type: Elements compare by owning system identity
    if name in _SYSTEMS:
        return _SYSTEMS[name]
    _SYSTEMS[name] = _build_system(name)
    return _SYSTEMS[name]


def _build_system(name: str) -> CoxeterSystem:
    if name == "A1":
        return CoxeterSystem(("s",), ((1,),))
    if name == "A1xA1":
        return CoxeterSystem(("s", "t"), ((1, 2), (2, 1)))
    if name == "A2":
        return CoxeterSystem(("s", "t"), ((1, 3), (3, 1)))
    if name == "B2":
        return CoxeterSystem(("s", "t"), ((1, 4), (4, 1)))
    if name == "A3":
        return CoxeterSystem(("s", "t", "u"), ((1, 3, 2), (3, 1, 3), (2, 3, 1)))
    if name == "I2inf":
        return CoxeterSystem(("s", "t"), ((1, None), (None, 1)), finite=False)
    raise ValueError(name)


CARTAN = {
    "A1": [[2]],
    "A1xA1": [[2, 0], [0, 2]],
    "A2": [[2, -1], [-1, 2]],
    "B2": [[2, -1], [-2, 2]],
    "A3": [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
}


def make_realization(name: str, field=QQ) -> Realization:
    key = (name, field.characteristic)
    if key in _REALIZATIONS:
        return _REALIZATIONS[key]
    system = make_system(name)
    cartan = CARTAN[name]
    n = system.rank
    coroots = [[field.of(1 if i == j else 0) for i in range(n)] for j in range(n)]
    roots = [[field.of(cartan[j][i]) for i in range(n)] for j in range(n)]
    _REALIZATIONS[key] = Realization(system, field, n, coroots, roots)
    return _REALIZATIONS[key]


@pytest.fixture(scope="session")
def a1():
    return make_system("A1")


@pytest.fixture(scope="session")
def a1xa1():
    return make_system("A1xA1")


@pytest.fixture(scope="session")
def a2():
    return make_system("A2")


@pytest.fixture(scope="session")
def b2():
    return make_system("B2")


@pytest.fixture(scope="session")
def a3():
    return make_system("A3")


@pytest.fixture(scope="session")
def i2inf():
    return make_system("I2inf")


@pytest.fixture(scope="session")
def real_a2():
    return make_realization("A2")


@pytest.fixture(scope="session")
def real_a1():
    return make_realization("A1")


@pytest.fixture(scope="session")
def real_a1xa1():
    return make_realization("A1xA1")


@pytest.fixture(scope="session")
def real_a3():
    return make_realization("A3")


@pytest.fixture(scope="session")
def real_b2():
    return make_realization("B2")


@pytest.fixture(scope="session")
def real_a2_f5():
    return make_realization("A2", GF(5))
