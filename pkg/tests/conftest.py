import pytest

from efgsolve import TreeIndex, make_game


@pytest.fixture(scope="session")
def kuhn_tree():
    return TreeIndex(make_game("kuhn"))


@pytest.fixture(scope="session")
def leduc_tree():
    return TreeIndex(make_game("leduc"))


@pytest.fixture(scope="session")
def rps_tree():
    return TreeIndex(make_game("rps_choice"))


@pytest.fixture(scope="session")
def kgmp13_tree():
    return TreeIndex(make_game("kgmp_1_3"))
