import pytest

from prohull.compacta import circle_compactum, exp_graph_compactum


@pytest.fixture(scope="session")
def circle256():
    return circle_compactum(256)


@pytest.fixture(scope="session")
def circle64():
    return circle_compactum(64)


@pytest.fixture(scope="session")
def exp_graph():
    return exp_graph_compactum(200, 0.5, 40)
