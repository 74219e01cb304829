import pytest

from wiretaplab.anti_latin import compatibility_graph, enumerate_anti_latin


@pytest.fixture(scope="session")
def d3_catalog():
    return enumerate_anti_latin(3)


@pytest.fixture(scope="session")
def d3_decodable_adj(d3_catalog):
    return compatibility_graph(d3_catalog, 3, "decodable")


@pytest.fixture(scope="session")
def d3_one_to_one_adj(d3_catalog):
    return compatibility_graph(d3_catalog, 3, "one-to-one")
