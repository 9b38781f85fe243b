import networkx as nx
import pytest
from prefect.testing.utilities import prefect_test_harness

from app.services.generators import grassmann_lines, half_spin, polar_space, projective_space
from app.services.geometry import Geometry, point_graph
from app.services.graphs import Graph


@pytest.fixture(autouse=True, scope="session")
def prefect_backend():
    with prefect_test_harness():
        yield


def from_networkx(g: nx.Graph) -> Graph:
    h = nx.convert_node_labels_to_integers(g)
    return Graph.from_edges(h.number_of_nodes(), h.edges())


def to_networkx(graph: Graph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    g.add_edges_from(graph.edges())
    return g


def shrikhande() -> nx.Graph:
    g = nx.Graph()
    for a in range(4):
        for b in range(4):
            for da, db in ((0, 1), (1, 0), (1, 1)):
                g.add_edge((a, b), ((a + da) % 4, (b + db) % 4))
    return g


def paley(p: int) -> nx.Graph:
    squares = {x * x % p for x in range(1, p)}
    g = nx.Graph()
    g.add_nodes_from(range(p))
    g.add_edges_from((a, b) for a in range(p) for b in range(a + 1, p) if (b - a) % p in squares)
    return g


@pytest.fixture
def petersen() -> Graph:
    return from_networkx(nx.petersen_graph())


@pytest.fixture
def rook() -> Graph:
    return from_networkx(nx.cartesian_product(nx.complete_graph(4), nx.complete_graph(4)))


@pytest.fixture
def shrikhande_graph() -> Graph:
    return from_networkx(shrikhande())


@pytest.fixture
def paley13() -> Graph:
    return from_networkx(paley(13))


@pytest.fixture
def triangular() -> Graph:
    """J(5,2), the complement of the Petersen graph."""
    return from_networkx(nx.complement(nx.petersen_graph()))


@pytest.fixture
def k7() -> Graph:
    return from_networkx(nx.complete_graph(7))


@pytest.fixture
def hexagon() -> Graph:
    return from_networkx(nx.cycle_graph(6))


@pytest.fixture(scope="session")
def w32() -> Geometry:
    return polar_space("w", 3, 2)


@pytest.fixture(scope="session")
def w52() -> Geometry:
    return polar_space("w", 5, 2)


@pytest.fixture(scope="session")
def w52_graph(w52) -> Graph:
    return point_graph(w52)


@pytest.fixture(scope="session")
def klein() -> Geometry:
    """Q+(5,2)."""
    return polar_space("qplus", 5, 2)


@pytest.fixture(scope="session")
def fano() -> Geometry:
    return projective_space(2, 2)


@pytest.fixture(scope="session")
def a42() -> Geometry:
    return grassmann_lines(4, 2)


@pytest.fixture(scope="session")
def d55() -> Geometry:
    return half_spin(5, 2)
