import networkx as nx
import numpy as np
import pytest

from harmsync.exceptions import DimensionError, GraphValidationError
from harmsync.generators import random_graph, random_network
from harmsync.graphs import (
    CouplingGraph,
    are_edge_isolated,
    connected_components,
    graph_union,
    incident_vertices,
    is_connected,
    laplacian,
)
from harmsync.linalg import null_space


def test_laplacian_of_single_edge():
    g = CouplingGraph.from_edges(3, [(1, 2, 2.5)])
    expected = np.array([[2.5, -2.5, 0.0], [-2.5, 2.5, 0.0], [0.0, 0.0, 0.0]])
    assert np.array_equal(laplacian(g), expected)


def test_laplacian_of_edgeless_graph_is_zero():
    assert np.array_equal(laplacian(CouplingGraph.edgeless(4)), np.zeros((4, 4)))


def test_laplacian_rows_sum_to_zero_and_is_psd():
    rng = np.random.default_rng(7)
    for _ in range(50):
        q = int(rng.integers(1, 9))
        lap = laplacian(random_graph(rng, q, density=0.5))
        assert np.allclose(lap.sum(axis=1), 0.0, atol=1e-12)
        assert np.array_equal(lap, lap.T)
        assert np.linalg.eigvalsh(lap).min() >= -1e-10


def test_laplacian_matches_networkx():
    rng = np.random.default_rng(11)
    g = random_graph(rng, 7, density=0.5)
    reference = nx.Graph()
    reference.add_nodes_from(range(1, 8))
    reference.add_weighted_edges_from(g.edges)
    adjacency = nx.to_numpy_array(reference, nodelist=range(1, 8), weight="weight")
    expected = np.diag(adjacency.sum(axis=1)) - adjacency
    assert np.allclose(laplacian(g), expected)


def test_edges_are_normalized_and_sorted():
    g = CouplingGraph.from_edges(4, [(4, 3, 1.0), (2, 1, 0.5)])
    assert [(e.i, e.j) for e in g.edges] == [(1, 2), (3, 4)]


@pytest.mark.parametrize("edges, message", [
    ([(1, 1, 1.0)], "Self-loop"),
    ([(1, 5, 1.0)], "out of range"),
    ([(1, 2, 0.0)], "positive"),
    ([(1, 2, -1.0)], "positive"),
    ([(1, 2, float("nan"))], "positive"),
    ([(1, 2, 1.0), (2, 1, 3.0)], "Duplicate"),
])
def test_invalid_edges_are_rejected(edges, message):
    with pytest.raises(GraphValidationError, match=message):
        CouplingGraph.from_edges(4, edges)


def test_node_count_must_be_positive():
    with pytest.raises(GraphValidationError):
        CouplingGraph(0)


def test_connectivity():
    path = CouplingGraph.from_edges(3, [(1, 2, 1.0), (2, 3, 1.0)])
    assert is_connected(path)
    assert not is_connected(CouplingGraph.from_edges(3, [(1, 2, 1.0)]))
    assert is_connected(CouplingGraph.edgeless(1))
    assert not is_connected(CouplingGraph.edgeless(2))


def test_connected_components_match_networkx():
    rng = np.random.default_rng(3)
    for _ in range(30):
        g = random_graph(rng, 8, density=0.2)
        reference = nx.Graph()
        reference.add_nodes_from(range(1, 9))
        reference.add_edges_from((i, j) for i, j, _ in g.edges)
        ours = sorted(sorted(c) for c in connected_components(g))
        theirs = sorted(sorted(c) for c in nx.connected_components(reference))
        assert ours == theirs


def test_connectivity_matches_laplacian_null_space():
    rng = np.random.default_rng(11)
    for _ in range(100):
        g = random_graph(rng, int(rng.integers(1, 9)), density=float(rng.uniform(0.1, 0.7)))
        assert is_connected(g) == (null_space(laplacian(g)).dim == 1)


def test_edge_isolation():
    m = CouplingGraph.from_edges(4, [(1, 2, 1.0)])
    k = CouplingGraph.from_edges(4, [(3, 4, 1.0)])
    shared = CouplingGraph.from_edges(4, [(2, 3, 1.0)])
    assert are_edge_isolated(m, k)
    assert not are_edge_isolated(m, shared)
    assert are_edge_isolated(CouplingGraph.edgeless(4), CouplingGraph.edgeless(4))
    assert incident_vertices(shared) == frozenset({2, 3})


def test_edge_isolated_laplacians_annihilate():
    rng = np.random.default_rng(12)
    for _ in range(100):
        net = random_network(rng, edge_isolated=True)
        assert are_edge_isolated(net.inertial, net.restorative)
        product = laplacian(net.inertial) @ laplacian(net.restorative)
        assert np.max(np.abs(product)) <= 1e-12

        g1, g2 = random_graph(rng, net.q, density=0.2), random_graph(rng, net.q, density=0.2)
        if are_edge_isolated(g1, g2):
            assert np.max(np.abs(laplacian(g1) @ laplacian(g2))) <= 1e-12


def test_edge_isolation_requires_same_size():
    with pytest.raises(DimensionError):
        are_edge_isolated(CouplingGraph.edgeless(3), CouplingGraph.edgeless(4))


def test_six_tank_network_union_is_connected(sync_net):
    union = graph_union(graph_union(sync_net.inertial, sync_net.dissipative), sync_net.restorative)
    assert is_connected(union)
    assert not is_connected(sync_net.dissipative)
    assert not is_connected(sync_net.inertial)
    assert not is_connected(sync_net.restorative)


def test_union_sums_shared_weights():
    g1 = CouplingGraph.from_edges(3, [(1, 2, 1.0)])
    g2 = CouplingGraph.from_edges(3, [(1, 2, 0.5), (2, 3, 2.0)])
    union = graph_union(g1, g2)
    assert [tuple(e) for e in union.edges] == [(1, 2, 1.5), (2, 3, 2.0)]
