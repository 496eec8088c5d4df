"""Seeded random networks for property checks, plus the six-tank reference network."""

from typing import Iterable, Optional, Tuple

import numpy as np

from .graphs import CouplingGraph, Edge
from .models import NetworkSpec

WEIGHT_RANGE = (0.1, 5.0)
PARAMETER_RANGE = (0.1, 10.0)


def random_graph(rng: np.random.Generator, q: int, density: float = 0.4,
                 weight_range: Tuple[float, float] = WEIGHT_RANGE,
                 nodes: Optional[Iterable[int]] = None) -> CouplingGraph:
    """Erdos-Renyi style graph; edges only between ``nodes`` (1-based) when given."""
    allowed = sorted(nodes) if nodes is not None else list(range(1, q + 1))
    edges = []
    for a, i in enumerate(allowed):
        for j in allowed[a + 1:]:
            if rng.random() < density:
                edges.append(Edge(i, j, float(rng.uniform(*weight_range))))
    return CouplingGraph(q, tuple(edges))


def random_connected_graph(rng: np.random.Generator, q: int, density: float = 0.2,
                           weight_range: Tuple[float, float] = WEIGHT_RANGE) -> CouplingGraph:
    """Random spanning tree plus extra random edges."""
    order = rng.permutation(q) + 1
    weights = {}
    for k in range(1, q):
        i, j = sorted((int(order[k]), int(order[rng.integers(0, k)])))
        weights[(i, j)] = float(rng.uniform(*weight_range))
    for i in range(1, q + 1):
        for j in range(i + 1, q + 1):
            if (i, j) not in weights and rng.random() < density:
                weights[(i, j)] = float(rng.uniform(*weight_range))
    return CouplingGraph(q, tuple(Edge(i, j, w) for (i, j), w in weights.items()))


def random_parameters(rng: np.random.Generator,
                      parameter_range: Tuple[float, float] = PARAMETER_RANGE) -> Tuple[float, float]:
    """Random oscillator ``(m0, k0)``."""
    return float(rng.uniform(*parameter_range)), float(rng.uniform(*parameter_range))


def random_network(rng: np.random.Generator, q: Optional[int] = None, q_max: int = 6,
                   density: Optional[float] = None,
                   edgeless_inertial: bool = False,
                   edgeless_restorative: bool = False,
                   connected_dissipative: bool = False,
                   edge_isolated: bool = False) -> NetworkSpec:
    """Random network with optional structural constraints.

    With ``edge_isolated`` the nodes are split in two random groups; inertial
    edges stay inside one group and restorative edges inside the other.
    """
    if q is None:
        q = int(rng.integers(2, q_max + 1))
    if density is None:
        density = float(rng.uniform(0.15, 0.6))

    inertial_nodes = restorative_nodes = None
    if edge_isolated:
        perm = rng.permutation(q) + 1
        cut = int(rng.integers(0, q + 1))
        inertial_nodes, restorative_nodes = perm[:cut].tolist(), perm[cut:].tolist()

    inertial = (CouplingGraph.edgeless(q) if edgeless_inertial
                else random_graph(rng, q, density, nodes=inertial_nodes))
    restorative = (CouplingGraph.edgeless(q) if edgeless_restorative
                   else random_graph(rng, q, density, nodes=restorative_nodes))
    dissipative = (random_connected_graph(rng, q) if connected_dissipative
                   else random_graph(rng, q, density))
    m0, k0 = random_parameters(rng)
    return NetworkSpec(inertial, dissipative, restorative, m0, k0)


def six_tank_network(m0: float = 2.0, k0: float = 2.0) -> NetworkSpec:
    """Six LC tanks: capacitor 2-3, resistor 4-5, inductors 1-2, 3-4, 5-6.

    Synchronizes for ``(m0, k0) = (2, 2)`` but not for ``(1, 1)`` although
    both share ``omega0 = 1``.
    """
    return NetworkSpec(
        inertial=CouplingGraph.from_edges(6, [(2, 3, 0.375)]),
        dissipative=CouplingGraph.from_edges(6, [(4, 5, 1.0)]),
        restorative=CouplingGraph.from_edges(6, [(1, 2, 2.0), (3, 4, 2.0), (5, 6, 1.5)]),
        m0=m0,
        k0=k0,
    )
