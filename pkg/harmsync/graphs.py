"""Weighted undirected coupling graphs and their Laplacians."""

import math
from collections import deque
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, NamedTuple, Sequence, Tuple

import numpy as np

from .exceptions import DimensionError, GraphValidationError


class Edge(NamedTuple):
    """Undirected edge between 1-based nodes ``i < j`` with weight ``w > 0``."""
    i: int
    j: int
    w: float


@dataclass(frozen=True)
class CouplingGraph:
    """Symmetric nonnegative coupling over ``q`` nodes.

    Edges are kept as a sorted tuple with ``i < j``; the dense weight matrix
    is only materialized by :func:`laplacian`.
    """
    q: int
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        if isinstance(self.q, bool) or not isinstance(self.q, (int, np.integer)) or self.q < 1:
            raise GraphValidationError(f"Node count must be a positive integer, got {self.q!r}")

        seen = set()
        normalized: List[Edge] = []
        for edge in self.edges:
            i, j, w = edge
            i, j, w = int(i), int(j), float(w)
            if i == j:
                raise GraphValidationError(f"Self-loop on node {i} is not allowed")
            if i > j:
                i, j = j, i
            if i < 1 or j > self.q:
                raise GraphValidationError(f"Edge ({i}, {j}) out of range 1..{self.q}")
            if not math.isfinite(w) or w <= 0.0:
                raise GraphValidationError(f"Edge ({i}, {j}) must have a positive finite weight, got {w}")
            if (i, j) in seen:
                raise GraphValidationError(f"Duplicate edge ({i}, {j})")
            seen.add((i, j))
            normalized.append(Edge(i, j, w))

        object.__setattr__(self, "q", int(self.q))
        object.__setattr__(self, "edges", tuple(sorted(normalized)))

    @classmethod
    def edgeless(cls, q: int) -> "CouplingGraph":
        return cls(q)

    @classmethod
    def from_edges(cls, q: int, edges: Iterable[Sequence[float]]) -> "CouplingGraph":
        """Build a graph from ``(i, j, w)`` triples in any orientation."""
        return cls(q, tuple(Edge(*edge) for edge in edges))

    @property
    def is_edgeless(self) -> bool:
        return not self.edges

    def weight_matrix(self) -> np.ndarray:
        w = np.zeros((self.q, self.q))
        for i, j, weight in self.edges:
            w[i - 1, j - 1] = weight
            w[j - 1, i - 1] = weight
        return w

    def neighbors(self) -> List[List[int]]:
        """0-based adjacency lists."""
        adjacency: List[List[int]] = [[] for _ in range(self.q)]
        for i, j, _ in self.edges:
            adjacency[i - 1].append(j - 1)
            adjacency[j - 1].append(i - 1)
        return adjacency


def laplacian(g: CouplingGraph) -> np.ndarray:
    """Graph Laplacian: weighted degree on the diagonal, ``-w_ij`` off it."""
    w = g.weight_matrix()
    return np.diag(w.sum(axis=1)) - w


def connected_components(g: CouplingGraph) -> List[FrozenSet[int]]:
    """Connected components as sets of 1-based node indices, by breadth-first search."""
    adjacency = g.neighbors()
    visited = [False] * g.q
    components = []
    for start in range(g.q):
        if visited[start]:
            continue
        visited[start] = True
        queue = deque([start])
        component = []
        while queue:
            node = queue.popleft()
            component.append(node + 1)
            for other in adjacency[node]:
                if not visited[other]:
                    visited[other] = True
                    queue.append(other)
        components.append(frozenset(component))
    return components


def is_connected(g: CouplingGraph) -> bool:
    return len(connected_components(g)) == 1


def incident_vertices(g: CouplingGraph) -> FrozenSet[int]:
    """Nodes touched by at least one edge."""
    return frozenset(node for i, j, _ in g.edges for node in (i, j))


def _check_same_size(g1: CouplingGraph, g2: CouplingGraph) -> None:
    if g1.q != g2.q:
        raise DimensionError(f"Graphs have different node counts: {g1.q} != {g2.q}")


def are_edge_isolated(g1: CouplingGraph, g2: CouplingGraph) -> bool:
    """True when no node is incident to an edge of both graphs."""
    _check_same_size(g1, g2)
    return not (incident_vertices(g1) & incident_vertices(g2))


def graph_union(g1: CouplingGraph, g2: CouplingGraph) -> CouplingGraph:
    """Edge-wise union; weights of shared edges are summed."""
    _check_same_size(g1, g2)
    weights = {}
    for i, j, w in g1.edges + g2.edges:
        weights[(i, j)] = weights.get((i, j), 0.0) + w
    return CouplingGraph(g1.q, tuple(Edge(i, j, w) for (i, j), w in weights.items()))
