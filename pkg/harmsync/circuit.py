"""LC-tank networks coupled by capacitors, resistors and inductors.

Node voltages obey the oscillator network equations with
``m0 = c0``, ``k0 = 1/l0``, ``m_ij = c_ij``, ``b_ij = 1/r_ij`` and
``k_ij = 1/l_ij``. Units are SI throughout.
"""

import math
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .exceptions import GraphValidationError, NetlistError
from .graphs import CouplingGraph, Edge
from .models import Coupler, CouplerKind, NetworkSpec, Netlist, Tank

Equation = Dict[str, Dict[int, Fraction]]


def validate_netlist(nl: Netlist, q: Optional[int] = None) -> int:
    """Check values, node ranges and coupler uniqueness; return the node count."""
    q = nl.q if q is None else q
    if isinstance(q, bool) or not isinstance(q, int) or q < 1:
        raise NetlistError(f"Node count must be a positive integer, got {q!r}")
    for name in ("c0", "l0"):
        value = getattr(nl.tank, name)
        if not math.isfinite(value) or value <= 0.0:
            raise NetlistError(f"Tank {name} must be positive, got {value}")

    seen = set()
    for coupler in nl.couplers:
        label = f"{coupler.kind.value}({coupler.i},{coupler.j})"
        if not math.isfinite(coupler.value) or coupler.value <= 0.0:
            raise NetlistError(f"Coupler {label} must have a positive value, got {coupler.value}")
        if coupler.i == coupler.j:
            raise NetlistError(f"Coupler {label} connects a node to itself")
        if not (1 <= coupler.i <= q and 1 <= coupler.j <= q):
            raise NetlistError(f"Coupler {label} references a node outside 1..{q}")
        key = (coupler.kind, min(coupler.i, coupler.j), max(coupler.i, coupler.j))
        if key in seen:
            # parallel elements of one kind are not merged
            raise NetlistError(f"More than one {coupler.kind.value} coupler between nodes {key[1]} and {key[2]}")
        seen.add(key)
    return q


def _coupling_weight(coupler: Coupler) -> float:
    if coupler.kind is CouplerKind.CAPACITOR:
        return coupler.value
    return 1.0 / coupler.value


def netlist_to_network(nl: Netlist, q: Optional[int] = None) -> NetworkSpec:
    """Map a netlist to oscillator coefficients.

    Capacitors become inertial edges weighted by capacitance, resistors
    dissipative edges weighted by conductance, inductors restorative edges
    weighted by inverse inductance.
    """
    q = validate_netlist(nl, q)
    edges: Dict[CouplerKind, List[Edge]] = {kind: [] for kind in CouplerKind}
    for coupler in nl.couplers:
        edges[coupler.kind].append(Edge(coupler.i, coupler.j, _coupling_weight(coupler)))
    try:
        return NetworkSpec(
            inertial=CouplingGraph(q, tuple(edges[CouplerKind.CAPACITOR])),
            dissipative=CouplingGraph(q, tuple(edges[CouplerKind.RESISTOR])),
            restorative=CouplingGraph(q, tuple(edges[CouplerKind.INDUCTOR])),
            m0=nl.tank.c0,
            k0=1.0 / nl.tank.l0,
        )
    except GraphValidationError as e:
        raise NetlistError(str(e)) from e


def network_to_netlist(net: NetworkSpec) -> Netlist:
    """Re-emit the couplers realizing a network (inverse of :func:`netlist_to_network`)."""
    couplers = []
    for kind, graph in ((CouplerKind.CAPACITOR, net.inertial),
                        (CouplerKind.RESISTOR, net.dissipative),
                        (CouplerKind.INDUCTOR, net.restorative)):
        for i, j, w in graph.edges:
            value = w if kind is CouplerKind.CAPACITOR else 1.0 / w
            couplers.append(Coupler(kind, i, j, value))
    return Netlist(q=net.q, tank=Tank(c0=net.m0, l0=1.0 / net.k0), couplers=tuple(couplers))


def uncoupled_frequency(nl: Netlist) -> float:
    """``omega0 = 1 / sqrt(c0 l0)`` in rad/s."""
    if nl.tank.c0 <= 0.0 or nl.tank.l0 <= 0.0:
        raise NetlistError("Tank values must be positive")
    return 1.0 / math.sqrt(nl.tank.c0 * nl.tank.l0)


def node_equations(net: NetworkSpec) -> List[Equation]:
    """Exact coefficients of every node equation.

    Entry ``i`` maps each term kind (``"acc"``, ``"vel"``, ``"pos"``) to
    ``{node: coefficient}``, so node ``i`` reads
    ``sum_j acc[j] x_j'' + vel[j] x_j' + pos[j] x_j = 0``. Coefficients are
    exact ``Fraction`` sums of the stored binary weights.
    """
    equations: List[Equation] = [
        {"acc": {i: Fraction(net.m0)}, "vel": {}, "pos": {i: Fraction(net.k0)}}
        for i in range(1, net.q + 1)
    ]
    for term, graph in (("acc", net.inertial), ("vel", net.dissipative), ("pos", net.restorative)):
        for i, j, w in graph.edges:
            weight = Fraction(w)
            for a, b in ((i, j), (j, i)):
                row = equations[a - 1][term]
                row[a] = row.get(a, Fraction(0)) + weight
                row[b] = row.get(b, Fraction(0)) - weight
    return equations


_DERIVATIVE_MARK = {"acc": "''", "vel": "'", "pos": ""}


def format_node_equation(equation: Equation) -> str:
    """Render one node equation, e.g. ``5/2 x1'' - 1/2 x3'' + 4 x1 - 2 x2 = 0``."""
    terms: List[Tuple[str, int, Fraction]] = [
        (term, node, coeff)
        for term in ("acc", "vel", "pos")
        for node, coeff in sorted(equation[term].items())
        if coeff != 0
    ]
    parts = []
    for term, node, coeff in terms:
        sign = "-" if coeff < 0 else "+"
        text = f"{abs(coeff)} x{node}{_DERIVATIVE_MARK[term]}"
        parts.append(text if not parts and sign == "+" else (f"-{text}" if not parts else f"{sign} {text}"))
    return " ".join(parts or ["0"]) + " = 0"
