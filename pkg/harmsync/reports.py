"""Serialization of networks, netlists and analysis results."""

import json
import math
from typing import Any, Dict, Optional

import numpy as np
from jinja2 import Environment, StrictUndefined

from .exceptions import GraphValidationError, HarmsyncError, SchemaError
from .graphs import CouplingGraph, Edge
from .models import (
    AnalysisReport,
    Coupler,
    CouplerKind,
    KernelWitness,
    NetworkSpec,
    Netlist,
    StructureReport,
    SyncVerdict,
    Tank,
)

GRAPH_FIELDS = ("inertial", "dissipative", "restorative")


def format_float(value: float, digits: int = 17) -> str:
    if not math.isfinite(value):
        raise ValueError(f"Cannot serialize non-finite number {value}")
    text = format(value, f".{digits}g")
    return "0" if text == "-0" else text


def dumps(obj: Any, digits: int = 17, indent: int = 2) -> str:
    """JSON text with floats at ``digits`` significant digits and keys in insertion order."""
    def encode(value: Any, level: int) -> str:
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if value is None:
            return "null"
        if isinstance(value, (bool, np.bool_)):
            return "true" if value else "false"
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        if isinstance(value, (float, np.floating)):
            return format_float(float(value), digits)
        if isinstance(value, str):
            return json.dumps(value)
        if isinstance(value, dict):
            if not value:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {encode(v, level + 1)}" for k, v in value.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(value, (list, tuple)):
            if not value:
                return "[]"
            items = [f"{pad}{encode(v, level + 1)}" for v in value]
            return "[\n" + ",\n".join(items) + "\n" + end + "]"
        raise TypeError(f"Cannot serialize {type(value).__name__}")

    return encode(obj, 0) + "\n"


def _load_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{source}: line {e.lineno}, column {e.colno}: {e.msg}") from e


def _require(data: Dict[str, Any], key: str, kind, path: str):
    if key not in data:
        raise SchemaError(f"missing field '{path}{key}'")
    value = data[key]
    if kind is float:
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    elif kind is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    else:
        ok = isinstance(value, kind)
    if not ok:
        raise SchemaError(f"field '{path}{key}' must be of type {kind.__name__}, got {type(value).__name__}")
    return value


def _parse_edges(records: Any, q: int, name: str) -> CouplingGraph:
    if not isinstance(records, list):
        raise SchemaError(f"field '{name}' must be a list of edges")
    edges = []
    for index, record in enumerate(records):
        path = f"{name}[{index}]."
        if not isinstance(record, dict):
            raise SchemaError(f"field '{name}[{index}]' must be an object with i, j, w")
        edges.append(Edge(_require(record, "i", int, path), _require(record, "j", int, path),
                          _require(record, "w", float, path)))
    try:
        return CouplingGraph(q, tuple(edges))
    except GraphValidationError as e:
        raise SchemaError(f"field '{name}': {e}") from e


def network_from_dict(data: Any) -> NetworkSpec:
    if not isinstance(data, dict):
        raise SchemaError("network document must be a JSON object")
    q = _require(data, "q", int, "")
    if q < 1:
        raise SchemaError(f"field 'q' must be at least 1, got {q}")
    graphs = {name: _parse_edges(data.get(name, []), q, name) for name in GRAPH_FIELDS}
    try:
        return NetworkSpec(
            m0=float(_require(data, "m0", float, "")),
            k0=float(_require(data, "k0", float, "")),
            **graphs,
        )
    except HarmsyncError as e:
        if isinstance(e, SchemaError):
            raise
        raise SchemaError(str(e)) from e


def parse_network(text: str, source: str = "<input>") -> NetworkSpec:
    """Parse the network JSON schema ``{"q", "m0", "k0", "inertial", "dissipative", "restorative"}``."""
    return network_from_dict(_load_json(text, source))


def network_to_dict(net: NetworkSpec) -> Dict[str, Any]:
    data: Dict[str, Any] = {"q": net.q, "m0": net.m0, "k0": net.k0}
    for name in GRAPH_FIELDS:
        graph: CouplingGraph = getattr(net, name)
        data[name] = [{"i": i, "j": j, "w": w} for i, j, w in graph.edges]
    return data


def parse_netlist(text: str, source: str = "<input>") -> Netlist:
    """Parse ``{"q", "tank": {"c0", "l0"}, "couplers": [{"kind", "i", "j", "value"}]}``."""
    data = _load_json(text, source)
    if not isinstance(data, dict):
        raise SchemaError("netlist document must be a JSON object")
    q = _require(data, "q", int, "")
    tank = _require(data, "tank", dict, "")
    couplers = []
    records = data.get("couplers", [])
    if not isinstance(records, list):
        raise SchemaError("field 'couplers' must be a list")
    kinds = {kind.value: kind for kind in CouplerKind}
    for index, record in enumerate(records):
        path = f"couplers[{index}]."
        if not isinstance(record, dict):
            raise SchemaError(f"field 'couplers[{index}]' must be an object")
        kind = _require(record, "kind", str, path)
        if kind not in kinds:
            raise SchemaError(f"field '{path}kind' must be one of {sorted(kinds)}, got {kind!r}")
        couplers.append(Coupler(
            kind=kinds[kind],
            i=_require(record, "i", int, path),
            j=_require(record, "j", int, path),
            value=float(_require(record, "value", float, path)),
        ))
    return Netlist(
        q=q,
        tank=Tank(c0=float(_require(tank, "c0", float, "tank.")), l0=float(_require(tank, "l0", float, "tank."))),
        couplers=tuple(couplers),
    )


def netlist_to_dict(nl: Netlist) -> Dict[str, Any]:
    return {
        "q": nl.q,
        "tank": {"c0": nl.tank.c0, "l0": nl.tank.l0},
        "couplers": [{"kind": c.kind.value, "i": c.i, "j": c.j, "value": c.value} for c in nl.couplers],
    }


def _complex(value: Optional[complex]) -> Optional[Dict[str, float]]:
    if value is None:
        return None
    return {"re": float(value.real), "im": float(value.imag)}


def structure_to_dict(structure: StructureReport) -> Dict[str, Any]:
    return {
        "b_connected": structure.b_connected,
        "m_k_edge_isolated": structure.m_k_edge_isolated,
        "union_connected": structure.union_connected,
        "m_connected": structure.m_connected,
        "k_connected": structure.k_connected,
        "applicable_tests": [method.value for method in structure.applicable_tests],
        "recommendation": structure.recommendation.value,
    }


def verdict_to_dict(verdict: SyncVerdict) -> Dict[str, Any]:
    return {
        "method": verdict.method.value,
        "synchronizes": verdict.synchronizes,
        "conclusive": verdict.conclusive,
        "lambda2": _complex(verdict.lambda2),
        "margin": verdict.margin,
        "raw_margin": verdict.raw_margin,
        "parameter_dependent": verdict.parameter_dependent,
    }


def witness_to_dict(witness: Optional[KernelWitness]) -> Optional[Dict[str, Any]]:
    if witness is None:
        return None
    return {
        "omega": witness.omega,
        "mu": witness.mu,
        "xi": [_complex(complex(value)) for value in witness.xi],
        "residuals": {
            "pencil": witness.residual_pencil,
            "b": witness.residual_b,
            "distance_from_consensus": witness.distance_from_consensus,
        },
    }


def report_to_dict(report: AnalysisReport) -> Dict[str, Any]:
    return {
        "network": network_to_dict(report.network),
        "structure": structure_to_dict(report.structure),
        "verdicts": [verdict_to_dict(verdict) for verdict in report.verdicts],
        "spectrum": [_complex(complex(value)) for value in report.spectrum.values],
        "witness": witness_to_dict(report.witness),
    }


REPORT_TEMPLATE = """\
# Synchronization report

Network: q = {{ net.q }}, m0 = {{ fmt(net.m0) }}, k0 = {{ fmt(net.k0) }}

**Verdict: {{ "synchronizes" if report.synchronizes else "does not synchronize" }}**

## Structure

| property | value |
|----------|-------|
| dissipative graph connected | {{ structure.b_connected }} |
| inertial/restorative edge-isolated | {{ structure.m_k_edge_isolated }} |
| union connected | {{ structure.union_connected }} |
| recommended test | {{ structure.recommendation.value }} |

## Verdicts

| method | synchronizes | conclusive | lambda2 | margin |
|--------|--------------|------------|---------|--------|
{% for v in report.verdicts -%}
| {{ v.method.value }} | {{ v.synchronizes }} | {{ v.conclusive }} | {{ cfmt(v.lambda2) }} | {{ fmt(v.margin) }} |
{% endfor %}
## Spectrum of the complex Laplacian

{% for value in report.spectrum.values -%}
{{ loop.index }}. {{ cfmt(value) }}
{% endfor %}
{% if report.witness %}
## Persistent mode

omega = {{ fmt(report.witness.omega) }} rad/s, mu = {{ fmt(report.witness.mu) }}

xi = [{% for value in report.witness.xi %}{{ cfmt(value) }}{{ ", " if not loop.last else "" }}{% endfor %}]
{% endif %}
"""


def render_markdown(report: AnalysisReport, digits: int = 6) -> str:
    """Human-readable report rendered through a Jinja2 template."""
    def fmt(value: Optional[float]) -> str:
        return "n/a" if value is None else format(float(value), f".{digits}g")

    def cfmt(value: Optional[complex]) -> str:
        if value is None:
            return "n/a"
        value = complex(value)
        sign = "-" if value.imag < 0 else "+"
        return f"{fmt(value.real)} {sign} j{fmt(abs(value.imag))}"

    env = Environment(undefined=StrictUndefined, keep_trailing_newline=True)
    template = env.from_string(REPORT_TEMPLATE)
    return template.render(
        report=report, net=report.network, structure=report.structure, fmt=fmt, cfmt=cfmt
    )
