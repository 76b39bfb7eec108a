"""Graph assembly from per-node solutions and differential sub-network extraction.

Each undirected edge keeps all four directional regression coefficients (two
endpoints times two conditions).  An edge is present under a condition when
either endpoint's regression selected it (OR rule, which favors recall of
changes).  An edge is differential when its presence flips between conditions
or a directional coefficient differs between conditions by more than the zero
threshold; the fused penalty makes genuinely unchanged coefficients exactly
equal at convergence, so the threshold only absorbs float noise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .exceptions import DidNotConverge, MissingNode
from .solver import NodeSolution

ZERO_TOL = 1e-9


@dataclass(frozen=True)
class Edge:
    """Undirected edge (source < target by node index).

    ``weight<c>_st`` is the coefficient of the target variable in the
    source's regression under condition c; ``weight<c>_ts`` the reverse.
    """

    source: int
    target: int
    weight1_st: float
    weight1_ts: float
    weight2_st: float
    weight2_ts: float
    present1: bool
    present2: bool


@dataclass(frozen=True)
class NetworkModel:
    """Composite two-condition graph over labeled nodes."""

    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]


@dataclass(frozen=True)
class DifferentialSubnetwork:
    """Edges that differ between conditions, plus their incident nodes."""

    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]


def _snap(value: float) -> float:
    return 0.0 if abs(value) <= ZERO_TOL else float(value)


def assemble(
    solutions: list[NodeSolution],
    names: tuple[str, ...] | list[str],
    force: bool = False,
) -> NetworkModel:
    """Build the composite graph from one solution per node.

    Requires a converged solution for every node unless ``force`` is set;
    raises MissingNode when a node has no solution at all.
    """
    names = tuple(names)
    p = len(names)
    by_index: dict[int, NodeSolution] = {}
    for sol in solutions:
        by_index[sol.node_index] = sol
    missing = [j for j in range(p) if j not in by_index]
    if missing:
        raise MissingNode(f"no solution for node(s) {missing}")
    if not force:
        for j in range(p):
            if not by_index[j].converged:
                raise DidNotConverge(by_index[j])

    edges = []
    for u in range(p):
        cu = by_index[u].coefficients
        for v in range(u + 1, p):
            cv = by_index[v].coefficients
            w1_uv = _snap(cu.beta1[v])
            w1_vu = _snap(cv.beta1[u])
            w2_uv = _snap(cu.beta2[v])
            w2_vu = _snap(cv.beta2[u])
            present1 = w1_uv != 0.0 or w1_vu != 0.0
            present2 = w2_uv != 0.0 or w2_vu != 0.0
            if present1 or present2:
                edges.append(
                    Edge(
                        source=u,
                        target=v,
                        weight1_st=w1_uv,
                        weight1_ts=w1_vu,
                        weight2_st=w2_uv,
                        weight2_ts=w2_vu,
                        present1=present1,
                        present2=present2,
                    )
                )
    return NetworkModel(nodes=names, edges=tuple(edges))


def is_differential(edge: Edge, structural_only: bool = False) -> bool:
    if edge.present1 != edge.present2:
        return True
    if structural_only:
        return False
    return (
        abs(edge.weight1_st - edge.weight2_st) > ZERO_TOL
        or abs(edge.weight1_ts - edge.weight2_ts) > ZERO_TOL
    )


def differential(
    model: NetworkModel, structural_only: bool = False
) -> DifferentialSubnetwork:
    """Sub-network of edges whose presence or weight changes between conditions."""
    edges = tuple(e for e in model.edges if is_differential(e, structural_only))
    incident = sorted({i for e in edges for i in (e.source, e.target)})
    return DifferentialSubnetwork(
        nodes=tuple(model.nodes[i] for i in incident),
        edges=edges,
    )


def _edge_record(model: NetworkModel, edge: Edge, diff_keys: set) -> dict:
    return {
        "source": model.nodes[edge.source],
        "target": model.nodes[edge.target],
        "beta1_st": edge.weight1_st,
        "beta1_ts": edge.weight1_ts,
        "beta2_st": edge.weight2_st,
        "beta2_ts": edge.weight2_ts,
        "present1": edge.present1,
        "present2": edge.present2,
        "differential": (edge.source, edge.target) in diff_keys,
    }


def network_to_json(model: NetworkModel, subnet: DifferentialSubnetwork) -> str:
    """Serialize the composite graph; deterministic for identical inputs."""
    diff_keys = {(e.source, e.target) for e in subnet.edges}
    doc = {
        "nodes": list(model.nodes),
        "edges": [_edge_record(model, e, diff_keys) for e in model.edges],
    }
    return json.dumps(doc, indent=2) + "\n"


def differential_to_json(
    model: NetworkModel, subnet: DifferentialSubnetwork
) -> str:
    """Serialize only the differential sub-network (same edge schema)."""
    diff_keys = {(e.source, e.target) for e in subnet.edges}
    doc = {
        "nodes": list(subnet.nodes),
        "edges": [_edge_record(model, e, diff_keys) for e in subnet.edges],
    }
    return json.dumps(doc, indent=2) + "\n"


def _edge_color(edge: Edge) -> str:
    if edge.present1 and edge.present2:
        return "black"
    return "red" if edge.present1 else "green"


def _dot(nodes, node_names, edges) -> str:
    lines = ["graph network {"]
    for name in node_names:
        lines.append(f'  "{name}";')
    for edge in edges:
        lines.append(
            f'  "{nodes[edge.source]}" -- "{nodes[edge.target]}" '
            f"[color={_edge_color(edge)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def network_to_dot(model: NetworkModel) -> str:
    """DOT text: black = both conditions, red = condition 1 only, green =
    condition 2 only."""
    return _dot(model.nodes, model.nodes, model.edges)


def differential_to_dot(
    model: NetworkModel, subnet: DifferentialSubnetwork
) -> str:
    """DOT text for the differential sub-network, same color coding."""
    return _dot(model.nodes, subnet.nodes, subnet.edges)
