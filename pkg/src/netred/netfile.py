"""Network description files and analysis reports (JSON, 1-based node indices).

Node indices in files are 1-based to match the usual drawing convention;
everything internal is 0-based.  Conversion happens here and only here.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np

from .errors import NetredError, UnknownExample
from .generators import (
    lift_aep_graph,
    random_connected_graph,
    random_partition,
)
from .graphcore import (
    Laplacian,
    Partition,
    WeightedGraph,
    laplacian_from_graph,
)
from .netsys import AgentDynamics, NetworkSystem
from .norms import NormResult

SCHEMA_VERSION = 1

_TOP_LEVEL_FIELDS = {
    "schema_version",
    "n_nodes",
    "edges",
    "leaders",
    "agent",
    "partition",
    "options",
    "meta",
}
_OPTION_FIELDS = {"norms", "oracle_check", "tolerances"}
_TOLERANCE_FIELDS = {"aep_rtol", "zero_eig_tol"}


class FileFormatError(NetredError):
    """Schema violation in a network file; carries the offending field path."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _require(condition: bool, field: str, message: str) -> None:
    if not condition:
        raise FileFormatError(field, message)


def _as_float_matrix(value, field: str) -> list:
    _require(isinstance(value, list) and value, field, "must be a nonempty nested list")
    width = None
    out = []
    for r_idx, row in enumerate(value):
        _require(isinstance(row, list) and row, f"{field}[{r_idx}]", "must be a nonempty list")
        if width is None:
            width = len(row)
        _require(len(row) == width, f"{field}[{r_idx}]", f"expected {width} entries")
        for c_idx, entry in enumerate(row):
            _require(
                isinstance(entry, (int, float)) and not isinstance(entry, bool),
                f"{field}[{r_idx}][{c_idx}]",
                "must be a number",
            )
        out.append([float(entry) for entry in row])
    return out


def validate_network_payload(payload: dict) -> dict:
    """Check the raw JSON payload and return it normalized (still 1-based).

    Every failure names the offending field (and index) in the exception.
    """
    _require(isinstance(payload, dict), "$", "top level must be an object")
    unknown = sorted(set(payload) - _TOP_LEVEL_FIELDS)
    _require(not unknown, unknown[0] if unknown else "$", "unknown field")
    for name in ("n_nodes", "edges", "leaders", "agent", "partition"):
        _require(name in payload, name, "missing required field")
    version = payload.get("schema_version", SCHEMA_VERSION)
    _require(version == SCHEMA_VERSION, "schema_version", f"expected {SCHEMA_VERSION}")

    n_nodes = payload["n_nodes"]
    _require(
        isinstance(n_nodes, int) and not isinstance(n_nodes, bool) and n_nodes >= 1,
        "n_nodes",
        "must be a positive integer",
    )

    edges = payload["edges"]
    _require(isinstance(edges, list), "edges", "must be a list")
    for e_idx, edge in enumerate(edges):
        field = f"edges[{e_idx}]"
        _require(isinstance(edge, list) and len(edge) == 3, field, "must be [i, j, weight]")
        i, j, w = edge
        for name, value in (("i", i), ("j", j)):
            _require(
                isinstance(value, int) and not isinstance(value, bool),
                f"{field}.{name}",
                "must be an integer node index",
            )
            _require(1 <= value <= n_nodes, f"{field}.{name}", f"must be in 1..{n_nodes}")
        _require(i != j, field, f"self-loop on node {i}")
        _require(
            isinstance(w, (int, float)) and not isinstance(w, bool),
            f"{field}.weight",
            "must be a number",
        )
        _require(w >= 0, f"{field}.weight", f"negative weight {w}")

    leaders = payload["leaders"]
    _require(isinstance(leaders, list), "leaders", "must be a list")
    seen = set()
    for l_idx, v in enumerate(leaders):
        field = f"leaders[{l_idx}]"
        _require(isinstance(v, int) and not isinstance(v, bool), field, "must be an integer")
        _require(1 <= v <= n_nodes, field, f"node {v} out of range 1..{n_nodes}")
        _require(v not in seen, field, f"leader {v} listed twice")
        seen.add(v)

    agent = payload["agent"]
    _require(isinstance(agent, dict), "agent", "must be an object with A, B, E")
    for name in ("A", "B", "E"):
        _require(name in agent, f"agent.{name}", "missing required field")
    unknown = sorted(set(agent) - {"A", "B", "E"})
    _require(not unknown, f"agent.{unknown[0] if unknown else ''}", "unknown field")
    a = _as_float_matrix(agent["A"], "agent.A")
    b = _as_float_matrix(agent["B"], "agent.B")
    e = _as_float_matrix(agent["E"], "agent.E")
    n = len(a)
    _require(all(len(row) == n for row in a), "agent.A", "must be square")
    _require(len(b) == n and all(len(row) == n for row in b), "agent.B", f"must be {n}x{n}")
    _require(len(e) == n, "agent.E", f"must have {n} rows")

    partition = payload["partition"]
    _require(isinstance(partition, list) and partition, "partition", "must be a nonempty list")
    owner = {}
    for c_idx, cell in enumerate(partition):
        field = f"partition[{c_idx}]"
        _require(isinstance(cell, list) and cell, field, "cell must be a nonempty list")
        for v in cell:
            _require(isinstance(v, int) and not isinstance(v, bool), field, "nodes are integers")
            _require(1 <= v <= n_nodes, field, f"node {v} out of range 1..{n_nodes}")
            _require(
                v not in owner, field, f"node {v} already in partition[{owner.get(v)}]"
            )
            owner[v] = c_idx
    missing = sorted(set(range(1, n_nodes + 1)) - owner.keys())
    _require(not missing, "partition", f"node {missing[0] if missing else 0} not covered")

    options = payload.get("options", {})
    _require(isinstance(options, dict), "options", "must be an object")
    unknown = sorted(set(options) - _OPTION_FIELDS)
    _require(not unknown, f"options.{unknown[0] if unknown else ''}", "unknown field")
    norms = options.get("norms", ["h2", "hinf"])
    _require(isinstance(norms, list) and norms, "options.norms", "must be a nonempty list")
    for n_idx, name in enumerate(norms):
        _require(name in ("h2", "hinf"), f"options.norms[{n_idx}]", "must be 'h2' or 'hinf'")
    oracle = options.get("oracle_check", False)
    _require(isinstance(oracle, bool), "options.oracle_check", "must be a boolean")
    tolerances = options.get("tolerances", {})
    _require(isinstance(tolerances, dict), "options.tolerances", "must be an object")
    unknown = sorted(set(tolerances) - _TOLERANCE_FIELDS)
    _require(
        not unknown, f"options.tolerances.{unknown[0] if unknown else ''}", "unknown field"
    )
    for name, value in tolerances.items():
        _require(
            isinstance(value, (int, float)) and not isinstance(value, bool) and value > 0,
            f"options.tolerances.{name}",
            "must be a positive number",
        )
    return payload


def network_from_payload(payload: dict):
    """Build (NetworkSystem, Partition, options) from a validated payload."""
    payload = validate_network_payload(payload)
    n_nodes = payload["n_nodes"]
    edges = tuple((i - 1, j - 1, float(w)) for i, j, w in payload["edges"])
    graph = WeightedGraph(n_nodes=n_nodes, edges=edges)
    pi = Partition(
        n_nodes=n_nodes,
        cells=tuple(tuple(v - 1 for v in cell) for cell in payload["partition"]),
    )
    dyn = AgentDynamics(A=payload["agent"]["A"], B=payload["agent"]["B"], E=payload["agent"]["E"])
    leaders = tuple(v - 1 for v in payload["leaders"])
    ns = NetworkSystem(laplacian=laplacian_from_graph(graph), leaders=leaders, dyn=dyn)
    options = payload.get("options", {})
    return ns, pi, {
        "norms": tuple(options.get("norms", ("h2", "hinf"))),
        "oracle_check": bool(options.get("oracle_check", False)),
        "tolerances": dict(options.get("tolerances", {})),
    }


def _norm_result_to_dict(result):
    if result is None:
        return None
    return {
        "value": result.value,
        "method": result.method,
        "certificate": result.certificate,
    }


def report_to_dict(report) -> dict:
    """BoundReport -> plain JSON-ready dict (NormResults expanded)."""
    out = {}
    for f in dataclasses.fields(report):
        value = getattr(report, f.name)
        if isinstance(value, NormResult):
            value = _norm_result_to_dict(value)
        elif isinstance(value, tuple):
            value = list(value)
        out[f.name] = value
    return out


def edges_from_laplacian(lap: Laplacian, tol: float = 1e-12) -> list:
    """Recover the (1-based) edge list of the graph underlying a Laplacian."""
    mat = lap.mat
    n = lap.n_nodes
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            w = -mat[i, j]
            if abs(w) > tol:
                edges.append([i + 1, j + 1, float(w)])
    return edges


def _instance_payload(ns: NetworkSystem, pi: Partition, meta: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "n_nodes": ns.n_agents,
        "edges": edges_from_laplacian(ns.laplacian),
        "leaders": [v + 1 for v in ns.leaders],
        "agent": {
            "A": ns.dyn.A.tolist(),
            "B": ns.dyn.B.tolist(),
            "E": ns.dyn.E.tolist(),
        },
        "partition": [[v + 1 for v in cell] for cell in pi.cells],
        "options": {"norms": ["h2", "hinf"], "oracle_check": False},
        "meta": meta,
    }


def generate_example(name: str, seed: int = 0) -> dict:
    """Ready-to-run input payloads for the known example names.

    ``paper-section7``: the worked 5-node path; ``k3-aep``: triangle with
    the partition {{1}, {2, 3}}; ``random-aep`` / ``random-general``:
    seeded constructions (the AEP one is built by quotient lifting).
    """
    from . import generators

    if name == "paper-section7":
        ns, pi = generators.five_node_path_instance()
        return _instance_payload(ns, pi, {"name": name})
    if name == "k3-aep":
        ns, pi = generators.k3_aep_instance()
        return _instance_payload(ns, pi, {"name": name})
    if name == "random-aep":
        rng = np.random.default_rng(seed)
        graph, pi = lift_aep_graph(rng, _random_cell_sizes(rng))
        n_leaders = int(rng.integers(1, min(4, graph.n_nodes) + 1))
        chosen = rng.choice(graph.n_nodes, size=n_leaders, replace=False)
        leaders = tuple(sorted(int(v) for v in np.atleast_1d(chosen)))
        ns = NetworkSystem(
            laplacian=laplacian_from_graph(graph),
            leaders=leaders,
            dyn=generators.single_integrator(),
        )
        return _instance_payload(ns, pi, {"name": name, "seed": seed})
    if name == "random-general":
        rng = np.random.default_rng(seed)
        n_nodes = int(rng.integers(5, 13))
        graph = random_connected_graph(rng, n_nodes)
        pi = random_partition(rng, n_nodes, int(rng.integers(2, n_nodes)))
        n_leaders = int(rng.integers(1, 4))
        chosen = rng.choice(n_nodes, size=n_leaders, replace=False)
        leaders = tuple(sorted(int(v) for v in np.atleast_1d(chosen)))
        ns = NetworkSystem(
            laplacian=laplacian_from_graph(graph),
            leaders=leaders,
            dyn=generators.single_integrator(),
        )
        return _instance_payload(ns, pi, {"name": name, "seed": seed})
    raise UnknownExample(
        f"unknown example {name!r}; known: paper-section7, k3-aep, random-aep, random-general"
    )


def _random_cell_sizes(rng) -> list:
    k = int(rng.integers(2, 6))
    sizes = [int(rng.integers(1, 5)) for _ in range(k)]
    if max(sizes) == 1:
        sizes[0] = int(rng.integers(2, 5))
    return sizes


def dump_json(payload: dict) -> str:
    """Canonical serialization: two-space indent, keys in construction order."""
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"
