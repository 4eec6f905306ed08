"""Attack-graph data model, validation, conversion and cycle detection.

The central type is :class:`AttackGraph`: a directed graph of Leaf/And/Or
nodes, each carrying a local probability. Unlike classic attack-graph
formalisms the model deliberately admits directed cycles; the solvers in
:mod:`cybag.propagate` and :mod:`cybag.circuit` are built to handle them.

Graphs are immutable after construction and all functions here are pure,
so everything is safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping

import networkx as nx

from .errors import CycleLimitError, PlainCycleError

DEFAULT_MAX_CYCLES = 10_000


class NodeKind(Enum):
    LEAF = "leaf"
    AND = "and"
    OR = "or"


@dataclass(frozen=True)
class Node:
    """A single graph node: identity, gate kind, label and local probability."""

    id: int
    kind: NodeKind
    label: str = ""
    local_prob: float = 1.0

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"node id must be non-negative, got {self.id}")
        if not 0.0 <= self.local_prob <= 1.0:
            raise ValueError(
                f"local_prob must be in [0, 1], got {self.local_prob} for node {self.id}"
            )


@dataclass(frozen=True)
class AttackGraph:
    """Immutable directed graph of typed nodes.

    ``nodes`` and ``edges`` are canonicalized to ascending order at
    construction so that all derived outputs are deterministic. The
    constructor does not reject malformed graphs; :func:`validate` reports
    violations as data.
    """

    nodes: tuple[Node, ...]
    edges: tuple[tuple[int, int], ...]

    def __init__(self, nodes: Iterable[Node], edges: Iterable[tuple[int, int]]):
        object.__setattr__(
            self, "nodes", tuple(sorted(nodes, key=lambda n: n.id))
        )
        object.__setattr__(
            self, "edges", tuple(sorted((int(a), int(b)) for a, b in edges))
        )

    @cached_property
    def node_map(self) -> dict[int, Node]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def node_ids(self) -> tuple[int, ...]:
        return tuple(n.id for n in self.nodes)

    @cached_property
    def parents(self) -> dict[int, tuple[int, ...]]:
        """Parent ids per node, ascending; every node id is present as a key."""
        pa: dict[int, list[int]] = {n.id: [] for n in self.nodes}
        for src, dst in self.edges:
            if dst in pa and src in pa:
                pa[dst].append(src)
        return {v: tuple(sorted(ps)) for v, ps in pa.items()}

    @cached_property
    def children(self) -> dict[int, tuple[int, ...]]:
        ch: dict[int, list[int]] = {n.id: [] for n in self.nodes}
        for src, dst in self.edges:
            if src in ch and dst in ch:
                ch[src].append(dst)
        return {v: tuple(sorted(cs)) for v, cs in ch.items()}

    def node(self, node_id: int) -> Node:
        return self.node_map[node_id]

    def kind(self, node_id: int) -> NodeKind:
        return self.node_map[node_id].kind

    def local_prob(self, node_id: int) -> float:
        return self.node_map[node_id].local_prob

    def replace_probs(self, probs: Mapping[int, float]) -> "AttackGraph":
        """New graph with the given nodes' local probabilities replaced."""
        nodes = tuple(
            Node(n.id, n.kind, n.label, probs.get(n.id, n.local_prob))
            for n in self.nodes
        )
        return AttackGraph(nodes, self.edges)

    def without_edge(self, src: int, dst: int) -> "AttackGraph":
        return AttackGraph(self.nodes, tuple(e for e in self.edges if e != (src, dst)))

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.node_ids)
        g.add_edges_from(self.edges)
        return g


@dataclass(frozen=True)
class PlainBag:
    """Bipartite exploit/condition graph with an individual score per node.

    ``require_edges`` run condition -> exploit (all must hold), and
    ``imply_edges`` run exploit -> condition (any suffices). The combined
    graph must be acyclic; nodes missing from ``score`` default to 1.0.
    """

    exploits: frozenset[int]
    conditions: frozenset[int]
    require_edges: tuple[tuple[int, int], ...]
    imply_edges: tuple[tuple[int, int], ...]
    score: Mapping[int, float]

    def __init__(self, exploits, conditions, require_edges, imply_edges, score):
        object.__setattr__(self, "exploits", frozenset(exploits))
        object.__setattr__(self, "conditions", frozenset(conditions))
        object.__setattr__(
            self, "require_edges", tuple(sorted((int(a), int(b)) for a, b in require_edges))
        )
        object.__setattr__(
            self, "imply_edges", tuple(sorted((int(a), int(b)) for a, b in imply_edges))
        )
        object.__setattr__(self, "score", dict(score))
        overlap = self.exploits & self.conditions
        if overlap:
            raise ValueError(f"ids appear as both exploit and condition: {sorted(overlap)}")
        for c, e in self.require_edges:
            if c not in self.conditions or e not in self.exploits:
                raise ValueError(f"require edge ({c}, {e}) is not condition -> exploit")
        for e, c in self.imply_edges:
            if e not in self.exploits or c not in self.conditions:
                raise ValueError(f"imply edge ({e}, {c}) is not exploit -> condition")


@dataclass(frozen=True)
class CyclePath:
    """A simple directed cycle, canonicalized to start at its smallest node id.

    ``nodes`` lists the cycle with the first id repeated at the end.
    """

    nodes: tuple[int, ...]

    def __post_init__(self):
        if len(self.nodes) < 3 or self.nodes[0] != self.nodes[-1]:
            raise ValueError(f"not a closed path: {self.nodes}")
        interior = self.nodes[:-1]
        if len(set(interior)) != len(interior):
            raise ValueError(f"cycle is not simple: {self.nodes}")

    @property
    def node_set(self) -> frozenset[int]:
        return frozenset(self.nodes[:-1])

    @property
    def edge_list(self) -> tuple[tuple[int, int], ...]:
        return tuple(zip(self.nodes[:-1], self.nodes[1:]))


@dataclass(frozen=True)
class Issue:
    code: str
    subject: object  # node id or edge pair
    message: str


@dataclass
class ValidationReport:
    errors: list[Issue] = field(default_factory=list)
    warnings: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error_codes(self) -> list[str]:
        return [i.code for i in self.errors]

    def warning_codes(self) -> list[str]:
        return [i.code for i in self.warnings]


def validate(graph: AttackGraph) -> ValidationReport:
    """Check the structural invariants of an attack graph.

    Violations are returned as data, never raised: duplicate node ids,
    edges touching unknown nodes, self-edges, duplicate edges and leaves
    with incoming edges are errors; And/Or nodes without parents are
    flagged as warnings only (their probability follows the empty-gate
    conventions in :mod:`cybag.propagate`).
    """
    report = ValidationReport()
    seen: set[int] = set()
    for node in graph.nodes:
        if node.id in seen:
            report.errors.append(
                Issue("DUPLICATE_NODE", node.id, f"node id {node.id} defined more than once")
            )
        seen.add(node.id)

    known = {n.id for n in graph.nodes}
    seen_edges: set[tuple[int, int]] = set()
    for edge in graph.edges:
        src, dst = edge
        if src not in known or dst not in known:
            report.errors.append(
                Issue("DANGLING_EDGE", edge, f"edge {edge} references an unknown node")
            )
            continue
        if src == dst:
            report.errors.append(Issue("SELF_EDGE", edge, f"self-edge on node {src}"))
            continue
        if edge in seen_edges:
            report.errors.append(Issue("DUPLICATE_EDGE", edge, f"duplicate edge {edge}"))
            continue
        seen_edges.add(edge)
        if graph.node_map[dst].kind is NodeKind.LEAF:
            report.errors.append(
                Issue("LEAF_HAS_PARENT", edge, f"leaf node {dst} has incoming edge from {src}")
            )

    incoming = {dst for _, dst in graph.edges}
    for node in graph.nodes:
        if node.kind is not NodeKind.LEAF and node.id not in incoming:
            report.warnings.append(
                Issue(
                    "EMPTY_PARENTS",
                    node.id,
                    f"{node.kind.value} node {node.id} has no parents",
                )
            )
    return report


def topological_order(graph: AttackGraph) -> list[int] | None:
    """Kahn's algorithm with an ascending-id frontier; None if the graph is cyclic."""
    import heapq

    indeg = {v: 0 for v in graph.node_ids}
    for _, dst in graph.edges:
        indeg[dst] += 1
    frontier = [v for v, d in indeg.items() if d == 0]
    heapq.heapify(frontier)
    order: list[int] = []
    while frontier:
        v = heapq.heappop(frontier)
        order.append(v)
        for c in graph.children[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(frontier, c)
    if len(order) != len(graph.node_ids):
        return None
    return order


def _canonical_cycle(cycle: list[int]) -> CyclePath:
    pivot = cycle.index(min(cycle))
    rotated = cycle[pivot:] + cycle[:pivot]
    return CyclePath(tuple(rotated) + (rotated[0],))


def find_cycles(graph: AttackGraph, max_cycles: int = DEFAULT_MAX_CYCLES) -> list[CyclePath]:
    """All simple directed cycles, each starting at its smallest node id.

    The empty list is returned exactly when the graph is acyclic. Raises
    :class:`CycleLimitError` (carrying the partial list) once more than
    ``max_cycles`` cycles have been seen; cycle counts can be exponential
    in graph size, so the cap is a hard safety net.
    """
    found: list[CyclePath] = []
    for cycle in nx.simple_cycles(graph.to_networkx()):
        if len(found) >= max_cycles:
            err = CycleLimitError(
                f"more than {max_cycles} simple cycles; enumeration stopped", found
            )
            raise err
        found.append(_canonical_cycle(cycle))
    found.sort(key=lambda c: (len(c.nodes), c.nodes))
    return found


def is_loop_free(graph: AttackGraph) -> bool:
    """True when the undirected version of the graph is a forest.

    Each directed edge counts as its own undirected edge, so a pair of
    antiparallel edges already forms a loop. Loop-free implies acyclic.
    """
    parent: dict[int, int] = {v: v for v in graph.node_ids}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for src, dst in graph.edges:
        if src == dst:
            return False
        a, b = find(src), find(dst)
        if a == b:
            return False
        parent[a] = b
    return True


def convert_plain(plain: PlainBag) -> AttackGraph:
    """Turn a bipartite exploit/condition graph into a typed attack graph.

    Conditions nobody implies become leaves, implied conditions become Or
    nodes, exploits become And nodes; edges and ids carry over unchanged
    and each node's local probability is the plain score. Cumulative
    scores of the source then coincide with access probabilities of the
    result.
    """
    edges = plain.require_edges + plain.imply_edges
    implied = {c for _, c in plain.imply_edges}

    # Kahn over the combined graph; the plain formalism requires acyclicity.
    all_ids = sorted(plain.exploits | plain.conditions)
    indeg = {v: 0 for v in all_ids}
    succ: dict[int, list[int]] = {v: [] for v in all_ids}
    for src, dst in edges:
        indeg[dst] += 1
        succ[src].append(dst)
    frontier = [v for v in all_ids if indeg[v] == 0]
    emitted = 0
    while frontier:
        v = frontier.pop()
        emitted += 1
        for c in succ[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                frontier.append(c)
    if emitted != len(all_ids):
        raise PlainCycleError("plain graph is cyclic; conversion requires a DAG")

    nodes = []
    for cid in sorted(plain.conditions):
        kind = NodeKind.OR if cid in implied else NodeKind.LEAF
        nodes.append(Node(cid, kind, local_prob=float(plain.score.get(cid, 1.0))))
    for eid in sorted(plain.exploits):
        nodes.append(Node(eid, NodeKind.AND, local_prob=float(plain.score.get(eid, 1.0))))
    return AttackGraph(nodes, edges)
