"""Synthetic cyclic attack graphs and scaling benchmarks.

Graphs are built in layers that mimic scanner output: leaves are
configuration facts, And nodes are attack actions requiring at least one
fact, Or nodes are attacker states fed by one or more actions. The base
wiring is acyclic by ranking the Or nodes and only letting actions read
from lower-ranked states. Cycles are then added on purpose: a bridge And
node is inserted from a descendant state back to an ancestor state until
the requested share of Or nodes sits on a directed cycle. Node counts
follow the requested leaf/and/or ratio exactly (bridge And nodes are
pre-reserved out of the And budget), and everything is deterministic per
seed.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx

from .errors import InfeasibleError
from .graph import AttackGraph, Node, NodeKind
from .propagate import solve_all

LEAF_PROB_PALETTE = (0.35, 0.61, 0.71)


@dataclass(frozen=True)
class GenParams:
    n: int
    cyclicity: float
    ratio: tuple[float, float, float] = (50.0, 35.0, 15.0)
    seed: int = 0
    max_parents: int = 4

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"need at least 3 nodes, got {self.n}")
        if not 0.0 <= self.cyclicity <= 100.0:
            raise ValueError(f"cyclicity must be in [0, 100], got {self.cyclicity}")
        if abs(sum(self.ratio) - 100.0) > 1e-9:
            raise ValueError(f"ratio must sum to 100, got {self.ratio}")
        if self.max_parents < 1:
            raise ValueError("max_parents must be >= 1")


@dataclass(frozen=True)
class BenchRow:
    n: int
    cyclicity: float
    replicate: int
    wall_time_seconds: float
    nodes_in_cycles: int


def _counts(n: int, ratio: tuple[float, float, float]) -> tuple[int, int, int]:
    """Largest-remainder apportionment of n nodes over the three kinds."""
    shares = [n * r / 100.0 for r in ratio]
    base = [int(math.floor(s)) for s in shares]
    leftover = n - sum(base)
    order = sorted(range(3), key=lambda i: (-(shares[i] - base[i]), i))
    for i in range(leftover):
        base[order[i % 3]] += 1
    return base[0], base[1], base[2]


def nodes_on_cycles(graph: AttackGraph) -> set[int]:
    """Ids of all nodes inside a strongly connected component of size >= 2."""
    on_cycle: set[int] = set()
    for comp in nx.strongly_connected_components(graph.to_networkx()):
        if len(comp) >= 2:
            on_cycle.update(comp)
    return on_cycle


def cyclic_or_fraction(graph: AttackGraph) -> float:
    """Share of Or nodes that lie on a directed cycle."""
    ors = [n.id for n in graph.nodes if n.kind is NodeKind.OR]
    if not ors:
        return 0.0
    on_cycle = nodes_on_cycles(graph)
    return sum(1 for v in ors if v in on_cycle) / len(ors)


class _Builder:
    def __init__(self, params: GenParams):
        self.rng = random.Random(params.seed)
        self.params = params
        self.edges: set[tuple[int, int]] = set()
        self.parents: dict[int, set[int]] = {}
        self.children: dict[int, set[int]] = {}

    def add_edge(self, src: int, dst: int) -> None:
        if (src, dst) in self.edges or src == dst:
            return
        self.edges.add((src, dst))
        self.parents.setdefault(dst, set()).add(src)
        self.children.setdefault(src, set()).add(dst)

    def or_ancestors(self, start: int, ors: set[int]) -> list[int]:
        seen = {start}
        frontier = [start]
        found = set()
        while frontier:
            v = frontier.pop()
            for p in self.parents.get(v, ()):
                if p not in seen:
                    seen.add(p)
                    frontier.append(p)
                    if p in ors:
                        found.add(p)
        return sorted(found)

    def or_descendants(self, start: int, ors: set[int]) -> list[int]:
        seen = {start}
        frontier = [start]
        found = set()
        while frontier:
            v = frontier.pop()
            for c in self.children.get(v, ()):
                if c not in seen:
                    seen.add(c)
                    frontier.append(c)
                    if c in ors:
                        found.add(c)
        return sorted(found)

    def covered_ors(self, ors: Sequence[int]) -> set[int]:
        g = nx.DiGraph()
        g.add_nodes_from(self.parents.keys() | self.children.keys())
        g.add_edges_from(self.edges)
        on_cycle: set[int] = set()
        for comp in nx.strongly_connected_components(g):
            if len(comp) >= 2:
                on_cycle.update(comp)
        return {v for v in ors if v in on_cycle}


def generate(params: GenParams) -> AttackGraph:
    """Build one random graph per the parameters; deterministic per seed."""
    n_leaf, n_and, n_or = _counts(params.n, params.ratio)
    leaves = list(range(n_leaf))
    ands = list(range(n_leaf, n_leaf + n_and))
    ors = list(range(n_leaf + n_and, params.n))

    target_or = math.ceil(params.cyclicity / 100.0 * n_or)
    if params.cyclicity > 0 and n_or < 2:
        raise InfeasibleError("cyclicity > 0 needs at least two Or nodes")
    if params.cyclicity > 0:
        bridge_budget = target_or + 1
        if n_and - bridge_budget < n_or or not leaves:
            raise InfeasibleError(
                "not enough And nodes to reserve cycle bridges at this ratio"
            )
    else:
        bridge_budget = 0
    regular_ands = ands[: n_and - bridge_budget]
    reserve = ands[n_and - bridge_budget :]

    b = _Builder(params)
    rng = b.rng

    ranked = list(ors)
    rng.shuffle(ranked)
    rank = {v: i for i, v in enumerate(ranked)}

    # One dedicated action per state so no Or is left orphaned, then the
    # remaining actions pick their target state at random.
    targets: list[tuple[int, int]] = []
    for i, a in enumerate(regular_ands):
        t = ranked[i] if i < n_or else (rng.choice(ors) if ors else -1)
        targets.append((a, t))

    for a, t in targets:
        if leaves:
            b.add_edge(rng.choice(leaves), a)
        eligible = ranked[: rank[t]] if t >= 0 else []
        extra = rng.randint(0, params.max_parents - 1)
        for _ in range(extra):
            # privilege states chain through each other: prefer an existing
            # state as prerequisite when one is available
            if eligible and (not leaves or rng.random() < 0.5):
                b.add_edge(rng.choice(eligible), a)
            elif leaves:
                b.add_edge(rng.choice(leaves), a)
        if t >= 0:
            b.add_edge(a, t)

    # Insert back-edges until enough Or nodes sit on directed cycles.
    next_bridge = 0

    def take_bridge() -> int:
        nonlocal next_bridge
        if next_bridge >= len(reserve):
            raise InfeasibleError("cycle bridge budget exhausted")
        a = reserve[next_bridge]
        next_bridge += 1
        return a

    def add_bridge(src_or: int, dst_or: int) -> None:
        a = take_bridge()
        b.add_edge(src_or, a)
        if leaves:
            b.add_edge(rng.choice(leaves), a)
        b.add_edge(a, dst_or)

    if target_or > 0:
        or_set = set(ors)
        covered = b.covered_ors(ors)
        while len(covered) < target_or:
            uncovered = sorted(set(ors) - covered)
            x = rng.choice(uncovered)
            ancestors = b.or_ancestors(x, or_set)
            fresh = [y for y in ancestors if y not in covered]
            if fresh:
                add_bridge(x, rng.choice(fresh))
            elif ancestors:
                add_bridge(x, rng.choice(ancestors))
            else:
                descendants = b.or_descendants(x, or_set)
                fresh_d = [z for z in descendants if z not in covered]
                if fresh_d:
                    add_bridge(rng.choice(fresh_d), x)
                elif descendants:
                    add_bridge(rng.choice(descendants), x)
                else:
                    partners = [w for w in uncovered if w != x] or [
                        w for w in ors if w != x
                    ]
                    w = rng.choice(partners)
                    add_bridge(x, w)
                    add_bridge(w, x)
            covered = b.covered_ors(ors)

    # Unused reserve slots become ordinary actions; wired from fresh leaves
    # only, they cannot close new cycles.
    for a in reserve[next_bridge:]:
        if leaves:
            b.add_edge(rng.choice(leaves), a)
        if ors:
            b.add_edge(a, rng.choice(ors))

    nodes = [
        Node(v, NodeKind.LEAF, f"fact{v}", rng.choice(LEAF_PROB_PALETTE))
        for v in leaves
    ]
    nodes += [Node(v, NodeKind.AND, f"rule{v}", 1.0) for v in ands]
    nodes += [Node(v, NodeKind.OR, f"state{v}", 1.0) for v in ors]
    return AttackGraph(nodes, sorted(b.edges))


def bench(
    sizes: Iterable[int],
    cyclicities: Iterable[float],
    replicates: int,
    seed: int,
    threads: int = 1,
) -> list[BenchRow]:
    """Generate and solve one graph per (size, cyclicity, replicate).

    Graphs are deterministic per seed; wall times obviously are not.
    Replicates run sequentially to keep the timings honest.
    """
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    rows: list[BenchRow] = []
    counter = 0
    for n in sizes:
        for c in cyclicities:
            for r in range(replicates):
                gseed = seed * 1_000_003 + counter
                counter += 1
                graph = generate(GenParams(n=n, cyclicity=c, seed=gseed))
                start = time.perf_counter()
                solve_all(graph, threads=threads)
                elapsed = time.perf_counter() - start
                rows.append(
                    BenchRow(n, c, r, elapsed, len(nodes_on_cycles(graph)))
                )
    return rows


def write_bench_csv(rows: Iterable[BenchRow], path) -> None:
    """CSV with one row per run; UTF-8, LF line endings."""
    lines = ["n,cyclicity,replicate,wall_time_seconds,nodes_in_cycles"]
    for row in rows:
        lines.append(
            f"{row.n},{row.cyclicity:g},{row.replicate},"
            f"{row.wall_time_seconds:.6f},{row.nodes_in_cycles}"
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
