import random

import pytest
from hypothesis import strategies as st

from cybag.graph import AttackGraph, Node, NodeKind


@pytest.fixture
def fig5():
    return AttackGraph(
        [
            Node(0, NodeKind.LEAF, "A", 0.7),
            Node(1, NodeKind.LEAF, "B", 0.8),
            Node(2, NodeKind.AND, "C", 0.6),
        ],
        [(0, 2), (1, 2)],
    )


@pytest.fixture
def diamond():
    return AttackGraph(
        [
            Node(0, NodeKind.LEAF, "L", 0.5),
            Node(1, NodeKind.AND, "A1", 1.0),
            Node(2, NodeKind.AND, "A2", 1.0),
            Node(3, NodeKind.OR, "O", 1.0),
        ],
        [(0, 1), (0, 2), (1, 3), (2, 3)],
    )


@pytest.fixture
def two_cycle():
    """Or A fed by a leaf and by Or B; B fed by A. A <-> B is the cycle."""
    return AttackGraph(
        [
            Node(0, NodeKind.LEAF, "L", 0.5),
            Node(1, NodeKind.OR, "A", 1.0),
            Node(2, NodeKind.OR, "B", 1.0),
        ],
        [(0, 1), (2, 1), (1, 2)],
    )


def make_forest(seed: int, n: int) -> AttackGraph:
    """Random loop-free graph: orient the edges of a random tree.

    Nodes that end up without incoming edges become leaves; the rest are
    And or Or at random. All probabilities are fractional so nothing is
    degenerate.
    """
    rng = random.Random(seed)
    edges = []
    for v in range(1, n):
        u = rng.randrange(v)
        if rng.random() < 0.5:
            edges.append((u, v))
        else:
            edges.append((v, u))
    has_parent = {dst for _, dst in edges}
    nodes = []
    for v in range(n):
        if v not in has_parent:
            kind = NodeKind.LEAF
        else:
            kind = rng.choice((NodeKind.AND, NodeKind.OR))
        nodes.append(Node(v, kind, f"n{v}", round(rng.uniform(0.05, 0.95), 3)))
    return AttackGraph(nodes, edges)


@pytest.fixture
def forest_builder():
    return make_forest


@st.composite
def attack_graphs(draw, max_nodes: int = 10, allow_cycles: bool = True):
    """Small well-formed graphs: edges only flow into And/Or nodes, so
    leaves never acquire parents. Cycles appear unless disallowed."""
    n = draw(st.integers(min_value=2, max_value=max_nodes))
    kinds = draw(
        st.lists(
            st.sampled_from((NodeKind.LEAF, NodeKind.AND, NodeKind.OR)),
            min_size=n,
            max_size=n,
        )
    )
    nodes = [
        Node(v, kinds[v], f"n{v}", draw(st.floats(0.0, 1.0, allow_nan=False)))
        for v in range(n)
    ]
    candidates = [
        (u, v)
        for v in range(n)
        if kinds[v] is not NodeKind.LEAF
        for u in range(n)
        if u != v and (allow_cycles or u < v)
    ]
    edges = draw(st.lists(st.sampled_from(candidates), unique=True, max_size=3 * n)) if candidates else []
    return AttackGraph(nodes, edges)
