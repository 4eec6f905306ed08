"""Build attack graphs by hand, validate them, convert bipartite ones.

An attack graph has three node kinds: leaves are facts an attacker can
use (configuration, reachability, the existence of a vulnerability), And
nodes are actions that need every parent, Or nodes are attacker states
reached through any parent. Every node carries a local probability.
"""

from cybag import (
    AttackGraph,
    Node,
    NodeKind,
    PlainBag,
    convert_plain,
    find_cycles,
    is_loop_free,
    validate,
)

# A three-node graph: two facts feeding one action.
g = AttackGraph(
    nodes=[
        Node(0, NodeKind.LEAF, "service reachable", 0.7),
        Node(1, NodeKind.LEAF, "vulnerability present", 0.8),
        Node(2, NodeKind.AND, "remote exploit", 0.6),
    ],
    edges=[(0, 2), (1, 2)],
)

report = validate(g)
print("valid:", report.ok)

# Validation returns data, not exceptions. Break the graph and look:
broken = AttackGraph(list(g.nodes), [(0, 2), (1, 2), (2, 1), (9, 2)])
report = validate(broken)
for issue in report.errors:
    print("error:", issue.code, issue.subject, "-", issue.message)

# Cycles (directed) and loops (undirected) are different things.
print("cycles in g:", find_cycles(g))
print("g is loop-free:", is_loop_free(g))

diamond = AttackGraph(
    [
        Node(0, NodeKind.LEAF, "one shared fact", 0.5),
        Node(1, NodeKind.AND, "route a", 1.0),
        Node(2, NodeKind.AND, "route b", 1.0),
        Node(3, NodeKind.OR, "goal", 1.0),
    ],
    [(0, 1), (0, 2), (1, 3), (2, 3)],
)
# No directed cycle, but the undirected version has one: that's a loop,
# and loops are what break the independence assumption of fast solvers.
print("diamond cycles:", find_cycles(diamond))
print("diamond is loop-free:", is_loop_free(diamond))

# Bipartite exploit/condition graphs convert to the typed model:
# conditions nobody implies become leaves, implied conditions become Or
# nodes, exploits become And nodes.
plain = PlainBag(
    exploits=[10, 11],
    conditions=[0, 1, 2, 3],
    require_edges=[(0, 10), (1, 10), (2, 11)],
    imply_edges=[(10, 2), (11, 3)],
    score={0: 0.9, 1: 1.0, 10: 0.8, 11: 0.5},
)
converted = convert_plain(plain)
for node in converted.nodes:
    print(f"node {node.id}: {node.kind.value:5s} p={node.local_prob}")
