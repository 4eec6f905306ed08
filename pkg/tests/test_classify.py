import pytest

from cybag.circuit import Instantiation, augment, reachability_exact
from cybag.classify import (
    CycleType,
    classify_all,
    classify_cycle,
    closing_edge,
    first_hit,
)
from cybag.errors import TargetRequiredError, TooLargeError
from cybag.formats import load_fixture
from cybag.graph import AttackGraph, Node, NodeKind, find_cycles


def hits_by_node(aug, inst):
    return {fh.node: fh.k_star_i for fh in first_hit(aug, inst)}


def test_first_hit_hand_simulation(fig5):
    aug = augment(fig5)
    hits = hits_by_node(aug, Instantiation({0: 1, 1: 1, 2: 1}))
    assert hits == {0: 1, 1: 1, 2: 2}


def test_first_hit_nothing_fires(fig5):
    aug = augment(fig5)
    hits = hits_by_node(aug, Instantiation({0: 0, 1: 0, 2: 0}))
    assert hits == {0: None, 1: None, 2: None}


def test_first_hit_single_leaf():
    g = AttackGraph([Node(0, NodeKind.LEAF, "", 0.5)], [])
    assert hits_by_node(augment(g), Instantiation({0: 1})) == {0: 1}


def test_type1_fixture():
    g = load_fixture("type1.json")
    (cycle,) = find_cycles(g)
    report = classify_cycle(g, cycle)
    assert report.cycle_type is CycleType.TYPE1
    assert report.witness is None
    # circuit sanity: the starved And node is dead under every instantiation
    for v in cycle.node_set:
        assert reachability_exact(g, v).probability == 0.0


def test_type2_fixture():
    g = load_fixture("type2.json")
    (cycle,) = find_cycles(g)
    report = classify_cycle(g, cycle, target=3)
    assert report.cycle_type is CycleType.TYPE2
    assert report.target == 3
    assert report.witness is None


def test_type3_fixture_with_witness():
    g = load_fixture("type3.json")
    (cycle,) = find_cycles(g)
    report = classify_cycle(g, cycle, target=3)
    assert report.cycle_type is CycleType.TYPE3
    inst, node_j, k = report.witness
    assert node_j in cycle.node_set
    # replay the witness: the cycle node is on at tick k, one before the
    # target's first hit
    hits = hits_by_node(augment(g), inst)
    assert hits[node_j] is not None and hits[node_j] <= k
    assert hits[3] == k + 1


def test_target_required_for_live_cycle():
    g = load_fixture("type2.json")
    (cycle,) = find_cycles(g)
    with pytest.raises(TargetRequiredError):
        classify_cycle(g, cycle, target=None)


def test_classification_size_limit():
    leaves = [Node(v, NodeKind.LEAF, "", 0.5) for v in range(21)]
    a = Node(21, NodeKind.AND, "", 1.0)
    o = Node(22, NodeKind.OR, "", 1.0)
    g = AttackGraph(
        leaves + [a, o],
        [(v, 21) for v in range(21)] + [(21, 22), (22, 21)],
    )
    (cycle,) = find_cycles(g)
    with pytest.raises(TooLargeError):
        classify_cycle(g, cycle, target=22)


def test_classify_all_acyclic_is_empty(fig5):
    assert classify_all(fig5, target=2) == []


def test_classify_all_running_example():
    g = load_fixture("running-example.json")
    reports = classify_all(g, target=14)
    assert len(reports) == 1
    assert reports[0].cycle_type is CycleType.TYPE3
    assert reports[0].witness is not None


def test_classify_all_type1():
    g = load_fixture("type1.json")
    reports = classify_all(g, target=3)
    assert [r.cycle_type for r in reports] == [CycleType.TYPE1]


def test_classification_deterministic():
    g = load_fixture("type3.json")
    (cycle,) = find_cycles(g)
    a = classify_cycle(g, cycle, target=3)
    b = classify_cycle(g, cycle, target=3)
    assert a == b


def test_closing_edge_choice():
    g2 = load_fixture("type2.json")
    (c2,) = find_cycles(g2)
    assert closing_edge(g2, c2) == (6, 3)
    g3 = load_fixture("type3.json")
    (c3,) = find_cycles(g3)
    assert closing_edge(g3, c3) == (6, 3)


def test_removing_type2_closing_edge_is_neutral():
    g = load_fixture("type2.json")
    (cycle,) = find_cycles(g)
    edge = closing_edge(g, cycle)
    before = reachability_exact(g, 3).probability
    after = reachability_exact(g.without_edge(*edge), 3).probability
    assert after == pytest.approx(before, abs=1e-12)


def test_removing_type3_closing_edge_changes_reachability():
    g = load_fixture("type3.json")
    (cycle,) = find_cycles(g)
    edge = closing_edge(g, cycle)
    before = reachability_exact(g, 3).probability
    after = reachability_exact(g.without_edge(*edge), 3).probability
    assert abs(after - before) > 1e-6
