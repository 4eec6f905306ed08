"""Cycle classification driven by the circuit semantics.

Three behaviours distinguish cycles. A cycle is Type 1 when some node on
it never turns on under any instantiation of the primed inputs: the cycle
can never fire at all. Relative to a target node, a cycle is Type 2 when
no cycle node is ever on strictly before the target first turns on, so
the cycle contributes nothing to reaching the target, and Type 3 when
some instantiation lights a cycle node before the target first fires;
such a cycle genuinely feeds the target and cannot be cut. Type 3 reports
carry a witness: the instantiation, the early cycle node, and the tick at
which it was already on.

Classification enumerates instantiations exhaustively (the definitions
quantify over all of them; sampling could not certify the universal
cases), so it is limited to graphs with at most ``CLASSIFY_ENUM_LIMIT``
fractional inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .circuit import (
    AugmentedGraph,
    Instantiation,
    _CHUNK_BITS,
    _fractional_inputs,
    _prime_matrix,
    _simulate,
)
from .errors import TargetRequiredError, TooLargeError, UnknownNodeError
from .graph import AttackGraph, CyclePath, find_cycles
from .propagate import _compile

CLASSIFY_ENUM_LIMIT = 20


class CycleType(Enum):
    TYPE1 = 1
    TYPE2 = 2
    TYPE3 = 3


@dataclass(frozen=True)
class FirstHit:
    """Earliest tick at which a node turns on; None when it never does."""

    node: int
    k_star_i: int | None


@dataclass(frozen=True)
class CycleReport:
    cycle: CyclePath
    cycle_type: CycleType
    target: int | None = None
    witness: tuple[Instantiation, int, int] | None = None


def first_hit(aug: AugmentedGraph, inst: Instantiation) -> list[FirstHit]:
    """First-hit time of every node under one instantiation."""
    c = _compile(aug.base)
    if set(inst.bits) != set(c.ids):
        raise ValueError("instantiation domain does not match the augmented graph")
    bits = np.array([[bool(inst.bits[v])] for v in c.ids])
    _, hits = _simulate(c, bits)
    return [
        FirstHit(v, int(hits[i, 0]) if hits[i, 0] >= 0 else None)
        for i, v in enumerate(c.ids)
    ]


def _witness_instantiation(c, fractional: list[int], index: int) -> Instantiation:
    bits = {}
    for i, v in enumerate(c.ids):
        bits[v] = 1 if c.probs[i] >= 1.0 else 0
    for j, i in enumerate(fractional):
        bits[c.ids[i]] = (index >> j) & 1
    return Instantiation(bits)


def classify_cycle(
    graph: AttackGraph, cycle: CyclePath, target: int | None = None
) -> CycleReport:
    """Classify one cycle, relative to ``target`` for the Type 2/3 split.

    Only instantiations in the support of the input distribution are
    considered: inputs with probability 0 or 1 are pinned. A target is
    required unless the cycle turns out to be Type 1.
    """
    c = _compile(graph)
    cycle_ids = sorted(cycle.node_set)
    for v in cycle_ids:
        if v not in c.index:
            raise UnknownNodeError(f"cycle node {v} is not in the graph")
    if target is not None and target not in c.index:
        raise UnknownNodeError(f"target {target} is not in the graph")

    fractional = _fractional_inputs(c)
    if len(fractional) > CLASSIFY_ENUM_LIMIT:
        raise TooLargeError(
            f"{len(fractional)} fractional inputs exceed the "
            f"{CLASSIFY_ENUM_LIMIT}-bit classification limit"
        )
    cycle_idx = [c.index[v] for v in cycle_ids]
    target_idx = c.index[target] if target is not None else None

    ever_on = np.zeros(len(cycle_idx), dtype=bool)
    witness: tuple[Instantiation, int, int] | None = None

    total = 1 << len(fractional)
    for start in range(0, total, 1 << _CHUNK_BITS):
        idx = np.arange(start, min(total, start + (1 << _CHUNK_BITS)), dtype=np.int64)
        _, hits = _simulate(c, _prime_matrix(c, fractional, idx))
        for pos, i in enumerate(cycle_idx):
            ever_on[pos] |= bool((hits[i] >= 0).any())
        if target_idx is not None and witness is None:
            th = hits[target_idx]
            reached = th >= 0
            early = np.zeros(len(idx), dtype=bool)
            for i in cycle_idx:
                early |= reached & (hits[i] >= 0) & (hits[i] < th)
            if early.any():
                m = int(np.argmax(early))
                k_target = int(th[m])
                node_j = min(
                    v
                    for v, i in zip(cycle_ids, cycle_idx)
                    if hits[i, m] >= 0 and hits[i, m] < k_target
                )
                witness = (
                    _witness_instantiation(c, fractional, int(idx[m])),
                    node_j,
                    k_target - 1,
                )

    if not ever_on.all():
        return CycleReport(cycle, CycleType.TYPE1, target, None)
    if target is None:
        raise TargetRequiredError(
            "cycle can fire; classification as Type 2 or 3 needs a target node"
        )
    if witness is None:
        return CycleReport(cycle, CycleType.TYPE2, target, None)
    return CycleReport(cycle, CycleType.TYPE3, target, witness)


def classify_all(
    graph: AttackGraph, target: int, max_cycles: int = 10_000
) -> list[CycleReport]:
    """Find every simple cycle and classify each against the target."""
    return [
        classify_cycle(graph, cycle, target)
        for cycle in find_cycles(graph, max_cycles)
    ]


def closing_edge(graph: AttackGraph, cycle: CyclePath) -> tuple[int, int]:
    """The designated back-edge of a cycle.

    Under the all-ones instantiation the cycle node that fires first is
    the cycle's entry; the cycle edge pointing into it is the one
    edge-removal schemes would cut.
    """
    c = _compile(graph)
    bits = np.ones((len(c.ids), 1), dtype=bool)
    _, hits = _simulate(c, bits)

    def hit_key(v: int) -> tuple[float, int]:
        h = hits[c.index[v], 0]
        return (float(h) if h >= 0 else float("inf"), v)

    head = min(cycle.node_set, key=hit_key)
    for src, dst in cycle.edge_list:
        if dst == head:
            return (src, dst)
    raise AssertionError("cycle path has no edge into its entry node")
