"""Combinational-circuit view of an attack graph.

Every node gets one primed Bernoulli input that carries its local
probability; the node itself becomes a deterministic gate: And and Leaf
nodes conjoin their parents with the primed input, Or nodes disjoin the
parents and conjoin the primed input. Iterating the gates synchronously
from the all-zero state walks the attacker forward one step per tick.
Because the update is monotone in {0,1}, every instantiation of the
primed inputs settles into a unique fixed point after at most one step
per node, cycles included.

The probability that a node is ever reached is then a reachability
probability over instantiations of the primed inputs. It is computed
exactly by weighted enumeration of the inputs with fractional
probabilities (:func:`reachability_exact`) or estimated by sampling
(:func:`reachability_mc`). On acyclic graphs the exact value agrees with
variable elimination; on cyclic graphs it is the reference semantics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import TooLargeError, UnknownNodeError
from .graph import AttackGraph, NodeKind
from .propagate import _AND, _LEAF, _OR, _Compiled, _compile

EXACT_ENUM_LIMIT = 24
_CHUNK_BITS = 20


@dataclass(frozen=True)
class AugmentedGraph:
    """Base graph plus one primed input per node.

    The primed input feeding node ``v`` is addressed by ``v``'s own id in
    :class:`Instantiation` bit maps.
    """

    base: AttackGraph
    primed: Mapping[int, int]


@dataclass(frozen=True)
class Instantiation:
    """One 0/1 assignment to every primed input."""

    bits: Mapping[int, int]


@dataclass(frozen=True)
class CircuitState:
    values: Mapping[int, int]
    iteration: int


@dataclass(frozen=True)
class ReachEstimate:
    probability: float
    method: str  # "exact" or "monte-carlo"
    samples: int
    std_error: float


def augment(graph: AttackGraph) -> AugmentedGraph:
    return AugmentedGraph(graph, {v: v for v in graph.node_ids})


def _check_domain(aug: AugmentedGraph, mapping: Mapping[int, int], what: str) -> None:
    if set(mapping) != set(aug.base.node_ids):
        raise ValueError(f"{what} domain does not match the augmented graph")


def _gate(kind: NodeKind, parent_values: list[int], prime: int) -> int:
    if kind is NodeKind.OR:
        fed = any(parent_values)
    else:  # And and Leaf gates conjoin; an empty conjunction is true
        fed = all(parent_values)
    return 1 if fed and prime else 0


def step(aug: AugmentedGraph, state: CircuitState, inst: Instantiation) -> CircuitState:
    """One synchronous update of every gate from the previous state."""
    _check_domain(aug, state.values, "state")
    _check_domain(aug, inst.bits, "instantiation")
    g = aug.base
    new_values = {
        v: _gate(
            g.kind(v),
            [state.values[p] for p in g.parents[v]],
            inst.bits[v],
        )
        for v in g.node_ids
    }
    return CircuitState(new_values, state.iteration + 1)


def fixed_point(aug: AugmentedGraph, inst: Instantiation) -> tuple[CircuitState, int]:
    """Iterate from all-zero until the state repeats.

    Returns the steady state and the first iteration index k with
    state(k+1) == state(k); monotonicity bounds k by the node count.
    """
    state = CircuitState({v: 0 for v in aug.base.node_ids}, 0)
    n = len(aug.base.node_ids)
    while True:
        nxt = step(aug, state, inst)
        if nxt.values == state.values:
            k_star = state.iteration
            assert k_star <= n, f"fixed point after {k_star} steps on {n} nodes"
            return state, k_star
        state = nxt


def _fractional_inputs(c: _Compiled) -> list[int]:
    return [i for i, p in enumerate(c.probs) if 0.0 < p < 1.0]


def _simulate(c: _Compiled, prime_bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized synchronous iteration over many instantiations at once.

    ``prime_bits`` is a boolean (nodes x instantiations) matrix. Returns
    the steady-state values and per-node first-hit times (-1 where a node
    never turns on).
    """
    n, m = prime_bits.shape
    values = np.zeros((n, m), dtype=bool)
    first_hit = np.full((n, m), -1, dtype=np.int32)
    for k in range(1, n + 2):
        new_values = np.empty_like(values)
        for i in range(n):
            ps = c.parents[i]
            if c.kinds[i] == _OR:
                fed = np.zeros(m, dtype=bool)
                for p in ps:
                    fed |= values[p]
            else:
                fed = np.ones(m, dtype=bool)
                for p in ps:
                    fed &= values[p]
            new_values[i] = fed & prime_bits[i]
        if (new_values == values).all():
            return values, first_hit
        np.putmask(first_hit, new_values & (first_hit < 0), k)
        values = new_values
    raise RuntimeError("synchronous iteration failed to stabilize")


def _enumeration_weights(c: _Compiled, fractional: list[int], idx: np.ndarray) -> np.ndarray:
    weights = np.ones(len(idx))
    for j, i in enumerate(fractional):
        bit = ((idx >> j) & 1).astype(bool)
        weights *= np.where(bit, c.probs[i], 1.0 - c.probs[i])
    return weights


def _prime_matrix(c: _Compiled, fractional: list[int], idx: np.ndarray) -> np.ndarray:
    """Primed-input matrix for enumeration indices, with constant inputs folded."""
    n, m = len(c.kinds), len(idx)
    bits = np.empty((n, m), dtype=bool)
    for i, p in enumerate(c.probs):
        bits[i] = p >= 1.0
    for j, i in enumerate(fractional):
        bits[i] = ((idx >> j) & 1).astype(bool)
    return bits


def _exact_hit_weights(graph: AttackGraph) -> tuple[_Compiled, dict[int, float], int]:
    """Exact reach probability of every node by weighted enumeration."""
    c = _compile(graph)
    fractional = _fractional_inputs(c)
    if len(fractional) > EXACT_ENUM_LIMIT:
        raise TooLargeError(
            f"{len(fractional)} fractional inputs exceed the "
            f"{EXACT_ENUM_LIMIT}-bit enumeration limit"
        )
    total = 1 << len(fractional)
    sums: list[list[float]] = [[] for _ in c.ids]
    for start in range(0, total, 1 << _CHUNK_BITS):
        idx = np.arange(start, min(total, start + (1 << _CHUNK_BITS)), dtype=np.int64)
        weights = _enumeration_weights(c, fractional, idx)
        finals, _ = _simulate(c, _prime_matrix(c, fractional, idx))
        for i in range(len(c.ids)):
            sums[i].append(math.fsum(weights[finals[i]].tolist()))
    probs = {v: min(1.0, math.fsum(sums[i])) for i, v in enumerate(c.ids)}
    return c, probs, total


def reachability_exact(graph: AttackGraph, v: int) -> ReachEstimate:
    """Exact probability that node ``v`` ever turns on.

    Only primed inputs with fractional probability are enumerated; inputs
    with probability 0 or 1 are folded to constants. Well-defined on
    cyclic graphs.
    """
    if v not in graph.node_map:
        raise UnknownNodeError(f"node {v} is not in the graph")
    _, probs, total = _exact_hit_weights(graph)
    return ReachEstimate(probs[v], "exact", total, 0.0)


def reachability_mc(
    graph: AttackGraph, v: int, samples: int, seed: int
) -> ReachEstimate:
    """Monte Carlo estimate of the reach probability with binomial error."""
    if v not in graph.node_map:
        raise UnknownNodeError(f"node {v} is not in the graph")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    c = _compile(graph)
    n = len(c.ids)
    rng = np.random.default_rng(seed)
    bits = np.empty((n, samples), dtype=bool)
    for i, p in enumerate(c.probs):
        if p <= 0.0:
            bits[i] = False
        elif p >= 1.0:
            bits[i] = True
        else:
            bits[i] = rng.random(samples) < p
    finals, _ = _simulate(c, bits)
    hits = int(finals[c.index[v]].sum())
    phat = hits / samples
    std_error = math.sqrt(phat * (1.0 - phat) / samples)
    return ReachEstimate(phat, "monte-carlo", samples, std_error)
