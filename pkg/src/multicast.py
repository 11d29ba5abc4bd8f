"""
Constructive multicast solvers.

A multicast instance has one hub node fed by one edge from each message
source; every sink demands every message. Scalar solutions come from a
deterministic Jaggi-Sanders construction and are lifted into ideals of
F_q[G] component by component through the inverse spectral map.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import galois
import networkx as nx
import numpy as np

from .algebra import GroupAlgebra, augment, scalar_embed
from .errors import ConstructionError, ContextMismatchError, FieldMismatchError, InsufficientCutError, NetworkError, ParameterError
from .gf import Field, as_ints, embed, field_make, mult_order
from .group import Group
from .ideal import GroupCode, degree_reduce, ideal_from_generators, ideal_from_T
from .network import (
    Demand,
    Edge,
    GroupCodeContext,
    Message,
    Network,
    NetworkCode,
    ScalarContext,
    network_code,
    network_validate,
    reduce_code_degree,
    verify_solution,
)
from .spectral import Spectrum, decompose, phi_forward, phi_inverse

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MulticastInstance:
    network: Network
    source: str
    sinks: tuple[str, ...]
    message_edges: tuple[str, ...]

    @property
    def h(self) -> int:
        return len(self.message_edges)

    @property
    def n_rx(self) -> int:
        return len(self.sinks)

    @classmethod
    def from_network(cls, net: Network) -> "MulticastInstance":
        network_validate(net)
        if not net.messages:
            raise NetworkError("a multicast instance needs at least one message")

        message_edges, hubs = [], set()
        for m in net.messages:
            outs = net.out_edges(m.source)
            if len(outs) != 1:
                raise NetworkError(f"source of {m.id} must have exactly one out-edge, has {len(outs)}")
            message_edges.append(outs[0].id)
            hubs.add(outs[0].head)
        if len(hubs) != 1:
            raise NetworkError(f"message edges must all enter one hub node, found {sorted(hubs)}")
        (hub,) = hubs

        sinks = net.sinks
        wanted = {m.id for m in net.messages}
        for t in sinks:
            if {d.message for d in net.demands if d.sink == t} != wanted:
                raise NetworkError(f"sink {t!r} must demand every message")

        for t in sinks:
            edge_disjoint_paths(net, hub, t, len(message_edges))
        return cls(net, hub, sinks, tuple(message_edges))


@dataclass(frozen=True, eq=False)
class ScalarSolution:
    field: Field
    code: NetworkCode
    allowed: tuple[int, ...] | None = None

    @property
    def network(self) -> Network:
        return self.code.network


def edge_disjoint_paths(net: Network, source: str, sink: str, h: int) -> list[list[str]]:
    """h edge-disjoint source->sink paths as edge-id lists, via unit-capacity max-flow."""
    G = nx.DiGraph()
    G.add_nodes_from(net.nodes)
    # parallel edges become distinct midpoint nodes
    for e in net.edges:
        G.add_edge(e.tail, ("edge", e.id))
        G.add_edge(("edge", e.id), e.head)

    if source not in G or sink not in G:
        raise NetworkError(f"unknown node {source!r} or {sink!r}")
    try:
        paths = list(nx.edge_disjoint_paths(G, source, sink))
    except nx.NetworkXNoPath:
        paths = []
    if len(paths) < h:
        raise InsufficientCutError(f"min-cut from {source!r} to {sink!r} is {len(paths)} < {h}")
    return [[node[1] for node in p if isinstance(node, tuple)] for p in paths[:h]]


def _allowed_values(field: Field, allowed) -> list:
    if isinstance(allowed, str):
        if allowed != "all":
            raise ParameterError(f"allowed must be 'all' or a list of field elements, got {allowed!r}")
        return [field.GF(c) for c in range(1, field.order)]
    values = []
    for c in allowed:
        c = c if isinstance(c, galois.FieldArray) else field.GF(int(c))
        field.require(c)
        if c != 0 and all(c != v for v in values):
            values.append(c)
    if not values:
        raise ParameterError("allowed coefficient set has no nonzero element")
    return values


def jaggi_sanders(instance: MulticastInstance, field: Field, allowed="all") -> ScalarSolution:
    """
    Deterministic greedy construction: edges in topological order, each
    taking the first allowed coefficient combination that keeps every
    affected sink's current cut of global coding vectors at full rank.
    """
    net = instance.network
    h = instance.h
    values = _allowed_values(field, allowed)
    if len(values) < instance.n_rx:
        logger.warning(
            "Only %d allowed coefficients for %d sinks; construction may fail", len(values), instance.n_rx
        )

    position = {e.id: i for i, e in enumerate(net.edge_order)}
    pred: dict[str, dict[str, str]] = {}
    frontier: dict[str, list[str]] = {}
    for t in instance.sinks:
        pred[t] = {}
        for j, path in enumerate(edge_disjoint_paths(net, instance.source, t, h)):
            chain = [instance.message_edges[j], *path]
            for a, b in zip(chain, chain[1:]):
                pred[t][b] = a
        frontier[t] = list(instance.message_edges)

    # a predecessor may also be left out; nonzero combinations are tried first
    choices = [*values, field.zero]
    zero_choice = len(values)
    identity = field.GF(np.eye(h, dtype=np.int64))
    gvec = {e: identity[j] for j, e in enumerate(instance.message_edges)}
    message_sources = set(net.source_messages)
    encoding = {}

    for e in net.edge_order:
        if e.tail in message_sources:
            continue
        users = [t for t in instance.sinks if e.id in pred[t]]
        if not users:
            continue
        preds = sorted({pred[t][e.id] for t in users}, key=position.__getitem__)

        for combo in itertools.product(range(len(choices)), repeat=len(preds)):
            if all(c == zero_choice for c in combo):
                continue
            g = field.zeros(h)
            for p, c in zip(preds, combo):
                g = g + gvec[p] * choices[c]
            if all(_full_rank_with(field, gvec, frontier[t], pred[t][e.id], g, h) for t in users):
                break
        else:
            raise ConstructionError(f"no allowed coefficients keep the sinks at full rank on edge {e.id}")

        for p, c in zip(preds, combo):
            encoding[(p, e.id)] = choices[c]
        gvec[e.id] = g
        for t in users:
            frontier[t][frontier[t].index(pred[t][e.id])] = e.id
        logger.debug("Edge %s: coefficients %s", e.id, [int(choices[c]) for c in combo])

    decoding = {}
    for t in instance.sinks:
        B = field.GF(np.vstack([as_ints(gvec[f]) for f in frontier[t]]))
        K = np.linalg.inv(B)
        for i, m in enumerate(net.messages):
            for r, f in enumerate(frontier[t]):
                decoding[(t, f, m.id)] = K[i, r]

    code = network_code(net, ScalarContext(field), encoding, decoding)
    if not verify_solution(net, code):
        raise ConstructionError("greedy construction produced a code that does not verify")
    logger.info("Scalar solution over %s for %d sinks, %d messages", field.label, instance.n_rx, h)
    allowed_ints = None if isinstance(allowed, str) else tuple(int(v) for v in values)
    return ScalarSolution(field, code, allowed_ints)


def _full_rank_with(field: Field, gvec, current: Sequence[str], replaced: str, g, h: int) -> bool:
    rows = [g if f == replaced else gvec[f] for f in current]
    return int(np.linalg.matrix_rank(field.GF(np.vstack([as_ints(r) for r in rows])))) == h


# ---------------------------------------------------------------------
# Lifting scalar solutions into group codes
# ---------------------------------------------------------------------
def lift_scalar_to_ideal(
    solutions: ScalarSolution | Mapping[int, ScalarSolution],
    code: GroupCode,
    component: int | None = None,
    truncate: bool = False,
) -> NetworkCode:
    """
    Coefficient k^{d,e} becomes the algebra element whose spectrum carries the
    (embedded) scalar coefficient of component k's solution in every k of
    T(M) and zero elsewhere; the result is then degree-reduced.

    A single solution fills every component of T(M). Naming ``component``
    places it in that component only, so T(M) must then be just {component}.
    """
    d = code.decomposition
    if d is None or code.support is None:
        raise ParameterError("lifting needs an ideal built from a spectral support")
    if component is not None and component not in code.support:
        raise ParameterError(f"component {component} is not in the support {sorted(code.support)}")

    if isinstance(solutions, ScalarSolution):
        targets = code.support if component is None else {component}
        per_component = {k: solutions for k in targets}
    elif component is not None:
        raise ParameterError("component applies to a single scalar solution, not a mapping")
    else:
        per_component = dict(solutions)
    missing = sorted(code.support - set(per_component))
    if missing:
        raise ParameterError(f"missing scalar solutions for components {missing}")

    nets = [sol.network for sol in per_component.values()]
    if not nets:
        raise ParameterError("empty support: nothing to lift")
    net = nets[0]
    if any(other != net for other in nets[1:]):
        raise ContextMismatchError("component solutions are for different networks")

    embeddings = {}
    for k in code.support:
        sol_field = per_component[k].field
        size = d.component(k).size * d.base.m
        if sol_field.p != d.base.p or size % sol_field.m:
            raise FieldMismatchError(f"{sol_field.label} is not a subfield of component {k} (GF({d.base.p}^{size}))")
        embeddings[k] = embed(sol_field, d.splitting)

    def lift(table: str, key):
        values = d.splitting.zeros(d.t)
        for k in code.support:
            c = getattr(per_component[k].code, table).get(key)
            if c is not None:
                values[k - 1] = embeddings[k](c)
        return phi_inverse(d, Spectrum(d, values))

    enc_keys = set().union(*(sol.code.encoding for sol in per_component.values()))
    dec_keys = set().union(*(sol.code.decoding for sol in per_component.values()))
    encoding = {key: lift("encoding", key) for key in enc_keys}
    decoding = {key: lift("decoding", key) for key in dec_keys}

    lifted = network_code(net, GroupCodeContext(code, truncate), encoding, decoding)
    lifted = reduce_code_degree(lifted)
    if not verify_solution(net, lifted):
        if all(verify_solution(net, sol.code) for sol in per_component.values()):
            raise ConstructionError(f"lifted code over {code.label} does not verify")
        logger.warning("Lifted a scalar code that is not a solution; the result is not one either")
    return lifted


def solve_over_ideal(instance: MulticastInstance, code: GroupCode, truncate: bool = False) -> NetworkCode:
    """Scalar solution per component field, lifted into M and degree-reduced."""
    d = code.decomposition
    if d is None or not code.support:
        raise ParameterError("solving needs an ideal with a nonempty spectral support")
    solutions = {}
    by_size: dict[int, ScalarSolution] = {}
    for k in sorted(code.support):
        degree = d.base.m * d.component(k).size
        if degree not in by_size:
            by_size[degree] = jaggi_sanders(instance, field_make(d.base.p, degree))
        solutions[k] = by_size[degree]
    return lift_scalar_to_ideal(solutions, code, truncate=truncate)


def rotate_and_add(instance: MulticastInstance, n: int, q: int = 2) -> NetworkCode:
    """
    Circular-shift code over the ideal of F_q[C_n] supported on the class of
    y: every encoding coefficient is a single shift y^i.
    """
    if not galois.is_prime(n) or not galois.is_prime(q) or n == q:
        raise ParameterError(f"need distinct primes n and q, got n={n}, q={q}")
    if mult_order(q, n) != n - 1:
        raise ParameterError(f"{q} is not a primitive root modulo {n}")
    if instance.n_rx > n:
        raise ParameterError(f"{instance.n_rx} sinks exceed n={n}")

    d = decompose(Group((n,)), q)
    (k,) = [c.index for c in d.components if c.size == n - 1]
    code = ideal_from_T(d, {k})
    y = d.algebra.basis_element(1)
    alpha = phi_forward(d, y).component(k)

    powers = [alpha ** i for i in range(n)]
    exponent_of = {int(a): i for i, a in enumerate(powers)}
    sol = jaggi_sanders(instance, d.splitting, powers)

    encoding = {key: d.algebra.basis_element(exponent_of[int(c)]) for key, c in sol.code.encoding.items()}
    decoding = {}
    for key, c in sol.code.decoding.items():
        values = d.splitting.zeros(d.t)
        values[k - 1] = c
        decoding[key] = degree_reduce(code, phi_inverse(d, Spectrum(d, values)))

    lifted = network_code(instance.network, GroupCodeContext(code), encoding, decoding)
    if not verify_solution(instance.network, lifted):
        raise ConstructionError(f"rotate-and-add code for n={n} does not verify")
    return lifted


def lift_to_group_algebra(sol: ScalarSolution, algebra: GroupAlgebra) -> NetworkCode:
    """Scalar code over F_q -> code over the whole algebra via c -> c e."""
    if sol.field != algebra.field:
        raise FieldMismatchError(f"{sol.field.label} solution cannot be lifted into {algebra.label}")
    whole = ideal_from_generators(algebra, [algebra.one()])
    ctx = GroupCodeContext(whole)
    encoding = {key: scalar_embed(c, algebra) for key, c in sol.code.encoding.items()}
    decoding = {key: scalar_embed(c, algebra) for key, c in sol.code.decoding.items()}
    return network_code(sol.network, ctx, encoding, decoding)


def project_to_base(code: NetworkCode) -> ScalarSolution:
    """Code over the whole algebra F_q[G] -> scalar code over F_q via sum a_g g -> sum a_g."""
    ctx = code.context
    if not isinstance(ctx, GroupCodeContext) or ctx.code.dimension != ctx.code.n:
        raise ParameterError("projection needs a code over the whole group algebra")
    field = ctx.base
    encoding = {key: augment(c) for key, c in code.encoding.items()}
    decoding = {key: augment(c) for key, c in code.decoding.items()}
    return ScalarSolution(field, network_code(code.network, ScalarContext(field), encoding, decoding))


# ---------------------------------------------------------------------
# Standard topologies
# ---------------------------------------------------------------------
def _edge(tail: str, head: str) -> Edge:
    return Edge(f"{tail}-{head}", tail, head)


def build_butterfly() -> MulticastInstance:
    nodes = ("z1", "z2", "s", "a", "b", "c", "d", "t1", "t2")
    pairs = [
        ("z1", "s"), ("z2", "s"),
        ("s", "a"), ("s", "b"),
        ("a", "c"), ("a", "t1"),
        ("b", "c"), ("b", "t2"),
        ("c", "d"),
        ("d", "t1"), ("d", "t2"),
    ]
    messages = (Message("Z1", "z1"), Message("Z2", "z2"))
    demands = tuple(Demand(t, m.id) for t in ("t1", "t2") for m in messages)
    net = Network(nodes, tuple(_edge(*p) for p in pairs), messages, demands)
    return MulticastInstance.from_network(net)


def build_combination(N: int, h: int) -> MulticastInstance:
    """Hub -> N relays -> one sink per h-subset of relays."""
    if not 1 <= h <= N:
        raise ParameterError(f"need 1 <= h <= N, got N={N}, h={h}")
    sources = [f"z{j + 1}" for j in range(h)]
    relays = [f"r{i + 1}" for i in range(N)]
    subsets = list(itertools.combinations(range(N), h))
    sinks = ["t_" + "_".join(str(i + 1) for i in s) for s in subsets]

    edges = [_edge(z, "s") for z in sources]
    edges += [_edge("s", r) for r in relays]
    for t, subset in zip(sinks, subsets):
        edges += [_edge(relays[i], t) for i in subset]

    messages = tuple(Message(f"Z{j + 1}", z) for j, z in enumerate(sources))
    demands = tuple(Demand(t, m.id) for t in sinks for m in messages)
    net = Network(tuple(sources + ["s"] + relays + sinks), tuple(edges), messages, demands)
    logger.debug("Combination network C(%d,%d): %d sinks", N, h, math.comb(N, h))
    return MulticastInstance.from_network(net)


def build_line(hops: int = 2) -> MulticastInstance:
    """Single message along a path of ``hops`` edges after the hub."""
    if hops < 1:
        raise ParameterError("a line needs at least one hop")
    nodes = ["z1", "s"] + [f"v{i}" for i in range(1, hops)] + ["t"]
    path = nodes[1:]
    edges = [_edge("z1", "s")] + [_edge(a, b) for a, b in zip(path, path[1:])]
    net = Network(tuple(nodes), tuple(edges), (Message("Z1", "z1"),), (Demand("t", "Z1"),))
    return MulticastInstance.from_network(net)
