"""
Linear network codes over a module on a directed acyclic multigraph.

A message is injected at its own source node and copied verbatim onto every
out-edge of that node. Every other node v computes, for each out-edge e,

    X_e = sum over d in In(v) of k^{d,e} * X_d

and a sink recovers message i as sum over d in In(sink) of k^{d,i} * X_d.
The module is either a finite field (scalar codes) or an ideal M of F_q[G]
(permute-and-add codes, where each product is a permute-and-add action).
Coefficients that are zero are not stored.
"""

from __future__ import annotations

import abc
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Any, Iterable, Iterator, Mapping, Sequence

import networkx as nx
import numpy as np

from .algebra import AlgebraElement, apply, bit_expand, bit_truncate, tau_inv, tau_nat
from .errors import ContextMismatchError, DeskScaleError, ModuleMembershipError, NetworkError, ParameterError
from .gf import Field, as_ints
from .group import parse_group
from .ideal import GroupCode, degree_reduce, has_zero_coordinate_sum, ideal_from_generators, ideal_from_T
from .settings import load_settings
from .spectral import decompose

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------
# Topology
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class Message:
    id: str
    source: str


@dataclass(frozen=True)
class Demand:
    sink: str
    message: str


@dataclass(frozen=True)
class Network:
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    messages: tuple[Message, ...]
    demands: tuple[Demand, ...]

    def __post_init__(self):
        for name in ("nodes", "edges", "messages", "demands"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    @cached_property
    def graph(self) -> nx.MultiDiGraph:
        G = nx.MultiDiGraph()
        G.add_nodes_from(self.nodes)
        for e in self.edges:
            G.add_edge(e.tail, e.head, key=e.id)
        return G

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _incidence(self) -> tuple[dict, dict]:
        ins = {v: [] for v in self.nodes}
        outs = {v: [] for v in self.nodes}
        for e in self.edges:
            if e.tail in outs:
                outs[e.tail].append(e)
            if e.head in ins:
                ins[e.head].append(e)
        return {v: tuple(es) for v, es in ins.items()}, {v: tuple(es) for v, es in outs.items()}

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        return self._incidence[0][v]

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        return self._incidence[1][v]

    @cached_property
    def topological_order(self) -> tuple[str, ...]:
        return network_validate(self)

    @cached_property
    def edge_order(self) -> tuple[Edge, ...]:
        """Edges grouped by tail in topological order, declaration order within a node."""
        return tuple(e for v in self.topological_order for e in self.out_edges(v))

    @cached_property
    def source_messages(self) -> dict[str, Message]:
        return {m.source: m for m in self.messages}

    @property
    def sinks(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(d.sink for d in self.demands))

    def message(self, message_id: str) -> Message:
        for m in self.messages:
            if m.id == message_id:
                return m
        raise NetworkError(f"unknown message {message_id!r}")

    def adjacent(self, d: str, e: str) -> bool:
        """True iff some node has d as an in-edge and e as an out-edge."""
        return d in self.edge_map and e in self.edge_map and self.edge_map[d].head == self.edge_map[e].tail

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in self.edges],
            "messages": [{"id": m.id, "source": m.source} for m in self.messages],
            "demands": [{"sink": d.sink, "message": d.message} for d in self.demands],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Network":
        try:
            net = cls(
                tuple(str(v) for v in data["nodes"]),
                tuple(Edge(str(e["id"]), str(e["tail"]), str(e["head"])) for e in data["edges"]),
                tuple(Message(str(m["id"]), str(m["source"])) for m in data.get("messages", [])),
                tuple(Demand(str(d["sink"]), str(d["message"])) for d in data.get("demands", [])),
            )
        except (KeyError, TypeError) as e:
            raise NetworkError(f"malformed network description: {e}") from e
        network_validate(net)
        return net


def network_validate(net: Network) -> tuple[str, ...]:
    """Check well-formedness and return a deterministic topological order."""
    if len(set(net.nodes)) != len(net.nodes):
        raise NetworkError("duplicate node ids")
    if len({e.id for e in net.edges}) != len(net.edges):
        raise NetworkError("duplicate edge ids")
    known = set(net.nodes)
    for e in net.edges:
        if e.tail not in known or e.head not in known:
            raise NetworkError(f"edge {e.id} references an unknown node")

    G = net.graph
    if not nx.is_directed_acyclic_graph(G):
        cycle = nx.find_cycle(G)
        raise NetworkError(f"cycle detected: {' -> '.join(str(step[0]) for step in cycle)}")

    if len({m.id for m in net.messages}) != len(net.messages):
        raise NetworkError("duplicate message ids")
    sources = [m.source for m in net.messages]
    if len(set(sources)) != len(sources):
        raise NetworkError("each message needs its own source node")
    for m in net.messages:
        if m.source not in known:
            raise NetworkError(f"message {m.id} has unknown source {m.source!r}")
        if net.in_edges(m.source):
            raise NetworkError(f"source {m.source!r} of message {m.id} has incoming edges")

    message_ids = {m.id for m in net.messages}
    for d in net.demands:
        if d.message not in message_ids:
            raise NetworkError(f"sink {d.sink!r} demands unknown message {d.message!r}")
        if d.sink not in known:
            raise NetworkError(f"demand references unknown sink {d.sink!r}")
    if len(set(net.demands)) != len(net.demands):
        raise NetworkError("duplicate demands")

    position = {v: i for i, v in enumerate(net.nodes)}
    return tuple(nx.lexicographical_topological_sort(G, key=position.__getitem__))


# ---------------------------------------------------------------------
# Module contexts
# ---------------------------------------------------------------------
class ModuleContext(abc.ABC):
    """What the messages, edge symbols and coding coefficients are."""

    kind: str = ""

    @property
    @abc.abstractmethod
    def base(self) -> Field:
        """Field over which coefficient application is linear."""

    @property
    @abc.abstractmethod
    def dimension(self) -> int:
        """Dimension of the message space over the base field."""

    @property
    @abc.abstractmethod
    def symbol_length(self) -> int: ...

    @property
    def rate(self) -> Fraction:
        return Fraction(self.dimension, self.symbol_length)

    @property
    def rate_label(self) -> str:
        return f"{self.dimension}/{self.symbol_length}"

    @abc.abstractmethod
    def zero_message(self): ...

    @abc.abstractmethod
    def message_basis(self) -> tuple: ...

    @abc.abstractmethod
    def contains(self, message) -> bool: ...

    @abc.abstractmethod
    def encode(self, message): ...

    @abc.abstractmethod
    def combine(self, terms: Iterable[tuple[Any, Any]]):
        """Edge output from (coefficient, incoming symbol) pairs."""

    @abc.abstractmethod
    def recover(self, terms: Iterable[tuple[Any, Any]]):
        """Decoded message from (coefficient, incoming symbol) pairs."""

    @abc.abstractmethod
    def check_coefficient(self, c) -> None: ...

    @abc.abstractmethod
    def is_zero(self, c) -> bool: ...

    @abc.abstractmethod
    def same(self, a, b) -> bool:
        """Equality of two messages, symbols or coefficients."""

    @abc.abstractmethod
    def coefficient_to_json(self, c) -> list[int]: ...

    @abc.abstractmethod
    def coefficient_from_json(self, data: Sequence[int]): ...

    @abc.abstractmethod
    def message_to_json(self, m) -> list[int]: ...

    @abc.abstractmethod
    def message_from_json(self, data: Sequence[int]): ...

    @abc.abstractmethod
    def message_to_hex(self, m) -> str:
        """Message as a packed coefficient vector."""

    @abc.abstractmethod
    def symbol_to_hex(self, s) -> str: ...

    @abc.abstractmethod
    def to_dict(self) -> dict: ...

    def random_message(self, rng: np.random.Generator):
        msg = self.zero_message()
        for b in self.message_basis():
            c = self.base.random((), rng)
            msg = msg + b * c
        return msg

    def all_messages(self) -> Iterator:
        limit = load_settings().max_exhaustive_messages
        q = self.base.order
        if q ** self.dimension > limit:
            raise DeskScaleError(f"message space of size {q}^{self.dimension} exceeds the limit {limit}")
        basis = self.message_basis()
        for coeffs in itertools.product(range(q), repeat=len(basis)):
            msg = self.zero_message()
            for b, c in zip(basis, coeffs):
                if c:
                    msg = msg + b * self.base.GF(c)
            yield msg


class ScalarContext(ModuleContext):
    kind = "scalar"

    def __init__(self, field: Field):
        self.field = field

    def __eq__(self, other) -> bool:
        return isinstance(other, ScalarContext) and other.field == self.field

    def __hash__(self) -> int:
        return hash((self.kind, self.field))

    def __repr__(self) -> str:
        return f"ScalarContext({self.field.label})"

    @property
    def base(self) -> Field:
        return self.field

    @property
    def dimension(self) -> int:
        return 1

    @property
    def symbol_length(self) -> int:
        return 1

    def zero_message(self):
        return self.field.zero

    def message_basis(self) -> tuple:
        return (self.field.one,)

    def contains(self, message) -> bool:
        return self.field.owns(message) and message.shape == ()

    def encode(self, message):
        return message

    def combine(self, terms):
        acc = self.field.zero
        for c, s in terms:
            acc = acc + c * s
        return acc

    recover = combine

    def check_coefficient(self, c) -> None:
        self.field.require(c)

    def is_zero(self, c) -> bool:
        return c == 0

    def same(self, a, b) -> bool:
        return self.field.owns(a) and self.field.owns(b) and bool(a == b)

    def coefficient_to_json(self, c) -> list[int]:
        return self.field.coefficients(c)

    def coefficient_from_json(self, data):
        return self.field.from_coefficients(data)

    message_to_json = coefficient_to_json
    message_from_json = coefficient_from_json

    def symbol_to_hex(self, s) -> str:
        return self.field.to_hex(s)

    message_to_hex = symbol_to_hex

    def to_dict(self) -> dict:
        return {"kind": self.kind, "field": self.field.to_dict()}


class GroupCodeContext(ModuleContext):
    kind = "group"

    def __init__(self, code: GroupCode, truncate: bool = False):
        if truncate and not has_zero_coordinate_sum(code):
            raise ParameterError(f"{code.label} has elements with nonzero coordinate sum; cannot truncate")
        self.code = code
        self.truncate = truncate

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupCodeContext) and other.code == self.code and other.truncate == self.truncate

    def __hash__(self) -> int:
        return hash((self.kind, self.code, self.truncate))

    def __repr__(self) -> str:
        return f"GroupCodeContext({self.code.label}, truncate={self.truncate})"

    @property
    def algebra(self):
        return self.code.algebra

    @property
    def base(self) -> Field:
        return self.code.algebra.field

    @property
    def dimension(self) -> int:
        return self.code.dimension

    @property
    def symbol_length(self) -> int:
        return self.code.n - 1 if self.truncate else self.code.n

    def zero_message(self):
        return self.algebra.zero()

    def message_basis(self) -> tuple:
        return self.code.basis

    def contains(self, message) -> bool:
        return isinstance(message, AlgebraElement) and message.algebra == self.algebra and self.code.contains(message)

    def encode(self, message):
        v = tau_nat(message)
        return bit_truncate(v) if self.truncate else v

    def _accumulate(self, terms):
        acc = self.base.zeros(self.code.n)
        for k, s in terms:
            acc = acc + apply(k, bit_expand(s) if self.truncate else s)
        return acc

    def combine(self, terms):
        acc = self._accumulate(terms)
        return bit_truncate(acc) if self.truncate else acc

    def recover(self, terms):
        return tau_inv(self.algebra, self._accumulate(terms))

    def check_coefficient(self, c) -> None:
        if not isinstance(c, AlgebraElement) or c.algebra != self.algebra:
            raise ContextMismatchError(f"coefficients must be elements of {self.algebra.label}")

    def is_zero(self, c) -> bool:
        return c.is_zero()

    def same(self, a, b) -> bool:
        if isinstance(a, AlgebraElement) or isinstance(b, AlgebraElement):
            return a == b
        return a.shape == b.shape and np.array_equal(as_ints(a), as_ints(b))

    def coefficient_to_json(self, c) -> list[int]:
        return c.to_list()

    def coefficient_from_json(self, data):
        return self.algebra(list(data))

    message_to_json = coefficient_to_json
    message_from_json = coefficient_from_json

    def symbol_to_hex(self, s) -> str:
        return self.base.vector_to_hex(s)

    def message_to_hex(self, m) -> str:
        return self.base.vector_to_hex(tau_nat(m))

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "group": self.algebra.group.label, "q": self.algebra.q, "truncate": self.truncate}
        if self.code.support is not None:
            out["support"] = sorted(self.code.support)
        else:
            out["basis"] = [m.to_list() for m in self.code.basis]
        return out


def context_from_dict(data: Mapping) -> ModuleContext:
    kind = data.get("kind")
    if kind == "scalar":
        return ScalarContext(Field.from_dict(data["field"]))
    if kind == "group":
        d = decompose(parse_group(data["group"]), int(data["q"]))
        if "support" in data:
            code = ideal_from_T(d, data["support"])
        else:
            code = ideal_from_generators(d.algebra, [d.algebra(b) for b in data["basis"]])
        return GroupCodeContext(code, bool(data.get("truncate", False)))
    raise ParameterError(f"unknown module context kind {kind!r}")


# ---------------------------------------------------------------------
# Network codes
# ---------------------------------------------------------------------
EncodingKey = tuple[str, str]
DecodingKey = tuple[str, str, str]


@dataclass(frozen=True, eq=False)
class NetworkCode:
    network: Network
    context: ModuleContext
    encoding: Mapping[EncodingKey, Any] = field(default_factory=dict)
    decoding: Mapping[DecodingKey, Any] = field(default_factory=dict)

    def coefficients(self) -> Iterator[tuple[tuple, Any]]:
        yield from self.encoding.items()
        yield from self.decoding.items()

    def same_as(self, other: "NetworkCode") -> bool:
        if self.context != other.context or set(self.encoding) != set(other.encoding):
            return False
        if set(self.decoding) != set(other.decoding):
            return False
        return all(self.context.same(c, other.encoding[k]) for k, c in self.encoding.items()) and all(
            self.context.same(c, other.decoding[k]) for k, c in self.decoding.items()
        )

    def to_dict(self) -> dict:
        ctx = self.context
        return {
            "context": ctx.to_dict(),
            "encoding": [
                {"in_edge": d, "out_edge": e, "coeff": ctx.coefficient_to_json(c)}
                for (d, e), c in sorted(self.encoding.items())
            ],
            "decoding": [
                {"sink": t, "in_edge": d, "message": i, "coeff": ctx.coefficient_to_json(c)}
                for (t, d, i), c in sorted(self.decoding.items())
            ],
        }

    @classmethod
    def from_dict(cls, net: Network, data: Mapping) -> "NetworkCode":
        ctx = context_from_dict(data["context"])
        try:
            encoding = {(str(x["in_edge"]), str(x["out_edge"])): ctx.coefficient_from_json(x["coeff"]) for x in data.get("encoding", [])}
            decoding = {
                (str(x["sink"]), str(x["in_edge"]), str(x["message"])): ctx.coefficient_from_json(x["coeff"])
                for x in data.get("decoding", [])
            }
        except (KeyError, TypeError) as e:
            raise ParameterError(f"malformed network code: {e}") from e
        return network_code(net, ctx, encoding, decoding)


def network_code(
    net: Network,
    context: ModuleContext,
    encoding: Mapping[EncodingKey, Any] | None = None,
    decoding: Mapping[DecodingKey, Any] | None = None,
) -> NetworkCode:
    """Validated NetworkCode; zero coefficients are dropped."""
    encoding = dict(encoding or {})
    decoding = dict(decoding or {})
    demands = set(net.demands)

    for (d, e), c in encoding.items():
        if not net.adjacent(d, e):
            raise NetworkError(f"edges {d!r} and {e!r} are not adjacent")
        context.check_coefficient(c)
    for (t, d, i), c in decoding.items():
        if d not in net.edge_map or net.edge_map[d].head != t:
            raise NetworkError(f"edge {d!r} does not enter sink {t!r}")
        if Demand(t, i) not in demands:
            raise NetworkError(f"sink {t!r} does not demand message {i!r}")
        context.check_coefficient(c)

    encoding = {k: c for k, c in encoding.items() if not context.is_zero(c)}
    decoding = {k: c for k, c in decoding.items() if not context.is_zero(c)}
    return NetworkCode(net, context, MappingProxyType(encoding), MappingProxyType(decoding))


# ---------------------------------------------------------------------
# Execution and verification
# ---------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class ExecutionTrace:
    context: ModuleContext
    symbols: Mapping[str, Any]
    decoded: Mapping[tuple[str, str], Any]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExecutionTrace):
            return NotImplemented
        if set(self.symbols) != set(other.symbols) or set(self.decoded) != set(other.decoded):
            return False
        same = self.context.same
        return all(same(s, other.symbols[e]) for e, s in self.symbols.items()) and all(
            same(m, other.decoded[k]) for k, m in self.decoded.items()
        )

    __hash__ = None

    def to_dict(self) -> dict:
        ctx = self.context
        return {
            "symbols": {e: ctx.symbol_to_hex(s) for e, s in sorted(self.symbols.items())},
            "decoded": [
                {"sink": t, "message": i, "value": ctx.message_to_json(m)}
                for (t, i), m in sorted(self.decoded.items())
            ],
        }


def _message_map(net: Network, context: ModuleContext, messages) -> dict[str, Any]:
    if isinstance(messages, Mapping):
        mapping = dict(messages)
    else:
        messages = list(messages)
        if len(messages) != len(net.messages):
            raise ParameterError(f"expected {len(net.messages)} messages, got {len(messages)}")
        mapping = {m.id: z for m, z in zip(net.messages, messages)}
    if set(mapping) != {m.id for m in net.messages}:
        raise ParameterError(f"messages must be given for exactly {[m.id for m in net.messages]}")
    for mid, z in mapping.items():
        if not context.contains(z):
            raise ModuleMembershipError(f"message {mid} is not an element of the module")
    return mapping


def execute(net: Network, code: NetworkCode, messages) -> ExecutionTrace:
    if code.network != net:
        raise ContextMismatchError("network code was built for a different network")
    ctx = code.context
    values = _message_map(net, ctx, messages)

    symbols: dict[str, Any] = {}
    for v in net.topological_order:
        source = net.source_messages.get(v)
        for e in net.out_edges(v):
            if source is not None:
                symbols[e.id] = ctx.encode(values[source.id])
                continue
            terms = [
                (code.encoding[(d.id, e.id)], symbols[d.id])
                for d in net.in_edges(v)
                if (d.id, e.id) in code.encoding
            ]
            symbols[e.id] = ctx.combine(terms)

    decoded = {}
    for dem in net.demands:
        terms = [
            (code.decoding[(dem.sink, d.id, dem.message)], symbols[d.id])
            for d in net.in_edges(dem.sink)
            if (dem.sink, d.id, dem.message) in code.decoding
        ]
        decoded[(dem.sink, dem.message)] = ctx.recover(terms)
    return ExecutionTrace(ctx, MappingProxyType(symbols), MappingProxyType(decoded))


@dataclass(frozen=True)
class Counterexample:
    message: str
    basis_index: int
    sink: str
    demanded: str
    vector: str

    def to_dict(self) -> dict:
        return {
            "message": self.message,
            "basis_index": self.basis_index,
            "sink": self.sink,
            "demanded": self.demanded,
            "vector": self.vector,
        }


def _check_basis_input(net: Network, code: NetworkCode, message: Message, index: int, b) -> Counterexample | None:
    ctx = code.context
    zero = ctx.zero_message()
    trace = execute(net, code, {m.id: (b if m.id == message.id else zero) for m in net.messages})
    for dem in net.demands:
        expected = b if dem.message == message.id else zero
        if not ctx.same(trace.decoded[(dem.sink, dem.message)], expected):
            return Counterexample(message.id, index, dem.sink, dem.message, ctx.message_to_hex(b))
    return None


def solution_counterexample(net: Network, code: NetworkCode, workers: int | None = None) -> Counterexample | None:
    """First (message, basis element) input some sink decodes wrongly, or None."""
    tasks = [(m, i, b) for m in net.messages for i, b in enumerate(code.context.message_basis())]
    workers = load_settings().verify_workers if workers is None else workers

    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: _check_basis_input(net, code, *t), tasks))
        return next((r for r in results if r is not None), None)

    for task in tasks:
        failure = _check_basis_input(net, code, *task)
        if failure is not None:
            return failure
    return None


def verify_solution(net: Network, code: NetworkCode, workers: int | None = None) -> bool:
    failure = solution_counterexample(net, code, workers)
    if failure is not None:
        logger.info("Not a solution: sink %s fails on %s basis element %d", failure.sink, failure.message, failure.basis_index)
    return failure is None


def verify_exhaustive(net: Network, code: NetworkCode) -> bool:
    """Check recovery on every message tuple; small message spaces only."""
    ctx = code.context
    limit = load_settings().max_exhaustive_messages
    total = ctx.base.order ** (ctx.dimension * len(net.messages))
    if total > limit:
        raise DeskScaleError(f"{total} message tuples exceed the limit {limit}")

    space = list(ctx.all_messages())
    for values in itertools.product(space, repeat=len(net.messages)):
        mapping = {m.id: z for m, z in zip(net.messages, values)}
        trace = execute(net, code, mapping)
        for dem in net.demands:
            if not ctx.same(trace.decoded[(dem.sink, dem.message)], mapping[dem.message]):
                return False
    return True


# ---------------------------------------------------------------------
# Degree accounting
# ---------------------------------------------------------------------
def _group_context(code: NetworkCode) -> GroupCodeContext:
    if not isinstance(code.context, GroupCodeContext):
        raise ParameterError("degree is only defined for codes over a group code")
    return code.context


def code_degree(code: NetworkCode) -> int:
    _group_context(code)
    return max((c.weight for _, c in code.coefficients()), default=0)


def perturb_with_annihilator(code: NetworkCode, picks: Mapping[tuple, AlgebraElement]) -> NetworkCode:
    """Add annihilator elements to chosen coefficients (absent ones count as zero)."""
    ctx = _group_context(code)
    ann = ctx.code.annihilator
    encoding = dict(code.encoding)
    decoding = dict(code.decoding)
    for key, a in picks.items():
        ctx.check_coefficient(a)
        if not ann.contains(a):
            raise ModuleMembershipError(f"pick for {key} is not in the annihilator")
        target = encoding if len(key) == 2 else decoding
        target[key] = target.get(key, ctx.zero_message()) + a
    return network_code(code.network, ctx, encoding, decoding)


def reduce_code_degree(code: NetworkCode) -> NetworkCode:
    ctx = _group_context(code)
    encoding = {k: degree_reduce(ctx.code, c) for k, c in code.encoding.items()}
    decoding = {k: degree_reduce(ctx.code, c) for k, c in code.decoding.items()}
    return network_code(code.network, ctx, encoding, decoding)


def network_rate(code: NetworkCode) -> Fraction:
    return code.context.rate
