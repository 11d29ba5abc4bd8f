import numpy as np
import pytest

from src.errors import (
    ContextMismatchError,
    DeskScaleError,
    FieldMismatchError,
    ModuleMembershipError,
    NetworkError,
    ParameterError,
)
from src.gf import field_make
from src.group import parse_group
from src.ideal import ideal_from_T
from src.multicast import build_butterfly, build_combination, solve_over_ideal
from src.network import (
    GroupCodeContext,
    Network,
    NetworkCode,
    ScalarContext,
    code_degree,
    execute,
    network_code,
    network_rate,
    network_validate,
    perturb_with_annihilator,
    reduce_code_degree,
    solution_counterexample,
    verify_exhaustive,
    verify_solution,
)
from src.spectral import decompose

GF2 = field_make(2)
ONE = GF2.one

BUTTERFLY_ENCODING = {
    ("z1-s", "s-a"): ONE,
    ("z2-s", "s-b"): ONE,
    ("s-a", "a-c"): ONE,
    ("s-a", "a-t1"): ONE,
    ("s-b", "b-c"): ONE,
    ("s-b", "b-t2"): ONE,
    ("a-c", "c-d"): ONE,
    ("b-c", "c-d"): ONE,
    ("c-d", "d-t1"): ONE,
    ("c-d", "d-t2"): ONE,
}
BUTTERFLY_DECODING = {
    ("t1", "a-t1", "Z1"): ONE,
    ("t1", "a-t1", "Z2"): ONE,
    ("t1", "d-t1", "Z2"): ONE,
    ("t2", "b-t2", "Z2"): ONE,
    ("t2", "b-t2", "Z1"): ONE,
    ("t2", "d-t2", "Z1"): ONE,
}


@pytest.fixture
def xor_code(butterfly):
    return network_code(butterfly.network, ScalarContext(GF2), BUTTERFLY_ENCODING, BUTTERFLY_DECODING)


def _network(edges, messages=(("Z", "u"),), demands=(("w", "Z"),), nodes=("u", "v", "w")):
    return {
        "nodes": list(nodes),
        "edges": [{"id": f"{a}-{b}", "tail": a, "head": b} for a, b in edges],
        "messages": [{"id": m, "source": s} for m, s in messages],
        "demands": [{"sink": t, "message": m} for t, m in demands],
    }


def test_cycle_is_reported():
    with pytest.raises(NetworkError, match="cycle"):
        Network.from_dict(_network([("u", "v"), ("v", "w"), ("w", "v")]))


@pytest.mark.parametrize(
    "data",
    [
        _network([("u", "x")]),
        _network([("u", "v")], messages=(("Z", "v"),)),
        _network([("u", "v"), ("v", "w")], demands=(("w", "Y"),)),
        _network([("u", "v")], nodes=("u", "v", "v")),
        {"nodes": ["u"], "edges": [{"id": "e"}]},
    ],
)
def test_malformed_networks(data):
    with pytest.raises(NetworkError):
        Network.from_dict(data)


def test_source_with_incoming_edge_is_rejected():
    data = _network([("v", "u"), ("u", "w")])
    with pytest.raises(NetworkError, match="incoming"):
        Network.from_dict(data)


def test_parallel_edges_are_allowed():
    data = _network([("u", "v"), ("v", "w")])
    data["edges"].append({"id": "v-w-2", "tail": "v", "head": "w"})
    net = Network.from_dict(data)
    assert len(net.in_edges("w")) == 2


def test_topological_order_is_deterministic(butterfly):
    assert network_validate(butterfly.network) == ("z1", "z2", "s", "a", "b", "c", "d", "t1", "t2")


def test_xor_butterfly(butterfly, xor_code):
    net = butterfly.network
    assert verify_solution(net, xor_code)
    assert verify_exhaustive(net, xor_code)
    trace = execute(net, xor_code, {"Z1": GF2(1), "Z2": GF2(0)})
    assert trace.symbols["c-d"] == 1
    assert trace.decoded[("t2", "Z1")] == 1
    assert trace.to_dict()["symbols"]["d-t2"] == "1"
    assert network_rate(xor_code) == 1


def test_tampered_code_has_a_counterexample(butterfly):
    net = butterfly.network
    decoding = dict(BUTTERFLY_DECODING)
    del decoding[("t2", "d-t2", "Z1")]
    broken = network_code(net, ScalarContext(GF2), BUTTERFLY_ENCODING, decoding)
    assert not verify_solution(net, broken)
    failure = solution_counterexample(net, broken)
    assert failure.sink == "t2"
    assert failure.demanded == "Z1"
    assert solution_counterexample(net, broken, workers=4) == failure


def test_network_code_validation(butterfly):
    net = butterfly.network
    ctx = ScalarContext(GF2)
    with pytest.raises(NetworkError):
        network_code(net, ctx, {("s-a", "b-c"): ONE})
    with pytest.raises(NetworkError):
        network_code(net, ctx, decoding={("t1", "b-t2", "Z1"): ONE})
    with pytest.raises(NetworkError):
        network_code(net, ctx, decoding={("c", "a-c", "Z1"): ONE})
    with pytest.raises(FieldMismatchError):
        network_code(net, ctx, {("s-a", "a-c"): field_make(2, 2).one})


def test_zero_coefficients_are_dropped(butterfly):
    code = network_code(butterfly.network, ScalarContext(GF2), {("s-a", "a-c"): GF2(0)})
    assert dict(code.encoding) == {}


def test_execute_checks_inputs(butterfly, xor_code):
    net = butterfly.network
    with pytest.raises(ParameterError):
        execute(net, xor_code, {"Z1": GF2(1)})
    other = build_butterfly().network
    assert other == net
    line = Network.from_dict(_network([("u", "v"), ("v", "w")]))
    with pytest.raises(ContextMismatchError):
        execute(line, xor_code, {"Z": GF2(1)})


def test_code_json_roundtrip(butterfly, xor_code):
    again = NetworkCode.from_dict(butterfly.network, xor_code.to_dict())
    assert again.same_as(xor_code)


def test_exhaustive_limit(butterfly, xor_code, limits):
    limits(max_exhaustive_messages=2)
    with pytest.raises(DeskScaleError):
        verify_exhaustive(butterfly.network, xor_code)


def test_degree_needs_a_group_code(xor_code):
    with pytest.raises(ParameterError):
        code_degree(xor_code)


@pytest.fixture(scope="module")
def lifted_butterfly():
    d = decompose(parse_group("C15"), 2)
    code = ideal_from_T(d, {2, 3, 4})
    return solve_over_ideal(build_butterfly(), code)


def test_lifted_code_is_a_solution(lifted_butterfly):
    net = lifted_butterfly.network
    assert verify_solution(net, lifted_butterfly)
    assert code_degree(lifted_butterfly) <= 6
    assert lifted_butterfly.context.rate_label == "12/15"


@pytest.fixture(scope="module", params=["butterfly", "combination"])
def lifted_code(request, lifted_butterfly):
    if request.param == "butterfly":
        return lifted_butterfly
    d = decompose(parse_group("C15"), 2)
    return solve_over_ideal(build_combination(4, 2), ideal_from_T(d, {2}))


def test_annihilator_perturbations_leave_traces_unchanged(lifted_code):
    code = lifted_code
    net = code.network
    ctx = code.context
    ann = ctx.code.annihilator
    keys = [(d.id, e.id) for v in net.nodes for d in net.in_edges(v) for e in net.out_edges(v)]
    keys += [(dem.sink, d.id, dem.message) for dem in net.demands for d in net.in_edges(dem.sink)]
    rng = np.random.default_rng(11)
    messages = [{m.id: ctx.random_message(rng) for m in net.messages} for _ in range(20)]
    baseline = [execute(net, code, z) for z in messages]

    mismatches = 0
    for _ in range(100):
        chosen = rng.choice(len(keys), size=3, replace=False)
        picks = {}
        for i in chosen:
            pick = ctx.zero_message()
            for b in ann.basis:
                pick = pick + b * ctx.base.random((), rng)
            picks[keys[int(i)]] = pick
        perturbed = perturb_with_annihilator(code, picks)
        mismatches += sum(execute(net, perturbed, z) != t for z, t in zip(messages, baseline))
    assert mismatches == 0


def test_perturbation_must_come_from_the_annihilator(lifted_butterfly):
    algebra = lifted_butterfly.context.algebra
    with pytest.raises(ModuleMembershipError):
        perturb_with_annihilator(lifted_butterfly, {("s-a", "a-c"): algebra.one()})


def test_degree_reduction_is_idempotent(lifted_butterfly):
    again = reduce_code_degree(lifted_butterfly)
    assert again.same_as(lifted_butterfly)


def test_messages_must_lie_in_the_module(lifted_butterfly):
    algebra = lifted_butterfly.context.algebra
    with pytest.raises(ModuleMembershipError):
        execute(lifted_butterfly.network, lifted_butterfly, {"Z1": algebra.one(), "Z2": algebra.zero()})


def test_truncated_symbols(butterfly):
    d = decompose(parse_group("C15"), 2)
    code = ideal_from_T(d, {2, 3})
    solved = solve_over_ideal(butterfly, code, truncate=True)
    ctx = solved.context
    assert isinstance(ctx, GroupCodeContext)
    assert ctx.symbol_length == 14
    assert ctx.rate_label == "8/14"
    assert verify_solution(butterfly.network, solved)
    z = {m.id: ctx.random_message(np.random.default_rng(3)) for m in butterfly.network.messages}
    trace = execute(butterfly.network, solved, z)
    assert all(s.shape == (14,) for s in trace.symbols.values())


def test_truncation_needs_zero_sum_ideal():
    d = decompose(parse_group("C15"), 2)
    with pytest.raises(ParameterError):
        GroupCodeContext(ideal_from_T(d, {1, 2}), truncate=True)


def test_tampered_group_code_fails_both_checks(butterfly):
    d = decompose(parse_group("C7"), 2)
    solved = solve_over_ideal(butterfly, ideal_from_T(d, {2}))
    net = butterfly.network
    assert verify_exhaustive(net, solved)

    ctx = solved.context
    encoding = dict(solved.encoding)
    key = ("c-d", "d-t2")
    # one() has a nonzero image on component 2, so it is not in the annihilator
    assert not ctx.code.annihilator.contains(ctx.algebra.one())
    encoding[key] = encoding.get(key, ctx.zero_message()) + ctx.algebra.one()
    broken = network_code(net, ctx, encoding, dict(solved.decoding))

    assert not verify_solution(net, broken)
    assert not verify_exhaustive(net, broken)
    failure = solution_counterexample(net, broken)
    assert failure.sink == "t2"
    assert failure.vector == ctx.message_to_hex(ctx.message_basis()[failure.basis_index])
    assert failure.to_dict()["vector"] == failure.vector
