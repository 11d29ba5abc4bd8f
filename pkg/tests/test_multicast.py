import pytest

from src.algebra import group_algebra
from src.errors import FieldMismatchError, InsufficientCutError, NetworkError, ParameterError
from src.gf import field_make
from src.group import parse_group
from src.ideal import ideal_from_T, max_order_support
from src.multicast import (
    MulticastInstance,
    build_butterfly,
    build_combination,
    build_line,
    edge_disjoint_paths,
    jaggi_sanders,
    lift_scalar_to_ideal,
    lift_to_group_algebra,
    project_to_base,
    rotate_and_add,
    solve_over_ideal,
)
from src.network import Demand, Network, code_degree, verify_exhaustive, verify_solution
from src.spectral import decompose


def test_butterfly_instance(butterfly):
    assert butterfly.source == "s"
    assert butterfly.sinks == ("t1", "t2")
    assert butterfly.message_edges == ("z1-s", "z2-s")
    assert butterfly.h == 2


def test_edge_disjoint_paths(butterfly):
    paths = edge_disjoint_paths(butterfly.network, "s", "t1", 2)
    assert len(paths) == 2
    assert len({e for p in paths for e in p}) == sum(len(p) for p in paths)
    assert all(butterfly.network.edge_map[p[-1]].head == "t1" for p in paths)
    with pytest.raises(InsufficientCutError):
        edge_disjoint_paths(butterfly.network, "s", "t1", 3)


def test_instance_needs_hub_form(butterfly):
    net = butterfly.network
    partial = Network(net.nodes, net.edges, net.messages, net.demands[:-1])
    with pytest.raises(NetworkError):
        MulticastInstance.from_network(partial)
    starved = Network(
        net.nodes,
        tuple(e for e in net.edges if e.id != "d-t2"),
        net.messages,
        net.demands,
    )
    with pytest.raises(InsufficientCutError):
        MulticastInstance.from_network(starved)


def test_combination_network_shape():
    inst = build_combination(4, 2)
    assert inst.n_rx == 6
    assert inst.h == 2
    assert "t_1_2" in inst.sinks
    with pytest.raises(ParameterError):
        build_combination(2, 3)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_jaggi_sanders_butterfly(butterfly, m):
    sol = jaggi_sanders(butterfly, field_make(2, m))
    assert verify_solution(butterfly.network, sol.code)
    assert verify_exhaustive(butterfly.network, sol.code)


def test_jaggi_sanders_is_deterministic(butterfly):
    a = jaggi_sanders(butterfly, field_make(2, 2))
    b = jaggi_sanders(butterfly, field_make(2, 2))
    assert a.code.same_as(b.code)


def test_jaggi_sanders_combination_network():
    inst = build_combination(4, 2)
    sol = jaggi_sanders(inst, field_make(2, 3))
    assert verify_solution(inst.network, sol.code)


def test_jaggi_sanders_restricted_coefficients(butterfly):
    field = field_make(2, 4)
    alpha = field.primitive_element
    sol = jaggi_sanders(butterfly, field, [alpha, alpha ** 2])
    assert sol.allowed == (int(alpha), int(alpha ** 2))
    assert all(int(c) in sol.allowed for c in sol.code.encoding.values())


@pytest.mark.slow
def test_combination_network_lifted_to_max_order_ideal(d15):
    inst = build_combination(4, 2)
    code = ideal_from_T(d15, max_order_support(d15))
    solved = solve_over_ideal(inst, code)
    assert verify_solution(inst.network, solved)
    assert code_degree(solved) <= 6
    assert solved.context.rate_label == "12/15"


def test_butterfly_over_c7(butterfly, d7):
    code = ideal_from_T(d7, {2, 3})
    solved = solve_over_ideal(butterfly, code)
    assert verify_solution(butterfly.network, solved)
    assert solved.context.rate_label == "6/7"
    assert code_degree(solved) <= 3


def test_lift_rejects_wrong_field(butterfly, d15):
    sol = jaggi_sanders(butterfly, field_make(2, 3))
    with pytest.raises(FieldMismatchError):
        lift_scalar_to_ideal(sol, ideal_from_T(d15, {2}))


def test_lift_one_component_with_subfield_solution(butterfly, d15):
    # GF(4) sits inside the component field GF(16)
    sol = jaggi_sanders(butterfly, field_make(2, 2))
    lifted = lift_scalar_to_ideal(sol, ideal_from_T(d15, {2, 5}))
    assert verify_solution(butterfly.network, lifted)
    assert code_degree(lifted) <= lifted.context.code.degree_bound


def test_lift_into_a_named_component(butterfly, d15):
    sol = jaggi_sanders(butterfly, field_make(2, 4))
    single = ideal_from_T(d15, {3})
    lifted = lift_scalar_to_ideal(sol, single, component=3)
    assert verify_solution(butterfly.network, lifted)
    assert lifted.same_as(lift_scalar_to_ideal(sol, single))
    with pytest.raises(ParameterError, match="missing"):
        lift_scalar_to_ideal(sol, ideal_from_T(d15, {2, 3}), component=3)
    with pytest.raises(ParameterError):
        lift_scalar_to_ideal(sol, single, component=2)
    with pytest.raises(ParameterError):
        lift_scalar_to_ideal({3: sol}, single, component=3)


def test_rotate_and_add_n5(butterfly):
    code = rotate_and_add(butterfly, 5)
    assert verify_solution(butterfly.network, code)
    assert all(c.weight == 1 for c in code.encoding.values())
    assert all(c.weight <= 2 for c in code.decoding.values())
    assert code.context.rate_label == "4/5"


def test_rotate_and_add_over_gf3(butterfly):
    code = rotate_and_add(butterfly, 5, q=3)
    assert verify_solution(butterfly.network, code)
    assert code.context.rate_label == "4/5"
    assert code_degree(code) <= 3


def test_rotate_and_add_preconditions(butterfly):
    with pytest.raises(ParameterError):
        rotate_and_add(butterfly, 7)
    with pytest.raises(ParameterError):
        rotate_and_add(butterfly, 9)
    with pytest.raises(ParameterError):
        rotate_and_add(build_combination(4, 2), 5)


def test_scalar_solution_lifts_to_whole_algebra_and_back(butterfly):
    sol = jaggi_sanders(butterfly, field_make(2))
    algebra = group_algebra(parse_group("C7"), 2)
    lifted = lift_to_group_algebra(sol, algebra)
    assert lifted.context.rate_label == "7/7"
    assert verify_solution(butterfly.network, lifted)

    back = project_to_base(lifted)
    assert verify_solution(butterfly.network, back.code)
    assert back.code.same_as(sol.code)


def test_projection_needs_whole_algebra(butterfly, d7):
    solved = solve_over_ideal(butterfly, ideal_from_T(d7, {2}))
    with pytest.raises(ParameterError):
        project_to_base(solved)


def test_line_network(d15):
    inst = build_line(3)
    assert inst.sinks == ("t",)
    solved = solve_over_ideal(inst, ideal_from_T(d15, {2}))
    assert verify_solution(inst.network, solved)
    assert Demand("t", "Z1") in inst.network.demands


def test_rotate_and_add_n3_on_a_single_hop():
    inst = build_line(1)
    code = rotate_and_add(inst, 3)
    assert verify_solution(inst.network, code)
    assert code.context.rate_label == "2/3"
    assert [c.weight for _, c in code.coefficients()] == [1, 1]


@pytest.mark.parametrize(
    "group, support",
    [("C7", {2}), ("C7", {3}), ("C7", {2, 3}), ("C15", {5}), ("C15", {2, 5}), ("C15", {2, 3, 4, 5})],
)
def test_codes_without_the_trivial_component_stay_below_half_weight(butterfly, group, support):
    d = decompose(parse_group(group), 2)
    solved = solve_over_ideal(butterfly, ideal_from_T(d, support))
    assert verify_solution(butterfly.network, solved)
    n = d.group.order
    assert all(c.weight <= (n - 1) // 2 for _, c in solved.coefficients())
