import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cover_instance, path, random_graph
from pards.graph import (UB, UD, BipartiteInstance, ContractError, Graph, build_instance,
                         degree_class, delete_nodes, identify)


def test_single_vertex_instance():
    h = build_instance(Graph(1))
    assert h.adj_ub == {0: {1}}
    assert h.adj_ud == {1: {0}}


def test_k2_instance_all_degree_two():
    h = build_instance(Graph.from_edges(2, [(0, 1)]))
    assert h.adj_ub == {0: {2, 3}, 1: {2, 3}}
    assert all(h.degree(n) == 2 for n in (0, 1, 2, 3))


def test_p3_ud_degrees():
    h = build_instance(path(3))
    assert h.adj_ud[4] == {0, 1, 2}
    assert h.degree(3) == 2 and h.degree(5) == 2


def test_origin_maps_back_to_graph():
    h = build_instance(path(3))
    assert [h.origin[n] for n in range(6)] == [0, 1, 2, 0, 1, 2]


def test_graph_rejects_self_loop_and_range():
    g = Graph(3)
    with pytest.raises(ContractError):
        g.add_edge(1, 1)
    with pytest.raises(ContractError):
        g.add_edge(0, 3)


def test_delete_nothing_is_identity():
    h = build_instance(path(3))
    assert delete_nodes(h, set(), set()) == h


def test_delete_ub_copy_in_k2():
    h = build_instance(Graph.from_edges(2, [(0, 1)]))
    out = delete_nodes(h, {0}, set())
    assert out.degree(2) == 1 and out.degree(3) == 1
    assert h.degree(2) == 2  # original untouched


def test_delete_all_ub_leaves_uncoverable():
    h = build_instance(path(3))
    out = delete_nodes(h, {0, 1, 2}, set())
    assert sorted(out.uncoverable()) == [3, 4, 5]


def test_delete_unknown_node():
    h = build_instance(path(3))
    with pytest.raises(ContractError):
        delete_nodes(h, {3}, set())
    with pytest.raises(ContractError):
        delete_nodes(h, set(), {99})


@pytest.mark.parametrize("na, nb, expected", [
    ({1}, {2}, {1, 2}),
    ({1, 2}, {1, 2}, {1, 2}),
    ({1, 2}, {2, 3}, {1, 2, 3}),
])
def test_identify_unions_neighborhoods(na, nb, expected):
    h = cover_instance({"a": na, "b": nb, "c": {1, 2, 3}})
    out, s = identify(h, UB, 0, 1)
    assert out.adj_ub[s] == {100 + j for j in expected}
    assert out.degree(s) == len(expected)
    assert len(out.adj_ub) == len(h.adj_ub) - 1
    assert out.origin[s] == ("merge", 0, 1)
    out.check()


def test_identify_rejects_bad_pairs():
    h = cover_instance({"a": {1}, "b": {2}})
    with pytest.raises(ContractError):
        identify(h, UB, 0, 0)
    with pytest.raises(ContractError):
        identify(h, UB, 0, 101)


def test_identify_ud_side():
    h = cover_instance({"a": {1}, "b": {2}, "c": {1, 2}})
    out, s = identify(h, UD, 101, 102)
    assert out.adj_ud[s] == {0, 1, 2}
    assert out.adj_ub[2] == {s}
    out.check()


def test_degree_class():
    h = build_instance(path(3))
    assert degree_class(h, UD, 3) == {4}
    assert degree_class(BipartiteInstance(), UB, 2) == set()
    k2 = build_instance(Graph.from_edges(2, [(0, 1)]))
    assert degree_class(k2, UB, 2) == {0, 1}


def test_ids_never_collide_across_parts():
    with pytest.raises(ContractError):
        BipartiteInstance.from_adjacency({0: {0}})


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.floats(0, 1), st.integers(0, 10**6))
def test_build_instance_degrees(n, p, seed):
    g = random_graph(n, p, seed)
    h = build_instance(g)
    h.check()
    for u in range(n):
        assert h.degree(n + u) == g.degree(u) + 1


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.floats(0.1, 0.9), st.integers(0, 10**6), st.data())
def test_mutations_keep_invariants(n, p, seed, data):
    h = build_instance(random_graph(n, p, seed))
    for _ in range(data.draw(st.integers(1, 6))):
        op = data.draw(st.sampled_from(["del_ub", "del_ud", "merge_ub", "merge_ud", "closed"]))
        ub, ud = h.ub, h.ud
        if op == "del_ub" and ub:
            h = delete_nodes(h, {data.draw(st.sampled_from(ub))}, set())
        elif op == "del_ud" and ud:
            h = delete_nodes(h, set(), {data.draw(st.sampled_from(ud))})
        elif op == "merge_ub" and len(ub) >= 2:
            a, b = data.draw(st.lists(st.sampled_from(ub), min_size=2, max_size=2, unique=True))
            before = len(h.adj_ub)
            h, _ = identify(h, UB, a, b)
            assert len(h.adj_ub) == before - 1
        elif op == "merge_ud" and len(ud) >= 2:
            a, b = data.draw(st.lists(st.sampled_from(ud), min_size=2, max_size=2, unique=True))
            h, _ = identify(h, UD, a, b)
        elif op == "closed" and ub:
            h = h.copy()
            h.remove_closed_neighborhood(data.draw(st.sampled_from(ub)))
        h.check()
        assert not set(h.adj_ub) & set(h.adj_ud)


def test_copy_is_independent():
    h = build_instance(path(4))
    c = h.copy()
    c.remove_ub(0)
    assert 0 in h.adj_ub and h.degree(4) == 2
    h.check()
    c.check()
