from itertools import combinations, permutations

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dof_atlas.si_graph import (ARCS, CATALOG, GraphError, SideInfoGraph,
                                acyclic_vertex_subsets, all_labeled_graphs, build_graph,
                                canonicalize, decode_order, is_acyclic, is_g8_class,
                                strip_non_cycle_arcs)

graphs = st.integers(0, 63).map(SideInfoGraph)
perms = st.sampled_from(list(permutations((1, 2, 3))))


def to_nx(g, members=(1, 2, 3)):
    d = nx.DiGraph()
    d.add_nodes_from(members)
    d.add_edges_from(g.induced(members))
    return d


def test_build_graph_example():
    g = build_graph([], ["M1", "M3"], ["M2"])
    assert g.arcs == {(2, 1), (2, 3), (3, 2)}


def test_build_graph_extremes():
    assert build_graph([], [], []).arcs == frozenset()
    assert build_graph([2, 3], [1, 3], [1, 2]).arcs == frozenset(ARCS)


def test_build_graph_rejects_self_knowledge():
    with pytest.raises(GraphError):
        build_graph(["M1"], [], [])


@pytest.mark.parametrize("text", ["1>1", "1>4", "12", "a>b", "1>2>3"])
def test_parse_rejects(text):
    with pytest.raises(GraphError):
        SideInfoGraph.parse(text)


@given(graphs)
def test_encode_round_trip(g):
    assert SideInfoGraph.parse(g.encode()) == g


def test_known_sets_match_arcs():
    g = SideInfoGraph.parse("2>1,2>3,3>2")
    assert g.known_messages(1) == frozenset()
    assert g.known_messages(2) == {"M1", "M3"}
    assert g.out_neighbors(3) == {2}


def test_acyclic_subsets_examples():
    assert len(acyclic_vertex_subsets(SideInfoGraph())) == 7
    cycle = SideInfoGraph.parse("1>2,2>3,3>1")
    assert set(acyclic_vertex_subsets(cycle)) == {
        frozenset(s) for s in ({1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3})}
    full = CATALOG[16]
    assert set(acyclic_vertex_subsets(full)) == {frozenset({i}) for i in (1, 2, 3)}


@pytest.mark.parametrize("g", all_labeled_graphs(), ids=lambda g: g.encode() or "empty")
def test_acyclic_subsets_against_networkx(g):
    expected = {frozenset(s) for k in (1, 2, 3) for s in combinations((1, 2, 3), k)
                if nx.is_directed_acyclic_graph(to_nx(g, s))}
    assert set(acyclic_vertex_subsets(g)) == expected


@given(graphs)
def test_acyclic_subsets_downward_closed(g):
    subsets = set(acyclic_vertex_subsets(g))
    for s in subsets:
        for k in range(1, len(s)):
            for sub in combinations(sorted(s), k):
                assert frozenset(sub) in subsets


def test_canonicalize_examples():
    assert canonicalize(SideInfoGraph.parse("2>1,2>3,3>2")).index == 11
    assert canonicalize(SideInfoGraph.parse("2>1,2>3,3>2")).permutation == (1, 2, 3)
    assert canonicalize(SideInfoGraph()).index == 1
    assert canonicalize(CATALOG[16]).index == 16


def test_canonicalize_relabel_example():
    # relabeling 1->3, 2->1, 3->2 takes this graph onto G11
    g = SideInfoGraph.parse("3>2,3>1,1>3")
    iso = canonicalize(g)
    assert iso.index == 11
    assert iso.permutation == (3, 1, 2)


def test_all_labeled_graphs_partition():
    gs = all_labeled_graphs()
    assert len(gs) == 64
    classes = {}
    for g in gs:
        classes.setdefault(canonicalize(g).index, []).append(g)
    assert sorted(classes) == list(range(1, 17))
    assert sum(len(v) for v in classes.values()) == 64


def test_catalog_classes_are_networkx_isomorphism_classes():
    gs = all_labeled_graphs()
    for g in gs:
        for h in gs:
            same = nx.is_isomorphic(to_nx(g), to_nx(h))
            assert same == (canonicalize(g).index == canonicalize(h).index)


def test_catalog_acyclic_classes():
    acyclic = [k for k, g in CATALOG.items() if is_acyclic(g, (1, 2, 3))]
    assert acyclic == [1, 2, 3, 4, 5, 6]


@given(graphs, perms)
def test_canonicalize_invariant_under_relabeling(g, perm):
    assert canonicalize(g.relabel(perm)).index == canonicalize(g).index


@given(graphs)
def test_canonical_permutation_maps_onto_representative(g):
    iso = canonicalize(g)
    assert g.relabel(iso.permutation) == CATALOG[iso.index]
    # smallest such permutation
    for perm in permutations((1, 2, 3)):
        if perm == iso.permutation:
            break
        assert g.relabel(perm) != CATALOG[iso.index]


def test_strip_examples():
    g = SideInfoGraph.parse("2>1,2>3,3>2")
    assert strip_non_cycle_arcs(g) == SideInfoGraph.parse("2>3,3>2")
    assert strip_non_cycle_arcs(CATALOG[7]) == CATALOG[7]
    for k in range(1, 7):
        assert strip_non_cycle_arcs(CATALOG[k]) == SideInfoGraph()


@given(graphs)
def test_strip_matches_networkx_cycles(g):
    on_cycle = set()
    for cyc in nx.simple_cycles(to_nx(g)):
        on_cycle |= {(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))}
    assert strip_non_cycle_arcs(g).arcs == on_cycle


@given(graphs)
def test_strip_idempotent(g):
    once = strip_non_cycle_arcs(g)
    assert strip_non_cycle_arcs(once) == once


def test_decode_order_examples():
    tt = SideInfoGraph.parse("1>2,1>3,2>3")
    assert decode_order(tt, {1, 2, 3}) == [3, 2, 1]
    assert decode_order(CATALOG[16], {2}) == [2]
    with pytest.raises(ValueError):
        decode_order(CATALOG[7], {1, 2, 3})


@given(graphs, st.sets(st.sampled_from((1, 2, 3)), min_size=1))
def test_decode_order_exists_iff_acyclic(g, q):
    acyclic = frozenset(q) in acyclic_vertex_subsets(g)
    if not acyclic:
        with pytest.raises(ValueError):
            decode_order(g, q)
        return
    order = decode_order(g, q)
    assert sorted(order) == sorted(q)
    for t, v in enumerate(order):
        assert g.out_neighbors(v) & set(q) <= set(order[:t])


def test_g8_predicate_on_catalog():
    members = [k for k, g in CATALOG.items() if is_g8_class(g)]
    assert members == [8, 9, 10]
    assert is_g8_class(CATALOG[8]) == (1, 2, 3)


@given(graphs, perms)
def test_g8_predicate_is_class_invariant(g, perm):
    assert (is_g8_class(g) is None) == (is_g8_class(g.relabel(perm)) is None)
