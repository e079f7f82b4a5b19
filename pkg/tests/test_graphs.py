import json

import pytest

from homopoly.graphs import (CapExceeded, Graph, GraphError, are_bihomomorphic, cone, disjoint_union,
                             enumerate_graphs, enumeration_cap, find_homomorphism, graph_from_mask, is_homomorphism,
                             make_family, max_degree, neighborhood_union)


def test_edges_are_canonicalised():
    g = Graph.from_edges(3, [(2, 1), (3, 2)])
    assert g.sorted_edges() == [(1, 2), (2, 3)]


@pytest.mark.parametrize("edges, loops", [([(1, 1)], []), ([(0, 1)], []), ([(1, 4)], []), ([], [5])])
def test_malformed_graphs_rejected(edges, loops):
    with pytest.raises(GraphError):
        Graph.from_edges(3, edges, loops)


def test_json_round_trip():
    g = Graph.from_edges(4, [(1, 2), (3, 4)], [2])
    assert Graph.from_json(json.dumps(g.to_json())) == g
    with pytest.raises(GraphError):
        Graph.from_json({"edges": []})


def test_degree_counts_loop_twice():
    g = Graph.from_edges(2, [(1, 2)], [1])
    assert g.degree(1) == 3
    assert g.degree(2) == 1


def test_family_shapes():
    assert len(make_family("complete", 4).edges) == 6
    assert len(make_family("complete_bipartite", 2, 3).edges) == 6
    assert make_family("single_looped_vertex").loops == {1}
    assert not make_family("edgeless", 3).edges
    with pytest.raises(GraphError):
        make_family("cycle", 2)
    with pytest.raises(GraphError):
        make_family("path", 0)
    with pytest.raises(GraphError):
        make_family("petersen", 10)


def test_triangle_has_no_map_to_edge():
    assert find_homomorphism(make_family("complete", 3), make_family("edge")) is None


def test_witness_is_a_homomorphism():
    G, H = make_family("cycle", 6), make_family("edge")
    phi = find_homomorphism(G, H)
    assert phi is not None and is_homomorphism(G, H, phi)


def test_loop_absorbs_everything():
    loop = make_family("single_looped_vertex")
    assert find_homomorphism(make_family("complete", 4), loop) == {1: 1, 2: 1, 3: 1, 4: 1}


def test_looped_source_needs_looped_target():
    assert find_homomorphism(make_family("single_looped_vertex"), make_family("complete", 3)) is None


def test_bihomomorphic_classes():
    assert are_bihomomorphic(make_family("cycle", 4), make_family("edge"))
    assert are_bihomomorphic(make_family("complete_bipartite", 2, 3), make_family("path", 3))
    assert not are_bihomomorphic(make_family("cycle", 5), make_family("edge"))


def test_neighborhood_union_examples():
    # K_3: each neighbourhood is an edge
    assert neighborhood_union(make_family("complete", 3)) == Graph.from_edges(6, [(1, 2), (3, 4), (5, 6)])
    # C_4: neighbours of a vertex are non-adjacent
    assert not neighborhood_union(make_family("cycle", 4)).edges
    with pytest.raises(GraphError):
        neighborhood_union(make_family("single_looped_vertex"))


def test_neighborhood_union_lowers_max_degree():
    for H in (make_family("complete", 4), make_family("complete", 5), cone(make_family("cycle", 5))):
        assert max_degree(neighborhood_union(H)) < max_degree(H)


def test_cone_and_union():
    c = cone(make_family("path", 3))
    assert c.n == 4 and c.degree(4) == 3
    u = disjoint_union([make_family("edge"), make_family("edge")])
    assert u.is_regular(1)


def test_enumeration_order_and_cap(monkeypatch):
    graphs = list(enumerate_graphs(3))
    assert len(graphs) == 8
    # the first edge in lexicographic order is the most significant bit
    assert graphs[4].sorted_edges() == [(1, 2)]
    assert graph_from_mask(3, 0b001).sorted_edges() == [(2, 3)]
    with pytest.raises(CapExceeded):
        list(enumerate_graphs(7))
    monkeypatch.setenv("HOMOPOLY_MAX_N", "7")
    assert enumeration_cap() == 7
    assert enumeration_cap(2) == 2
