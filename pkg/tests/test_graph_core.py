import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsecount import (DirWLGraph, GraphFormatError, UndirectedGraph,
                         dump_weighted, induced_subgraph, load_edge_list,
                         max_outdegree, out_neighbors, save_edge_list)
from sparsecount.graph_core import bfs_out_tree


def test_out_neighbors_single_arc():
    g = DirWLGraph(2, [(0, 1, 1)])
    assert out_neighbors(g, 0) == [(1, 1)]
    assert out_neighbors(g, 1) == []


def test_out_neighbors_weighted_order():
    g = DirWLGraph(3, [(0, 2, 2), (0, 1, 1)])
    assert out_neighbors(g, 0) == [(1, 1), (2, 2)]


def test_max_outdegree():
    assert max_outdegree(DirWLGraph(0, [])) == 0
    assert max_outdegree(DirWLGraph(3, [(0, 1, 1), (0, 2, 1)])) == 2
    path = DirWLGraph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)])
    assert max_outdegree(path) == 1


def test_induced_subgraph_identity_and_empty():
    g = DirWLGraph(3, [(0, 1, 1), (1, 2, 2), (0, 2, 1)])
    full = induced_subgraph(g, range(3))
    assert full.arcs() == g.arcs()
    empty = induced_subgraph(g, [])
    assert empty.n == 0 and empty.arc_count == 0


def test_induced_subgraph_restricts_and_remaps():
    g = DirWLGraph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    sub = induced_subgraph(g, {0, 1})
    assert sub.n == 2
    assert sub.arcs() == [(0, 1, 1)]
    assert list(sub.origin) == [0, 1]
    sub2 = induced_subgraph(g, {1, 2})
    assert sub2.arcs() == [(0, 1, 1)]
    assert list(sub2.origin) == [1, 2]


def test_rejects_self_loop_and_parallel():
    with pytest.raises(GraphFormatError):
        UndirectedGraph(3, [(0, 0)])
    with pytest.raises(GraphFormatError):
        UndirectedGraph(3, [(0, 1), (1, 0)])
    with pytest.raises(GraphFormatError):
        UndirectedGraph(2, [(0, 5)])


def test_dirwl_invariants():
    with pytest.raises(GraphFormatError):
        DirWLGraph(2, [(0, 1, 1), (1, 0, 1)])  # antiparallel pair
    with pytest.raises(GraphFormatError):
        DirWLGraph(2, [(0, 1, 0)])  # weight below 1
    with pytest.raises(GraphFormatError):
        DirWLGraph(2, [(0, 0, 1)])  # self-arc
    with pytest.raises(GraphFormatError):
        DirWLGraph(2, [(0, 1, 1), (0, 1, 2)])  # duplicate arc


def test_weight_layers_partition_arcs():
    g = DirWLGraph(4, [(0, 1, 1), (1, 2, 2), (2, 3, 1), (0, 3, 3)])
    total = sum(g.layer(i).shape[0] for i in range(1, 4))
    assert total == g.arc_count
    assert g.weight_of(1, 2) == 2
    assert g.weight_of(2, 1) is None


def test_fibers_group_by_label():
    g = DirWLGraph(4, [], labels=[1, 0, 1, 0])
    fibers = g.fibers()
    assert list(fibers[0]) == [1, 3]
    assert list(fibers[1]) == [0, 2]


def test_bfs_out_tree_order_and_parents():
    g = DirWLGraph(5, [(0, 2, 1), (0, 1, 1), (1, 3, 1), (2, 3, 1)])
    order, parent = bfs_out_tree(g, 0)
    assert order == [0, 1, 2, 3]
    assert parent == {0: None, 1: 0, 2: 0, 3: 1}


def test_edge_list_roundtrip_via_file(tmp_path):
    g = UndirectedGraph(5, [(0, 1), (2, 4), (1, 3)])
    path = tmp_path / "g.el"
    save_edge_list(g, path)
    back = load_edge_list(path)
    assert back.n == 5 and back.edge_set() == g.edge_set()


def test_loader_compacts_ids_and_skips_comments(tmp_path):
    path = tmp_path / "sparse.el"
    path.write_text("# a comment\n10 30\n30 700  # trailing\n\n10 700\n")
    g = load_edge_list(path)
    assert g.n == 3
    assert g.m == 3
    assert g.id_map == {"10": 0, "30": 1, "700": 2}


def test_loader_diagnostics(tmp_path):
    loop = tmp_path / "loop.el"
    loop.write_text("1 1\n")
    with pytest.raises(GraphFormatError, match="self-loop"):
        load_edge_list(loop)
    dup = tmp_path / "dup.el"
    dup.write_text("1 2\n2 1\n")
    with pytest.raises(GraphFormatError, match="parallel"):
        load_edge_list(dup)


def test_dump_weighted(tmp_path):
    g = DirWLGraph(2, [(0, 1, 2)], labels=[5, 6])
    path = tmp_path / "dump.wel"
    dump_weighted(g, path)
    text = path.read_text()
    assert "0 1 2" in text and "labels" in text


@given(st.integers(2, 12), st.sets(
    st.tuples(st.integers(0, 11), st.integers(0, 11)), max_size=30))
@settings(max_examples=120, deadline=None)
def test_roundtrip_property(n, raw):
    edges = {(min(u, v) % n, max(u, v) % n) for u, v in raw}
    edges = {(u, v) for u, v in edges if u != v}
    edges = {(min(u, v), max(u, v)) for u, v in edges}
    g = UndirectedGraph(n, sorted(edges))
    assert g.edge_set() == frozenset(edges)
    degs = g.degrees()
    assert int(degs.sum()) == 2 * len(edges)
    for v in range(n):
        for u in g.neighbors(v):
            assert v in g.neighbors(int(u))
