import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import graphlmr as glm
from graphlmr import EdgeListError, Graph


def test_from_edges_canonicalizes():
    g = Graph.from_edges(4, [(2, 1), (3, 0), (0, 1)])
    assert g.edges == ((0, 1), (0, 3), (1, 2))
    assert g.adjacency == ((1, 3), (0, 2), (1,), (0,))
    assert g.n_edges == 3
    assert g.degree(1) == 2
    assert g.neighbors(1) == (0, 2)
    assert list(g.degrees()) == [2, 2, 1, 1]


def test_from_edges_rejects_bad_input():
    with pytest.raises(ValueError, match="self-loop"):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError, match="duplicate"):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError, match="out of range"):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph.from_edges(-1, [])


def test_from_edges_dedup_collapses():
    g = Graph.from_edges(3, [(0, 1), (1, 0), (2, 2), (0, 1)], dedup=True)
    assert g.edges == ((0, 1),)


def test_parse_edge_list_basic():
    text = "# comment\n\n0 1\n1 2\n"
    g = glm.parse_edge_list(text)
    assert g.n_vertices == 3
    assert g.edges == ((0, 1), (1, 2))


def test_parse_edge_list_header():
    g = glm.parse_edge_list("4 2\n0 1\n2 3\n", header=True)
    assert g.n_vertices == 4
    assert g.edges == ((0, 1), (2, 3))
    # header fixes N even when trailing vertices are isolated
    g2 = glm.parse_edge_list("5 1\n0 1\n", header=True)
    assert g2.n_vertices == 5
    assert g2.degree(4) == 0


def test_parse_edge_list_header_mismatch():
    with pytest.raises(EdgeListError, match="declares 3 edges"):
        glm.parse_edge_list("3 3\n0 1\n", header=True)
    with pytest.raises(EdgeListError, match="no data lines"):
        glm.parse_edge_list("# nothing\n", header=True)


def test_parse_edge_list_one_based():
    g = glm.parse_edge_list("1 2\n2 3\n", index_base=1)
    assert g.edges == ((0, 1), (1, 2))
    with pytest.raises(EdgeListError, match="below base"):
        glm.parse_edge_list("0 1\n", index_base=1)
    with pytest.raises(EdgeListError, match="index_base"):
        glm.parse_edge_list("0 1\n", index_base=2)


def test_parse_edge_list_malformed():
    with pytest.raises(EdgeListError, match="line 1"):
        glm.parse_edge_list("0 1 2\n")
    with pytest.raises(EdgeListError, match="non-integer"):
        glm.parse_edge_list("a b\n")
    with pytest.raises(EdgeListError, match="duplicate"):
        glm.parse_edge_list("0 1\n1 0\n")


def test_parse_edge_list_empty_text():
    assert glm.parse_edge_list("").n_vertices == 0


def test_load_edge_list_roundtrip(tmp_path):
    path = tmp_path / "g.edges"
    path.write_text("# toy\n0 1\n1 2\n2 0\n", encoding="utf-8")
    g = glm.load_edge_list(path)
    assert g.n_vertices == 3 and g.n_edges == 3


def test_build_laplacian_p3():
    g = glm.path_graph(3)
    lap = glm.build_laplacian(g)
    expected = np.array([[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]])
    assert np.array_equal(lap, expected)


def test_laplacian_rows_sum_to_zero():
    g = glm.grid_graph(4, 5)
    lap = glm.build_laplacian(g)
    assert np.allclose(lap.sum(axis=1), 0.0)
    assert np.array_equal(lap, lap.T)
    assert np.linalg.eigvalsh(lap).min() > -1e-10


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(min_value=1, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, mask) if keep])


@given(
    g=graphs(),
    seed=st.integers(min_value=0, max_value=2**31),
)
@settings(max_examples=60, deadline=None)
def test_laplacian_quadratic_form(g, seed):
    # f' L f equals the sum of squared edge differences
    f = np.random.default_rng(seed).standard_normal(g.n_vertices)
    quad = float(f @ glm.build_laplacian(g) @ f)
    direct = sum((f[u] - f[v]) ** 2 for u, v in g.edges)
    assert quad == pytest.approx(direct, rel=1e-9, abs=1e-9)


def test_bfs_distance():
    g = glm.path_graph(5)
    assert glm.bfs_distance(g, 0, 4) == 4
    assert glm.bfs_distance(g, 2, 2) == 0
    two = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert glm.bfs_distance(two, 0, 3) is None
    with pytest.raises(ValueError):
        glm.bfs_distance(g, 0, 9)


def test_induced_subgraph_reindexes():
    g = glm.grid_graph(2, 3)  # vertices 0..5
    sub, connected = glm.induced_subgraph(g, [4, 1, 0])
    # sorted order 0,1,4 -> local 0,1,2; edges (0,1) and (1,4)
    assert sub.n_vertices == 3
    assert sub.edges == ((0, 1), (1, 2))
    assert connected


def test_induced_subgraph_disconnected_flag():
    g = glm.path_graph(3)
    sub, connected = glm.induced_subgraph(g, [0, 2])
    assert sub.n_edges == 0 and not connected
    with pytest.raises(ValueError):
        glm.induced_subgraph(g, [])
    with pytest.raises(ValueError):
        glm.induced_subgraph(g, [7])


def test_induced_subgraph_full_set_is_identity():
    g = glm.grid_graph(3, 3)
    sub, connected = glm.induced_subgraph(g, range(9))
    assert sub == g and connected


def test_is_connected():
    assert glm.is_connected(glm.path_graph(6))
    assert glm.is_connected(Graph.from_edges(1, []))
    assert not glm.is_connected(Graph.from_edges(3, [(0, 1)]))
