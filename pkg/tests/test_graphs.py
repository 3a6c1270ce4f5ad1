import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projbound import graphs as G
from projbound.eigen import eigenvalues


def nx_of(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


@st.composite
def small_graphs(draw, max_n=62):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for j in range(1, n) for i in range(j)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return G.Graph(n, frozenset(p for p, keep in zip(pairs, mask) if keep))


# construction ---------------------------------------------------------------

def test_from_edge_list_triangle():
    g = G.from_edge_list(3, [(0, 1), (1, 2), (0, 2)])
    assert g == G.complete_graph(3)


def test_from_edge_list_edgeless_and_duplicates():
    assert G.from_edge_list(2, []).edges == frozenset()
    g = G.from_edge_list(4, [(0, 1), (1, 0)])
    assert g.edges == {(0, 1)} and g.n == 4


@pytest.mark.parametrize("edges", [[(0, 3)], [(-1, 0)], [(1, 1)]])
def test_from_edge_list_rejects(edges):
    with pytest.raises(G.GraphError):
        G.from_edge_list(3, edges)


def test_adjacency_matrix_basic():
    np.testing.assert_array_equal(G.adjacency_matrix(G.complete_graph(2)), [[0, 1], [1, 0]])
    assert not G.adjacency_matrix(G.from_edge_list(5, [])).any()


# graph6 -----------------------------------------------------------------------

@pytest.mark.parametrize("text,n,edges", [("A_", 2, {(0, 1)}), ("A?", 2, set()), ("@", 1, set())])
def test_parse_graph6_examples(text, n, edges):
    g = G.parse_graph6(text)
    assert g.n == n and set(g.edges) == edges


def test_to_graph6_examples():
    assert G.to_graph6(G.complete_graph(2)) == "A_"
    assert G.to_graph6(G.from_edge_list(2, [])) == "A?"


@pytest.mark.parametrize("bad", ["A", "A_?", "A\x20", "", "B\x7f"])
def test_parse_graph6_malformed(bad):
    with pytest.raises(G.Graph6Error):
        G.parse_graph6(bad)


def test_graph6_extended_size_rejected_distinctly():
    big = nx.to_graph6_bytes(nx.path_graph(70), header=False).decode().strip()
    with pytest.raises(G.Graph6SizeError):
        G.parse_graph6(big)
    with pytest.raises(G.Graph6SizeError):
        G.to_graph6(G.union_cliques(63, 1))


@settings(max_examples=200, deadline=None)
@given(small_graphs())
def test_graph6_round_trip_and_matches_networkx(g):
    text = G.to_graph6(g)
    assert G.parse_graph6(text) == g
    ref = nx.to_graph6_bytes(nx_of(g), header=False).decode().strip()
    assert text == ref


def test_edge_list_text_round_trip(tmp_path):
    g = G.icosahedron()
    assert G.parse_edge_list(G.format_edge_list(g)) == g
    with pytest.raises(G.GraphError):
        G.parse_edge_list("3\n0 1 2\n")
    with pytest.raises(G.GraphError):
        G.parse_edge_list("x\n")


# complement -------------------------------------------------------------------

def test_complement_of_complete_is_empty():
    assert G.complement(G.complete_graph(4)).edges == frozenset()


def test_complement_of_3K4_is_complete_tripartite():
    h = G.complement(G.union_cliques(3, 4))
    a = G.adjacency_matrix(G.union_cliques(3, 4))
    np.testing.assert_array_equal(a + G.adjacency_matrix(h), np.ones((12, 12)) - np.eye(12))
    assert nx.is_isomorphic(nx_of(h), nx.complete_multipartite_graph(4, 4, 4))


@settings(max_examples=100, deadline=None)
@given(small_graphs(max_n=20))
def test_complement_involution_and_identity(g):
    h = G.complement(g)
    assert G.complement(h) == g
    np.testing.assert_array_equal(G.adjacency_matrix(g) + G.adjacency_matrix(h),
                                  np.ones((g.n, g.n)) - np.eye(g.n))


# families ---------------------------------------------------------------------

def test_union_cliques():
    g = G.union_cliques(3, 4)
    assert g.n == 12 and len(g.edges) == 18
    assert eigenvalues(G.adjacency_matrix(g))[2] == pytest.approx(12 / 3 - 1, abs=1e-12)
    assert G.union_cliques(1, 5) == G.complete_graph(5)
    assert G.union_cliques(4, 1).edges == frozenset()


def test_icosahedron_structure():
    g = G.icosahedron()
    assert g.n == 12 and g.degrees() == [5] * 12
    assert nx.is_isomorphic(nx_of(g), nx.icosahedral_graph())
    h = nx_of(g)
    for v in range(12):
        nbhd = h.subgraph(h[v])
        assert nx.is_isomorphic(nbhd, nx.cycle_graph(5))
    assert not g.has_edge(0, 11)


def test_icosahedron_spectrum():
    # exact charpoly (sympy): (x-5)(x+1)^5(x^2-5)^3
    s5 = math.sqrt(5)
    expected = [5] + [s5] * 3 + [-1] * 5 + [-s5] * 3
    np.testing.assert_allclose(eigenvalues(G.adjacency_matrix(G.icosahedron())), expected, atol=1e-9)


def test_paley9_strongly_regular():
    g = G.paley9()
    a = G.adjacency_matrix(g)
    assert g.degrees() == [4] * 9
    common = a @ a
    for i in range(9):
        for j in range(i + 1, 9):
            assert common[i, j] == (1 if a[i, j] else 2)


def test_paley9_spectrum_and_rook_isomorphism():
    np.testing.assert_allclose(eigenvalues(G.adjacency_matrix(G.paley9())),
                               [4, 1, 1, 1, 1, -2, -2, -2, -2], atol=1e-9)
    rook = nx.cartesian_product(nx.complete_graph(3), nx.complete_graph(3))
    assert nx.is_isomorphic(nx_of(G.paley9()), rook)


def test_closed_blowup_small_cases():
    g = G.icosahedron()
    assert G.closed_blowup(g, 1) == g
    assert G.closed_blowup(G.Graph(1, frozenset()), 4) == G.complete_graph(4)


def test_closed_blowup_icosahedron_t2():
    # charpoly of the 24-vertex blowup: (x-11)(x+1)^17(x^2-2x-19)^3
    w = eigenvalues(G.adjacency_matrix(G.closed_blowup(G.icosahedron(), 2)))
    assert w[3] == pytest.approx(1 + 2 * math.sqrt(5), abs=1e-9)
    assert w[3] == pytest.approx(2 * (math.sqrt(5) + 1) - 1, abs=1e-9)


def test_closed_blowup_paley_lambda5():
    for t in (1, 2, 3):
        g = G.closed_blowup(G.paley9(), t)
        assert eigenvalues(G.adjacency_matrix(g))[4] == pytest.approx(2 * g.n / 9 - 1, abs=1e-9)


@pytest.mark.parametrize("base", [G.icosahedron(), G.paley9(), G.union_cliques(3, 2),
                                  G.complete_graph(4), nx.petersen_graph()])
@pytest.mark.parametrize("t", [1, 2, 3])
def test_closed_blowup_spectrum_law(base, t):
    if isinstance(base, nx.Graph):
        base = G.from_edge_list(base.number_of_nodes(), base.edges())
    mu = np.linalg.eigvalsh(G.adjacency_matrix(base))
    expected = np.sort(np.concatenate([t * (mu + 1) - 1, -np.ones(base.n * (t - 1))]))[::-1]
    got = eigenvalues(G.adjacency_matrix(G.closed_blowup(base, t)))
    np.testing.assert_allclose(got, expected, atol=1e-9)


def test_family_parser():
    assert G.family("cliques:3,4") == G.union_cliques(3, 4)
    assert G.family("paley9", blowup=2) == G.closed_blowup(G.paley9(), 2)
    for bad in ("cliques:3", "paley9:2", "nope", "cliques:a,b"):
        with pytest.raises(G.GraphError):
            G.family(bad)


@settings(max_examples=50, deadline=None)
@given(small_graphs(max_n=15))
def test_adjacency_invariants(g):
    a = G.adjacency_matrix(g)
    assert np.array_equal(a, a.T) and not np.diagonal(a).any()
    assert G.from_adjacency(a) == g
