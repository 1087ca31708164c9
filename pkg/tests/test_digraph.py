from __future__ import annotations

import io
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treeforce.digraph import (
    Digraph,
    GraphError,
    ParseError,
    PreconditionError,
    count_two_paths,
    format_edge_list,
    in_neighbors,
    induced_subgraph,
    is_oriented,
    min_out_degree,
    out_neighbors,
    parse_edge_list,
    prune_to_exact_outdegree,
    read_edge_list,
    to_dot,
)
from treeforce.generators import complete_digraph, level_digraph, regular_tournament, tournaments

CYCLE3 = Digraph(3, [(0, 1), (1, 2), (2, 0)])


@st.composite
def digraphs(draw, max_n=10):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Digraph(n, chosen)


def brute_two_paths(G, X, Y, Z):
    return sum(
        1
        for x, y, z in itertools.permutations(G.vertices(), 3)
        if x in X and y in Y and z in Z and G.has_edge(x, y) and G.has_edge(y, z)
    )


class TestConstruction:
    def test_rejects_loop(self):
        with pytest.raises(GraphError):
            Digraph(2, [(1, 1)])

    def test_rejects_duplicate(self):
        with pytest.raises(GraphError):
            Digraph(2, [(0, 1), (0, 1)])

    def test_rejects_out_of_range(self):
        with pytest.raises(GraphError):
            Digraph(2, [(0, 2)])

    def test_antiparallel_allowed(self):
        G = Digraph(2, [(0, 1), (1, 0)])
        assert G.edge_count() == 2

    def test_equality_and_hash(self):
        a = Digraph(3, [(0, 1), (1, 2)])
        b = Digraph(3, [(1, 2), (0, 1)])
        assert a == b and hash(a) == hash(b)
        assert a != Digraph(4, [(0, 1), (1, 2)])


class TestNeighbourhoods:
    def test_single_edge(self):
        assert in_neighbors(Digraph(2, [(0, 1)]), 1) == {0}

    def test_cycle(self):
        assert out_neighbors(CYCLE3, 0) == {1}

    def test_complete(self):
        assert in_neighbors(complete_digraph(3), 2) == {0, 1}

    def test_invalid_vertex(self):
        with pytest.raises(GraphError):
            out_neighbors(CYCLE3, 3)


class TestMinOutDegree:
    def test_complete(self):
        assert min_out_degree(complete_digraph(5)) == 4

    def test_level(self):
        assert min_out_degree(level_digraph(3, 2)[0]) == 2

    def test_single_vertex(self):
        assert min_out_degree(Digraph(1)) == 0

    def test_empty(self):
        with pytest.raises(GraphError):
            min_out_degree(Digraph(0))


class TestOriented:
    def test_complete_two(self):
        assert not is_oriented(complete_digraph(2))

    def test_tournaments(self):
        assert all(is_oriented(T) for T in tournaments(4))

    def test_edgeless(self):
        assert is_oriented(Digraph(4))


class TestInducedSubgraph:
    def test_cycle_pair(self):
        sub, remap = induced_subgraph(CYCLE3, {0, 1})
        assert sub == Digraph(2, [(0, 1)])
        assert remap == (0, 1)

    def test_level_zero_is_edgeless(self):
        G, meta = level_digraph(1, 2)
        sub, remap = induced_subgraph(G, meta.level(0))
        assert sub.vertex_count == 2 and sub.edge_count() == 0

    def test_remap_lifts(self):
        G = complete_digraph(6)
        sub, remap = induced_subgraph(G, {5, 1, 3})
        assert remap == (1, 3, 5)
        assert all(G.has_edge(remap[u], remap[v]) for u, v in sub.edges)

    @given(digraphs())
    def test_whole_vertex_set_is_identity(self, G):
        sub, remap = induced_subgraph(G, G.vertices())
        assert sub == G
        assert remap == tuple(G.vertices())


class TestPrune:
    def test_already_exact(self):
        G = complete_digraph(4)
        assert prune_to_exact_outdegree(G, 3) == G

    def test_keeps_smallest_heads(self):
        P = prune_to_exact_outdegree(complete_digraph(4), 2)
        assert all(P.out_degree(v) == 2 for v in P.vertices())
        assert P.out_neighbors(0) == {1, 2}
        assert P.out_neighbors(3) == {0, 1}

    def test_zero(self):
        assert prune_to_exact_outdegree(complete_digraph(4), 0).edge_count() == 0

    def test_too_large(self):
        with pytest.raises(PreconditionError):
            prune_to_exact_outdegree(CYCLE3, 2)

    @given(digraphs(), st.integers(0, 9))
    def test_postcondition(self, G, d):
        if min_out_degree(G) < d:
            return
        P = prune_to_exact_outdegree(G, d)
        assert all(P.out_degree(v) == d for v in P.vertices())
        assert P.edges <= G.edges


class TestTwoPaths:
    def test_cycle(self):
        V = frozenset(CYCLE3.vertices())
        assert count_two_paths(CYCLE3, V, V, V) == 3

    def test_complete(self):
        G = complete_digraph(3)
        V = frozenset(G.vertices())
        assert count_two_paths(G, V, V, V) == 6

    def test_sink_middle(self):
        G = Digraph(3, [(0, 2), (1, 2)])
        V = frozenset(G.vertices())
        assert count_two_paths(G, V, {2}, V) == 0

    def test_excludes_back_and_forth(self):
        G = Digraph(2, [(0, 1), (1, 0)])
        assert count_two_paths(G, {0, 1}, {0, 1}, {0, 1}) == 0

    @given(digraphs())
    def test_matches_brute_force(self, G):
        V = frozenset(G.vertices())
        assert count_two_paths(G, V, V, V) == brute_two_paths(G, V, V, V)

    @given(digraphs(), st.data())
    def test_additive_over_middle(self, G, data):
        V = list(G.vertices())
        X = frozenset(data.draw(st.sets(st.sampled_from(V))))
        Z = frozenset(data.draw(st.sets(st.sampled_from(V))))
        Y1 = frozenset(data.draw(st.sets(st.sampled_from(V))))
        Y2 = frozenset(V) - Y1
        whole = count_two_paths(G, X, Y1 | Y2, Z)
        assert whole == count_two_paths(G, X, Y1, Z) + count_two_paths(G, X, Y2, Z)
        assert whole == brute_two_paths(G, X, frozenset(V), Z)


@given(digraphs())
def test_degree_sums(G):
    assert sum(G.out_degree(v) for v in G.vertices()) == G.edge_count()
    assert sum(G.in_degree(v) for v in G.vertices()) == G.edge_count()


class TestEdgeListFormat:
    def test_round_trip(self):
        G = regular_tournament(5)
        assert parse_edge_list(format_edge_list(G)) == G

    def test_exact_text(self):
        assert format_edge_list(Digraph(3, [(2, 0), (0, 1)])) == "3 2\n0 1\n2 0\n"

    def test_comments(self):
        G = parse_edge_list("# hello\n2 1\n# mid\n0 1\n")
        assert G == Digraph(2, [(0, 1)])

    @pytest.mark.parametrize(
        "text",
        [
            "2 1\n0 1",  # no trailing newline
            "2 1\n0 0\n",  # loop
            "2 2\n0 1\n0 1\n",  # duplicate
            "2 2\n0 1\n",  # count mismatch
            "2 1\n0  1\n",  # double space
            "2 1\n01 1\n",  # leading zero
            "2 1\n0 2\n",  # out of range
            "",
            "\n",
            "2 1\n-1 0\n",
        ],
    )
    def test_rejects(self, text):
        with pytest.raises(ParseError):
            parse_edge_list(text)

    def test_read_stdin(self, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("2 1\n1 0\n"))
        assert read_edge_list("-") == Digraph(2, [(1, 0)])

    def test_read_file(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("3 1\n2 1\n")
        assert read_edge_list(str(p)) == Digraph(3, [(2, 1)])

    @given(digraphs())
    def test_round_trip_property(self, G):
        assert parse_edge_list(format_edge_list(G)) == G


def test_dot_export():
    text = to_dot(Digraph(3, [(1, 0), (0, 2)]))
    assert text == "digraph G {\n  v0;\n  v1;\n  v2;\n  v0 -> v2;\n  v1 -> v0;\n}\n"


@settings(max_examples=50)
@given(digraphs(max_n=6))
def test_immutable_neighbourhoods(G):
    for v in G.vertices():
        assert isinstance(G.out_neighbors(v), frozenset)
        assert isinstance(G.in_neighbors(v), frozenset)
