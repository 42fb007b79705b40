import random

import numpy as np
import pytest

from casegraph.errors import ConfigError, EdgelessGraph, EmptyGraph, UnknownEdge, ZeroMeanVector
from casegraph.graph import CausalEdge, build_graph, load_graph
from casegraph.semantic import (
    CachedProvider,
    HashEmbedding,
    TableEmbedding,
    edge_similarity,
    edge_text,
    make_provider,
    node_centrality_similarity,
    node_set_similarity,
    similarity_breakdown,
    top_nodes,
)
from conftest import make_graph


@pytest.fixture
def fig1(golden):
    return load_graph(golden / "reference_case_graph.json")


def onehot(i, dim=8):
    v = [0.0] * dim
    v[i] = 1.0
    return v


class TestEdgeText:
    def test_template(self):
        g = make_graph(["i", "f"], [("i", "f")], labels={"i": "insomnia", "f": "daytime fatigue"})
        assert edge_text(g.edges[0], g) == "insomnia causes daytime fatigue"

    def test_whitespace_verbatim(self):
        g = make_graph(["a", "b"], [("a", "b")], labels={"a": "low  mood", "b": "b"})
        assert edge_text(g.edges[0], g) == "low  mood causes b"

    def test_unknown_edge(self):
        g = make_graph(["a", "b"], [("a", "b")])
        with pytest.raises(UnknownEdge):
            edge_text(CausalEdge("b", "a"), g)

    def test_figure1_golden(self, fig1, golden):
        texts = "".join(edge_text(e, fig1) + "\n" for e in fig1.edges)
        assert texts == (golden / "reference_case_edge_texts.txt").read_text(encoding="utf-8")


class TestEdgeSimilarity:
    def test_self(self, fig1):
        assert edge_similarity(fig1, fig1, HashEmbedding()) == pytest.approx(1.0, abs=1e-6)

    def test_orthogonal(self):
        g1 = make_graph(["a", "b"], [("a", "b")])
        g2 = make_graph(["c", "d"], [("c", "d")])
        table = TableEmbedding({"a causes b": onehot(0), "c causes d": onehot(1)})
        assert edge_similarity(g1, g2, table) == 0.0

    def test_two_vs_one_hand(self):
        g1 = make_graph(["a", "b", "c"], [("a", "b"), ("a", "c")])
        g2 = make_graph(["x", "y"], [("x", "y")])
        table = TableEmbedding({"a causes b": [1, 0], "a causes c": [0, 1], "x causes y": [0.6, 0.8]})
        # forward: mean(0.6, 0.8) = 0.7; backward: max(0.6, 0.8) = 0.8
        assert edge_similarity(g1, g2, table) == pytest.approx(0.75, abs=1e-12)
        assert edge_similarity(g2, g1, table) == pytest.approx(0.75, abs=1e-12)

    def test_edgeless(self):
        with pytest.raises(EdgelessGraph):
            edge_similarity(make_graph(["a"], []), make_graph(["a", "b"], [("a", "b")]), HashEmbedding())


class TestNodeSet:
    def test_identical(self, fig1):
        assert node_set_similarity(fig1, fig1, HashEmbedding()) == pytest.approx(1.0, abs=1e-6)

    def test_orthogonal(self):
        table = TableEmbedding({"a": onehot(0), "b": onehot(1)})
        assert node_set_similarity(make_graph(["a"], []), make_graph(["b"], []), table) == 0.0

    def test_two_vs_two_hand(self):
        table = TableEmbedding({"a": [1, 0], "b": [0, 1], "x": [1, 0], "y": [0.6, 0.8]})
        # means (0.5, 0.5) and (0.8, 0.4): cosine 0.6 / (sqrt(0.5) sqrt(0.8)) = 3 / sqrt(10)
        sim = node_set_similarity(make_graph("ab", []), make_graph("xy", []), table)
        assert sim == pytest.approx(3 / 10 ** 0.5, abs=1e-12)

    def test_zero_mean(self):
        table = TableEmbedding({"a": [1, 0], "b": [-1, 0]})
        with pytest.raises(ZeroMeanVector):
            node_set_similarity(make_graph("ab", []), make_graph("a", []), table)

    def test_empty(self):
        with pytest.raises(EmptyGraph):
            node_set_similarity(build_graph("s", [], []), make_graph("a", []), HashEmbedding())


class TestCentralitySimilarity:
    def test_identical(self, fig1):
        for k in (1, 3, 5, 20):
            assert node_centrality_similarity(fig1, fig1, HashEmbedding(), k) == pytest.approx(1.0, abs=1e-6)

    def test_hubs_orthogonal(self):
        g1 = make_graph("abc", [("a", "b"), ("a", "c")])
        g2 = make_graph("xyz", [("x", "y"), ("x", "z")])
        table = TableEmbedding({"a": onehot(0), "x": onehot(1)})
        assert node_centrality_similarity(g1, g2, table, k=1) == 0.0

    def test_k2_hand(self):
        g1 = make_graph("abc", [("a", "b"), ("a", "c")])  # top-2: a (deg 2), b (tie with c, by id)
        g2 = make_graph("xyz", [("x", "y"), ("z", "y")])  # top-2: y (deg 2), x
        assert top_nodes(g1, 2) == ["a", "b"] and top_nodes(g2, 2) == ["y", "x"]
        table = TableEmbedding({"a": [1, 0, 0], "b": [0, 1, 0], "x": [0, 1, 0], "y": [0.6, 0.8, 0]})
        # rows a: (0.6, 0), b: (0.8, 1) -> forward mean(0.6, 1) = 0.8
        # columns y: max 0.8, x: max 1 -> backward 0.9
        assert node_centrality_similarity(g1, g2, table, k=2) == pytest.approx(0.85, abs=1e-12)


def test_order_invariance(fig1):
    rng = random.Random(5)
    nodes, edges = list(fig1.nodes), list(fig1.edges)
    base = similarity_breakdown(fig1, fig1, HashEmbedding())
    for _ in range(5):
        rng.shuffle(nodes)
        rng.shuffle(edges)
        shuffled = build_graph("x", nodes, edges)
        other = similarity_breakdown(shuffled, fig1, HashEmbedding())
        assert other.edge_similarity == pytest.approx(base.edge_similarity, abs=1e-12)
        assert other.node_set_similarity == pytest.approx(base.node_set_similarity, abs=1e-12)
        assert other.node_centrality_similarity == pytest.approx(base.node_centrality_similarity, abs=1e-12)


def test_breakdown_rows_both_directions(fig1):
    b = similarity_breakdown(fig1, fig1, HashEmbedding())
    assert {m.direction for m in b.edge_matches} == {"a->b", "b->a"}
    assert len(b.edge_matches) == 2 * fig1.m


class TestProviders:
    def test_hash_deterministic_unit(self):
        a, b = HashEmbedding().embed("x"), HashEmbedding().embed("x")
        np.testing.assert_array_equal(a, b)
        assert np.linalg.norm(a) == pytest.approx(1.0)

    def test_cached(self):
        inner = HashEmbedding()
        c = CachedProvider(inner)
        assert c.embed("x") is c.embed("x")

    def test_table_file(self, tmp_path):
        p = tmp_path / "t.tsv"
        p.write_text("# comment\nhello world\t3,4\n")
        t = TableEmbedding.from_file(p)
        np.testing.assert_allclose(t.embed("hello world"), [0.6, 0.8])
        with pytest.raises(ConfigError):
            t.embed("missing")

    def test_make_provider(self, tmp_path):
        assert make_provider("hash:16").embed("a").shape == (16,)
        with pytest.raises(ConfigError):
            make_provider("nope")
