import pytest

import cuckoograph as cg


def test_insert_query_delete():
    g = cg.Graph()
    assert g.insert_edge(1, 2).outcome == cg.InsertOutcome.INSERTED
    assert g.insert_edge(1, 2).outcome == cg.InsertOutcome.DUPLICATE
    assert g.query_edge(1, 2)
    assert not g.query_edge(2, 1)
    assert (1, 2) in g
    assert len(g) == 1 and g.node_count == 1
    assert g.delete_edge(1, 2).outcome == cg.DeleteOutcome.DELETED
    assert g.delete_edge(1, 2).outcome == cg.DeleteOutcome.ABSENT
    assert len(g) == 0


def test_weighted_counters():
    g = cg.WeightedGraph()
    g.insert_edge(3, 4)
    assert g.insert_edge(3, 4, 2).weight == 3
    assert g.query_edge(3, 4) == 3
    assert g.delete_edge(3, 4).outcome == cg.DeleteOutcome.DECREMENTED
    assert g.weight(3, 4) == 2
    assert g.weight(4, 3) is None


def test_bulk_insert_matches_python_set():
    edges = cg.generate("zipf:500:4000:3")
    g = cg.Graph(cg.GraphParams.seeded(7))
    assert g.insert_edges([e[:2] for e in edges]) == len(edges)
    assert sorted(g.edges()) == sorted(edges)
    assert sorted(v for v, _ in g.successors(edges[0][0])) == sorted(
        v for u, v, _ in edges if u == edges[0][0]
    )
    s = g.stats()
    assert s.edge_count == len(edges)
    assert s.bytes == s.l_cells * 56 + s.s_cells * 8 + s.chains * 16 + s.dl_bytes
    g.verify()


def test_analytics_on_cycle():
    g = cg.Graph()
    g.insert_edges([(1, 2), (2, 3), (3, 1)])
    assert g.bfs(1) == [1, 2, 3]
    assert g.sssp(1) == {1: 0, 2: 1, 3: 2}
    assert g.triangle_count(1) == 1
    assert g.scc() == [[1, 2, 3]]
    assert all(abs(r - 1 / 3) < 1e-12 for r in g.pagerank().values())
    assert g.betweenness() == {1: 1.0, 2: 1.0, 3: 1.0}
    assert g.lcc() == {1: 0.5, 2: 0.5, 3: 0.5}
    digest, items = g.run_task("bfs", top_k=3)
    assert items == 9


def test_params_validation():
    p = cg.GraphParams()
    p.expand_at = 1.5
    with pytest.raises(ValueError):
        p.validate()
    with pytest.raises(ValueError):
        cg.Graph(p)


def test_run_benchmark_rows():
    edges = cg.generate("sparse:1000:5000:1")
    rows = cg.run_benchmark(edges, "insert,query,bfs,delete", top_k=3)
    assert [r["phase"] for r in rows] == ["insert", "query", "bfs", "delete"]
    assert rows[0]["ops"] == 5000
    assert rows[1]["digest"][1] == 5000
    assert rows[3]["ops"] == 5000


def test_load_edges_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\n3 x\n")
    with pytest.raises(cg.ParseError, match="bad.txt:2:"):
        cg.load_edges(bad)
    good = tmp_path / "good.txt"
    good.write_text("# c\n1 2\n1 2\n2 3 4\n")
    assert cg.load_edges(good, dedup=True) == [(1, 2, 1), (2, 3, 4)]
