from rmove.frontend import parse_source
from rmove.graph import (
    build_mdg,
    load_edge_list,
    save_edge_list,
    undirected_edges,
    undirected_view,
)

CALL_TRIPLE = """
class Worker {
    int m1(int x) { return m2(x) + m3(); }
    int m2(int x) { return m3() + x; }
    int m3() { return 1; }
}
"""


def _short(graph):
    return {m: m.rsplit("::", 1)[1].split("(")[0] for m in graph.nodes}


def test_golden_triple_graph():
    graph = build_mdg(parse_source([("w.src", CALL_TRIPLE)]))
    names = _short(graph)
    edges = {(names[graph.nodes[s]], names[graph.nodes[d]]) for s, d in graph.edges}
    assert graph.node_count == 3
    assert edges == {("m1", "m2"), ("m1", "m3"), ("m2", "m3")}


def test_repeated_calls_collapse():
    source = """
    class A {
        int f() { return g() + g() + g(); }
        int g() { return 1; }
    }
    """
    graph = build_mdg(parse_source([("a.src", source)]))
    assert len(graph.edges) == 1


def test_recursion_gives_no_self_loop():
    source = "class A { int f(int n) { return n > 0 ? f(n - 1) : 0; } }"
    graph = build_mdg(parse_source([("a.src", source)]))
    assert graph.node_count == 1
    assert graph.edges == ()


def test_isolated_methods_stay():
    source = "class A { int f() { return 1; } int g() { return 2; } }"
    graph = build_mdg(parse_source([("a.src", source)]))
    assert graph.node_count == 2
    assert graph.edges == ()


def test_undirected_view_symmetric():
    graph = build_mdg(parse_source([("w.src", CALL_TRIPLE)]))
    adj = undirected_view(graph)
    assert [len(n) for n in adj] == [2, 2, 2]
    for u, neighbors in enumerate(adj):
        for v in neighbors:
            assert u in adj[v]
    assert len(undirected_edges(graph)) == 3


def test_star_graph_center_degree():
    methods = " ".join(f"int leaf{i}() {{ return {i}; }}" for i in range(5))
    source = f"""
    class S {{
        int center() {{ return leaf0() + leaf1() + leaf2() + leaf3() + leaf4(); }}
        {methods}
    }}
    """
    graph = build_mdg(parse_source([("s.src", source)]))
    adj = undirected_view(graph)
    center = graph.index["main::S::center()"]
    assert len(adj[center]) == 5
    for i, neighbors in enumerate(adj):
        if i != center:
            assert neighbors == [center]


def test_empty_graph():
    graph = build_mdg(parse_source([("a.src", "class A {}")]))
    assert graph.node_count == 0
    assert undirected_view(graph) == []


def test_nodes_sorted_and_idempotent():
    corpus = parse_source([("w.src", CALL_TRIPLE)])
    first = build_mdg(corpus)
    second = build_mdg(corpus)
    assert first == second
    assert list(first.nodes) == sorted(first.nodes)
    assert len(first.edges) <= first.node_count * (first.node_count - 1)


def test_edge_list_round_trip_keeps_isolated_nodes(tmp_path):
    source = """
    class A {
        int f() { return g(); }
        int g() { return 1; }
        int alone() { return 0; }
    }
    """
    graph = build_mdg(parse_source([("a.src", source)]))
    target = tmp_path / "mdg.tsv"
    save_edge_list(graph, target)
    loaded = load_edge_list(target)
    assert loaded.nodes == graph.nodes
    assert loaded.edges == graph.edges

    save_edge_list(loaded, tmp_path / "again.tsv")
    assert (tmp_path / "again.tsv").read_bytes() == target.read_bytes()
