import pytest

from histograph.ingest import Collection, SourceRecord
from histograph.linker import (CitedRef, find_missing_links, link_citations, outer_references,
                               parse_cited_ref, reachable, reference_levels)

CITED_NODES = {
    1: [], 2: [1], 3: [], 4: [1, 2], 5: [2], 6: [3], 7: [6], 8: [], 9: [1, 2, 4, 6],
    10: [2, 4], 11: [2, 4, 5], 12: [], 13: [14], 14: [9], 15: [9, 14],
}


def test_parse_full_reference():
    r = parse_cited_ref("BROOKE MH, 1970, ARCH NEUROL-CHICAGO, V23, P369")
    assert (r.author, r.year, r.source, r.volume, r.page) == (
        "BROOKE MH", 1970, "ARCH NEUROL-CHICAGO", "23", "369")


def test_parse_without_page():
    r = parse_cited_ref("SPETZLER CS, 1975, MANAGEMENT SCI, V22")
    assert r.volume == "22" and r.page is None and r.source == "MANAGEMENT SCI"


def test_parse_degenerate():
    r = parse_cited_ref("ANON")
    assert r == CitedRef("ANON", author="ANON")


@pytest.mark.parametrize("raw, field, value", [
    ("SMITH A, 1990, PEDIATRICS, V5, P1", "source", "PEDIATRICS"),
    ("SMITH A, 1990, V5, P1", "source", None),
    ("SMITH A, 1990, J X, V5, P1, DOI 10.1/x", "page", "1"),
    ("1990, J X, V5", "author", None),
    ("VOGEL F, 1990, J X, V5", "author", "VOGEL F"),
])
def test_parse_segments(raw, field, value):
    assert getattr(parse_cited_ref(raw), field) == value


def test_alert92_edges(alert92, alert92_graph):
    g = alert92_graph
    assert len(g.edges) == 19
    for node, cited in CITED_NODES.items():
        assert sorted(g.out_neighbors(node)) == cited
    assert g.out_neighbors(9) == {1, 2, 4, 6}
    assert g.in_neighbors(2) == {4, 5, 9, 10, 11}


def test_same_year_edge_allowed(alert92_graph):
    assert (13, 14) in alert92_graph.edges


def test_graph_invariants(alert92, alert92_graph):
    g = alert92_graph
    assert all(u != v for u, v in g.edges)
    assert all(1 <= x <= 15 for e in g.edges for x in e)
    for r in alert92:
        assert g.out_degree(r.node_id) <= len(r.cited_refs)


def test_outer_pool_size(alert92, alert92_graph):
    ncr = sum(len(r.cited_refs) for r in alert92)
    assert ncr == 240
    assert len(alert92_graph.outer_pool) == 240 - 19


def test_single_record():
    rec = SourceRecord(pub_year=2000, source="J", authors=("A X",), volume="1",
                       begin_page="1", cited_refs=("A X, 2000, J, V1, P1", "B Y, 1999, K, V2, P3"))
    g = link_citations(Collection.build([rec]))
    assert not g.edges
    assert len(g.outer_pool) == 2


def test_duplicate_mentions_collapse():
    target = SourceRecord(pub_year=1990, source="J", authors=("T A",), volume="3", begin_page="10")
    citing = SourceRecord(pub_year=1995, source="J", authors=("C B",), volume="8", begin_page="1",
                          cited_refs=("T A, 1990, J, V3, P10", "T A., 1990, JOURNAL, V3, P10"))
    c = Collection.build([target, citing])
    g = link_citations(c)
    assert g.edges == frozenset({(2, 1)})
    assert not g.outer_pool


def test_author_year_alone_does_not_link():
    target = SourceRecord(pub_year=1990, source="J", authors=("T A",), volume="3", begin_page="10")
    citing = SourceRecord(pub_year=1995, source="J", authors=("C B",),
                          cited_refs=("T A, 1990, J",))
    g = link_citations(Collection.build([target, citing]))
    assert not g.edges


def test_missing_links_two_cases(management_science):
    c = management_science
    g = link_citations(c)
    links = find_missing_links(c, g)
    assert len(links) == 2
    first, second = links
    assert c.node(first.citing).citation == "1982 MANAGEMENT SCIENCE 28(3):276-288"
    assert first.ref.raw == "SPETZLER CS, 1975, MANAGEMENT SCI, V22"
    assert c.node(first.candidate).first_author == "SPETZLER CS"
    assert second.ref.raw == "BENSON PG, 1995, MANAGE SCI, V41, P1637"
    assert c.node(second.candidate).begin_page == "1639"
    for m in links:
        assert (m.citing, m.candidate) not in g.edges


def test_missing_links_tolerance_monotone(management_science):
    g = link_citations(management_science)
    prev = set()
    for tol in range(0, 12):
        cur = {(m.citing, m.ref.raw, m.candidate)
               for m in find_missing_links(management_science, g, tol)}
        assert prev <= cur
        prev = cur
    assert len(prev) == 3   # the off-by-9 page appears once tolerance reaches 9


def test_outer_references_ranking(muscle):
    a, _ = muscle
    g = link_citations(a)
    outer = outer_references(g)
    assert len(g.outer_pool) == 8007
    (key, n) = outer[0]
    assert key[:2] == ("BROOKE MH", 1970) and n == 10
    assert [n for _, n in outer[:10]] == [10, 9, 9, 8, 8, 7, 7, 7, 7, 6]
    counts = [n for _, n in outer]
    assert counts == sorted(counts, reverse=True)
    assert max(counts) <= len(a)


def test_outer_empty():
    from histograph.linker import CitationGraph
    assert outer_references(CitationGraph(0, frozenset())) == []


def test_reference_levels(alert92_graph):
    assert reference_levels(alert92_graph, 9, 0) == [{1, 2, 4, 6}]
    assert reference_levels(alert92_graph, 9, 1)[1] == {1, 2, 3, 4, 6}
    assert reference_levels(alert92_graph, 3, 2) == [set(), set(), set()]


def test_reference_levels_converge(alert92_graph):
    g = alert92_graph
    for node in range(1, 16):
        levels = reference_levels(g, node, 15)
        for a, b in zip(levels, levels[1:]):
            assert a <= b
        assert levels[-1] == reachable(g, node)
        assert node not in levels[-1]


def test_reference_levels_invalid(alert92_graph):
    with pytest.raises(ValueError):
        reference_levels(alert92_graph, 99, 0)


def test_ambiguous_reference_resolves_once():
    # same author, year, volume and page in two journals
    twin_a = SourceRecord(pub_year=1980, source="ANNALS OF SYNTHESIS", authors=("SMITH A",),
                          volume="1", begin_page="1")
    twin_b = SourceRecord(pub_year=1980, source="JOURNAL OF TESTING", authors=("SMITH A",),
                          volume="1", begin_page="1")
    citing = SourceRecord(pub_year=1981, source="X", authors=("LEE B",),
                          cited_refs=("SMITH A, 1980, J TEST, V1, P1",))
    c = Collection.build([twin_a, twin_b, citing])
    g = link_citations(c)
    assert len(g.edges) == 1
    (u, v), = g.edges
    assert c.node(v).source == "JOURNAL OF TESTING"
