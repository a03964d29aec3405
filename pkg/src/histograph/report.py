"""Text renderings of the analysis tables: TSV, structured JSON and a static HTML page."""

import json
from html import escape
from typing import List

from .historiograph import emit_svg, layout_yearly, select_subgraph
from .indicators import (author_table, citation_matrix, fmt2, node_indicators,
                         source_table)
from .ingest import Collection
from .linker import (CitationGraph, find_missing_links, format_ref_key,
                     node_key_label, outer_references)

STRUCTURED_VERSION = 1

MATRIX_COLUMNS = ["cited nodes", "LCR", "NCR", "Nodes", "LCS", "GCS", "citing nodes"]
AUTHOR_COLUMNS = ["#", "Name", "TLCS", "TLCS/t", "TGCS", "TGCS/t", "TLCSb", "TLCSe",
                  "Pubs", "TLCR"]
SOURCE_COLUMNS = ["#", "Name", "TLCS", "TGCS", "Pubs"]
MISSING_COLUMNS = ["#", "Citing node", "Citing record", "Reference", "Candidate node",
                   "Candidate"]
OUTER_COLUMNS = ["#", "LCS", "Reference"]


def _ids(ids) -> str:
    return " ".join(str(i) for i in ids)


def _tsv(lines: List[list]) -> str:
    return "".join("\t".join(str(x) for x in row) + "\n" for row in lines)


def structured(kind: str, payload) -> str:
    doc = {"format": f"histograph-{kind}", "format_version": STRUCTURED_VERSION}
    doc.update(payload)
    return json.dumps(doc, indent=1, ensure_ascii=False, sort_keys=False) + "\n"


# --- tables as rows -------------------------------------------------------

def matrix_rows(c: Collection, g: CitationGraph):
    header, rows = citation_matrix(c, g)
    body = [[_ids(r.cited), r.LCR, r.NCR, r.label, r.LCS, r.GCS, _ids(r.citing)]
            for r in rows]
    return header.render("Nodes"), body


def author_rows(rows, top=None):
    rows = rows[:top] if top else rows
    return [[i, a.name, a.TLCS, fmt2(a.TLCS_t), a.TGCS, fmt2(a.TGCS_t), a.TLCSb, a.TLCSe,
             a.Pubs, a.TLCR] for i, a in enumerate(rows, start=1)]


def source_rows(rows, top=None):
    rows = rows[:top] if top else rows
    return [[i, s.name, s.TLCS, s.TGCS, s.Pubs] for i, s in enumerate(rows, start=1)]


def missing_rows(c: Collection, links):
    return [[i, m.citing, c.node(m.citing).citation, m.ref.raw, m.candidate,
             node_key_label(c.node(m.candidate))] for i, m in enumerate(links, start=1)]


def outer_rows(outer, top=None):
    outer = outer[:top] if top else outer
    return [[i, n, format_ref_key(k)] for i, (k, n) in enumerate(outer, start=1)]


# --- TSV ---------------------------------------------------------------------

def matrix_tsv(c, g) -> str:
    title, body = matrix_rows(c, g)
    return title + "\n" + _tsv([MATRIX_COLUMNS] + body)


def authors_tsv(header, rows, top=None) -> str:
    return header.render() + "\n" + _tsv([AUTHOR_COLUMNS] + author_rows(rows, top))


def sources_tsv(header, rows, top=None) -> str:
    return header.render() + "\n" + _tsv([SOURCE_COLUMNS] + source_rows(rows, top))


def missing_tsv(c, links) -> str:
    nodes = len({m.citing for m in links})
    return (f"{nodes} nodes have citations that may potentially refer to other nodes.\n"
            + _tsv([MISSING_COLUMNS] + missing_rows(c, links)))


def outer_tsv(g, outer, top=None) -> str:
    return (f"Total: {len(g.outer_pool)} (top shown).\n"
            + _tsv([OUTER_COLUMNS] + outer_rows(outer, top)))


# --- HTML report ---------------------------------------------------------------

def _html_table(columns, rows) -> str:
    head = "".join(f"<th>{escape(str(c))}</th>" for c in columns)
    body = "".join("<tr>" + "".join(f"<td>{escape(str(x))}</td>" for x in r) + "</tr>\n"
                   for r in rows)
    return f"<table>\n<tr>{head}</tr>\n{body}</table>\n"


def emit_report(c: Collection, g: CitationGraph, metrics=None, *, ref_year=None, b=None,
                e=None, threshold=0, scope="global", top=30, page_tolerance=5) -> str:
    """Self-contained HTML page with every table and the historiograph."""
    if metrics is None:
        metrics = node_indicators(c, g, ref_year, b, e) if c.records else []
    title, mrows = matrix_rows(c, g)
    a_head, a_rows = author_table(c, metrics)
    s_head, s_rows = source_table(c, metrics)
    links = find_missing_links(c, g, page_tolerance) if c.records else []
    outer = outer_references(g)
    spec = layout_yearly(select_subgraph(g, metrics, threshold, scope), c, g,
                         threshold, scope)
    label = escape(c.query_label or "collection")
    date = c.download_date.isoformat() if c.download_date else "unknown"
    parts = [
        "<!DOCTYPE html>",
        '<html><head><meta charset="utf-8">',
        f"<title>Historiograph: {label}</title>",
        "<style>body{font-family:sans-serif}table{border-collapse:collapse}"
        "td,th{border:1px solid #ccc;padding:2px 6px;font-size:12px}</style>",
        "</head><body>",
        f"<h1>{label}</h1>",
        f"<p>Downloaded: {escape(date)}</p>",
        f"<p>{escape(title)}</p>",
        "<h2>Citation matrix</h2>",
        "<p>Sorted by year, source, volume, issue, page.</p>",
        _html_table(MATRIX_COLUMNS, mrows),
        "<h2>Ranked all-author list</h2>",
        f"<p>{escape(a_head.render())}</p>",
        "<p>Sorted by LCS/t.</p>",
        _html_table(AUTHOR_COLUMNS, author_rows(a_rows, top)),
        "<h2>Ranked source list</h2>",
        f"<p>{escape(s_head.render())}</p>",
        _html_table(SOURCE_COLUMNS, source_rows(s_rows, top)),
        "<h2>Missing links</h2>",
        f"<p>{len({m.citing for m in links})} nodes have citations that may "
        "potentially refer to other nodes.</p>",
        _html_table(MISSING_COLUMNS, missing_rows(c, links)),
        "<h2>Outer references</h2>",
        f"<p>Total: {len(g.outer_pool)} (top shown).</p>",
        _html_table(OUTER_COLUMNS, outer_rows(outer, top)),
        "<h2>Historiograph</h2>",
        f"<p>{threshold} Citation threshold ({scope}); {len(spec.selected)} Nodes; "
        f"{len(spec.links)} Links</p>",
        emit_svg(spec),
        "</body></html>",
    ]
    return "\n".join(parts) + "\n"
