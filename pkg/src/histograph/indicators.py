"""
Bibliometric indicators for nodes, authors and sources.

Per node: LCS (local citations received), GCS (times cited in the source
database), NCR/LCR (cited references, total and resolved locally), the
per-year rates LCS/t and GCS/t, and the windowed counts LCS_b / LCS_e.
Author and source rows are sums of the node values over their records.
"""

from collections import defaultdict
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Dict, List, Optional

from .errors import HistographError
from .ingest import Collection
from .linker import CitationGraph

CORE, CONTINUANT, TRANSIENT = "core", "continuant", "transient"


def fmt2(x) -> str:
    """Two decimals, half-up (1.265 -> 1.27)."""
    if isinstance(x, float):
        d = Decimal(repr(x))
    elif isinstance(x, Fraction):
        d = Decimal(x.numerator) / Decimal(x.denominator)
    else:
        d = Decimal(x)
    return str(d.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def mean2(total, n) -> str:
    return fmt2(Fraction(total, n)) if n else "0.00"


@dataclass(frozen=True)
class NodeMetrics:
    node_id: int
    LCS: int
    GCS: int
    NCR: int
    LCR: int
    LCS_t: float
    GCS_t: float
    LCS_b: int
    LCS_e: int
    age: int


@dataclass
class AuthorMetrics:
    name: str
    TLCS: int = 0
    TLCS_t: float = 0.0
    TGCS: int = 0
    TGCS_t: float = 0.0
    TLCSb: int = 0
    TLCSe: int = 0
    Pubs: int = 0
    TLCR: int = 0


@dataclass
class SourceMetrics:
    name: str
    TLCS: int = 0
    TGCS: int = 0
    Pubs: int = 0


@dataclass(frozen=True)
class TableHeader:
    count: int
    TLCS: int
    TGCS: int

    def render(self, noun="Total") -> str:
        return (f"{noun}: {self.count}, TLCS: {self.TLCS}, TGCS: {self.TGCS}, "
                f"mean TLCS: {mean2(self.TLCS, self.count)}, "
                f"mean TGCS: {mean2(self.TGCS, self.count)}")


def resolve_window(c: Collection, ref_year=None, b=None, e=None):
    """Fill in defaults: ref_year and e default to the last year, b to the first."""
    span = c.year_span
    if span is None:
        return ref_year, b, e
    lo, hi = span
    ref_year = hi if ref_year is None else ref_year
    b = lo if b is None else b
    e = hi if e is None else e
    if ref_year < lo:
        raise HistographError(f"ref_year {ref_year} precedes every publication year")
    return ref_year, b, e


def node_indicators(c: Collection, g: CitationGraph, ref_year: Optional[int] = None,
                    b: Optional[int] = None, e: Optional[int] = None) -> List[NodeMetrics]:
    ref_year, b, e = resolve_window(c, ref_year, b, e)
    out = []
    for rec in c.records:
        citing_years = [c.node(u).pub_year for u in g.in_neighbors(rec.node_id)]
        lcs = len(citing_years)
        age = max(1, ref_year - rec.pub_year + 1)
        out.append(NodeMetrics(
            node_id=rec.node_id,
            LCS=lcs,
            GCS=rec.global_citations,
            NCR=len(rec.cited_refs),
            LCR=g.out_degree(rec.node_id),
            LCS_t=lcs / age,
            GCS_t=rec.global_citations / age,
            LCS_b=sum(1 for y in citing_years if y <= b),
            LCS_e=sum(1 for y in citing_years if y >= e),
            age=age,
        ))
    return out


def _accumulate(row, m: NodeMetrics):
    row.TLCS += m.LCS
    row.TGCS += m.GCS
    row.Pubs += 1
    if isinstance(row, AuthorMetrics):
        row.TLCS_t += m.LCS_t
        row.TGCS_t += m.GCS_t
        row.TLCSb += m.LCS_b
        row.TLCSe += m.LCS_e
        row.TLCR += m.LCR


AUTHOR_SORT_KEYS = {
    "tlcs": "TLCS", "tlcs_t": "TLCS_t", "tgcs": "TGCS", "tgcs_t": "TGCS_t",
    "tlcsb": "TLCSb", "tlcse": "TLCSe", "pubs": "Pubs", "tlcr": "TLCR",
    "name": "name",
}
SOURCE_SORT_KEYS = {"tlcs": "TLCS", "tgcs": "TGCS", "pubs": "Pubs", "name": "name"}


def _sorted(rows, sort_key, keys):
    try:
        attr = keys[sort_key.lower()]
    except KeyError:
        raise ValueError(f"unknown sort key {sort_key!r}; choose from {sorted(keys)}") from None
    rows = sorted(rows, key=lambda r: r.name)
    if attr == "name":
        return rows
    # round rates so that 1.7499999 and 1.75 tie as the rendered table shows
    def val(r):
        v = getattr(r, attr)
        return round(v, 9) if isinstance(v, float) else v
    return sorted(rows, key=val, reverse=True)


def author_table(c: Collection, metrics: List[NodeMetrics], sort_key: str = "tlcs_t"):
    """Ranked all-author list. Every co-author is credited with the full record."""
    rows: Dict[str, AuthorMetrics] = {}
    for rec, m in zip(c.records, metrics):
        for name in dict.fromkeys(rec.authors):
            _accumulate(rows.setdefault(name, AuthorMetrics(name)), m)
    header = TableHeader(len(rows), sum(m.LCS for m in metrics), sum(m.GCS for m in metrics))
    return header, _sorted(rows.values(), sort_key, AUTHOR_SORT_KEYS)


def source_table(c: Collection, metrics: List[NodeMetrics], sort_key: str = "pubs"):
    rows: Dict[str, SourceMetrics] = {}
    for rec, m in zip(c.records, metrics):
        _accumulate(rows.setdefault(rec.source, SourceMetrics(rec.source)), m)
    header = TableHeader(len(rows), sum(m.LCS for m in metrics), sum(m.GCS for m in metrics))
    return header, _sorted(rows.values(), sort_key, SOURCE_SORT_KEYS)


@dataclass(frozen=True)
class MatrixRow:
    cited: tuple
    LCR: int
    NCR: int
    label: str
    LCS: int
    GCS: int
    citing: tuple


def citation_matrix(c: Collection, g: CitationGraph):
    rows = []
    for rec in c.records:
        n = rec.node_id
        rows.append(MatrixRow(
            cited=tuple(sorted(g.out_neighbors(n))),
            LCR=g.out_degree(n),
            NCR=len(rec.cited_refs),
            label=rec.label,
            LCS=g.in_degree(n),
            GCS=rec.global_citations,
            citing=tuple(sorted(g.in_neighbors(n))),
        ))
    header = TableHeader(len(rows), sum(r.LCS for r in rows), sum(r.GCS for r in rows))
    return header, rows


def classify_authors(c: Collection, metrics) -> Dict[str, str]:
    """Split authors into core / continuant / transient.

    ``metrics`` is the author table (rows or a (header, rows) pair). An
    author publishing in one year only is transient; one present in both the
    first and the last third of the collection window and cited locally is
    core; everyone else is a continuant.
    """
    if isinstance(metrics, tuple):
        metrics = metrics[1]
    span = c.year_span
    if span is None:
        return {}
    lo, hi = span
    third = Fraction(hi - lo + 1, 3)
    years = defaultdict(set)
    for rec in c.records:
        for name in rec.authors:
            years[name].add(rec.pub_year)
    out = {}
    for m in metrics:
        ys = years.get(m.name, set())
        if len(ys) <= 1:
            out[m.name] = TRANSIENT
        elif (any(y - lo < third for y in ys) and any(hi - y < third for y in ys)
              and m.TLCS > 0):
            out[m.name] = CORE
        else:
            out[m.name] = CONTINUANT
    return out
