"""
Cited-reference parsing and local citation linking.

A cited reference in an export looks like
``BROOKE MH, 1970, ARCH NEUROL-CHICAGO, V23, P369``. References that resolve
to a record of the same collection become edges ``citing -> cited``; the rest
go to the outer pool.
"""

import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .ingest import Collection, normalize_author

_YEAR_RE = re.compile(r"^\d{4}$")
_VOL_RE = re.compile(r"^V(\S*\d\S*)$")
_PAGE_RE = re.compile(r"^P(\S*\d\S*)$")
_INT_RE = re.compile(r"^(\d+)$")

DEFAULT_PAGE_TOLERANCE = 5


@dataclass(frozen=True)
class CitedRef:
    raw: str
    author: Optional[str] = None
    year: Optional[int] = None
    source: Optional[str] = None
    volume: Optional[str] = None
    page: Optional[str] = None

    @property
    def key(self):
        return (self.author, self.year, self.source, self.volume, self.page)

    def __str__(self):
        return format_ref_key(self.key)


def format_ref_key(key) -> str:
    author, year, source, volume, page = key
    parts = [author, str(year) if year is not None else None, source,
             f"V{volume}" if volume else None, f"P{page}" if page else None]
    return ", ".join(p for p in parts if p)


def parse_cited_ref(s: str) -> CitedRef:
    segs = [p.strip() for p in s.split(",")]
    segs = [p for p in segs if p]
    author = year = source = volume = page = None
    i = 0
    if i < len(segs) and not _YEAR_RE.match(segs[i]):
        author = normalize_author(segs[i]) or None
        i += 1
    if i < len(segs) and _YEAR_RE.match(segs[i]):
        year = int(segs[i])
        i += 1
    for seg in segs[i:]:
        if volume is None and page is None and _VOL_RE.match(seg):
            volume = _VOL_RE.match(seg).group(1)
        elif page is None and _PAGE_RE.match(seg):
            page = _PAGE_RE.match(seg).group(1)
        elif source is None and volume is None and page is None:
            source = seg
        # anything else (DOI, trailing noise) is dropped; raw keeps it
    return CitedRef(s, author, year, source, volume, page)


@dataclass(frozen=True)
class CitationGraph:
    node_count: int
    edges: FrozenSet[Tuple[int, int]]
    # (citing node id, unmatched reference), in collection/reference order
    outer_pool: Tuple[Tuple[int, CitedRef], ...] = ()

    def out_neighbors(self, u: int) -> Set[int]:
        return self._adj()[0].get(u, set())

    def in_neighbors(self, v: int) -> Set[int]:
        return self._adj()[1].get(v, set())

    def out_degree(self, u: int) -> int:
        return len(self.out_neighbors(u))

    def in_degree(self, v: int) -> int:
        return len(self.in_neighbors(v))

    def _adj(self):
        cached = self.__dict__.get("_adj_cache")
        if cached is None:
            out, inn = defaultdict(set), defaultdict(set)
            for u, v in self.edges:
                out[u].add(v)
                inn[v].add(u)
            cached = (dict(out), dict(inn))
            object.__setattr__(self, "_adj_cache", cached)
        return cached


def _ref_matches(ref: CitedRef, rec) -> bool:
    if ref.volume is None and ref.page is None:
        return False
    return ref.volume == rec.volume and ref.page == rec.begin_page


def _author_year_index(c: Collection) -> Dict[tuple, list]:
    index = defaultdict(list)
    for rec in c.records:
        index[(rec.first_author, rec.pub_year)].append(rec)
    return index


def _source_affinity(abbrev: Optional[str], full: str) -> int:
    """How many words of an abbreviated source title prefix a word of ``full``."""
    if not abbrev:
        return 0
    words = full.upper().replace("-", " ").split()
    return sum(any(w.startswith(a) for w in words)
               for a in abbrev.upper().replace("-", " ").split())


def _pick(ref: CitedRef, hits: List[int], c: Collection) -> int:
    # one reference resolves to one node; the source title breaks ties
    if len(hits) == 1:
        return hits[0]
    return min(hits, key=lambda v: (-_source_affinity(ref.source, c.node(v).source), v))


def link_citations(c: Collection) -> CitationGraph:
    index = _author_year_index(c)
    edges = set()
    pool = []
    for rec in c.records:
        for raw in rec.cited_refs:
            ref = parse_cited_ref(raw)
            hits = [v.node_id for v in index.get((ref.author, ref.year), ())
                    if v.node_id != rec.node_id and _ref_matches(ref, v)]
            if hits:
                edges.add((rec.node_id, _pick(ref, hits, c)))
            else:
                pool.append((rec.node_id, ref))
    return CitationGraph(len(c.records), frozenset(edges), tuple(pool))


def _page_close(ref_page, node_page, tolerance) -> bool:
    if ref_page is None:
        return True
    if node_page is None:
        return False
    a, b = _INT_RE.match(ref_page), _INT_RE.match(node_page)
    if a and b:
        return abs(int(a.group(1)) - int(b.group(1))) <= tolerance
    return ref_page == node_page


@dataclass(frozen=True)
class MissingLink:
    citing: int
    ref: CitedRef
    candidate: int


def find_missing_links(c: Collection, g: CitationGraph,
                       page_tolerance: int = DEFAULT_PAGE_TOLERANCE) -> List[MissingLink]:
    """Outer references that plausibly point at a collection node.

    A candidate needs the same first author and year, a matching volume (or
    none on the reference) and a begin page within ``page_tolerance`` (or no
    page on the reference).
    """
    index = _author_year_index(c)
    found = {}
    for citing, ref in g.outer_pool:
        for v in index.get((ref.author, ref.year), ()):
            if v.node_id == citing or (citing, v.node_id) in g.edges:
                continue
            if ref.volume is not None and ref.volume != v.volume:
                continue
            if not _page_close(ref.page, v.begin_page, page_tolerance):
                continue
            found.setdefault((citing, ref.raw, v.node_id), MissingLink(citing, ref, v.node_id))
    return [found[k] for k in sorted(found)]


def node_key_label(rec) -> str:
    """'SPETZLER-CS-1975-V22-I3-P340-358'"""
    parts = [rec.first_author.replace(" ", "-"), str(rec.pub_year)]
    if rec.volume:
        parts.append(f"V{rec.volume}")
    if rec.issue:
        parts.append(f"I{rec.issue}")
    if rec.begin_page:
        parts.append(f"P{rec.begin_page}")
        if rec.end_page:
            parts.append(rec.end_page)
    return "-".join(parts)


def outer_references(g: CitationGraph) -> List[Tuple[tuple, int]]:
    """Group the outer pool by reference key, counting distinct citing records."""
    citing = defaultdict(set)
    for u, ref in g.outer_pool:
        citing[ref.key].add(u)

    def order(item):
        (author, year, source, volume, page), n = item
        return (-n, year is None, year or 0, author or "", source or "",
                volume or "", page or "")

    return sorted(((k, len(v)) for k, v in citing.items()), key=order)


def reference_levels(g: CitationGraph, node: int, depth: int) -> List[Set[int]]:
    if not 1 <= node <= g.node_count:
        raise ValueError(f"invalid node id {node}")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    level = set(g.out_neighbors(node)) - {node}
    levels = [level]
    for _ in range(depth):
        nxt = set(level)
        for u in level:
            nxt |= g.out_neighbors(u)
        nxt.discard(node)
        level = nxt
        levels.append(level)
    return levels


def reachable(g: CitationGraph, node: int) -> Set[int]:
    seen, stack = set(), [node]
    while stack:
        u = stack.pop()
        for v in g.out_neighbors(u):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    seen.discard(node)
    return seen
