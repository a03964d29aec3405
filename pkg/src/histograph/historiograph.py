"""
Year-by-year historiographs and main path analysis.

Edges always point citing -> cited. Nodes are placed on one row per
publication year; circle area grows with the node's LCS in the full graph.
"""

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Set, Tuple
from xml.sax.saxutils import escape

from .ingest import Collection
from .linker import CitationGraph

LOCAL, GLOBAL = "local", "global"

MIN_RADIUS = 6.0
RADIUS_STEP = 4.0    # radius = sqrt(MIN_RADIUS**2 + RADIUS_STEP**2 * lcs): area ~ lcs
ROW_HEIGHT = 60
COL_WIDTH = 60
LEFT_MARGIN = 70
TOP_MARGIN = 40


@dataclass(frozen=True)
class Selection:
    nodes: FrozenSet[int]
    links: FrozenSet[Tuple[int, int]]


def select_subgraph(g: CitationGraph, metrics, threshold: int = 0,
                    scope: str = GLOBAL) -> Selection:
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    if scope not in (LOCAL, GLOBAL):
        raise ValueError(f"scope must be {LOCAL!r} or {GLOBAL!r}")
    attr = "LCS" if scope == LOCAL else "GCS"
    nodes = frozenset(m.node_id for m in metrics if getattr(m, attr) >= threshold)
    links = frozenset((u, v) for u, v in g.edges if u in nodes and v in nodes)
    return Selection(nodes, links)


@dataclass(frozen=True)
class HistoriographSpec:
    threshold: int
    scope: str
    selected: FrozenSet[int]
    links: Tuple[Tuple[int, int], ...]
    rows: Tuple[Tuple[int, Tuple[int, ...]], ...]   # (year, node ids) for every year
    radius: Dict[int, float] = field(default_factory=dict, compare=False, hash=False)
    tooltip: Dict[int, str] = field(default_factory=dict, compare=False, hash=False)

    @property
    def years(self):
        return [y for y, _ in self.rows]


def node_radius(lcs: int) -> float:
    return math.sqrt(MIN_RADIUS ** 2 + RADIUS_STEP ** 2 * lcs)


def layout_yearly(sel: Selection, c: Collection, g: CitationGraph,
                  threshold: int = 0, scope: str = GLOBAL) -> HistoriographSpec:
    by_year = defaultdict(list)
    for n in sorted(sel.nodes):
        by_year[c.node(n).pub_year].append(n)
    rows = ()
    if by_year:
        lo, hi = min(by_year), max(by_year)
        rows = tuple((y, tuple(by_year.get(y, ()))) for y in range(lo, hi + 1))
    radius = {n: node_radius(g.in_degree(n)) for n in sel.nodes}
    tooltip = {n: f"{c.node(n).pub_year} {c.node(n).first_author}" for n in sel.nodes}
    return HistoriographSpec(threshold, scope, sel.nodes, tuple(sorted(sel.links)),
                             rows, radius, tooltip)


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(spec: HistoriographSpec) -> str:
    out = ["digraph historiograph {", "  rankdir=TB;"]
    if spec.rows:
        # year axis keeps empty years as visible rows
        out.append("  node [shape=plaintext];")
        out.append("  " + " -> ".join(f"y{y}" for y in spec.years)
                   + " [style=invis];" if len(spec.rows) > 1 else f"  y{spec.years[0]};")
    out.append("  node [shape=circle, fixedsize=true];")
    for year, nodes in spec.rows:
        for n in nodes:
            width = 2 * spec.radius[n] / 72.0
            out.append(f"  {n} [label={_q(str(n))}, tooltip={_q(spec.tooltip[n])}, "
                       f"width={width:.3f}];")
    for year, nodes in spec.rows:
        if nodes:
            members = "; ".join([f"y{year}"] + [str(n) for n in nodes])
            out.append(f"  {{ rank=same; {members}; }}")
    for u, v in spec.links:
        out.append(f"  {u} -> {v};")
    out.append("}")
    return "\n".join(out) + "\n"


def grid_positions(spec: HistoriographSpec) -> Dict[int, Tuple[float, float]]:
    pos = {}
    for r, (year, nodes) in enumerate(spec.rows):
        y = TOP_MARGIN + r * ROW_HEIGHT
        for i, n in enumerate(nodes):
            pos[n] = (LEFT_MARGIN + i * COL_WIDTH, y)
    return pos


def emit_svg(spec: HistoriographSpec) -> str:
    pos = grid_positions(spec)
    widest = max((len(ns) for _, ns in spec.rows), default=0)
    width = LEFT_MARGIN + max(widest, 1) * COL_WIDTH + 20
    height = TOP_MARGIN + max(len(spec.rows), 1) * ROW_HEIGHT
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
           f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
           '<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" '
           'markerWidth="6" markerHeight="6" orient="auto">'
           '<path d="M0,0 L10,5 L0,10 z" fill="#555"/></marker></defs>']
    for r, (year, _) in enumerate(spec.rows):
        y = TOP_MARGIN + r * ROW_HEIGHT
        out.append(f'<text x="10" y="{y + 4}" font-size="12" font-family="sans-serif">{year}</text>')
    for u, v in spec.links:
        (x1, y1), (x2, y2) = pos[u], pos[v]
        ru, rv = spec.radius[u], spec.radius[v]
        if y1 == y2:
            # same-year citation: arc above the row
            mx, my = (x1 + x2) / 2, y1 - ROW_HEIGHT / 2
            out.append(f'<path d="M{x1:.1f},{y1 - ru:.1f} Q{mx:.1f},{my:.1f} '
                       f'{x2:.1f},{y2 - rv:.1f}" fill="none" stroke="#555" '
                       f'marker-end="url(#arrow)"/>')
            continue
        dx, dy = x2 - x1, y2 - y1
        d = math.hypot(dx, dy)
        sx, sy = x1 + dx * ru / d, y1 + dy * ru / d
        ex, ey = x2 - dx * rv / d, y2 - dy * rv / d
        out.append(f'<line x1="{sx:.1f}" y1="{sy:.1f}" x2="{ex:.1f}" y2="{ey:.1f}" '
                   f'stroke="#555" marker-end="url(#arrow)"/>')
    for _, nodes in spec.rows:
        for n in nodes:
            x, y = pos[n]
            out.append(f'<g><title>{escape(spec.tooltip[n])}</title>'
                       f'<circle cx="{x}" cy="{y}" r="{spec.radius[n]:.2f}" '
                       f'fill="#fff" stroke="#000"/>'
                       f'<text x="{x}" y="{y + 4}" font-size="11" text-anchor="middle" '
                       f'font-family="sans-serif">{n}</text></g>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# main path analysis (search path count)


def knowledge_flow_dag(c: Collection, g: CitationGraph) -> Set[Tuple[int, int]]:
    """Edges cited -> citing, keeping only strictly older cited papers."""
    return {(v, u) for u, v in g.edges if c.node(u).pub_year > c.node(v).pub_year}


def _topo_order(nodes, succ):
    indeg = {n: 0 for n in nodes}
    for u in nodes:
        for v in succ[u]:
            indeg[v] += 1
    ready = sorted(n for n, d in indeg.items() if d == 0)
    order = []
    while ready:
        u = ready.pop(0)
        order.append(u)
        for v in sorted(succ[u]):
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
        ready.sort()
    if len(order) != len(nodes):
        raise ValueError("graph has a cycle")
    return order


def spc_weights(flow_edges) -> Dict[Tuple[int, int], int]:
    """Search path count of every edge of a DAG.

    The weight of u -> v is the number of source-to-sink paths through it:
    (paths from any source into u) * (paths from v out to any sink).
    """
    succ, pred = defaultdict(set), defaultdict(set)
    nodes = set()
    for u, v in flow_edges:
        succ[u].add(v)
        pred[v].add(u)
        nodes.update((u, v))
    order = _topo_order(nodes, succ)
    n_in, n_out = {}, {}
    for n in order:
        n_in[n] = sum(n_in[p] for p in pred[n]) if pred[n] else 1
    for n in reversed(order):
        n_out[n] = sum(n_out[s] for s in succ[n]) if succ[n] else 1
    return {(u, v): n_in[u] * n_out[v] for u, v in flow_edges}


def main_path(flow_edges, weights=None) -> List[int]:
    """Source-to-sink path of maximal total SPC weight.

    ``flow_edges`` are knowledge-flow edges (cited -> citing) of a DAG. Among
    equally heavy paths the one with the lexicographically smallest node
    sequence wins. The result lists nodes oldest first.
    """
    flow_edges = set(flow_edges)
    if not flow_edges:
        return []
    if weights is None:
        weights = spc_weights(flow_edges)
    succ, pred = defaultdict(set), defaultdict(set)
    nodes = set()
    for u, v in flow_edges:
        succ[u].add(v)
        pred[v].add(u)
        nodes.update((u, v))
    order = _topo_order(nodes, succ)
    best = {}
    for n in reversed(order):
        best[n] = max((weights[(n, s)] + best[s] for s in succ[n]), default=0)
    sources = [n for n in nodes if not pred[n]]
    top = max(best[s] for s in sources)
    cur = min(s for s in sources if best[s] == top)
    path = [cur]
    while succ[cur]:
        cur = min(s for s in succ[cur] if weights[(cur, s)] + best[s] == best[cur])
        path.append(cur)
    return path


def local_main_path(flow_edges, weights=None) -> List[int]:
    """Greedy variant: from the heaviest source edge, always follow the heaviest
    outgoing edge. Not guaranteed to reach the global optimum."""
    flow_edges = set(flow_edges)
    if not flow_edges:
        return []
    if weights is None:
        weights = spc_weights(flow_edges)
    succ, pred = defaultdict(set), defaultdict(set)
    for u, v in flow_edges:
        succ[u].add(v)
        pred[v].add(u)
    starts = [(u, v) for u, v in flow_edges if not pred[u]]
    u, v = min(starts, key=lambda e: (-weights[e], e))
    path = [u, v]
    while succ[v]:
        v = min(succ[v], key=lambda s: (-weights[(path[-1], s)], s))
        path.append(v)
    return path


def collection_main_path(c: Collection, g: CitationGraph) -> List[int]:
    return main_path(knowledge_flow_dag(c, g))
