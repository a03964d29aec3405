"""
Command line entry point::

    histograph ingest savedrecs.txt --out alert92.collection
    histograph matrix alert92.collection
    histograph graph alert92.collection --threshold 55 --scope global --format dot
    histograph sample brookes muscle2002.collection --actual merged.collection

Exit status: 0 on success, 1 on usage errors, 2 on data errors.
"""

import argparse
import datetime as dt
import json
import os
import sys
from dataclasses import asdict, dataclass
from typing import List, Optional

from . import report
from .errors import HistographError, ParseWarning
from .historiograph import (GLOBAL, LOCAL, collection_main_path, emit_dot, emit_svg,
                            layout_yearly, select_subgraph)
from .indicators import author_table, classify_authors, node_indicators, source_table
from .ingest import (Collection, dumps_collection, loads_collection, merge_collections,
                     parse_export)
from .linker import (find_missing_links, format_ref_key, link_citations, outer_references,
                     reference_levels)
from .sampling import (augment_8020, augment_collection, brookes_estimate, citation_ages,
                       journal_frequency, prediction_error, weibull_fit)

FORMATS = ("tsv", "structured", "dot", "svg", "html")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    inputs: List[str]
    out: Optional[str] = None
    ref_year: Optional[int] = None
    cutoff_b: Optional[int] = None
    cutoff_e: Optional[int] = None
    threshold: int = 0
    scope: str = GLOBAL
    format: str = "tsv"
    page_tolerance: int = 5
    top: Optional[int] = None

    def validate(self):
        if self.threshold < 0:
            raise UsageError("--threshold must be >= 0")
        if self.cutoff_b is not None and self.cutoff_e is not None \
                and self.cutoff_b > self.cutoff_e:
            raise UsageError("--b must not exceed --e")
        if self.page_tolerance < 0:
            raise UsageError("--page-tolerance must be >= 0")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _diag(msg: str):
    color = sys.stderr.isatty() and not os.environ.get("HISTOGRAPH_NO_COLOR")
    prefix = "\033[31merror:\033[0m" if color else "error:"
    print(f"{prefix} {msg}", file=sys.stderr)


def _read_input(path: str) -> Collection:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise HistographError(f"cannot read {path}: {exc.strerror}") from None
    if text.lstrip().startswith("{"):
        return loads_collection(text)
    return parse_export(text, query_label=os.path.basename(path))


def _load(cfg: RunConfig) -> Collection:
    if not cfg.inputs:
        raise UsageError("no input files")
    coll = None
    for p in cfg.inputs:
        c = _read_input(p)
        coll = c if coll is None else merge_collections(coll, c)
    return coll


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _check_format(cfg, allowed):
    if cfg.format not in allowed:
        raise UsageError(f"--format {cfg.format} not supported here (use {', '.join(allowed)})")


def _analyse(cfg):
    c = _load(cfg)
    g = link_citations(c)
    metrics = node_indicators(c, g, cfg.ref_year, cfg.cutoff_b, cfg.cutoff_e) if c.records else []
    return c, g, metrics


# --- commands -----------------------------------------------------------------

def cmd_ingest(cfg, args):
    if not cfg.inputs:
        raise UsageError("ingest needs at least one export file")
    label = args.label or " + ".join(os.path.basename(p) for p in cfg.inputs)
    coll = None
    for p in cfg.inputs:
        try:
            with open(p, encoding="utf-8") as fh:
                c = parse_export(fh.read())
        except OSError as exc:
            raise HistographError(f"cannot read {p}: {exc.strerror}") from None
        coll = c if coll is None else merge_collections(coll, c)
    date = dt.date.fromisoformat(args.date) if args.date else None
    coll = Collection(coll.records, date, label)
    _emit(cfg, dumps_collection(coll))


def cmd_merge(cfg, args):
    _emit(cfg, dumps_collection(_load(cfg)))


def cmd_matrix(cfg, args):
    _check_format(cfg, ("tsv", "structured"))
    c = _load(cfg)
    g = link_citations(c)
    if cfg.format == "tsv":
        _emit(cfg, report.matrix_tsv(c, g))
    else:
        title, rows = report.matrix_rows(c, g)
        _emit(cfg, report.structured("matrix", {
            "header": title, "columns": report.MATRIX_COLUMNS, "rows": rows}))


def cmd_authors(cfg, args):
    _check_format(cfg, ("tsv", "structured"))
    c, g, m = _analyse(cfg)
    header, rows = author_table(c, m, args.sort)
    if cfg.format == "tsv":
        _emit(cfg, report.authors_tsv(header, rows, cfg.top))
    else:
        _emit(cfg, report.structured("authors", {
            "header": header.render(), "rows": [asdict(r) for r in rows[:cfg.top]]}))


def cmd_sources(cfg, args):
    _check_format(cfg, ("tsv", "structured"))
    c, g, m = _analyse(cfg)
    header, rows = source_table(c, m, args.sort)
    if cfg.format == "tsv":
        _emit(cfg, report.sources_tsv(header, rows, cfg.top))
    else:
        _emit(cfg, report.structured("sources", {
            "header": header.render(), "rows": [asdict(r) for r in rows[:cfg.top]]}))


def cmd_graph(cfg, args):
    _check_format(cfg, ("dot", "svg", "structured", "tsv"))
    c, g, m = _analyse(cfg)
    sel = select_subgraph(g, m, cfg.threshold, cfg.scope)
    spec = layout_yearly(sel, c, g, cfg.threshold, cfg.scope)
    if cfg.format == "dot":
        _emit(cfg, emit_dot(spec))
    elif cfg.format == "svg":
        _emit(cfg, emit_svg(spec))
    else:
        payload = {
            "threshold": cfg.threshold, "scope": cfg.scope,
            "nodes": sorted(spec.selected), "links": [list(l) for l in spec.links],
            "rows": [[y, list(ns)] for y, ns in spec.rows],
            "main_path": collection_main_path(c, g) if c.records else [],
        }
        if cfg.format == "structured":
            _emit(cfg, report.structured("graph", payload))
        else:
            lines = [f"{cfg.threshold} Citation threshold ({cfg.scope}); "
                     f"{len(spec.selected)} Nodes; {len(spec.links)} Links\n"]
            lines += [f"{u}\t{v}\n" for u, v in spec.links]
            _emit(cfg, "".join(lines))


def cmd_missing(cfg, args):
    _check_format(cfg, ("tsv", "structured"))
    c = _load(cfg)
    g = link_citations(c)
    links = find_missing_links(c, g, cfg.page_tolerance)
    if cfg.format == "tsv":
        _emit(cfg, report.missing_tsv(c, links))
    else:
        _emit(cfg, report.structured("missing-links", {
            "columns": report.MISSING_COLUMNS, "rows": report.missing_rows(c, links)}))


def cmd_outer(cfg, args):
    _check_format(cfg, ("tsv", "structured"))
    c = _load(cfg)
    g = link_citations(c)
    outer = outer_references(g)
    if cfg.format == "tsv":
        _emit(cfg, report.outer_tsv(g, outer, cfg.top))
    else:
        _emit(cfg, report.structured("outer-references", {
            "total": len(g.outer_pool), "rows": report.outer_rows(outer, cfg.top)}))


def cmd_levels(cfg, args):
    _check_format(cfg, ("tsv", "structured"))
    c = _load(cfg)
    g = link_citations(c)
    try:
        levels = reference_levels(g, args.node, args.depth)
    except ValueError as exc:
        raise HistographError(str(exc)) from None
    if cfg.format == "tsv":
        _emit(cfg, "level\tnodes\n" + "".join(
            f"{i}\t{' '.join(map(str, sorted(l)))}\n" for i, l in enumerate(levels)))
    else:
        _emit(cfg, report.structured("levels", {
            "node": args.node, "levels": [sorted(l) for l in levels]}))


def cmd_demography(cfg, args):
    _check_format(cfg, ("tsv", "structured"))
    c, g, m = _analyse(cfg)
    header, rows = author_table(c, m, "tlcs")
    classes = classify_authors(c, rows)
    years = {}
    for rec in c.records:
        for a in rec.authors:
            years.setdefault(a, set()).add(rec.pub_year)
    table = [[r.name, classes[r.name], " ".join(map(str, sorted(years[r.name]))), r.TLCS]
             for r in rows]
    if cfg.format == "tsv":
        _emit(cfg, "Name\tClass\tYears\tTLCS\n" + "".join(
            "\t".join(map(str, row)) + "\n" for row in table))
    else:
        _emit(cfg, report.structured("demography", {"rows": table}))


def cmd_sample(cfg, args):
    _check_format(cfg, ("tsv", "structured"))
    c = _load(cfg)
    d = journal_frequency(c)
    if args.action == "freq":
        payload = {"counts": {str(r): f for r, f in d.counts.items()},
                   "total_journals": d.total_journals, "total_papers": d.total_papers}
        text = "r\tf_r\n" + "".join(f"{r}\t{f}\n" for r, f in d.counts.items())
        text += f"Total journals\t{d.total_journals}\nTotal papers\t{d.total_papers}\n"
    elif args.action == "brookes":
        m = brookes_estimate(d)
        payload = {"journals": d.total_journals, "M": m, "prediction": d.total_journals + m}
        if args.actual:
            actual = len(_read_input(args.actual).sources)
            payload["actual"] = actual
            payload["error"] = prediction_error(d.total_journals + m, actual)
        text = "".join(f"{k}\t{v:.4f}\n" if isinstance(v, float) else f"{k}\t{v}\n"
                       for k, v in payload.items())
    else:
        if args.year is None:
            raise UsageError("sample augment needs --year")
        g = link_citations(c)
        selected = augment_8020(outer_references(g), args.year)
        payload = {"year": args.year, "selected": [[format_ref_key(k), n] for k, n in selected]}
        text = "#\tLCS\tReference\n" + "".join(
            f"{i}\t{n}\t{format_ref_key(k)}\n" for i, (k, n) in enumerate(selected, start=1))
        if args.collection_out:
            with open(args.collection_out, "w", encoding="utf-8") as fh:
                fh.write(dumps_collection(augment_collection(c, selected)))
    _emit(cfg, text if cfg.format == "tsv" else report.structured("sample", payload))


def cmd_weibull(cfg, args):
    _check_format(cfg, ("tsv", "structured"))
    c = _load(cfg)
    g = link_citations(c)
    fit = weibull_fit(citation_ages(c, g, args.window_end))
    payload = asdict(fit)
    if cfg.format == "tsv":
        _emit(cfg, "".join(f"{k}\t{v}\n" for k, v in payload.items()))
    else:
        _emit(cfg, report.structured("weibull", payload))


def cmd_report(cfg, args):
    c, g, m = _analyse(cfg)
    _emit(cfg, report.emit_report(c, g, m, threshold=cfg.threshold, scope=cfg.scope,
                                  top=cfg.top or 30, page_tolerance=cfg.page_tolerance))


# --- parser ----------------------------------------------------------------------

def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write here instead of standard output")
    common.add_argument("--ref-year", type=int)
    common.add_argument("--b", type=int, dest="cutoff_b", help="LCS_b cutoff year")
    common.add_argument("--e", type=int, dest="cutoff_e", help="LCS_e cutoff year")
    common.add_argument("--threshold", type=int, default=0)
    common.add_argument("--scope", choices=(LOCAL, GLOBAL), default=GLOBAL)
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--top", type=int)
    common.add_argument("--page-tolerance", type=int, default=5)

    p = _Parser(prog="histograph", description="Citation historiography toolkit")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def command(name, func, help=None, **defaults):
        s = sub.add_parser(name, parents=[common], help=help)
        s.set_defaults(func=func, **defaults)
        return s

    s = command("ingest", cmd_ingest, "parse tagged export files")
    s.add_argument("--label")
    s.add_argument("--date", help="download date, YYYY-MM-DD")
    command("merge", cmd_merge, "Add Set")
    command("matrix", cmd_matrix)
    command("authors", cmd_authors).add_argument("--sort", default="tlcs_t")
    command("sources", cmd_sources).add_argument("--sort", default="pubs")
    command("graph", cmd_graph, default_format="dot")
    command("missing", cmd_missing)
    command("outer", cmd_outer)
    s = command("levels", cmd_levels)
    s.add_argument("--node", type=int, required=True)
    s.add_argument("--depth", type=int, default=0)
    command("demography", cmd_demography)
    s = command("sample", cmd_sample)
    s.add_argument("action", choices=("freq", "brookes", "augment"))
    s.add_argument("--actual", help="collection whose journal count is the observed total")
    s.add_argument("--year", type=int, help="target year for augment")
    s.add_argument("--collection-out", help="write the augmented collection here")
    command("weibull", cmd_weibull).add_argument("--window-end", type=int)
    command("report", cmd_report, default_format="html")

    # positional inputs go last so subcommand positionals (sample's action) parse first
    for s in sub.choices.values():
        s.add_argument("inputs", nargs="*", help="collection or export files")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("missing subcommand")
        fmt = args.format or getattr(args, "default_format", "tsv")
        cfg = RunConfig(inputs=args.inputs, out=args.out, ref_year=args.ref_year,
                        cutoff_b=args.cutoff_b, cutoff_e=args.cutoff_e,
                        threshold=args.threshold, scope=args.scope, format=fmt,
                        page_tolerance=args.page_tolerance, top=args.top)
        cfg.validate()
        args.func(cfg, args)
    except UsageError as exc:
        _diag(str(exc))
        parser.print_usage(sys.stderr)
        return 1
    except (HistographError, ValueError) as exc:
        _diag(str(exc))
        return 2
    return 0


def main():
    import warnings
    warnings.simplefilter("default", ParseWarning)
    sys.exit(run())


if __name__ == "__main__":
    main()
