"""
Field-tagged export parsing and collection management.

An export file is a sequence of records in the classic ISI layout::

    PT J
    AU Pallares, R
       Linares, J
    SO NEW ENGLAND JOURNAL OF MEDICINE
    PY 1987
    CR PEREZ JL, 1987, ANTIMICROB AGENTS CH, V31, P1
    ER

Tags live in columns 1-2, values start at column 4 and continuation lines
are indented by three spaces. ``ER`` closes a record and ``EF`` the file.
"""

import dataclasses
import datetime as dt
import json
import re
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

from .errors import ParseError, ParseWarning, SchemaError

FORMAT_NAME = "histograph-collection"
FORMAT_VERSION = 1

MIN_YEAR, MAX_YEAR = 1500, 2100

# tags whose continuation lines are separate entries rather than wrapped text
MULTI_TAGS = {"AU", "CR"}
KNOWN_TAGS = {"PT", "AU", "TI", "SO", "PY", "VL", "IS", "BP", "EP", "SC",
              "TC", "UT", "CR", "ER", "EF"}

_TAG_RE = re.compile(r"^([A-Z][A-Z0-9])(?: (.*))?$")
_NUM_RE = re.compile(r"^(\d+)(.*)$")


def normalize_author(name: str) -> str:
    """'Pallares, R.' -> 'PALLARES R', 'Perez, J. L.' -> 'PEREZ JL'"""
    surname, comma, given = name.upper().partition(",")
    if not comma:
        return " ".join(name.upper().replace(".", "").split())
    tokens = given.replace(".", " ").replace(",", " ").split()
    if all(len(t) <= 2 for t in tokens):
        given = "".join(tokens)
    else:
        given = " ".join(tokens)
    return " ".join((surname.replace(".", "") + " " + given).split())


@dataclass(frozen=True)
class SourceRecord:
    pub_year: int
    source: str
    authors: Tuple[str, ...] = ()
    title: str = ""
    accession: Optional[str] = None
    volume: Optional[str] = None
    issue: Optional[str] = None
    begin_page: Optional[str] = None
    end_page: Optional[str] = None
    subject_categories: Tuple[str, ...] = ()
    global_citations: int = 0
    cited_refs: Tuple[str, ...] = ()
    node_id: int = 0

    def __post_init__(self):
        if not MIN_YEAR <= self.pub_year <= MAX_YEAR:
            raise ValueError(f"pub_year {self.pub_year} outside [{MIN_YEAR}, {MAX_YEAR}]")
        if self.global_citations < 0:
            raise ValueError("global_citations must be >= 0")

    @property
    def first_author(self) -> str:
        return self.authors[0] if self.authors else ""

    @property
    def label(self) -> str:
        """Node label used in matrices: 'id year FIRST-AUTHOR'."""
        return f"{self.node_id} {self.pub_year} {self.first_author}".rstrip()

    @property
    def citation(self) -> str:
        """'1982 MANAGEMENT SCIENCE 28(3):276-288'"""
        out = f"{self.pub_year} {self.source}"
        if self.volume:
            out += f" {self.volume}"
            if self.issue:
                out += f"({self.issue})"
        if self.begin_page:
            out += f":{self.begin_page}"
            if self.end_page:
                out += f"-{self.end_page}"
        return out


def _natural(value: Optional[str]):
    if value is None:
        return (0, 0, "")
    m = _NUM_RE.match(value)
    if m:
        return (1, int(m.group(1)), m.group(2))
    return (2, 0, value)


def sort_key(r: SourceRecord):
    return (r.pub_year, r.source, _natural(r.volume), _natural(r.issue),
            _natural(r.begin_page), r.accession or "", r.first_author)


def record_key(r: SourceRecord):
    """Deduplication key: accession when known, bibliographic tuple otherwise."""
    if r.accession:
        return r.accession
    return (r.first_author, r.pub_year, r.source, r.volume, r.begin_page)


@dataclass(frozen=True)
class Collection:
    records: Tuple[SourceRecord, ...] = ()
    download_date: Optional[dt.date] = None
    query_label: str = ""

    @classmethod
    def build(cls, records: Iterable[SourceRecord], download_date=None,
              query_label: str = "") -> "Collection":
        """Deduplicate, sort canonically and number records 1..N.

        On a key collision the record with more global citations is kept;
        on a tie the one seen last wins.
        """
        kept = {}
        for r in records:
            k = record_key(r)
            old = kept.get(k)
            if old is None or r.global_citations >= old.global_citations:
                kept[k] = r
        ordered = sorted(kept.values(), key=sort_key)
        numbered = tuple(dataclasses.replace(r, node_id=i)
                         for i, r in enumerate(ordered, start=1))
        return cls(numbered, download_date, query_label)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def node(self, node_id: int) -> SourceRecord:
        if not 1 <= node_id <= len(self.records):
            raise KeyError(f"no node {node_id}")
        return self.records[node_id - 1]

    @property
    def year_span(self) -> Optional[Tuple[int, int]]:
        if not self.records:
            return None
        years = [r.pub_year for r in self.records]
        return min(years), max(years)

    @property
    def sources(self):
        return sorted({r.source for r in self.records})


def merge_collections(a: Collection, b: Collection) -> Collection:
    """Union of two collections ("Add Set")."""
    if a.query_label == b.query_label or not b.query_label:
        label = a.query_label
    elif not a.query_label:
        label = b.query_label
    else:
        label = f"{a.query_label} + {b.query_label}"
    dates = [d for d in (a.download_date, b.download_date) if d is not None]
    return Collection.build(list(a.records) + list(b.records),
                            max(dates) if dates else None, label)


# --------------------------------------------------------------------------
# tagged export parsing


def _close_record(fields, start_line):
    def one(tag):
        vals = fields.get(tag)
        return " ".join(vals) if vals else None

    py = one("PY")
    if py is None:
        warnings.warn(f"record starting at line {start_line} has no PY; skipped",
                      ParseWarning, stacklevel=3)
        return None
    try:
        year = int(py)
    except ValueError:
        raise ParseError(f"bad PY value {py!r}", start_line) from None
    if not MIN_YEAR <= year <= MAX_YEAR:
        raise ParseError(f"PY {year} out of range", start_line)

    tc = one("TC")
    try:
        gcs = int(tc) if tc else 0
    except ValueError:
        raise ParseError(f"bad TC value {tc!r}", start_line) from None
    if gcs < 0:
        raise ParseError("negative TC", start_line)

    sc = one("SC")
    cats = tuple(s.strip() for s in sc.split(";") if s.strip()) if sc else ()
    return SourceRecord(
        accession=one("UT"),
        authors=tuple(normalize_author(a) for a in fields.get("AU", ()) if a.strip()),
        title=one("TI") or "",
        source=(one("SO") or "").upper(),
        pub_year=year,
        volume=one("VL"),
        issue=one("IS"),
        begin_page=one("BP"),
        end_page=one("EP"),
        subject_categories=cats,
        global_citations=gcs,
        cited_refs=tuple(c for c in fields.get("CR", ()) if c),
    )


def parse_records(text: str):
    """Yield SourceRecords in file order. Records lacking PY are skipped."""
    text = text.lstrip("﻿")
    fields = None
    start = 0
    tag = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        if line.startswith("   "):
            if fields is None or tag is None:
                raise ParseError("continuation line outside a field", lineno)
            value = line[3:].strip()
            if tag in MULTI_TAGS:
                fields[tag].append(value)
            else:
                fields[tag][-1] = (fields[tag][-1] + " " + value).strip()
            continue
        m = _TAG_RE.match(line.rstrip())
        if not m:
            raise ParseError(f"malformed tag line {line!r}", lineno)
        tag, value = m.group(1), (m.group(2) or "").strip()
        if tag == "EF":
            if fields is not None:
                raise ParseError("EF inside an unterminated record", lineno)
            return
        if tag == "PT":
            if fields is not None:
                raise ParseError("PT before ER of the previous record", lineno)
            fields, start = {}, lineno
            fields.setdefault(tag, []).append(value)
            continue
        if tag == "ER":
            if fields is None:
                raise ParseError("ER without PT", lineno)
            rec = _close_record(fields, start)
            if rec is not None:
                yield rec
            fields, tag = None, None
            continue
        if fields is None:
            # file header (FN, VR) or stray metadata between records
            tag = None
            continue
        fields.setdefault(tag, []).append(value)
    if fields is not None:
        raise ParseError("record not terminated by ER", start)


def parse_export(text: str, query_label: str = "",
                 download_date: Optional[dt.date] = None) -> Collection:
    return Collection.build(parse_records(text), download_date, query_label)


def read_export(path, **kw) -> Collection:
    with open(path, encoding="utf-8") as fh:
        return parse_export(fh.read(), **kw)


def _emit_field(lines, tag, values):
    values = [v for v in values if v is not None and v != ""]
    if not values:
        return
    lines.append(f"{tag} {values[0]}")
    lines.extend(f"   {v}" for v in values[1:])


def to_export_text(records: Iterable[SourceRecord]) -> str:
    """Write records back out in the tagged layout parse_export reads."""
    lines = ["FN histograph export", "VR 1.0"]
    for r in records:
        lines.append("PT J")
        _emit_field(lines, "AU", r.authors)
        _emit_field(lines, "TI", [r.title])
        _emit_field(lines, "SO", [r.source])
        _emit_field(lines, "SC", ["; ".join(r.subject_categories)])
        _emit_field(lines, "CR", r.cited_refs)
        _emit_field(lines, "TC", [str(r.global_citations)])
        _emit_field(lines, "PY", [str(r.pub_year)])
        _emit_field(lines, "VL", [r.volume])
        _emit_field(lines, "IS", [r.issue])
        _emit_field(lines, "BP", [r.begin_page])
        _emit_field(lines, "EP", [r.end_page])
        _emit_field(lines, "UT", [r.accession])
        lines.append("ER")
        lines.append("")
    lines.append("EF")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# canonical collection document

_RECORD_FIELDS = [f.name for f in dataclasses.fields(SourceRecord)]


def _record_to_dict(r: SourceRecord) -> dict:
    d = {}
    for name in _RECORD_FIELDS:
        v = getattr(r, name)
        d[name] = list(v) if isinstance(v, tuple) else v
    return d


def dumps_collection(c: Collection) -> str:
    doc = {
        "format": FORMAT_NAME,
        "format_version": FORMAT_VERSION,
        "query_label": c.query_label,
        "download_date": c.download_date.isoformat() if c.download_date else None,
        "records": [_record_to_dict(r) for r in c.records],
    }
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def loads_collection(text: str) -> Collection:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not a JSON document: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise SchemaError("not a histograph collection document")
    if doc.get("format_version") != FORMAT_VERSION:
        raise SchemaError(f"unsupported format_version {doc.get('format_version')!r}")
    raw = doc.get("records")
    if not isinstance(raw, list):
        raise SchemaError("records must be a list")
    records = []
    for i, d in enumerate(raw, start=1):
        if not isinstance(d, dict) or set(d) != set(_RECORD_FIELDS):
            raise SchemaError(f"record {i}: wrong field set")
        kw = {k: tuple(v) if isinstance(v, list) else v for k, v in d.items()}
        try:
            records.append(SourceRecord(**kw))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"record {i}: {exc}") from None
    if [r.node_id for r in records] != list(range(1, len(records) + 1)):
        raise SchemaError("node ids must run 1..N")
    date = doc.get("download_date")
    try:
        date = dt.date.fromisoformat(date) if date else None
    except ValueError:
        raise SchemaError(f"bad download_date {date!r}") from None
    return Collection(tuple(records), date, doc.get("query_label") or "")


def load_collection(path) -> Collection:
    with open(path, encoding="utf-8") as fh:
        return loads_collection(fh.read())


def save_collection(c: Collection, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_collection(c))
