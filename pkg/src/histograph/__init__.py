"""Citation historiography toolkit: export parsing, local citation networks,
bibliometric indicators, year-by-year historiographs and journal sampling."""

from .errors import HistographError, InsufficientDataError, ParseError, SchemaError
from .ingest import (Collection, SourceRecord, dumps_collection, load_collection,
                     loads_collection, merge_collections, parse_export, record_key,
                     save_collection)
from .linker import (CitationGraph, CitedRef, find_missing_links, link_citations,
                     outer_references, parse_cited_ref, reference_levels)
from .indicators import (author_table, citation_matrix, classify_authors,
                         node_indicators, source_table)
from .historiograph import emit_dot, emit_svg, layout_yearly, main_path, select_subgraph
from .sampling import (augment_8020, brookes_estimate, journal_frequency, weibull_fit)

__version__ = "0.1.0"
