from hiddenflows.catalog.catalog import (
    TAINT_ANY,
    Catalog,
    CatalogEntry,
    CatalogError,
    DataClass,
    EndpointKind,
    MatchPattern,
    SinkCategory,
    SourceKind,
    load_catalog,
    parse_catalog,
)
from hiddenflows.catalog.matching import (
    CallContext,
    CatchContext,
    Chain,
    NameContext,
    ReadContext,
    SinkMatch,
    SourceMatch,
    chain_matches,
    match_sink,
    match_source,
    match_sources,
)

__all__ = [
    "TAINT_ANY",
    "Catalog",
    "CatalogEntry",
    "CatalogError",
    "DataClass",
    "EndpointKind",
    "MatchPattern",
    "SinkCategory",
    "SourceKind",
    "load_catalog",
    "parse_catalog",
    "CallContext",
    "CatchContext",
    "Chain",
    "NameContext",
    "ReadContext",
    "SinkMatch",
    "SourceMatch",
    "chain_matches",
    "match_sink",
    "match_source",
    "match_sources",
]
