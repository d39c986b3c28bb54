"""Link shorthand receipt line items to catalog entities.

A small search engine purpose-built for scanned receipt text: an inverted
index over catalog entities with BM25 term scoring, plus a ladder of query
strategies (exact terms, anchored wildcards, cross-word suffix terms,
collocation phrases, fuzzy terms) that recover matches ordinary keyword
search misses.
"""

from importlib.resources import files

from .corpus import (
    Corpus,
    CorpusError,
    GoldLinkSet,
    LinkRecord,
    build_gold,
    normalize_mention,
    parse_records,
    serialize_records,
)
from .index import (
    FIELDS,
    EntityDocument,
    Index,
    PostingList,
    ScoringParams,
    build_index,
    edit_distance,
    wildcard_match,
)
from .linking import (
    Linker,
    LinkerConfig,
    Prediction,
    Report,
    StrategyResult,
    entity_catalog,
    evaluate,
    link_mention,
)
from .query import (
    STRATEGY_LADDER,
    EmptyPlanError,
    FuzzyClause,
    QueryPlan,
    Strategy,
    TermClause,
    WildcardClause,
    build_plan,
    render_plan,
)
from .textprep import (
    CollocationStats,
    Dictionary,
    build_dictionary,
    mash,
    mine_collocations,
    phrase_terms,
    pointwise_mutual_information,
    tokenize,
)

__version__ = "0.1.0"


def fixture_corpus() -> Corpus:
    """The bundled synthetic receipt corpus the CLI defaults to."""
    data = files(__name__).joinpath("data/fixture.json").read_bytes()
    return parse_records(data)


__all__ = [
    "FIELDS",
    "STRATEGY_LADDER",
    "CollocationStats",
    "Corpus",
    "CorpusError",
    "Dictionary",
    "EmptyPlanError",
    "EntityDocument",
    "FuzzyClause",
    "GoldLinkSet",
    "Index",
    "LinkRecord",
    "Linker",
    "LinkerConfig",
    "PostingList",
    "Prediction",
    "QueryPlan",
    "Report",
    "ScoringParams",
    "Strategy",
    "StrategyResult",
    "TermClause",
    "WildcardClause",
    "build_dictionary",
    "build_gold",
    "build_index",
    "build_plan",
    "edit_distance",
    "entity_catalog",
    "evaluate",
    "fixture_corpus",
    "link_mention",
    "mash",
    "mine_collocations",
    "normalize_mention",
    "parse_records",
    "phrase_terms",
    "pointwise_mutual_information",
    "render_plan",
    "serialize_records",
    "tokenize",
    "wildcard_match",
]
