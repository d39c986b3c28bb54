"""Query construction: the five-strategy ladder over scanned mentions."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

from .textprep import Dictionary, tokenize


class Strategy(Enum):
    """Query construction strategies, weakest to strongest."""

    BASELINE = "baseline"
    WILDCARD = "wildcard"
    MASHED = "mashed"
    PHRASES = "phrases"
    FUZZY_PHRASES = "fuzzy-phrases"


STRATEGY_LADDER = (
    Strategy.BASELINE,
    Strategy.WILDCARD,
    Strategy.MASHED,
    Strategy.PHRASES,
    Strategy.FUZZY_PHRASES,
)


class EmptyPlanError(ValueError):
    """Raised when a mention tokenizes to nothing; callers record a miss."""


@dataclass(frozen=True)
class TermClause:
    """Exact term lookup, BM25-scored against one field."""

    term: str
    field: str = "label"


@dataclass(frozen=True)
class WildcardClause:
    """Anchored subsequence pattern; contributes 1.0 per matching document.

    The pattern is a bare token; each letter is implicitly followed by a
    wildcard, so "kro" stands for k*r*o*.
    """

    pattern: str
    fields: tuple[str, ...] = ("label",)


@dataclass(frozen=True)
class FuzzyClause:
    """Bounded edit-distance term match; contributes 1.0 per matching doc."""

    term: str
    max_edits: int = 2
    field: str = "label"


Clause = Union[TermClause, WildcardClause, FuzzyClause]


@dataclass(frozen=True)
class QueryPlan:
    """Clauses built from one mention; document score is the sum over them."""

    mention: str
    clauses: tuple[Clause, ...]


# Which index fields the wildcard clauses of each strategy reach. The phrase
# field replaces the mashed field instead of stacking on it.
_WILDCARD_FIELDS: dict[Strategy, tuple[str, ...]] = {
    Strategy.WILDCARD: ("label",),
    Strategy.MASHED: ("label", "mashed"),
    Strategy.PHRASES: ("label", "phrases"),
    Strategy.FUZZY_PHRASES: ("label", "phrases"),
}


def build_plan(
    mention: str,
    strategy: Strategy,
    dictionary: Dictionary,
    *,
    max_edits: int = 2,
) -> QueryPlan:
    """Turn a mention into a query plan under the given strategy.

    Tokens found in the label dictionary always become term clauses. Under
    BASELINE every token does, even out-of-dictionary ones. The stronger
    strategies turn each out-of-dictionary token into a wildcard clause over
    progressively richer fields, and FUZZY_PHRASES adds a fuzzy clause per
    out-of-dictionary token on top.

    Raises EmptyPlanError when the mention tokenizes to zero tokens.
    """
    tokens = tokenize(mention)
    if not tokens:
        raise EmptyPlanError(f"mention {mention!r} contains no indexable tokens")
    clauses: list[Clause] = []
    for token in tokens:
        if strategy is Strategy.BASELINE or token in dictionary:
            clauses.append(TermClause(token))
            continue
        clauses.append(WildcardClause(token, _WILDCARD_FIELDS[strategy]))
        if strategy is Strategy.FUZZY_PHRASES:
            clauses.append(FuzzyClause(token, max_edits))
    return QueryPlan(mention=mention, clauses=tuple(clauses))


def render_plan(plan: QueryPlan) -> str:
    """Human-readable form: terms lowercase, K*R*O* wildcards, TERM~ fuzzy."""
    parts: list[str] = []
    for clause in plan.clauses:
        if isinstance(clause, TermClause):
            parts.append(clause.term)
        elif isinstance(clause, WildcardClause):
            parts.append("".join(f"{ch.upper()}*" for ch in clause.pattern))
        else:
            parts.append(f"{clause.term.upper()}~")
    return " ".join(parts)
