"""In-memory inverted index over catalog entities.

Each entity document carries three term fields: its label tokens, the suffix
concatenations of those tokens, and collocation phrases. Term clauses are
BM25-scored per field; wildcard and fuzzy clauses contribute a constant 1.0
per matching document. An index is read-only once built and safe to share
across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

from .query import FuzzyClause, QueryPlan, TermClause, WildcardClause

FIELDS = ("label", "mashed", "phrases")

_SNAPSHOT_VERSION = 1


@dataclass(frozen=True)
class ScoringParams:
    """BM25 parameters: k1 saturates term frequency, b scales length norm."""

    k1: float = 1.2
    b: float = 0.75

    def __post_init__(self) -> None:
        if self.k1 < 0:
            raise ValueError(f"k1 must be non-negative, got {self.k1}")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError(f"b must lie in [0, 1], got {self.b}")


@dataclass(frozen=True)
class EntityDocument:
    """One catalog entity as indexed: id plus the three term fields."""

    doc_id: int
    entity_id: str
    label_tokens: tuple[str, ...]
    mashed_terms: tuple[str, ...] = ()
    phrase_terms: tuple[str, ...] = ()

    def field_terms(self, field: str) -> tuple[str, ...]:
        if field == "label":
            return self.label_tokens
        if field == "mashed":
            return self.mashed_terms
        if field == "phrases":
            return self.phrase_terms
        raise KeyError(field)


@dataclass(frozen=True)
class PostingList:
    """Occurrences of one term in one field: (doc_id, term frequency) pairs."""

    field: str
    term: str
    entries: tuple[tuple[int, int], ...]

    @property
    def doc_frequency(self) -> int:
        return len(self.entries)


def wildcard_match(pattern: str, term: str) -> bool:
    """Anchored subsequence test: k*r*o* style patterns.

    The first pattern letter must be the first letter of the term; each later
    pattern letter must appear after the previously matched position. The
    trailing wildcard means the term may continue arbitrarily.
    """
    if not pattern:
        raise ValueError("pattern must not be empty")
    if not term or term[0] != pattern[0]:
        return False
    pos = 1
    for ch in pattern[1:]:
        pos = term.find(ch, pos) + 1
        if pos == 0:
            return False
    return True


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance with unit-cost insert, delete, substitute."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        current = [i]
        for j, cb in enumerate(b, 1):
            current.append(
                min(
                    previous[j] + 1,
                    current[j - 1] + 1,
                    previous[j - 1] + (ca != cb),
                )
            )
        previous = current
    return previous[-1]


class Index:
    """Built via build_index or load; treat as immutable afterwards."""

    def __init__(
        self,
        *,
        params: ScoringParams,
        entity_ids: tuple[str, ...],
        field_lengths: dict[str, tuple[int, ...]],
        postings: dict[str, dict[str, dict[int, int]]],
    ) -> None:
        self.params = params
        self.entity_ids = entity_ids
        self.doc_count = len(entity_ids)
        self._field_lengths = field_lengths
        self._postings = postings
        self._avgdl = {
            field: sum(field_lengths[field]) / self.doc_count for field in FIELDS
        }
        # First-letter buckets keep wildcard evaluation off the full term list;
        # sorted order makes scans deterministic.
        self._sorted_terms: dict[str, tuple[str, ...]] = {}
        self._first_letter: dict[str, dict[str, tuple[str, ...]]] = {}
        for field in FIELDS:
            terms = tuple(sorted(postings[field]))
            self._sorted_terms[field] = terms
            buckets: dict[str, list[str]] = {}
            for term in terms:
                buckets.setdefault(term[0], []).append(term)
            self._first_letter[field] = {
                letter: tuple(bucket) for letter, bucket in buckets.items()
            }

    # ------------------------------------------------------------------
    # statistics

    def avg_field_length(self, field: str) -> float:
        return self._avgdl[field]

    def field_length(self, field: str, doc_id: int) -> int:
        return self._field_lengths[field][doc_id]

    def terms(self, field: str) -> Iterator[str]:
        return iter(self._sorted_terms[field])

    def postings(self, field: str, term: str) -> PostingList | None:
        by_doc = self._postings[field].get(term)
        if by_doc is None:
            return None
        return PostingList(field=field, term=term, entries=tuple(by_doc.items()))

    def doc_frequency(self, field: str, term: str) -> int:
        by_doc = self._postings[field].get(term)
        return 0 if by_doc is None else len(by_doc)

    def term_frequency(self, field: str, term: str, doc_id: int) -> int:
        by_doc = self._postings[field].get(term)
        return 0 if by_doc is None else by_doc.get(doc_id, 0)

    # ------------------------------------------------------------------
    # scoring

    def idf(self, field: str, term: str) -> float:
        n = self.doc_frequency(field, term)
        return math.log(1.0 + (self.doc_count - n + 0.5) / (n + 0.5))

    def bm25_term_score(self, field: str, term: str, doc_id: int) -> float:
        """One term's BM25 contribution to one document; 0.0 when absent."""
        tf = self.term_frequency(field, term, doc_id)
        if tf == 0:
            return 0.0
        k1 = self.params.k1
        b = self.params.b
        length_ratio = self.field_length(field, doc_id) / self.avg_field_length(field)
        saturation = tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * length_ratio))
        return self.idf(field, term) * saturation

    def wildcard_terms(self, field: str, pattern: str) -> list[str]:
        """Indexed terms of the field matching an anchored pattern, sorted."""
        bucket = self._first_letter[field].get(pattern[0], ())
        return [term for term in bucket if wildcard_match(pattern, term)]

    def fuzzy_terms(self, field: str, term: str, max_edits: int) -> list[str]:
        """Indexed terms within max_edits of the term, sorted."""
        matches = []
        for candidate in self._sorted_terms[field]:
            if abs(len(candidate) - len(term)) > max_edits:
                continue
            if edit_distance(term, candidate) <= max_edits:
                matches.append(candidate)
        return matches

    # ------------------------------------------------------------------
    # search

    def search(self, plan: QueryPlan, k: int) -> list[tuple[str, float]]:
        """Score the plan against every document, return the top k.

        Per document, clause contributions accumulate in clause order. Only
        documents with positive score are returned, ranked by score
        descending with doc id ascending as the tiebreak, so results are
        deterministic across runs and thread counts.
        """
        if k < 1:
            raise ValueError(f"k must be at least 1, got {k}")
        scores: dict[int, float] = {}
        for clause in plan.clauses:
            if isinstance(clause, TermClause):
                posting = self.postings(clause.field, clause.term)
                if posting is None:
                    continue
                for doc_id, _ in posting.entries:
                    contribution = self.bm25_term_score(clause.field, clause.term, doc_id)
                    scores[doc_id] = scores.get(doc_id, 0.0) + contribution
            elif isinstance(clause, WildcardClause):
                for doc_id in self._wildcard_docs(clause):
                    scores[doc_id] = scores.get(doc_id, 0.0) + 1.0
            elif isinstance(clause, FuzzyClause):
                for doc_id in self._fuzzy_docs(clause):
                    scores[doc_id] = scores.get(doc_id, 0.0) + 1.0
            else:
                raise TypeError(f"unsupported clause type: {type(clause).__name__}")
        ranked = sorted(
            (item for item in scores.items() if item[1] > 0.0),
            key=lambda item: (-item[1], item[0]),
        )
        return [(self.entity_ids[doc_id], score) for doc_id, score in ranked[:k]]

    def _wildcard_docs(self, clause: WildcardClause) -> list[int]:
        docs: set[int] = set()
        for field in clause.fields:
            for term in self.wildcard_terms(field, clause.pattern):
                docs.update(self._postings[field][term])
        return sorted(docs)

    def _fuzzy_docs(self, clause: FuzzyClause) -> list[int]:
        docs: set[int] = set()
        for term in self.fuzzy_terms(clause.field, clause.term, clause.max_edits):
            docs.update(self._postings[clause.field][term])
        return sorted(docs)

    # ------------------------------------------------------------------
    # snapshots

    def save(self, path: str | Path) -> None:
        """Write a JSON snapshot that load() restores exactly."""
        payload = {
            "version": _SNAPSHOT_VERSION,
            "params": {"k1": self.params.k1, "b": self.params.b},
            "entity_ids": list(self.entity_ids),
            "fields": {
                field: {
                    "lengths": list(self._field_lengths[field]),
                    "postings": {
                        term: [[doc_id, tf] for doc_id, tf in by_doc.items()]
                        for term, by_doc in self._postings[field].items()
                    },
                }
                for field in FIELDS
            },
        }
        Path(path).write_text(json.dumps(payload), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> Index:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        if payload.get("version") != _SNAPSHOT_VERSION:
            raise ValueError(f"unsupported snapshot version: {payload.get('version')!r}")
        return cls(
            params=ScoringParams(**payload["params"]),
            entity_ids=tuple(payload["entity_ids"]),
            field_lengths={
                field: tuple(payload["fields"][field]["lengths"]) for field in FIELDS
            },
            postings={
                field: {
                    term: {doc_id: tf for doc_id, tf in entries}
                    for term, entries in payload["fields"][field]["postings"].items()
                }
                for field in FIELDS
            },
        )


def build_index(
    docs: Sequence[EntityDocument],
    params: ScoringParams = ScoringParams(),
) -> Index:
    """Build an index over entity documents.

    Doc ids must be exactly 0..len(docs)-1 in order and every document needs
    at least one label token; violations raise ValueError.
    """
    if not docs:
        raise ValueError("cannot build an index over zero documents")
    postings: dict[str, dict[str, dict[int, int]]] = {field: {} for field in FIELDS}
    field_lengths: dict[str, list[int]] = {field: [] for field in FIELDS}
    entity_ids: list[str] = []
    for expected_id, doc in enumerate(docs):
        if doc.doc_id != expected_id:
            raise ValueError(
                f"doc ids must be contiguous from 0: position {expected_id} "
                f"holds doc id {doc.doc_id}"
            )
        if not doc.label_tokens:
            raise ValueError(f"document {doc.doc_id} ({doc.entity_id!r}) has no label tokens")
        entity_ids.append(doc.entity_id)
        for field in FIELDS:
            terms = doc.field_terms(field)
            field_lengths[field].append(len(terms))
            for term in terms:
                by_doc = postings[field].setdefault(term, {})
                by_doc[doc.doc_id] = by_doc.get(doc.doc_id, 0) + 1
    return Index(
        params=params,
        entity_ids=tuple(entity_ids),
        field_lengths={field: tuple(lengths) for field, lengths in field_lengths.items()},
        postings=postings,
    )
