"""End-to-end linking: corpus in, per-strategy accuracy report out."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Corpus, GoldLinkSet, build_gold, normalize_mention
from .index import EntityDocument, Index, ScoringParams, build_index
from .query import (
    STRATEGY_LADDER,
    EmptyPlanError,
    QueryPlan,
    Strategy,
    build_plan,
)
from .textprep import (
    Dictionary,
    build_dictionary,
    mash,
    mine_collocations,
    phrase_terms,
    tokenize,
)


@dataclass(frozen=True)
class LinkerConfig:
    """Engine knobs; defaults match the shipped CLI defaults."""

    k1: float = 1.2
    b: float = 0.75
    max_edits: int = 2
    pmi_min_count: int = 1
    pmi_top_k: int = 200
    diagnostics_k: int = 5
    workers: int = 1


@dataclass(frozen=True)
class Prediction:
    """Top-1 linking outcome for one mention under one strategy."""

    mention: str
    predicted_entity: str | None
    score: float
    hit: bool
    gold_ids: tuple[str, ...] = ()
    top_k: tuple[tuple[str, float], ...] = ()


@dataclass(frozen=True)
class StrategyResult:
    strategy: Strategy
    hits: int
    total: int
    predictions: tuple[Prediction, ...]

    @property
    def accuracy(self) -> float:
        return self.hits / self.total


@dataclass(frozen=True)
class Report:
    results: tuple[StrategyResult, ...]

    def result_for(self, strategy: Strategy) -> StrategyResult:
        for result in self.results:
            if result.strategy is strategy:
                return result
        raise KeyError(strategy.value)


def entity_catalog(corpus: Corpus) -> list[tuple[str, str]]:
    """Unique (entity id, label) pairs in first-occurrence order."""
    seen: set[str] = set()
    catalog: list[tuple[str, str]] = []
    for record in corpus.records:
        if record.entity_id in seen:
            continue
        seen.add(record.entity_id)
        catalog.append((record.entity_id, record.web))
    return catalog


def link_mention(
    index: Index,
    plan: QueryPlan,
    gold: GoldLinkSet,
    *,
    top_k: int = 5,
) -> Prediction:
    """Run one plan and judge its top result against the gold set.

    The plan's mention must be present in the gold set (KeyError otherwise).
    No positive-scoring document means a miss with no predicted entity.
    """
    mention = normalize_mention(plan.mention)
    gold_ids = gold.links[mention]
    results = index.search(plan, k=max(1, top_k))
    if not results:
        return Prediction(
            mention=mention,
            predicted_entity=None,
            score=0.0,
            hit=False,
            gold_ids=tuple(sorted(gold_ids)),
        )
    entity_id, score = results[0]
    return Prediction(
        mention=mention,
        predicted_entity=entity_id,
        score=score,
        hit=entity_id in gold_ids,
        gold_ids=tuple(sorted(gold_ids)),
        top_k=tuple(results),
    )


class Linker:
    """Builds the whole engine from a corpus and links mentions against it.

    Construction derives the gold set, the deduplicated entity catalog, the
    label dictionary, mined collocations (bigrams and trigrams pooled), and
    the index. Instances are immutable after construction and safe to share
    across threads.
    """

    def __init__(self, corpus: Corpus, config: LinkerConfig = LinkerConfig()) -> None:
        self.config = config
        self.gold = build_gold(corpus)
        catalog = entity_catalog(corpus)
        labels = [label for _, label in catalog]
        self.dictionary: Dictionary = build_dictionary(labels)
        mined = mine_collocations(
            labels, arity=2, min_count=config.pmi_min_count, top_k=config.pmi_top_k
        ) + mine_collocations(
            labels, arity=3, min_count=config.pmi_min_count, top_k=config.pmi_top_k
        )
        self.collocations: frozenset[tuple[str, ...]] = frozenset(s.ngram for s in mined)
        docs = []
        for doc_id, (entity_id, label) in enumerate(catalog):
            tokens = tokenize(label)
            if not tokens:
                raise ValueError(f"entity {entity_id!r} label has no indexable tokens")
            docs.append(
                EntityDocument(
                    doc_id=doc_id,
                    entity_id=entity_id,
                    label_tokens=tuple(tokens),
                    mashed_terms=tuple(mash(tokens)),
                    phrase_terms=tuple(phrase_terms(tokens, self.collocations)),
                )
            )
        self.index = build_index(docs, ScoringParams(k1=config.k1, b=config.b))
        self.label_by_entity = {entity_id: label for entity_id, label in catalog}

    def plan(self, mention: str, strategy: Strategy) -> QueryPlan:
        return build_plan(
            mention, strategy, self.dictionary, max_edits=self.config.max_edits
        )

    def link(self, mention: str, strategy: Strategy) -> Prediction:
        """Link one mention; raises EmptyPlanError on untokenizable input."""
        plan = self.plan(mention, strategy)
        return link_mention(
            self.index, plan, self.gold, top_k=self.config.diagnostics_k
        )

    def evaluate(self, strategies: Iterable[Strategy] | None = None) -> Report:
        """Link every unique mention under each strategy and tally accuracy."""
        chosen = tuple(strategies) if strategies is not None else STRATEGY_LADDER
        results = []
        for strategy in chosen:
            predictions = self._link_all(strategy)
            hits = sum(1 for p in predictions if p.hit)
            results.append(
                StrategyResult(
                    strategy=strategy,
                    hits=hits,
                    total=len(predictions),
                    predictions=tuple(predictions),
                )
            )
        return Report(results=tuple(results))

    def _link_all(self, strategy: Strategy) -> list[Prediction]:
        mentions = self.gold.mention_order
        if self.config.workers > 1:
            # map preserves input order, so parallel output is byte-identical
            # to the sequential path.
            with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
                return list(pool.map(lambda m: self._link_or_miss(m, strategy), mentions))
        return [self._link_or_miss(m, strategy) for m in mentions]

    def _link_or_miss(self, mention: str, strategy: Strategy) -> Prediction:
        try:
            return self.link(mention, strategy)
        except EmptyPlanError:
            return Prediction(
                mention=mention,
                predicted_entity=None,
                score=0.0,
                hit=False,
                gold_ids=tuple(sorted(self.gold.links[mention])),
            )


def evaluate(
    corpus: Corpus,
    strategies: Sequence[Strategy] | None = None,
    config: LinkerConfig = LinkerConfig(),
) -> Report:
    """Convenience wrapper: build a Linker and evaluate in one call."""
    return Linker(corpus, config).evaluate(strategies)
