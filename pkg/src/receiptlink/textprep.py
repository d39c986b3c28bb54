"""Text analysis shared by indexing and query construction.

Tokenization, the label-token dictionary, suffix concatenations ("mashed"
terms), and PMI collocation mining with the phrase segmenter built on it.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

# Runs of alphanumerics, apostrophes allowed inside a run; apostrophes are
# stripped afterwards so "Boar's" becomes "boars". Underscore is a separator.
_TOKEN_RUN = re.compile(r"(?:[^\W_]|')+")

Dictionary = frozenset[str]


def tokenize(text: str) -> list[str]:
    """Lowercased alphanumeric tokens in order; punctuation splits, '' drops."""
    tokens: list[str] = []
    for run in _TOKEN_RUN.findall(text.lower()):
        token = run.replace("'", "")
        if token:
            tokens.append(token)
    return tokens


def build_dictionary(labels: Iterable[str]) -> Dictionary:
    """Every token that occurs in any catalog label."""
    known: set[str] = set()
    for label in labels:
        known.update(tokenize(label))
    return frozenset(known)


def mash(tokens: Sequence[str]) -> list[str]:
    """Suffix concatenations of a token list, longest first.

    mash(["the", "quick", "brown"]) == ["thequickbrown", "quickbrown", "brown"]

    These terms let a query reach across word boundaries that the scanned
    shorthand ignored.
    """
    return ["".join(tokens[i:]) for i in range(len(tokens))]


@dataclass(frozen=True)
class CollocationStats:
    """An adjacent n-gram with the counts behind its association score.

    The stored counts are sufficient to recompute `pmi`: the n-gram
    probability uses the window total, each component token probability uses
    the token total.
    """

    n: int
    ngram: tuple[str, ...]
    count: int
    pmi: float
    component_counts: tuple[int, ...]
    total_tokens: int
    total_windows: int


def pointwise_mutual_information(
    count: int,
    component_counts: Sequence[int],
    total_tokens: int,
    total_windows: int,
) -> float:
    """log2 of observed n-gram probability over independence expectation."""
    joint = count / total_windows
    independent = 1.0
    for component in component_counts:
        independent *= component / total_tokens
    return math.log2(joint / independent)


def mine_collocations(
    labels: Iterable[str],
    arity: int = 2,
    min_count: int = 1,
    top_k: int = 200,
) -> list[CollocationStats]:
    """Rank adjacent bigrams or trigrams of the labels by PMI.

    Windows never cross label boundaries. Results are sorted by PMI
    descending, ties by n-gram ascending, and truncated to top_k. A corpus
    with no window of the requested arity yields an empty list.
    """
    if arity not in (2, 3):
        raise ValueError(f"arity must be 2 or 3, got {arity}")
    if min_count < 1:
        raise ValueError(f"min_count must be at least 1, got {min_count}")
    if top_k < 1:
        raise ValueError(f"top_k must be at least 1, got {top_k}")

    unigrams: Counter[str] = Counter()
    windows: Counter[tuple[str, ...]] = Counter()
    total_windows = 0
    for label in labels:
        tokens = tokenize(label)
        unigrams.update(tokens)
        for i in range(len(tokens) - arity + 1):
            windows[tuple(tokens[i : i + arity])] += 1
            total_windows += 1
    if total_windows == 0:
        return []
    total_tokens = sum(unigrams.values())

    stats = [
        CollocationStats(
            n=arity,
            ngram=ngram,
            count=count,
            pmi=pointwise_mutual_information(
                count,
                [unigrams[token] for token in ngram],
                total_tokens,
                total_windows,
            ),
            component_counts=tuple(unigrams[token] for token in ngram),
            total_tokens=total_tokens,
            total_windows=total_windows,
        )
        for ngram, count in windows.items()
        if count >= min_count
    ]
    stats.sort(key=lambda s: (-s.pmi, s.ngram))
    return stats[:top_k]


def phrase_terms(
    tokens: Sequence[str],
    collocations: Iterable[tuple[str, ...]],
) -> list[str]:
    """Segment a token list into concatenated collocations, left to right.

    At each position a known trigram is preferred over a known bigram;
    matches never overlap; tokens covered by no collocation emit nothing.
    """
    known = collocations if isinstance(collocations, (set, frozenset)) else set(collocations)
    out: list[str] = []
    i = 0
    while i < len(tokens):
        trigram = tuple(tokens[i : i + 3])
        if len(trigram) == 3 and trigram in known:
            out.append("".join(trigram))
            i += 3
            continue
        bigram = tuple(tokens[i : i + 2])
        if len(bigram) == 2 and bigram in known:
            out.append("".join(bigram))
            i += 2
            continue
        i += 1
    return out
