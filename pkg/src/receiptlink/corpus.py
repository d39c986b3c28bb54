"""Receipt line-item corpus: parsing, normalization, and ground truth."""

from __future__ import annotations

import json
from dataclasses import dataclass


class CorpusError(ValueError):
    """Raised when an input document cannot be turned into a corpus."""


@dataclass(frozen=True)
class LinkRecord:
    """One receipt line: scanned shorthand, catalog label, catalog entity id."""

    raw: str
    web: str
    entity_id: str


@dataclass(frozen=True)
class Corpus:
    """Flattened receipt lines plus how many receipts they came from."""

    records: tuple[LinkRecord, ...]
    receipt_count: int


@dataclass(frozen=True)
class GoldLinkSet:
    """Acceptable entity ids per unique normalized mention.

    A mention maps to more than one id when the same shorthand was linked to
    several catalog entries; predicting any of them counts as correct.
    `mention_order` preserves first-appearance order so that evaluation output
    is stable across runs.
    """

    links: dict[str, frozenset[str]]
    mention_order: tuple[str, ...]


def parse_records(data: bytes | str) -> Corpus:
    """Parse corpus JSON into a Corpus.

    Accepts either a flat array of ``{"raw", "web", "id"}`` objects or an
    array of receipt objects carrying an ``"items"`` array of such objects.
    The two shapes may be mixed; all flat items together count as one receipt.

    Raises CorpusError for malformed JSON (with character offset) or for any
    item missing one of the three required non-empty string fields (with the
    item's position in flattened order).
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"malformed JSON at offset {exc.pos}: {exc.msg}") from exc
    if not isinstance(payload, list):
        raise CorpusError("top-level JSON value must be an array")

    records: list[LinkRecord] = []
    receipt_count = 0
    saw_flat_item = False
    for element in payload:
        if isinstance(element, dict) and isinstance(element.get("items"), list):
            receipt_count += 1
            for item in element["items"]:
                records.append(_parse_item(item, len(records)))
        else:
            saw_flat_item = True
            records.append(_parse_item(element, len(records)))
    if saw_flat_item:
        receipt_count += 1
    return Corpus(records=tuple(records), receipt_count=receipt_count)


def _parse_item(item: object, index: int) -> LinkRecord:
    if not isinstance(item, dict):
        raise CorpusError(f"item {index}: expected a JSON object")
    values: dict[str, str] = {}
    for key in ("raw", "web", "id"):
        value = item.get(key)
        if not isinstance(value, str) or not value.strip():
            raise CorpusError(f"item {index}: missing or empty field {key!r}")
        values[key] = value
    return LinkRecord(raw=values["raw"], web=values["web"], entity_id=values["id"])


def serialize_records(corpus: Corpus) -> bytes:
    """Serialize to the canonical flat form; inverse of parse_records for it."""
    payload = [
        {"raw": record.raw, "web": record.web, "id": record.entity_id}
        for record in corpus.records
    ]
    return (json.dumps(payload, indent=2) + "\n").encode("utf-8")


def normalize_mention(raw: str) -> str:
    """Uppercase and collapse runs of whitespace; idempotent."""
    return " ".join(raw.upper().split())


def build_gold(corpus: Corpus) -> GoldLinkSet:
    """Group records by normalized mention into the set of acceptable ids."""
    if not corpus.records:
        raise CorpusError("cannot build ground truth from an empty corpus")
    grouped: dict[str, set[str]] = {}
    order: list[str] = []
    for record in corpus.records:
        mention = normalize_mention(record.raw)
        if mention not in grouped:
            grouped[mention] = set()
            order.append(mention)
        grouped[mention].add(record.entity_id)
    links = {mention: frozenset(ids) for mention, ids in grouped.items()}
    return GoldLinkSet(links=links, mention_order=tuple(order))
