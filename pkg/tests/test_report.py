from __future__ import annotations

import json

from receiptlink.linking import Prediction, Report, StrategyResult
from receiptlink.query import Strategy
from receiptlink.report import (
    collocations_tsv,
    format_table,
    render_accuracy_figure,
    report_json,
    report_tsv,
)
from receiptlink.textprep import mine_collocations


def _report(strategies: list[Strategy]) -> Report:
    results = []
    for i, strategy in enumerate(strategies):
        predictions = (
            Prediction(
                mention="KRO WATER",
                predicted_entity="e1",
                score=2.5,
                hit=True,
                gold_ids=("e1",),
            ),
            Prediction(
                mention="BRHD CHEESE",
                predicted_entity=None,
                score=0.0,
                hit=False,
                gold_ids=("c1", "c2"),
            ),
        )
        results.append(
            StrategyResult(
                strategy=strategy, hits=1 + i, total=4, predictions=predictions
            )
        )
    return Report(results=tuple(results))


def test_format_table_lists_each_strategy() -> None:
    table = format_table(_report([Strategy.BASELINE, Strategy.WILDCARD]))
    lines = table.strip().splitlines()
    assert lines[0].split() == ["strategy", "hits", "total", "accuracy"]
    assert lines[1].split() == ["baseline", "1", "4", "0.2500"]
    assert lines[2].split() == ["wildcard", "2", "4", "0.5000"]


def test_report_json_shape_and_order() -> None:
    text = report_json(_report([Strategy.BASELINE, Strategy.MASHED]))
    assert text.endswith("\n")
    payload = json.loads(text)
    assert list(payload) == ["baseline", "mashed"]
    assert payload["baseline"] == {"accuracy": 0.25, "hits": 1, "total": 4}
    assert payload["mashed"] == {"accuracy": 0.5, "hits": 2, "total": 4}


def test_report_tsv_single_strategy_is_pure_tsv() -> None:
    text = report_tsv(_report([Strategy.BASELINE]))
    lines = text.strip().splitlines()
    assert lines[0] == "mention\tpredicted\tgold_ids\thit"
    assert lines[1] == "KRO WATER\te1\te1\ttrue"
    assert lines[2] == "BRHD CHEESE\t-\tc1,c2\tfalse"
    assert not any(line.startswith("#") for line in lines)


def test_report_tsv_multi_strategy_labels_blocks() -> None:
    text = report_tsv(_report([Strategy.BASELINE, Strategy.WILDCARD]))
    lines = text.strip().splitlines()
    assert lines[1] == "# baseline"
    assert "# wildcard" in lines


def test_collocations_tsv_golden() -> None:
    stats = mine_collocations(["a b", "a b", "a c", "d b"], arity=2)
    assert collocations_tsv(stats) == (
        "a c\t1\t2.415037\n"
        "d b\t1\t2.415037\n"
        "a b\t2\t1.830075\n"
    )


def test_collocations_tsv_empty() -> None:
    assert collocations_tsv([]) == ""


def test_render_accuracy_figure_writes_png(tmp_path) -> None:
    path = tmp_path / "accuracy.png"
    render_accuracy_figure(_report(list(Strategy)), path)
    data = path.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(data) > 1000
