"""Command-line interface: mine-phrases, index, link, eval."""

from __future__ import annotations

import argparse
import sys
from importlib.resources import files
from pathlib import Path

from .corpus import Corpus, CorpusError, parse_records
from .index import FIELDS
from .linking import Linker, LinkerConfig, entity_catalog
from .query import STRATEGY_LADDER, EmptyPlanError, Strategy, render_plan
from .report import (
    collocations_tsv,
    format_table,
    render_accuracy_figure,
    report_json,
    report_tsv,
)
from .textprep import mine_collocations

_STRATEGY_NAMES = tuple(s.value for s in STRATEGY_LADDER)


def fixture_bytes() -> bytes:
    """The bundled sample corpus, used whenever --input is not given."""
    return files("receiptlink").joinpath("data/fixture.json").read_bytes()


def _load_corpus(path: str | None) -> Corpus:
    if path is None:
        return parse_records(fixture_bytes())
    return parse_records(Path(path).read_bytes())


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--input",
        metavar="PATH",
        help="corpus JSON (default: bundled sample corpus)",
    )
    parser.add_argument("--k1", type=float, default=1.2, help="BM25 k1 (default 1.2)")
    parser.add_argument("--b", type=float, default=0.75, help="BM25 b (default 0.75)")
    parser.add_argument(
        "--max-edits",
        type=int,
        default=2,
        help="edit budget for fuzzy clauses (default 2)",
    )
    parser.add_argument(
        "--pmi-min-count",
        type=int,
        default=1,
        help="drop n-grams seen fewer times than this (default 1)",
    )
    parser.add_argument(
        "--pmi-top-k",
        type=int,
        default=200,
        help="keep this many top-PMI n-grams per arity (default 200)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="receiptlink",
        description="Link shorthand receipt line items to catalog entities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    mine = sub.add_parser(
        "mine-phrases",
        help="rank label bigrams and trigrams by pointwise mutual information",
    )
    _add_common(mine)
    mine.add_argument("--output", metavar="PATH", help="write TSV here instead of stdout")

    index = sub.add_parser("index", help="build the index and print its statistics")
    _add_common(index)
    index.add_argument("--output", metavar="PATH", help="write a JSON snapshot here")

    link = sub.add_parser("link", help="link a single mention and show the ranking")
    _add_common(link)
    link.add_argument("mention", help="receipt line text, e.g. 'KRO WATER'")
    link.add_argument(
        "--strategy",
        choices=_STRATEGY_NAMES,
        default=Strategy.FUZZY_PHRASES.value,
        help="query strategy (default fuzzy-phrases)",
    )
    link.add_argument(
        "-k",
        "--top-k",
        type=int,
        default=5,
        help="number of ranked results to show (default 5)",
    )

    evaluate = sub.add_parser("eval", help="score every strategy over the corpus")
    _add_common(evaluate)
    evaluate.add_argument(
        "--strategy",
        choices=_STRATEGY_NAMES + ("all",),
        default="all",
        help="single strategy or 'all' (default all)",
    )
    evaluate.add_argument(
        "--format",
        choices=("table", "json", "tsv"),
        default="table",
        help="machine-readable report format (default table)",
    )
    evaluate.add_argument(
        "--output", metavar="PATH", help="write the report here instead of stdout"
    )
    evaluate.add_argument(
        "--figure",
        metavar="PATH",
        help="write the accuracy chart here (default: --output sibling .png)",
    )
    evaluate.add_argument(
        "--no-figure", action="store_true", help="skip the accuracy chart"
    )
    evaluate.add_argument(
        "--workers",
        type=int,
        default=1,
        help="threads for linking mentions (default 1; results are identical)",
    )
    return parser


def _config(args: argparse.Namespace) -> LinkerConfig:
    return LinkerConfig(
        k1=args.k1,
        b=args.b,
        max_edits=args.max_edits,
        pmi_min_count=args.pmi_min_count,
        pmi_top_k=args.pmi_top_k,
        workers=getattr(args, "workers", 1),
    )


def _cmd_mine_phrases(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args.input)
    labels = [label for _, label in entity_catalog(corpus)]
    rows = []
    for arity in (2, 3):
        rows.extend(
            mine_collocations(
                labels,
                arity=arity,
                min_count=args.pmi_min_count,
                top_k=args.pmi_top_k,
            )
        )
    text = collocations_tsv(rows)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_index(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args.input)
    linker = Linker(corpus, _config(args))
    index = linker.index
    print(f"documents      {index.doc_count}")
    for field in FIELDS:
        terms = sum(1 for _ in index.terms(field))
        print(f"{field:<9}      terms {terms:>5}  avgdl {index.avg_field_length(field):.4f}")
    if args.output:
        index.save(args.output)
        print(f"snapshot written to {args.output}")
    return 0


def _cmd_link(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args.input)
    linker = Linker(corpus, _config(args))
    strategy = Strategy(args.strategy)
    try:
        plan = linker.plan(args.mention, strategy)
    except EmptyPlanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"# query: {render_plan(plan)}")
    results = linker.index.search(plan, k=max(1, args.top_k))
    if not results:
        print("# no matches")
        return 0
    for rank, (entity_id, score) in enumerate(results, 1):
        label = linker.label_by_entity.get(entity_id, "")
        print(f"{rank}\t{label}\t{entity_id}\t{score:.6f}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args.input)
    if args.strategy == "all":
        strategies = STRATEGY_LADDER
    else:
        strategies = (Strategy(args.strategy),)
    linker = Linker(corpus, _config(args))
    report = linker.evaluate(strategies)
    sys.stdout.write(format_table(report))
    rendered = {
        "table": format_table,
        "json": report_json,
        "tsv": report_tsv,
    }[args.format](report)
    if args.output:
        Path(args.output).write_text(rendered, encoding="utf-8")
    elif args.format != "table":
        sys.stdout.write(rendered)
    figure_path = args.figure
    if figure_path is None and args.output and not args.no_figure:
        figure_path = str(Path(args.output).with_suffix(".png"))
    if figure_path and not args.no_figure:
        render_accuracy_figure(report, figure_path)
    return 0


_COMMANDS = {
    "mine-phrases": _cmd_mine_phrases,
    "index": _cmd_index,
    "link": _cmd_link,
    "eval": _cmd_eval,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (CorpusError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    raise SystemExit(main())
