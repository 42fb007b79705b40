"""Command-line interface.

Exit status: 0 on success, 1 on a domain error, 2 on a usage error. Warnings
and errors go to stderr as one JSON object per line.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import agreement, community, topology
from .errors import CaseGraphError
from .graph import export, load_graph, serialize
from .pipeline import generate_graph, load_backend
from .report import compare, dump_json, report_directory, reports_document
from .semantic import make_provider
from .transcript import corpus_stats, load_transcript

log = logging.getLogger("casegraph")


class JsonLogFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        return json.dumps({"level": record.levelname.lower(), "logger": record.name, "message": record.getMessage()})


def _setup_logging(verbose: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(JsonLogFormatter())
    root = logging.getLogger("casegraph")
    root.handlers[:] = [handler]
    root.setLevel(logging.INFO if verbose else logging.WARNING)
    root.propagate = False


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# subcommands ---------------------------------------------------------------


def cmd_generate(args) -> None:
    transcript = load_transcript(args.transcript, args.session_id)
    backend, cfg = load_backend(
        args.backend, {"parallelism": args.parallelism, "max_retries": args.max_retries}
    )
    g = generate_graph(transcript, backend, cfg, include_within_category=args.include_within_category)
    _emit(serialize(g), args.out)


def cmd_compare(args) -> None:
    provider = make_provider(args.embedder)
    report = compare(load_graph(args.graph_a), load_graph(args.graph_b), provider, pair=args.pair, k=args.top_k)
    _emit(dump_json(report.to_dict()), args.out)


def cmd_metrics(args) -> None:
    g = load_graph(args.graph)
    doc = topology.metrics_report(g).to_dict()
    if args.reference:
        doc["degree_distances"] = topology.degree_distances(g, load_graph(args.reference))
    _emit(dump_json(doc), args.out)


def cmd_communities(args) -> None:
    g = load_graph(args.graph)
    p = community.detect(g, args.algo, seed=args.seed, resolution=args.resolution)
    doc = community.partition_document(g, p, args.algo, args.seed, args.resolution)
    if g.n:
        a = community.category_alignment(g, p)
        doc["alignment"] = {
            "purity": a.purity,
            "communities": [
                {"size": c.size, "majority": c.majority.value, "fraction": c.fraction} for c in a.communities
            ],
        }
    _emit(dump_json(doc), args.out)


def cmd_agreement(args) -> None:
    scores = agreement.RubricScores.from_csv(args.ratings)
    doc = {"fleiss_kappa": agreement.kappa_by_dimension(scores), "summary": agreement.rating_summary(scores)}
    _emit(dump_json(doc), args.out)


def cmd_stats(args) -> None:
    transcripts = [load_transcript(p) for p in args.transcript]
    _emit(dump_json(corpus_stats(transcripts).to_dict()), args.out)


def cmd_export(args) -> None:
    _emit(export(load_graph(args.graph), args.format), args.out)


def cmd_report(args) -> None:
    provider = make_provider(args.embedder)
    reports, summary = report_directory(args.dir, provider, workers=args.workers)
    _emit(dump_json(reports_document(reports, summary)), args.out)
    if args.table:
        sys.stderr.write(summary.render())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="casegraph", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress at info level")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a causal graph from a transcript")
    p.add_argument("--transcript", required=True)
    p.add_argument("--backend", required=True, help="mock:<fixture> or a JSON backend config file")
    p.add_argument("--session-id")
    p.add_argument("--include-within-category", action="store_true")
    p.add_argument("--parallelism", type=int)
    p.add_argument("--max-retries", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("compare", help="similarity measures between two graphs")
    p.add_argument("--graph-a", required=True)
    p.add_argument("--graph-b", required=True)
    p.add_argument("--embedder", default="mock", help="mock, hash[:dim], fixture:<path> or an http(s) URL")
    p.add_argument("--pair", default="")
    p.add_argument("--top-k", type=int, default=5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("metrics", help="graph-theory statistics")
    p.add_argument("--graph", required=True)
    p.add_argument("--reference", help="second graph for KL/EMD between degree distributions")
    p.add_argument("--out")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("communities", help="community detection")
    p.add_argument("--graph", required=True)
    p.add_argument("--algo", required=True, choices=community.ALGORITHMS)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--resolution", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_communities)

    p = sub.add_parser("agreement", help="Fleiss' kappa and rubric summaries")
    p.add_argument("--ratings", required=True, help="CSV with rater_id, session_id, dimension, score")
    p.add_argument("--out")
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("stats", help="descriptive transcript statistics")
    p.add_argument("--transcript", required=True, nargs="+")
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("export", help="DOT or GraphML export")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", required=True, choices=("dot", "graphml"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("report", help="compare all sessions in a directory and aggregate")
    p.add_argument("--dir", required=True)
    p.add_argument("--embedder", default="mock")
    p.add_argument("--workers", type=int, default=4)
    p.add_argument("--table", action="store_true", help="also print a tab-separated table to stderr")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _setup_logging(args.verbose)
    try:
        args.func(args)
    except (CaseGraphError, OSError, ValueError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
