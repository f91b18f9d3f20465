"""Command-line entry point.

Exit codes are a stable scripting contract: 0 success, 1 data/runtime
error, 2 usage error. Human-readable output goes to stdout; machine
artifacts are written only to files named by ``-o``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import corpus, eval as evaluation, predict, score, weights
from .criteria import CRITERIA
from .errors import AquaError


def _fmt_suffix(path: str) -> str:
    return "csv" if str(path).endswith(".csv") else "jsonl"


def _resolve_weights(args: argparse.Namespace) -> weights.WeightTable:
    if args.default_weights:
        return weights.default_weights()
    return weights.load_weights(args.weights)


def _resolve_provider(args: argparse.Namespace, parser: argparse.ArgumentParser):
    endpoint = args.endpoint or os.environ.get("AQUA_ENDPOINT")
    chosen = [name for name, given in [("--predictions", args.predictions is not None),
                                       ("--endpoint", endpoint is not None),
                                       ("--mock-constant", args.mock_constant is not None)]
              if given]
    if len(chosen) != 1:
        parser.error("exactly one of --predictions, --endpoint (or AQUA_ENDPOINT), "
                     "--mock-constant is required")
    if args.predictions is not None:
        return predict.file_provider(args.predictions)
    if args.mock_constant is not None:
        level = args.mock_constant
        return predict.constant_provider({name: level for name in CRITERIA})
    cfg = predict.RemoteEndpointConfig(
        base_url=endpoint, timeout=args.timeout_secs,
        max_batch=args.max_batch, max_in_flight=args.max_in_flight, retries=args.retries)
    return predict.remote_provider(cfg)


# ---------------------------------------------------------------------------
# subcommands


def cmd_fit_weights(args, parser) -> int:
    comments = corpus.load_comments(args.comments, _fmt_suffix(args.comments))
    expert, n_rejected = corpus.load_expert_annotations(args.expert, _fmt_suffix(args.expert))
    crowd = corpus.load_crowd_labels(args.crowd, _fmt_suffix(args.crowd))
    if n_rejected:
        print(f"rejected {n_rejected} incomplete expert rows")
    try:
        paired, report = corpus.pair_corpus(comments, expert, crowd)
    except AquaError as exc:
        raise AquaError(f"{exc} (expert: {args.expert}, crowd: {args.crowd})") from exc
    print(f"paired {len(paired)} comments "
          f"(dropped: {len(report.dropped_comments)} comments, "
          f"{len(report.dropped_expert)} expert-only, {len(report.dropped_crowd)} crowd-only)")
    table = weights.fit_weights(paired)
    weights.save_weights(table, args.output)
    print(f"weights by |weight| descending ({table.provenance}):")
    for name in sorted(CRITERIA, key=lambda n: -abs(table.weights[n])):
        flag = "  [zero variance]" if name in table.zero_variance else ""
        print(f"  {name:<22s} {table.weights[name]:+.8f}{flag}")
    print(f"wrote {args.output}")
    return 0


def cmd_score(args, parser) -> int:
    table = _resolve_weights(args)
    provider = _resolve_provider(args, parser)
    comments = corpus.load_comments(args.comments, _fmt_suffix(args.comments))
    vectors = provider.predict(comments)
    scores = score.score_batch(vectors, table)
    score.save_scores(scores, args.output)
    bounds = weights.compute_bounds(table)
    print(f"scored {len(scores)} comments with weights: {table.provenance or 'unspecified'}")
    print(f"bounds: s_min={bounds.s_min:.8f} s_max={bounds.s_max:.8f}")
    print(f"wrote {args.output}")
    return 0


def _join_scores_labels(scores_path, labels_path):
    scores = score.load_scores(scores_path)
    labels, field = eval_load_labels_checked(labels_path)
    missing = sorted(s.comment_id for s in scores if s.comment_id not in labels)
    extra = sorted(cid for cid in labels if cid not in {s.comment_id for s in scores})
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"scores without labels: {missing[:5]}")
        if extra:
            parts.append(f"labels without scores: {extra[:5]}")
        raise AquaError("join failed; " + "; ".join(parts))
    gold = [labels[s.comment_id] for s in scores]
    return scores, gold, field


def eval_load_labels_checked(path):
    labels, field = evaluation.load_labels(path)
    if field != "label":
        raise AquaError(f"{path}: expected binary 'label' records, found {field!r}")
    return labels, field


def cmd_evaluate(args, parser) -> int:
    scores, gold, _ = _join_scores_labels(args.scores, args.labels)
    if args.tune:
        threshold, best_f1 = evaluation.tune_threshold(scores, gold)
        print(f"tuned threshold: {threshold:.2f} (weighted F1 {best_f1:.4f} over grid 0..5 step 0.05)")
    else:
        threshold = args.threshold
    pred = evaluation.threshold_classify(scores, threshold)
    counts = evaluation.confusion_counts(pred, gold)
    per_class, macro, weighted = evaluation.f1_scores(pred, gold)
    print(f"threshold: {threshold:.2f} (predict 1 iff aqua >= threshold)")
    print(f"{'class':>5s} {'precision':>9s} {'recall':>9s} {'f1':>9s} {'support':>7s}")
    for cls in sorted(counts.per_class):
        c = counts.per_class[cls]
        print(f"{cls!s:>5s} {c.precision:9.4f} {c.recall:9.4f} {per_class[cls]:9.4f} {c.support:7d}")
    print(f"macro F1:    {macro:.4f}")
    print(f"weighted F1: {weighted:.4f}  (support-weighted average; assumed averaging variant)")
    if args.output:
        report = {
            "threshold": threshold,
            "tuned": bool(args.tune),
            "per_class": {str(cls): {
                "precision": counts.per_class[cls].precision,
                "recall": counts.per_class[cls].recall,
                "f1": per_class[cls],
                "support": counts.per_class[cls].support,
            } for cls in sorted(counts.per_class)},
            "macro_f1": macro,
            "weighted_f1": weighted,
            "f1_averaging_assumption": "weighted",
        }
        Path(args.output).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {args.output}")
    return 0


def _print_rank_entries(title: str, entries) -> None:
    print(title)
    for e in entries:
        labels = ", ".join(f"{name}={level}" for name, level in e.contributing) or "-"
        print(f"  {e.comment_id:<16s} {e.aqua:7.4f}  {labels}")


def cmd_rank(args, parser) -> int:
    scores = score.load_scores(args.scores)
    predictions = score.load_predictions(args.predictions)
    k = max(args.top, args.bottom)
    report = evaluation.rank_report(scores, predictions, k=k)
    _print_rank_entries(f"top {args.top} by aqua score:", report.top[:args.top])
    _print_rank_entries(f"bottom {args.bottom} by aqua score:", report.bottom[:args.bottom])
    if args.output:
        payload = {
            side: [{"comment_id": e.comment_id, "aqua": e.aqua,
                    "contributing": {name: level for name, level in e.contributing}}
                   for e in entries]
            for side, entries in [("top", report.top[:args.top]),
                                  ("bottom", report.bottom[:args.bottom])]
        }
        Path(args.output).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {args.output}")
    return 0


def cmd_report_length(args, parser) -> int:
    scores = score.load_scores(args.scores)
    comments = corpus.load_comments(args.comments, _fmt_suffix(args.comments))
    report = evaluation.length_analysis(scores, comments)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write("word_count,aqua\n")
            for wc, aqua in report.pairs:
                fh.write(f"{wc},{format(aqua, '.17g')}\n")
        print(f"wrote {args.output} ({len(report.pairs)} rows)")
    print(f"{'words':>9s} {'count':>6s} {'mean':>8s} {'max':>8s}")
    for b in report.bins:
        print(f"{b.lo:>4d}-{b.hi - 1:<4d} {b.count:6d} {b.mean:8.4f} {b.max:8.4f}")
    return 0


def cmd_split(args, parser) -> int:
    comments = corpus.load_comments(args.comments, _fmt_suffix(args.comments))
    fractions = tuple(float(f) for f in args.fractions.split(","))
    if len(fractions) != 3:
        parser.error("--fractions must be three comma-separated values")
    train, val, test = corpus.split_corpus(comments, fractions, seed=args.seed)
    print(f"split {len(comments)} comments into {len(train)}/{len(val)}/{len(test)} (seed {args.seed})")
    for name, part in [("train", train), ("val", val), ("test", test)]:
        out = f"{args.output}.{name}.jsonl"
        corpus.save_comments(part, out)
        print(f"wrote {out}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aqua",
                                     description="Deliberative-quality scoring and evaluation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit-weights", help="fit correlation weights from paired annotations")
    p.add_argument("--comments", required=True)
    p.add_argument("--expert", required=True)
    p.add_argument("--crowd", required=True)
    p.add_argument("-o", "--output", required=True, help="output weights.tsv")
    p.set_defaults(func=cmd_fit_weights)

    p = sub.add_parser("score", help="score comments with a prediction provider")
    wsrc = p.add_mutually_exclusive_group(required=True)
    wsrc.add_argument("--weights", help="weights.tsv to load")
    wsrc.add_argument("--default-weights", action="store_true",
                      help="use the shipped default weight table")
    p.add_argument("--predictions", help="precomputed predictions.jsonl")
    p.add_argument("--endpoint", help="inference endpoint (default: env AQUA_ENDPOINT)")
    p.add_argument("--mock-constant", type=int, metavar="LEVEL",
                   help="constant mock provider answering LEVEL for every criterion")
    p.add_argument("--timeout-secs", type=float, default=30.0)
    p.add_argument("--max-batch", type=int, default=32)
    p.add_argument("--max-in-flight", type=int, default=4)
    p.add_argument("--retries", type=int, default=2)
    p.add_argument("--comments", required=True)
    p.add_argument("-o", "--output", required=True, help="output scores.jsonl")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("evaluate", help="evaluate scores against binary labels")
    p.add_argument("--scores", required=True)
    p.add_argument("--labels", required=True)
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--threshold", type=float, default=2.3)
    grp.add_argument("--tune", action="store_true", help="grid-scan the threshold")
    p.add_argument("-o", "--output", help="optional JSON report")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("rank", help="top/bottom comments by score")
    p.add_argument("--scores", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--top", type=int, default=3)
    p.add_argument("--bottom", type=int, default=3)
    p.add_argument("-o", "--output", help="optional JSON report")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("report-length", help="word count vs score report")
    p.add_argument("--scores", required=True)
    p.add_argument("--comments", required=True)
    p.add_argument("-o", "--output", help="optional CSV output (word_count,aqua)")
    p.set_defaults(func=cmd_report_length)

    p = sub.add_parser("split", help="seeded train/val/test split of a comment file")
    p.add_argument("--comments", required=True)
    p.add_argument("--fractions", default="0.65,0.15,0.20")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, help="output file prefix")
    p.set_defaults(func=cmd_split)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args, parser)
    except SystemExit as exc:  # parser.error inside a handler
        return exc.code if isinstance(exc.code, int) else 2
    except AquaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
