"""Command-line pipeline: build, baseline, evaluate, export.

Subcommands:
  build      raw offer dump -> cleaned table -> pairs -> test + nested
             train splits as gzip JSON-lines files
  baseline   fit a classical matcher on a train split, score a gold/test
             split, write predictions and metrics
  evaluate   aggregate several prediction runs against gold labels
  export     serialize a pair file into train/val classifier input files

Configuration comes from a JSON file (--config); command-line flags
override config keys. Exit codes: 0 success, 2 configuration error,
3 input parse error, 4 insufficient data, 5 other pipeline error,
1 unexpected failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Mapping, Sequence

from .errors import ConfigError, InsufficientDataError, ParseError, PmkitError
from .evaluation import aggregate_runs, compute_metrics, confusion_from_predictions, metrics_from_counts
from .export import export_for_training, make_train_val_split
from .fileio import iter_text_lines
from .ingest import ColumnSchema, clean_offers, load_wdc_pairs, parse_offers
from .matchers import MatchPrediction, Scorer, ThresholdMatcher, fit_tfidf, score_pair, tune_threshold
from .pairs import (
    Split,
    SplitPlan,
    build_positive_pairs,
    build_splits,
    emit_wdc,
    mine_negative_pairs,
    split_size_summary,
)

logger = logging.getLogger("pmkit")

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_INSUFFICIENT = 4
EXIT_PIPELINE = 5

SPLIT_FILENAMES = {
    Split.TEST: "test.json.gz",
    Split.TRAIN_SMALL: "train_small.json.gz",
    Split.TRAIN_MEDIUM: "train_medium.json.gz",
    Split.TRAIN_LARGE: "train_large.json.gz",
}


class _Stage:
    """Context manager logging one structured timing line per stage."""

    def __init__(self, name: str):
        self.name = name

    def __enter__(self) -> "_Stage":
        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        elapsed = time.perf_counter() - self._start
        status = "ok" if exc_type is None else "failed"
        logger.info("stage=%s status=%s elapsed=%.3fs", self.name, status, elapsed)


def _load_json_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc


def _resolve_category_map(value, config_dir: Path) -> dict[str, str]:
    if value is None:
        return {}
    if isinstance(value, Mapping):
        return dict(value)
    path = config_dir / str(value)
    mapping = _load_json_config(str(path))
    if not isinstance(mapping, dict):
        raise ConfigError(f"category map {path} must be a JSON object")
    return {str(k): str(v) for k, v in mapping.items()}


def cmd_build(args: argparse.Namespace) -> int:
    config = _load_json_config(args.config)
    config_dir = Path(args.config).resolve().parent

    inputs = config.get("inputs") or config.get("input")
    if not inputs:
        raise ConfigError("build config needs an 'inputs' entry")
    if isinstance(inputs, str):
        inputs = [inputs]
    input_paths = [config_dir / p for p in inputs]

    if "schema" not in config:
        raise ConfigError("build config needs a 'schema' entry")
    schema = ColumnSchema.from_dict(config["schema"])
    category_map = _resolve_category_map(config.get("category_map"), config_dir)

    plan_cfg = dict(config.get("plan", {}))
    if args.seed is not None:
        plan_cfg["seed"] = args.seed
    if args.k_negatives is not None:
        plan_cfg["k_negatives"] = args.k_negatives
    if "size_ratios" in plan_cfg:
        plan_cfg["size_ratios"] = tuple(plan_cfg["size_ratios"])
    try:
        plan = SplitPlan(**plan_cfg)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid split plan: {exc}") from exc

    out_dir = Path(args.out or config.get("out_dir", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    name = config.get("name", "dataset")
    category = config.get("category")

    with _Stage("parse"):
        records = []
        for path in input_paths:
            records.extend(parse_offers(path, schema))
    if category is not None:
        # Category selection precedes dedupe and the two-store rule, so the
        # rules operate within the chosen category, matching the per-category
        # dataset construction.
        records = [
            r
            for r in records
            if category_map.get(
                r.fields.get("category", "").strip(), r.fields.get("category", "").strip()
            )
            == category
        ]
    with _Stage("clean"):
        table, report = clean_offers(records, category_map)
        if category is not None:
            table.category_filter = category
    with _Stage("positive_pairs"):
        positives = build_positive_pairs(table)
    with _Stage("negative_mining"):
        negatives = mine_negative_pairs(table, plan.k_negatives)
    with _Stage("splits"):
        datasets = build_splits(positives, negatives, plan, name=name)
    with _Stage("emit"):
        outputs = {}
        for split, filename in SPLIT_FILENAMES.items():
            path = out_dir / filename
            emit_wdc(datasets[split], path)
            outputs[split.value] = str(path)

    sizes = split_size_summary(datasets)
    build_report = {
        "name": name,
        "category": category,
        "seed": plan.seed,
        "k_negatives": plan.k_negatives,
        "cleaning": report.as_dict(),
        "splits": sizes,
        "outputs": outputs,
    }
    reference = config.get("reference_sizes")
    if reference:
        build_report["reference_sizes"] = reference

    report_json = json.dumps(build_report, indent=2)
    if args.report:
        Path(args.report).write_text(report_json + "\n", encoding="utf-8")
    else:
        print(report_json, file=sys.stderr)

    for split_name, counts in sizes.items():
        line = f"{split_name}: {counts['positive']} pos / {counts['negative']} neg"
        if reference and split_name in reference:
            ref_pos, ref_neg = reference[split_name]
            line += f" (reference {ref_pos}/{ref_neg})"
        print(line)
    return EXIT_OK


def _prediction_lines(predictions: Sequence[MatchPrediction]) -> list[str]:
    return [
        json.dumps(
            {"pair_id": p.pair_id, "score": p.score, "decision": p.decision},
            ensure_ascii=False,
        )
        for p in predictions
    ]


def cmd_baseline(args: argparse.Namespace) -> int:
    with _Stage("load"):
        train = load_wdc_pairs(args.train, name="train")
        test = load_wdc_pairs(args.test, name="test")

    scorer = Scorer(args.matcher)
    model = None
    if scorer is Scorer.TFIDF_COSINE:
        with _Stage("fit_tfidf"):
            # Corpus: every distinct train offer's title (both pair sides,
            # deduplicated by offer id; title text is the fallback key when
            # a file carries no ids).
            titles: dict[str, str] = {}
            for pair in train.pairs:
                titles[pair.id_left or pair.title_left] = pair.title_left
                titles[pair.id_right or pair.title_right] = pair.title_right
            model = fit_tfidf(titles.values())

    matcher = ThresholdMatcher(scorer=scorer, threshold=0.0, model=model)
    if args.threshold is not None:
        threshold = args.threshold
    else:
        with _Stage("tune_threshold"):
            tuning = [
                (matcher.score_titles(p.title_left, p.title_right), p.label)
                for p in train.pairs
            ]
            threshold = tune_threshold(tuning)
    matcher.threshold = threshold

    with _Stage("score"):
        predictions = [score_pair(matcher, pair) for pair in test.pairs]
    labels = {p.pair_id: p.label for p in test.pairs}
    counts = confusion_from_predictions(predictions, labels)
    metrics = metrics_from_counts(counts)

    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    pred_path = out_dir / "predictions.jsonl"
    pred_path.write_text("\n".join(_prediction_lines(predictions)) + "\n", encoding="utf-8")
    metrics_payload = {
        "matcher": scorer.value,
        "threshold": threshold,
        "counts": {"tp": counts.tp, "fp": counts.fp, "tn": counts.tn, "fn": counts.fn},
        "metrics": metrics.as_dict(),
    }
    (out_dir / "metrics.json").write_text(
        json.dumps(metrics_payload, indent=2) + "\n", encoding="utf-8"
    )

    print(f"matcher={scorer.value} threshold={threshold:.6f}")
    print(
        "accuracy={:.2f} precision={:.2f} recall={:.2f} f1={:.2f}".format(
            100.0 * metrics.accuracy,
            100.0 * metrics.precision,
            100.0 * metrics.recall,
            100.0 * metrics.f1,
        )
    )
    return EXIT_OK


def _load_predictions(path: str) -> list[MatchPrediction]:
    predictions = []
    for line_no, line in enumerate(iter_text_lines(path), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON in {path}: {exc.msg}", line=line_no) from exc
        try:
            predictions.append(
                MatchPrediction(
                    pair_id=str(obj["pair_id"]),
                    score=float(obj["score"]),
                    decision=int(obj["decision"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad prediction record in {path}: {exc}", line=line_no) from exc
    return predictions


def cmd_evaluate(args: argparse.Namespace) -> int:
    gold = load_wdc_pairs(args.labels, name="gold")
    labels = {p.pair_id: p.label for p in gold.pairs}

    runs = []
    for pred_file in args.predictions:
        predictions = _load_predictions(pred_file)
        runs.append(compute_metrics(predictions, labels))
    try:
        aggregate = aggregate_runs(runs, conf=args.conf)
    except ValueError as exc:
        raise PmkitError(str(exc)) from exc

    payload = aggregate.as_dict()
    report_json = json.dumps(payload, indent=2)
    if args.out:
        Path(args.out).write_text(report_json + "\n", encoding="utf-8")
    else:
        print(report_json, file=sys.stderr)

    for i, run in enumerate(aggregate.runs, start=1):
        print(f"run {i}: f1={100.0 * run.f1:.2f}")
    print(f"mean f1: {aggregate.format_row()}  (n={aggregate.n}, conf={aggregate.conf})")
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    dataset = load_wdc_pairs(args.pairs, name=Path(args.pairs).stem)
    manifest = make_train_val_split(dataset, seed=args.seed)
    paths = export_for_training(dataset, manifest, args.out)
    print(
        f"train={paths['train']} ({len(manifest.train_ids)} pairs) "
        f"val={paths['val']} ({len(manifest.val_ids)} pairs)"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pmkit",
        description="Product-matching dataset construction, baselines, and evaluation.",
    )
    parser.add_argument("--verbose", action="store_true", help="log per-stage timings")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="construct test + nested train splits from a raw dump")
    p_build.add_argument("--config", required=True, help="JSON pipeline config")
    p_build.add_argument("--out", help="output directory (overrides config out_dir)")
    p_build.add_argument("--seed", type=int, help="split sampling seed (overrides config)")
    p_build.add_argument("--k-negatives", type=int, help="negatives mined per offer (overrides config)")
    p_build.add_argument("--report", help="write the build report JSON here instead of stderr")
    p_build.set_defaults(func=cmd_build)

    p_base = sub.add_parser("baseline", help="run a classical matcher against a gold split")
    p_base.add_argument("--train", required=True, help="training pair file (fit + threshold tuning)")
    p_base.add_argument("--test", required=True, help="gold/test pair file to score")
    p_base.add_argument("--matcher", choices=[s.value for s in Scorer], default=Scorer.TFIDF_COSINE.value)
    p_base.add_argument("--threshold", type=float, help="fixed decision threshold (skips tuning)")
    p_base.add_argument("--out", help="output directory for predictions and metrics")
    p_base.set_defaults(func=cmd_baseline)

    p_eval = sub.add_parser("evaluate", help="aggregate prediction runs against gold labels")
    p_eval.add_argument("predictions", nargs="+", help="prediction JSON-lines files, one per run")
    p_eval.add_argument("--labels", required=True, help="gold pair file with labels")
    p_eval.add_argument("--conf", type=float, default=0.95, help="confidence level (default 0.95)")
    p_eval.add_argument("--out", help="write the aggregate report JSON here instead of stderr")
    p_eval.set_defaults(func=cmd_evaluate)

    p_exp = sub.add_parser("export", help="serialize pairs into train/val classifier input files")
    p_exp.add_argument("--pairs", required=True, help="pair file to serialize")
    p_exp.add_argument("--out", required=True, help="output directory")
    p_exp.add_argument("--seed", type=int, default=42, help="shuffle seed (default 42)")
    p_exp.set_defaults(func=cmd_export)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"pmkit {args.command}: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ParseError as exc:
        print(f"pmkit {args.command}: input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InsufficientDataError as exc:
        print(f"pmkit {args.command}: insufficient data: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except PmkitError as exc:
        print(f"pmkit {args.command}: {exc}", file=sys.stderr)
        return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())
