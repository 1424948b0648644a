"""Command-line entry points: train on exported pair files, then predict.

    pairtrainer train --train DIR/train.jsonl --val DIR/val.jsonl --out RUN_DIR
    pairtrainer predict --checkpoint RUN_DIR/checkpoints/epoch_XXX.pt \
        --pairs FILE.jsonl --out predictions.jsonl
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .data import PairFileError
from .predicting import predict
from .training import TrainConfig, train


def cmd_train(args: argparse.Namespace) -> int:
    config = TrainConfig(
        num_train_epochs=args.epochs,
        train_batch_size=args.batch_size,
        initial_lr=args.lr,
        seed=args.seed,
        model_name=args.model,
    )
    result = train(args.train, args.val, config, args.out)
    for metrics in result.epochs:
        print(f"epoch {metrics.epoch}: eval_f1={metrics.f1:.4f}")
    print(f"best epoch {result.best.epoch} (f1={result.best.f1:.4f})")
    print(f"checkpoint: {result.best.path}")
    print(f"trainlog:  {result.log_path}")
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    written = predict(args.checkpoint, args.pairs, args.out)
    print(f"wrote {written} predictions -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairtrainer",
        description="Fine-tune an encoder on exported offer-pair files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="fine-tune and keep the best checkpoint")
    p_train.add_argument("--train", required=True, help="train.jsonl from the exporter")
    p_train.add_argument("--val", required=True, help="val.jsonl from the exporter")
    p_train.add_argument("--out", required=True, help="run directory for checkpoints and log")
    p_train.add_argument("--model", default="tiny", help="'tiny' or a hub model name")
    p_train.add_argument("--epochs", type=int, default=10)
    p_train.add_argument("--batch-size", type=int, default=16)
    p_train.add_argument("--lr", type=float, default=5e-5)
    p_train.add_argument("--seed", type=int, default=42)
    p_train.set_defaults(func=cmd_train)

    p_pred = sub.add_parser("predict", help="score a pair file with a checkpoint")
    p_pred.add_argument("--checkpoint", required=True)
    p_pred.add_argument("--pairs", required=True, help="exported pair file to score")
    p_pred.add_argument("--out", required=True, help="predictions.jsonl path")
    p_pred.set_defaults(func=cmd_predict)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PairFileError as exc:
        print(f"pairtrainer {args.command}: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"pairtrainer {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
