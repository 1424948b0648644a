"""Fine-tuning loop for binary pair classification.

Protocol: AdamW, triangular learning-rate schedule peaking at the
configured initial rate halfway through training, validation after every
epoch, checkpoint per epoch with capped retention, and the final model
chosen by best validation F1. A training log records per-epoch metrics
and sampled learning rates so the schedule shape is externally checkable.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field
from pathlib import Path

import torch
from torch import nn

from .checkpoints import CheckpointManager, CheckpointRecord
from .data import MAX_SEQ_LEN, PairExample, Vocab, collate, read_pair_file
from .model import HubClassifier, TinyPairClassifier, build_model
from .schedule import TriangularSchedule, warmup_steps_for


@dataclass
class TrainConfig:
    num_train_epochs: int = 10
    train_batch_size: int = 16
    eval_batch_size: int = 64
    initial_lr: float = 5e-5
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    weight_decay: float = 0.01
    lr_floor: float = 1e-7
    mixed_precision: bool = True
    seed: int = 42
    model_name: str = "tiny"
    max_seq_len: int = MAX_SEQ_LEN
    save_total_limit: int = 5
    logging_steps: int = 10

    def __post_init__(self) -> None:
        positive = {
            "num_train_epochs": self.num_train_epochs,
            "train_batch_size": self.train_batch_size,
            "eval_batch_size": self.eval_batch_size,
            "initial_lr": self.initial_lr,
            "epsilon": self.epsilon,
            "max_seq_len": self.max_seq_len,
            "save_total_limit": self.save_total_limit,
            "logging_steps": self.logging_steps,
        }
        for name, value in positive.items():
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")

    def warmup_steps(self, train_examples: int) -> int:
        return warmup_steps_for(
            train_examples, self.num_train_epochs, self.train_batch_size
        )


@dataclass
class EpochMetrics:
    epoch: int
    accuracy: float
    precision: float
    recall: float
    f1: float

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class TrainResult:
    best: CheckpointRecord
    epochs: list[EpochMetrics]
    log_path: Path

    @property
    def f1_sequence(self) -> list[float]:
        return [m.f1 for m in self.epochs]


def _binary_metrics(tp: int, fp: int, tn: int, fn: int) -> dict[str, float]:
    total = tp + fp + tn + fn
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return {
        "accuracy": (tp + tn) / total if total else 0.0,
        "precision": precision,
        "recall": recall,
        "f1": f1,
    }


def _model_inputs(model: nn.Module, vocab: Vocab, batch: list[PairExample], max_len: int):
    if isinstance(model, HubClassifier):
        inputs = model.encode_batch([ex.left for ex in batch], [ex.right for ex in batch])
        labels = torch.tensor([ex.label for ex in batch], dtype=torch.long)
        return inputs, labels
    tensors = collate(vocab, batch, max_len)
    labels = tensors.pop("labels")
    return tensors, labels


def evaluate(
    model: nn.Module, vocab: Vocab, examples: list[PairExample], config: TrainConfig
) -> dict[str, float]:
    model.eval()
    tp = fp = tn = fn = 0
    with torch.no_grad():
        for start in range(0, len(examples), config.eval_batch_size):
            batch = examples[start : start + config.eval_batch_size]
            inputs, labels = _model_inputs(model, vocab, batch, config.max_seq_len)
            decisions = model(**inputs).argmax(dim=1)
            tp += int(((decisions == 1) & (labels == 1)).sum())
            fp += int(((decisions == 1) & (labels == 0)).sum())
            tn += int(((decisions == 0) & (labels == 0)).sum())
            fn += int(((decisions == 0) & (labels == 1)).sum())
    return _binary_metrics(tp, fp, tn, fn)


def train(
    train_path: str | Path,
    val_path: str | Path,
    config: TrainConfig,
    out_dir: str | Path,
) -> TrainResult:
    """Run the full protocol; returns the best checkpoint and the metric trail.

    Writes checkpoints under out_dir/checkpoints/ and a trainlog.json with
    per-epoch validation metrics and the sampled learning-rate curve.
    """
    torch.manual_seed(config.seed)
    train_examples = read_pair_file(train_path)
    val_examples = read_pair_file(val_path)
    if not train_examples or not val_examples:
        raise ValueError("training and validation files must be non-empty")

    vocab = Vocab.build(train_examples)
    model = build_model(config.model_name, vocab_size=len(vocab))

    steps_per_epoch = math.ceil(len(train_examples) / config.train_batch_size)
    total_steps = steps_per_epoch * config.num_train_epochs
    schedule = TriangularSchedule(
        warmup_steps=config.warmup_steps(len(train_examples)),
        total_steps=total_steps,
        peak_lr=config.initial_lr,
        floor_lr=config.lr_floor,
    )
    optimizer = torch.optim.AdamW(
        model.parameters(),
        lr=config.initial_lr,
        betas=(config.beta1, config.beta2),
        eps=config.epsilon,
        weight_decay=config.weight_decay,
    )
    loss_fn = nn.CrossEntropyLoss()
    use_amp = config.mixed_precision and torch.cuda.is_available()
    scaler = torch.amp.GradScaler("cuda", enabled=use_amp)

    out = Path(out_dir)
    manager = CheckpointManager(out / "checkpoints", limit=config.save_total_limit)
    shuffler = random.Random(config.seed)

    lr_samples: list[dict] = []
    epoch_metrics: list[EpochMetrics] = []
    step = 0
    for epoch in range(1, config.num_train_epochs + 1):
        model.train()
        order = list(range(len(train_examples)))
        shuffler.shuffle(order)
        shuffled = [train_examples[i] for i in order]
        for start in range(0, len(shuffled), config.train_batch_size):
            batch = shuffled[start : start + config.train_batch_size]
            step += 1
            lr = schedule.lr_at(step)
            for group in optimizer.param_groups:
                group["lr"] = lr
            if (
                step % config.logging_steps == 0
                or step == schedule.warmup_steps
                or step == total_steps
            ):
                lr_samples.append({"step": step, "lr": lr})

            inputs, labels = _model_inputs(model, vocab, batch, config.max_seq_len)
            optimizer.zero_grad()
            if use_amp:
                with torch.autocast("cuda"):
                    loss = loss_fn(model(**inputs), labels)
                scaler.scale(loss).backward()
                scaler.step(optimizer)
                scaler.update()
            else:
                loss = loss_fn(model(**inputs), labels)
                loss.backward()
                optimizer.step()

        scores = evaluate(model, vocab, val_examples, config)
        metrics = EpochMetrics(epoch=epoch, **scores)
        epoch_metrics.append(metrics)
        manager.save(
            epoch,
            metrics.f1,
            payload={
                "model_state": model.state_dict(),
                "vocab": vocab.token_to_id,
                "config": asdict(config),
                "epoch": epoch,
                "metrics": metrics.as_dict(),
            },
        )

    best = manager.best
    log = {
        "model_name": config.model_name,
        "seed": config.seed,
        "train_examples": len(train_examples),
        "val_examples": len(val_examples),
        "steps_per_epoch": steps_per_epoch,
        "total_steps": total_steps,
        "warmup_steps": schedule.warmup_steps,
        "peak_lr": schedule.peak_lr,
        "floor_lr": schedule.floor_lr,
        "lr_samples": lr_samples,
        "epochs": [m.as_dict() for m in epoch_metrics],
        "best_epoch": best.epoch,
        "best_f1": best.f1,
        "best_checkpoint": str(best.path),
    }
    log_path = out / "trainlog.json"
    log_path.write_text(json.dumps(log, indent=2) + "\n", encoding="utf-8")
    return TrainResult(best=best, epochs=epoch_metrics, log_path=log_path)


def load_checkpoint(path: str | Path) -> tuple[nn.Module, Vocab, TrainConfig]:
    """Rebuild the model, vocabulary, and config stored in a checkpoint."""
    payload = torch.load(path, weights_only=False)
    config = TrainConfig(**payload["config"])
    vocab = Vocab(payload["vocab"])
    model = build_model(config.model_name, vocab_size=len(vocab))
    model.load_state_dict(payload["model_state"])
    model.eval()
    return model, vocab, config
