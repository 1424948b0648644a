"""Encoder fine-tuning for binary offer-pair classification.

Consumes the exported pair files (train.jsonl / val.jsonl with marker-
delimited title pairs), fine-tunes an encoder under the fixed protocol
(AdamW, triangular learning-rate schedule, per-epoch validation, capped
checkpoint retention, best-by-F1 selection), and writes predictions in
the evaluation tooling's JSON-lines format.
"""

from .checkpoints import CheckpointManager, CheckpointRecord
from .data import (
    MAX_SEQ_LEN,
    PairExample,
    PairFileError,
    Vocab,
    read_pair_file,
    split_marked_text,
)
from .model import HubClassifier, TinyPairClassifier, build_model
from .predicting import predict
from .schedule import TriangularSchedule, warmup_steps_for
from .training import EpochMetrics, TrainConfig, TrainResult, evaluate, load_checkpoint, train

__version__ = "0.1.0"

__all__ = [
    "CheckpointManager",
    "CheckpointRecord",
    "EpochMetrics",
    "HubClassifier",
    "MAX_SEQ_LEN",
    "PairExample",
    "PairFileError",
    "TinyPairClassifier",
    "TrainConfig",
    "TrainResult",
    "TriangularSchedule",
    "Vocab",
    "build_model",
    "evaluate",
    "load_checkpoint",
    "predict",
    "read_pair_file",
    "split_marked_text",
    "train",
    "warmup_steps_for",
]
