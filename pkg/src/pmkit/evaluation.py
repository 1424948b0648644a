"""Binary match metrics and multi-run aggregation with t-based error bars.

Metrics are kept as fractions in [0, 1]; the CLI layer scales to
percentage points for display. Aggregation across repeated runs reports
the mean and an error term equal to the two-sided t quantile at the
requested confidence times the sample standard deviation of F1.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Mapping, Sequence

from .matchers import MatchPrediction
from .studentt import t_ppf

__all__ = [
    "ConfusionCounts",
    "Metrics",
    "EvalAggregate",
    "confusion_from_predictions",
    "metrics_from_counts",
    "compute_metrics",
    "standard_error",
    "aggregate_runs",
    "t_ppf",
]


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision: float
    recall: float
    f1: float

    def __post_init__(self) -> None:
        for name in ("accuracy", "precision", "recall", "f1"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    def as_dict(self) -> dict[str, float]:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def metrics_from_counts(counts: ConfusionCounts) -> Metrics:
    """accuracy / precision / recall / F1 with all 0/0 cases defined as 0."""
    tp, fp, tn, fn = counts.tp, counts.fp, counts.tn, counts.fn
    accuracy = (tp + tn) / counts.total if counts.total else 0.0
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (
        2.0 * precision * recall / (precision + recall) if precision + recall else 0.0
    )
    return Metrics(accuracy=accuracy, precision=precision, recall=recall, f1=f1)


def confusion_from_predictions(
    predictions: Sequence[MatchPrediction],
    labels: Mapping[str, int] | Sequence[int],
) -> ConfusionCounts:
    """Tally decisions against gold labels.

    Labels are either a mapping pair_id -> {0, 1} (every prediction's
    pair_id must resolve) or a plain sequence aligned positionally with
    the predictions (lengths must match).
    """
    if isinstance(labels, Mapping):
        aligned = []
        for pred in predictions:
            if pred.pair_id not in labels:
                raise ValueError(f"no gold label for pair_id {pred.pair_id!r}")
            aligned.append(labels[pred.pair_id])
    else:
        if len(labels) != len(predictions):
            raise ValueError(
                f"got {len(predictions)} predictions but {len(labels)} labels"
            )
        aligned = list(labels)

    tp = fp = tn = fn = 0
    for pred, gold in zip(predictions, aligned):
        if gold not in (0, 1):
            raise ValueError(f"gold label must be binary, got {gold!r}")
        if pred.decision == 1:
            if gold == 1:
                tp += 1
            else:
                fp += 1
        else:
            if gold == 1:
                fn += 1
            else:
                tn += 1
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def compute_metrics(
    predictions: Sequence[MatchPrediction],
    labels: Mapping[str, int] | Sequence[int],
) -> Metrics:
    return metrics_from_counts(confusion_from_predictions(predictions, labels))


def standard_error(sigma: float, n: int, conf: float = 0.95) -> float:
    """Error term: t quantile at (1 + conf) / 2 with n - 1 dof, times sigma.

    Multiplies the quantile by sigma directly; there is deliberately no
    sqrt(n) divisor in this convention.
    """
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    if n < 2:
        raise ValueError("standard error needs at least 2 runs")
    return t_ppf((1.0 + conf) / 2.0, n - 1) * sigma


@dataclass
class EvalAggregate:
    """Mean metrics over repeated runs plus the F1 error term."""

    runs: list[Metrics]
    mean_f1: float
    mean_precision: float
    mean_recall: float
    mean_accuracy: float
    sigma: float
    std_err_f1: float
    conf: float
    n: int

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "conf": self.conf,
            "mean_f1": self.mean_f1,
            "mean_precision": self.mean_precision,
            "mean_recall": self.mean_recall,
            "mean_accuracy": self.mean_accuracy,
            "sigma": self.sigma,
            "std_err_f1": self.std_err_f1,
            "runs": [m.as_dict() for m in self.runs],
        }

    def format_row(self) -> str:
        """Percentage-point "mean(± err)" rendering of the F1 column."""
        return f"{100.0 * self.mean_f1:.2f}(±{100.0 * self.std_err_f1:.2f})"


def aggregate_runs(runs: Sequence[Metrics], conf: float = 0.95) -> EvalAggregate:
    """Aggregate per-run metrics: means, sample std of F1, t error term."""
    if len(runs) < 2:
        raise ValueError("aggregation needs at least 2 runs")
    if not 0.0 < conf < 1.0:
        raise ValueError(f"confidence level must lie inside (0, 1), got {conf}")
    f1s = [m.f1 for m in runs]
    sigma = statistics.stdev(f1s)  # n-1 denominator, pairs with the t quantile
    return EvalAggregate(
        runs=list(runs),
        mean_f1=statistics.fmean(f1s),
        mean_precision=statistics.fmean(m.precision for m in runs),
        mean_recall=statistics.fmean(m.recall for m in runs),
        mean_accuracy=statistics.fmean(m.accuracy for m in runs),
        sigma=sigma,
        std_err_f1=standard_error(sigma, len(runs), conf),
        conf=conf,
        n=len(runs),
    )
