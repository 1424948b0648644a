"""Triangular learning-rate schedule: linear warmup, linear decay.

The rate climbs linearly from the floor to the configured peak over the
first half of training and descends linearly back to the floor by the
final step. Warmup length is computed from the dataset size so that the
peak lands at half of the total optimizer steps (up to rounding):

    warmup_steps = (train_examples * epochs) // (2 * batch_size)
"""

from __future__ import annotations

from dataclasses import dataclass


def warmup_steps_for(train_examples: int, epochs: int, batch_size: int) -> int:
    return (train_examples * epochs) // (2 * batch_size)


@dataclass(frozen=True)
class TriangularSchedule:
    warmup_steps: int
    total_steps: int
    peak_lr: float
    floor_lr: float = 1e-7

    def __post_init__(self) -> None:
        if not 0 < self.warmup_steps < self.total_steps:
            raise ValueError(
                f"need 0 < warmup_steps < total_steps, got {self.warmup_steps}/{self.total_steps}"
            )
        if not 0 < self.floor_lr < self.peak_lr:
            raise ValueError("need 0 < floor_lr < peak_lr")

    def lr_at(self, step: int) -> float:
        """Learning rate applied at optimizer step `step` (1-based)."""
        if step <= self.warmup_steps:
            frac = step / self.warmup_steps
            return self.floor_lr + (self.peak_lr - self.floor_lr) * frac
        frac = (step - self.warmup_steps) / (self.total_steps - self.warmup_steps)
        return self.peak_lr - (self.peak_lr - self.floor_lr) * frac
