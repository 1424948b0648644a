"""Per-epoch checkpoint retention with a hard cap and best-model protection.

At most `limit` checkpoint files exist at any time. When saving a new one
would exceed the cap, the oldest checkpoint that is not the current best
(by validation F1) is deleted, so the best-scoring weights are always
recoverable. Ties on F1 keep the earlier epoch, matching plain argmax.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import torch


@dataclass
class CheckpointRecord:
    epoch: int
    f1: float
    path: Path


class CheckpointManager:
    def __init__(self, directory: str | Path, limit: int = 5):
        if limit < 1:
            raise ValueError("checkpoint limit must be >= 1")
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.limit = limit
        self.records: list[CheckpointRecord] = []

    @property
    def best(self) -> CheckpointRecord:
        if not self.records:
            raise ValueError("no checkpoints saved yet")
        best = self.records[0]
        for record in self.records[1:]:
            if record.f1 > best.f1:
                best = record
        return best

    def save(self, epoch: int, f1: float, payload: dict) -> CheckpointRecord:
        path = self.directory / f"epoch_{epoch:03d}.pt"
        torch.save(payload, path)
        record = CheckpointRecord(epoch=epoch, f1=f1, path=path)
        self.records.append(record)
        self._evict()
        return record

    def _evict(self) -> None:
        while len(self.records) > self.limit:
            best = self.best
            victim = next(r for r in self.records if r is not best)
            victim.path.unlink(missing_ok=True)
            self.records.remove(victim)

    def load_best(self) -> dict:
        return torch.load(self.best.path, weights_only=False)
