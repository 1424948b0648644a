"""Serialization of pairs into classifier input strings and 80/20 splits.

The exported line format is the contract consumed by the downstream
trainer: {"pair_id", "text", "label"} with text of the form
"[CLS] left title [SEP] right title [SEP]". The marker strings are
literal placeholders; a consumer maps them onto its tokenizer's own
special tokens.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import InsufficientDataError, PmkitError
from .pairs import OfferPair, PairDataset
from .rng import DeterministicRng

CLS_MARKER = "[CLS]"
SEP_MARKER = "[SEP]"

VAL_FRACTION = 0.20
DEFAULT_SEED = 42


@dataclass(frozen=True)
class SerializedPair:
    """One classifier input line: marker-delimited title pair plus label."""

    pair_id: str
    text: str
    label: int


@dataclass
class SplitManifest:
    """Train/validation membership by pair_id, in shuffled draw order."""

    train_ids: list[str]
    val_ids: list[str]
    seed: int
    val_fraction: float = VAL_FRACTION


def _check_title(title: str, side: str) -> str:
    if not title:
        raise PmkitError(f"{side} title is empty; cannot serialize pair")
    for marker in (CLS_MARKER, SEP_MARKER):
        if marker in title:
            raise PmkitError(
                f"{side} title contains the reserved marker {marker!r}; refusing to serialize"
            )
    return title


def serialize_pair(pair: OfferPair) -> SerializedPair:
    """"[CLS] {left} [SEP] {right} [SEP]" with the pair's label.

    Titles containing a literal marker substring are rejected rather than
    escaped, keeping the file format unambiguous for any consumer.
    """
    left = _check_title(pair.title_left, "left")
    right = _check_title(pair.title_right, "right")
    text = f"{CLS_MARKER} {left} {SEP_MARKER} {right} {SEP_MARKER}"
    return SerializedPair(pair_id=pair.pair_id, text=text, label=pair.label)


def parse_serialized(text: str) -> tuple[str, str]:
    """Recover (left title, right title) from a serialized line's text."""
    prefix = CLS_MARKER + " "
    suffix = " " + SEP_MARKER
    if not text.startswith(prefix) or not text.endswith(suffix):
        raise PmkitError(f"not a serialized pair: {text!r}")
    body = text[len(prefix) : -len(suffix)]
    left, sep, right = body.partition(f" {SEP_MARKER} ")
    if not sep:
        raise PmkitError(f"serialized pair lacks the middle separator: {text!r}")
    return left, right


def make_train_val_split(dataset: PairDataset, seed: int = DEFAULT_SEED) -> SplitManifest:
    """Seeded uniform shuffle; first 80% of pairs train, last 20% validation."""
    n = len(dataset.pairs)
    if n < 5:
        raise InsufficientDataError(
            f"dataset of {n} pairs is too small for an 80/20 split (need >= 5)"
        )
    ids = [p.pair_id for p in dataset.pairs]
    if len(set(ids)) != n:
        raise PmkitError("dataset has duplicate pair_ids; cannot build a split manifest")
    rng = DeterministicRng(seed)
    rng.shuffle(ids)
    n_val = round(n * VAL_FRACTION)
    return SplitManifest(train_ids=ids[: n - n_val], val_ids=ids[n - n_val :], seed=seed)


def export_for_training(
    dataset: PairDataset, manifest: SplitManifest, out_dir: str | os.PathLike
) -> dict[str, Path]:
    """Write train.jsonl, val.jsonl, and manifest.json under out_dir.

    Line order follows the manifest's shuffled id order. Returns the paths
    keyed by file role.
    """
    by_id = {p.pair_id: p for p in dataset.pairs}
    manifest_ids = set(manifest.train_ids) | set(manifest.val_ids)
    if manifest_ids != set(by_id):
        raise PmkitError("manifest ids do not cover the dataset exactly")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "train": out / "train.jsonl",
        "val": out / "val.jsonl",
        "manifest": out / "manifest.json",
    }

    def write_lines(path: Path, ids: list[str]) -> None:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                for pair_id in ids:
                    sp = serialize_pair(by_id[pair_id])
                    record = {"pair_id": sp.pair_id, "text": sp.text, "label": sp.label}
                    fh.write(json.dumps(record, ensure_ascii=False))
                    fh.write("\n")
        except OSError as exc:
            raise PmkitError(f"cannot write {path}: {exc}") from exc

    write_lines(paths["train"], manifest.train_ids)
    write_lines(paths["val"], manifest.val_ids)
    meta = {
        "seed": manifest.seed,
        "val_fraction": manifest.val_fraction,
        "train_count": len(manifest.train_ids),
        "val_count": len(manifest.val_ids),
    }
    try:
        paths["manifest"].write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise PmkitError(f"cannot write {paths['manifest']}: {exc}") from exc
    return paths
