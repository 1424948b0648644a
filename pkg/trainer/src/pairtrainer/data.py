"""Reading the exported pair files and turning them into model inputs.

The input contract is JSON-lines with {"pair_id", "text", "label"} where
text has the form "[CLS] left title [SEP] right title [SEP]". The literal
marker strings are placeholders from the exporter: they are stripped here
and replaced by this package's own special token ids, never fed to the
model as words.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

import torch

_SERIALIZED = re.compile(r"\[CLS\] (.*) \[SEP\] (.*) \[SEP\]", flags=re.DOTALL)

PAD, CLS, SEP, UNK = 0, 1, 2, 3
SPECIAL_TOKENS = {"<pad>": PAD, "<cls>": CLS, "<sep>": SEP, "<unk>": UNK}

MAX_SEQ_LEN = 128


class PairFileError(ValueError):
    """Malformed exported pair file; message carries the line number."""


@dataclass(frozen=True)
class PairExample:
    pair_id: str
    left: str
    right: str
    label: int


def split_marked_text(text: str) -> tuple[str, str]:
    m = _SERIALIZED.fullmatch(text)
    if not m:
        raise ValueError(f"text is not in marker form: {text!r}")
    return m.group(1), m.group(2)


def read_pair_file(path: str | Path) -> list[PairExample]:
    """Load examples in file order; any malformed line fails with its number."""
    examples = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise PairFileError(f"{path}: line {line_no}: invalid JSON: {exc.msg}") from exc
            try:
                left, right = split_marked_text(obj["text"])
                label = obj["label"]
                pair_id = str(obj["pair_id"])
            except (KeyError, ValueError, TypeError) as exc:
                raise PairFileError(f"{path}: line {line_no}: {exc}") from exc
            if label not in (0, 1):
                raise PairFileError(f"{path}: line {line_no}: label must be 0 or 1, got {label!r}")
            examples.append(PairExample(pair_id=pair_id, left=left, right=right, label=label))
    return examples


def _tokens(text: str) -> list[str]:
    return text.lower().split()


class Vocab:
    """Whitespace-token vocabulary built from the training texts."""

    def __init__(self, token_to_id: dict[str, int]):
        self.token_to_id = token_to_id

    def __len__(self) -> int:
        return len(self.token_to_id)

    @classmethod
    def build(cls, examples: list[PairExample]) -> "Vocab":
        mapping = dict(SPECIAL_TOKENS)
        for ex in examples:
            for token in _tokens(ex.left) + _tokens(ex.right):
                mapping.setdefault(token, len(mapping))
        return cls(mapping)

    def lookup(self, token: str) -> int:
        return self.token_to_id.get(token, UNK)


def encode_example(
    vocab: Vocab, left: str, right: str, max_len: int = MAX_SEQ_LEN
) -> tuple[list[int], list[int]]:
    """Token ids and segment ids: <cls> left <sep> right <sep>.

    When the sequence exceeds max_len, the longer side loses tokens from
    its end until the pair fits.
    """
    left_toks = _tokens(left)
    right_toks = _tokens(right)
    budget = max_len - 3  # specials
    while len(left_toks) + len(right_toks) > budget:
        if len(left_toks) >= len(right_toks):
            left_toks.pop()
        else:
            right_toks.pop()
    ids = [CLS] + [vocab.lookup(t) for t in left_toks] + [SEP]
    segments = [0] * len(ids)
    ids += [vocab.lookup(t) for t in right_toks] + [SEP]
    segments += [1] * (len(right_toks) + 1)
    return ids, segments


def collate(
    vocab: Vocab, examples: list[PairExample], max_len: int = MAX_SEQ_LEN
) -> dict[str, torch.Tensor]:
    """Pad a batch to its longest sequence; returns model kwargs plus labels."""
    encoded = [encode_example(vocab, ex.left, ex.right, max_len) for ex in examples]
    width = max(len(ids) for ids, _ in encoded)
    input_ids = torch.full((len(encoded), width), PAD, dtype=torch.long)
    segment_ids = torch.zeros((len(encoded), width), dtype=torch.long)
    for row, (ids, segments) in enumerate(encoded):
        input_ids[row, : len(ids)] = torch.tensor(ids)
        segment_ids[row, : len(segments)] = torch.tensor(segments)
    labels = torch.tensor([ex.label for ex in examples], dtype=torch.long)
    return {"input_ids": input_ids, "segment_ids": segment_ids, "labels": labels}


def iter_batches(
    vocab: Vocab,
    examples: list[PairExample],
    batch_size: int,
    max_len: int = MAX_SEQ_LEN,
):
    for start in range(0, len(examples), batch_size):
        yield collate(vocab, examples[start : start + batch_size], max_len)
