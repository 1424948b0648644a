"""Encoders for pair classification.

The default "tiny" model is a randomly initialized single-layer
transformer over the joint <cls> left <sep> right <sep> sequence, pooled
per segment and classified from the standard pair-feature combination
[u; v; |u - v|; u * v]. The zero-initialized head keeps initial logits at
exactly zero, so even the small weight displacements reachable at
fine-tuning learning rates produce decisive, sign-correct logits.

Any other model name is forwarded to the transformers hub loader, so the
full-scale protocol (multilingual BERT-family encoders) runs unchanged on
hardware that can fetch and fine-tune them.
"""

from __future__ import annotations

import torch
from torch import nn

from .data import MAX_SEQ_LEN, PAD

TINY_MODEL_NAME = "tiny"


class TinyPairClassifier(nn.Module):
    def __init__(
        self,
        vocab_size: int,
        dim: int = 64,
        heads: int = 4,
        feedforward: int = 128,
        layers: int = 1,
        max_len: int = MAX_SEQ_LEN,
    ):
        super().__init__()
        self.embedding = nn.Embedding(vocab_size, dim, padding_idx=PAD)
        self.positions = nn.Embedding(max_len, dim)
        encoder_layer = nn.TransformerEncoderLayer(
            dim, heads, feedforward, batch_first=True, dropout=0.0
        )
        self.encoder = nn.TransformerEncoder(encoder_layer, layers)
        self.feature_norm = nn.LayerNorm(4 * dim)
        self.head = nn.Linear(4 * dim, 2)
        nn.init.zeros_(self.head.weight)
        nn.init.zeros_(self.head.bias)

    def forward(self, input_ids: torch.Tensor, segment_ids: torch.Tensor) -> torch.Tensor:
        padding = input_ids.eq(PAD)
        hidden = self.embedding(input_ids) + self.positions(
            torch.arange(input_ids.size(1), device=input_ids.device)
        )
        hidden = self.encoder(hidden, src_key_padding_mask=padding)

        def segment_mean(mask: torch.Tensor) -> torch.Tensor:
            mask = mask & ~padding
            summed = hidden.masked_fill(~mask.unsqueeze(-1), 0.0).sum(dim=1)
            return summed / mask.sum(dim=1, keepdim=True).clamp(min=1)

        left = segment_mean(segment_ids.eq(0))
        right = segment_mean(segment_ids.eq(1))
        features = torch.cat([left, right, (left - right).abs(), left * right], dim=-1)
        return self.head(self.feature_norm(features))


class HubClassifier(nn.Module):
    """Sequence-pair classifier backed by a pre-trained hub encoder."""

    def __init__(self, model_name: str):
        super().__init__()
        try:
            from transformers import AutoModelForSequenceClassification, AutoTokenizer
        except ImportError as exc:  # pragma: no cover - optional dependency
            raise RuntimeError(
                f"model {model_name!r} needs the transformers package"
            ) from exc
        self.tokenizer = AutoTokenizer.from_pretrained(model_name)
        self.model = AutoModelForSequenceClassification.from_pretrained(
            model_name, num_labels=2
        )

    def encode_batch(self, lefts: list[str], rights: list[str]) -> dict:
        # The hub tokenizer inserts its own CLS/SEP equivalents.
        return dict(
            self.tokenizer(
                lefts, rights, truncation=True, max_length=MAX_SEQ_LEN,
                padding=True, return_tensors="pt",
            )
        )

    def forward(self, **inputs) -> torch.Tensor:
        return self.model(**inputs).logits


def build_model(model_name: str, vocab_size: int) -> nn.Module:
    if model_name == TINY_MODEL_NAME:
        return TinyPairClassifier(vocab_size)
    return HubClassifier(model_name)
