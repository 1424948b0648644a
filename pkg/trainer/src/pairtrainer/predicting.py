"""Scoring exported pair files with a trained checkpoint.

Output is JSON-lines {"pair_id", "score", "decision"}: score is the
softmax probability of the match class, decision the argmax over the two
classes. The format matches what the evaluation tooling on the dataset
side consumes, so prediction files flow straight into aggregation.
"""

from __future__ import annotations

import json
from pathlib import Path

import torch

from .data import read_pair_file
from .training import _model_inputs, load_checkpoint


def predict(
    checkpoint_path: str | Path,
    pairs_path: str | Path,
    output_path: str | Path,
) -> int:
    """Score every pair in file order; returns the number of lines written."""
    model, vocab, config = load_checkpoint(checkpoint_path)
    examples = read_pair_file(pairs_path)

    out = Path(output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    written = 0
    with open(out, "w", encoding="utf-8") as fh:
        with torch.no_grad():
            for start in range(0, len(examples), config.eval_batch_size):
                batch = examples[start : start + config.eval_batch_size]
                inputs, _ = _model_inputs(model, vocab, batch, config.max_seq_len)
                logits = model(**inputs)
                scores = torch.softmax(logits, dim=1)[:, 1]
                decisions = logits.argmax(dim=1)
                for ex, score, decision in zip(batch, scores, decisions):
                    fh.write(
                        json.dumps(
                            {
                                "pair_id": ex.pair_id,
                                "score": float(score),
                                "decision": int(decision),
                            }
                        )
                        + "\n"
                    )
                    written += 1
    return written
