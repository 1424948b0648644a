"""Classical baseline matchers: TF-IDF cosine and token Jaccard.

Both scorers work on normalized titles and emit a similarity in [0, 1];
a threshold turns the score into a binary decision. The TF-IDF weighting
is raw term frequency times smoothed idf, ln((1 + N) / (1 + df)) + 1,
with L2-normalized vectors, so identical titles always score 1. The
decision threshold is tuned by maximizing F1 over observed scores.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .textprep import jaccard, normalize_title, tokenize

if TYPE_CHECKING:
    from .pairs import OfferPair


@dataclass
class TfidfModel:
    """Vocabulary and idf weights fitted on a title corpus."""

    vocabulary: dict[str, int]
    idf: np.ndarray
    doc_count: int

    def weight_vector(self, title: str) -> dict[int, float]:
        """Sparse L2-normalized tf-idf vector; OOV tokens contribute nothing."""
        counts = Counter(normalize_title(title).split())
        weights = {}
        for token, count in counts.items():
            index = self.vocabulary.get(token)
            if index is not None:
                weights[index] = count * float(self.idf[index])
        norm = math.sqrt(sum(w * w for w in weights.values()))
        if norm == 0.0:
            return {}
        return {i: w / norm for i, w in weights.items()}


def fit_tfidf(corpus: Iterable[str]) -> TfidfModel:
    """Fit vocabulary and idf on normalized titles.

    idf(t) = ln((1 + N) / (1 + df(t))) + 1 where N is the corpus size and
    df(t) the number of titles containing t. Vocabulary indices follow
    lexicographic token order, so refitting the same corpus is bit-stable.
    """
    doc_tokens = [tokenize(normalize_title(title)) for title in corpus]
    if not doc_tokens:
        raise ValueError("cannot fit tf-idf on an empty corpus")
    df = Counter()
    for tokens in doc_tokens:
        df.update(tokens)
    vocabulary = {token: i for i, token in enumerate(sorted(df))}
    n = len(doc_tokens)
    idf = np.empty(len(vocabulary))
    for token, index in vocabulary.items():
        idf[index] = math.log((1.0 + n) / (1.0 + df[token])) + 1.0
    return TfidfModel(vocabulary=vocabulary, idf=idf, doc_count=n)


class Scorer(str, Enum):
    TFIDF_COSINE = "tfidf"
    JACCARD = "jaccard"


@dataclass(frozen=True)
class MatchPrediction:
    pair_id: str
    score: float
    decision: int


@dataclass
class ThresholdMatcher:
    """A similarity scorer plus the decision threshold (score >= threshold -> 1)."""

    scorer: Scorer = Scorer.TFIDF_COSINE
    threshold: float = 0.5
    model: TfidfModel | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must lie in [0, 1], got {self.threshold}")

    def score_titles(self, title_left: str, title_right: str) -> float:
        """Similarity of two raw titles (normalization applied here)."""
        if self.scorer is Scorer.JACCARD:
            left = tokenize(normalize_title(title_left))
            right = tokenize(normalize_title(title_right))
            return jaccard(left, right)
        if self.model is None:
            raise ValueError("tf-idf scoring requires a fitted model")
        left_vec = self.model.weight_vector(title_left)
        right_vec = self.model.weight_vector(title_right)
        if len(right_vec) < len(left_vec):
            left_vec, right_vec = right_vec, left_vec
        dot = sum(w * right_vec.get(i, 0.0) for i, w in left_vec.items())
        # Vectors are unit length; clamp floating drift back into [0, 1].
        return min(1.0, max(0.0, dot))


def score_pair(matcher: ThresholdMatcher, pair: "OfferPair") -> MatchPrediction:
    score = matcher.score_titles(pair.title_left, pair.title_right)
    return MatchPrediction(
        pair_id=pair.pair_id, score=score, decision=int(score >= matcher.threshold)
    )


def tune_threshold(scores: Sequence[tuple[float, int]]) -> float:
    """Threshold maximizing F1 over the candidates {observed scores} ∪ {0}.

    Requires at least one positive and one negative label. Ties in F1 are
    broken toward the larger threshold (the stricter matcher).
    """
    labels = {label for _, label in scores}
    if not {0, 1} <= labels:
        raise ValueError("threshold tuning needs both positive and negative examples")
    if labels - {0, 1}:
        raise ValueError(f"labels must be binary, found {sorted(labels - {0, 1})}")

    values = np.array([s for s, _ in scores], dtype=float)
    gold = np.array([l for _, l in scores], dtype=int)
    order = np.argsort(-values, kind="stable")
    values = values[order]
    gold = gold[order]
    total_pos = int(gold.sum())
    # tp_at[i] = true positives when everything with score >= values[i] fires.
    tp_cum = np.cumsum(gold)

    best_f1 = -1.0
    best_threshold = 0.0
    candidates: list[tuple[float, int]] = [(0.0, int((values >= 0.0).sum()))]
    for i in range(len(values)):
        if i + 1 < len(values) and values[i + 1] == values[i]:
            continue  # same cut as the next index; keep the full tie group
        candidates.append((float(values[i]), i + 1))
    for threshold, n_fired in sorted(candidates):
        tp = int(tp_cum[n_fired - 1]) if n_fired else 0
        fp = n_fired - tp
        fn = total_pos - tp
        f1 = 2.0 * tp / (2.0 * tp + fp + fn) if tp else 0.0
        if f1 >= best_f1:
            best_f1 = f1
            best_threshold = threshold
    return best_threshold
