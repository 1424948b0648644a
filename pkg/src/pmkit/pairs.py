"""Pair construction: EAN positives, Jaccard hard negatives, nested splits.

Stage overview: a cleaned offer table yields (1) positive pairs, all
same-EAN combinations; (2) negative pairs, mined per offer as the k most
title-similar cross-EAN offers in the same category; (3) a test split of
fixed size drawn first, then nested train splits (small ⊂ medium ⊂ large)
with exactly three negatives per positive. Every sampling decision flows
through one seeded DeterministicRng, so identical inputs and seed produce
byte-identical output files.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import TYPE_CHECKING, Iterable, Mapping

from .errors import InsufficientDataError
from .fileio import write_gzip_lines
from .rng import DeterministicRng
from .textprep import jaccard, normalize_title, tokenize

if TYPE_CHECKING:
    import os

    from .ingest import Offer, OfferTable


class Split(str, Enum):
    TEST = "test"
    TRAIN_SMALL = "train_small"
    TRAIN_MEDIUM = "train_medium"
    TRAIN_LARGE = "train_large"
    UNSPLIT = "unsplit"


@dataclass
class OfferPair:
    """One candidate match: two offers plus a binary label (1 = same product).

    Pairs built by this module are canonically oriented (id_left < id_right)
    and labeled by EAN identity. Pairs loaded from external files keep the
    file's orientation and labels; fields absent from the file stay "".
    Unrecognized file attributes ride along in ``extras``.
    """

    pair_id: str
    id_left: str
    title_left: str
    id_right: str
    title_right: str
    label: int
    category_left: str = ""
    category_right: str = ""
    ean_left: str = ""
    ean_right: str = ""
    extras: dict = field(default_factory=dict)

    @property
    def category(self) -> str:
        return self.category_left

    def key(self) -> tuple[str, str]:
        """Canonical unordered identity of the pair."""
        if self.id_left <= self.id_right:
            return (self.id_left, self.id_right)
        return (self.id_right, self.id_left)


@dataclass
class PairDataset:
    """Named, ordered collection of offer pairs with split metadata."""

    name: str
    split: Split
    pairs: list[OfferPair]

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def n_positive(self) -> int:
        return sum(1 for p in self.pairs if p.label == 1)

    @property
    def n_negative(self) -> int:
        return len(self.pairs) - self.n_positive

    def pair_keys(self) -> set[tuple[str, str]]:
        return {p.key() for p in self.pairs}


@dataclass(frozen=True)
class SplitPlan:
    """Sampling parameters for test and nested train splits."""

    seed: int = 42
    k_negatives: int = 20
    size_ratios: tuple[int, int, int] = (1, 3, 7)
    test_pos: int = 300
    test_neg: int = 800
    neg_per_pos: int = 3

    def __post_init__(self) -> None:
        small, medium, large = self.size_ratios
        if not (0 < small <= medium <= large):
            raise ValueError(f"size ratios must be positive and ascending: {self.size_ratios}")
        if self.k_negatives < 1:
            raise ValueError("k_negatives must be >= 1")
        if min(self.test_pos, self.test_neg, self.neg_per_pos) < 0:
            raise ValueError("test sizes and negative ratio must be non-negative")


def _make_pair(left: "Offer", right: "Offer", label: int) -> OfferPair:
    if right.id < left.id:
        left, right = right, left
    return OfferPair(
        pair_id=f"{left.id}#{right.id}",
        id_left=left.id,
        title_left=left.title,
        id_right=right.id,
        title_right=right.title,
        label=label,
        category_left=left.category,
        category_right=right.category,
        ean_left=left.ean,
        ean_right=right.ean,
    )


def build_positive_pairs(table: "OfferTable") -> list[OfferPair]:
    """All same-EAN offer combinations, labeled 1.

    Each EAN group of size m contributes all C(m, 2) canonically oriented
    pairs. Output is sorted by (ean, id_left, id_right).
    """
    groups: dict[str, list[Offer]] = defaultdict(list)
    for offer in table.offers:
        groups[offer.ean].append(offer)
    pairs = []
    for ean in sorted(groups):
        members = sorted(groups[ean], key=lambda o: o.id)
        for left, right in combinations(members, 2):
            pairs.append(_make_pair(left, right, label=1))
    return pairs


def mine_negative_pairs(table: "OfferTable", k: int = 20) -> list[OfferPair]:
    """Per-offer top-k title-Jaccard cross-EAN pairs, labeled 0.

    For every offer, all other offers in the same category with a different
    EAN are ranked by Jaccard similarity of normalized title token sets
    (ties broken by partner id ascending) and the k best are kept. The union
    over all offers is canonicalized, deduplicated, and returned sorted by
    (id_left, id_right). An offer with fewer than k candidates contributes
    all of them; zero-similarity candidates fill out the k when needed.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    by_category: dict[str, list[Offer]] = defaultdict(list)
    for offer in table.offers:
        by_category[offer.category].append(offer)

    selected: dict[tuple[str, str], OfferPair] = {}
    for offers in by_category.values():
        offers = sorted(offers, key=lambda o: o.id)
        tokens = [tokenize(normalize_title(o.title)) for o in offers]
        # Inverted token index: only token-sharing candidates can score > 0.
        postings: dict[str, list[int]] = defaultdict(list)
        for i, toks in enumerate(tokens):
            for tok in toks:
                postings[tok].append(i)

        for i, offer in enumerate(offers):
            overlap: dict[int, int] = defaultdict(int)
            for tok in tokens[i]:
                for j in postings[tok]:
                    overlap[j] += 1
            scored = []
            for j, inter in overlap.items():
                other = offers[j]
                if other.ean == offer.ean:
                    continue
                score = inter / (len(tokens[i]) + len(tokens[j]) - inter)
                scored.append((-score, other.id, j))
            scored.sort()
            top = scored[:k]
            if len(top) < k:
                # Fill with zero-similarity partners, smallest id first.
                # offers is id-sorted, so scanning in order preserves ties.
                seen = {j for (_, _, j) in top}
                for j, other in enumerate(offers):
                    if len(top) >= k:
                        break
                    if j == i or j in seen or other.ean == offer.ean:
                        continue
                    top.append((0.0, other.id, j))
            for _, _, j in top:
                pair = _make_pair(offer, offers[j], label=0)
                selected.setdefault(pair.key(), pair)

    return [selected[key] for key in sorted(selected)]


def _require_pool(kind: str, have: int, need: int) -> None:
    if have < need:
        raise InsufficientDataError(
            f"{kind} pair pool too small: have {have}, need at least {need}"
        )


def _check_unique(kind: str, pairs: Iterable[OfferPair]) -> None:
    seen: set[tuple[str, str]] = set()
    for pair in pairs:
        key = pair.key()
        if key in seen:
            raise ValueError(f"duplicate {kind} pair {key}")
        seen.add(key)


def build_splits(
    positives: list[OfferPair],
    negatives: list[OfferPair],
    plan: SplitPlan,
    name: str = "dataset",
) -> dict[Split, PairDataset]:
    """Draw the test split, then nested train splits, from the pair pools.

    The test split (plan.test_pos positives + plan.test_neg negatives) is
    sampled first and removed from the pools. Remaining pairs feed nested
    train splits sized u·ratio positives each (u maximal for the pools),
    with exactly plan.neg_per_pos negatives per positive. All draws come
    from one splitmix64 stream seeded by plan.seed; a fixed draw order
    (test pos, test neg, train pos, train neg, per-split shuffles) makes
    the result fully deterministic.
    """
    _check_unique("positive", positives)
    _check_unique("negative", negatives)
    _require_pool("positive", len(positives), plan.test_pos)
    _require_pool("negative", len(negatives), plan.test_neg)

    rng = DeterministicRng(plan.seed)
    test_pos = rng.sample(positives, plan.test_pos)
    test_neg = rng.sample(negatives, plan.test_neg)
    taken = {p.key() for p in test_pos} | {p.key() for p in test_neg}
    pos_pool = [p for p in positives if p.key() not in taken]
    neg_pool = [p for p in negatives if p.key() not in taken]

    _, _, r_large = plan.size_ratios
    unit = min(len(pos_pool) // r_large, len(neg_pool) // (plan.neg_per_pos * r_large))
    if unit < 1:
        _require_pool("positive", len(pos_pool), r_large)
        _require_pool("negative", len(neg_pool), plan.neg_per_pos * r_large)

    train_pos = rng.sample(pos_pool, unit * r_large)
    train_neg = rng.sample(neg_pool, unit * plan.neg_per_pos * r_large)

    datasets: dict[Split, PairDataset] = {}

    def assemble(split: Split, pos: list[OfferPair], neg: list[OfferPair]) -> None:
        combined = pos + neg
        rng.shuffle(combined)
        datasets[split] = PairDataset(name=f"{name}-{split.value}", split=split, pairs=combined)

    assemble(Split.TEST, test_pos, test_neg)
    for split, ratio in zip(
        (Split.TRAIN_SMALL, Split.TRAIN_MEDIUM, Split.TRAIN_LARGE), plan.size_ratios
    ):
        n_pos = unit * ratio
        # Prefix slices of one draw give the nesting small ⊂ medium ⊂ large.
        assemble(split, train_pos[:n_pos], train_neg[: plan.neg_per_pos * n_pos])
    return datasets


_WDC_FIELDS = (
    "pair_id",
    "label",
    "id_left",
    "title_left",
    "category_left",
    "id_right",
    "title_right",
    "category_right",
)


def pair_to_wdc_record(pair: OfferPair) -> dict:
    """JSON-ready mapping in the suffixed-column file layout."""
    record: dict = {
        "pair_id": pair.pair_id,
        "label": pair.label,
        "id_left": pair.id_left,
        "title_left": pair.title_left,
        "category_left": pair.category_left,
        "id_right": pair.id_right,
        "title_right": pair.title_right,
        "category_right": pair.category_right,
    }
    # EANs are supplementary columns: written when known so that a reload
    # can re-derive labels, omitted for foreign pairs that never had them.
    if pair.ean_left:
        record["ean_left"] = pair.ean_left
    if pair.ean_right:
        record["ean_right"] = pair.ean_right
    record.update(pair.extras)
    return record


def emit_wdc(dataset: PairDataset, path: "str | os.PathLike") -> None:
    """Write the dataset as gzip JSON-lines with _left/_right suffixed columns."""
    lines = (json.dumps(pair_to_wdc_record(p), ensure_ascii=False) for p in dataset.pairs)
    write_gzip_lines(path, lines)


def split_size_summary(datasets: Mapping[Split, PairDataset]) -> dict[str, dict[str, int]]:
    """Per-split positive/negative/total counts, JSON-ready."""
    return {
        split.value: {
            "positive": ds.n_positive,
            "negative": ds.n_negative,
            "total": len(ds),
        }
        for split, ds in datasets.items()
    }
