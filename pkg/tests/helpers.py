"""Shared test fixtures: random offer tables, reference oracles, dump files.

The oracles here are deliberately independent of the library code paths
they check: brute-force enumeration for negative mining, direct formula
evaluation for metrics, and a hand-rolled WDC-line writer for round-trips.
"""

from __future__ import annotations

import gzip
import json
import random
from pathlib import Path

from pmkit.ingest import Offer, OfferTable
from pmkit.textprep import jaccard, normalize_title, tokenize

WORDS = [
    "mleko", "woda", "sok", "cola", "zero", "light", "butelka", "puszka",
    "proszek", "kapsulki", "zel", "plyn", "mydlo", "szampon", "pasta",
    "krem", "chusteczki", "papier", "worki", "tabletki", "500ml", "1l",
    "2l", "250g", "open", "fresh", "gold", "max", "ultra", "classic",
]

SELLERS = ["sklep-a", "sklep-b", "sklep-c", "sklep-d", "sklep-e"]


def random_offer_table(
    seed: int,
    n_eans: int = 40,
    categories: tuple[str, ...] = ("drinks", "chemistry"),
    max_group: int = 4,
) -> OfferTable:
    """Random cleaned-style table: every EAN listed by >= 2 distinct sellers."""
    rng = random.Random(seed)
    offers = []
    counter = 0
    for e in range(n_eans):
        ean = f"590{e:010d}"
        category = rng.choice(categories)
        base = rng.sample(WORDS, rng.randint(3, 6))
        group_size = rng.randint(2, max_group)
        for seller in rng.sample(SELLERS, group_size):
            # Same product, store-specific title wording.
            words = list(base)
            if rng.random() < 0.5:
                words.append(rng.choice(WORDS))
            if rng.random() < 0.3 and len(words) > 2:
                words.pop(rng.randrange(len(words)))
            rng.shuffle(words)
            offers.append(
                Offer(
                    id=f"o{counter:05d}",
                    ean=ean,
                    seller=seller,
                    title=" ".join(words),
                    category=category,
                )
            )
            counter += 1
    return OfferTable(offers=offers)


def brute_force_negatives(table: OfferTable, k: int) -> set[tuple[str, str]]:
    """Reference top-k mining: full O(n^2) scan, no index, no shortcuts."""
    keys: set[tuple[str, str]] = set()
    by_category: dict[str, list[Offer]] = {}
    for offer in table.offers:
        by_category.setdefault(offer.category, []).append(offer)
    for offers in by_category.values():
        token_sets = {o.id: tokenize(normalize_title(o.title)) for o in offers}
        for offer in offers:
            ranked = []
            for other in offers:
                if other.id == offer.id or other.ean == offer.ean:
                    continue
                score = jaccard(token_sets[offer.id], token_sets[other.id])
                ranked.append((-score, other.id))
            ranked.sort()
            for _, other_id in ranked[:k]:
                keys.add((min(offer.id, other_id), max(offer.id, other_id)))
    return keys


def write_offer_dump_jsonl(
    path: Path,
    seed: int,
    n_eans: int = 250,
    categories: tuple[str, ...] = ("napoje", "chemia"),
    noise_rows: int = 30,
) -> None:
    """Raw store dump as gzip JSON-lines, with rows the cleaning rules drop.

    Includes rows with missing sellers/EANs/titles, duplicated
    (EAN, seller) listings, and single-store EANs, so a pipeline run
    exercises every cleaning rule.
    """
    rng = random.Random(seed)
    rows = []
    for e in range(n_eans):
        ean = f"590{e:010d}"
        category = rng.choice(categories)
        base = rng.sample(WORDS, rng.randint(3, 6))
        for seller in rng.sample(SELLERS, rng.randint(2, 3)):
            words = list(base)
            if rng.random() < 0.5:
                words.append(rng.choice(WORDS))
            rng.shuffle(words)
            rows.append(
                {
                    "kod_ean": ean,
                    "sklep": seller,
                    "nazwa": " ".join(words),
                    "kategoria": category,
                }
            )
            if rng.random() < 0.08:
                rows.append(dict(rows[-1]))  # duplicate (EAN, seller) listing
    for n in range(noise_rows):
        kind = n % 3
        row = {
            "kod_ean": f"599{n:010d}",
            "sklep": rng.choice(SELLERS),
            "nazwa": " ".join(rng.sample(WORDS, 3)),
            "kategoria": rng.choice(categories),
        }
        if kind == 0:
            row["sklep"] = ""
        elif kind == 1:
            row["nazwa"] = ""
        # kind == 2: valid row but its EAN exists in a single store only.
        rows.append(row)
    rng.shuffle(rows)
    with gzip.open(path, "wt", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


DUMP_SCHEMA = {
    "format": "jsonl",
    "columns": {
        "ean": "kod_ean",
        "seller": "sklep",
        "title": "nazwa",
        "category": "kategoria",
    },
}


def write_wdc_lines(path: Path, records: list[dict]) -> None:
    """Reference writer for pair files (independent of pmkit.pairs.emit_wdc)."""
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "wt", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def reference_split_serialized(text: str) -> tuple[str, str]:
    """Independent marker parser used as the serialization round-trip oracle."""
    import re

    m = re.fullmatch(r"\[CLS\] (.*) \[SEP\] (.*) \[SEP\]", text, flags=re.DOTALL)
    assert m, f"not in serialized form: {text!r}"
    return m.group(1), m.group(2)
