#!/usr/bin/env python3
"""Walk through dataset construction: raw dump -> cleaned table -> splits.

Generates a small synthetic two-store offer dump, then runs every pipeline
stage at library level, printing what each stage did. Output files land in
demo_out/build/.
"""

import gzip
import json
import random
from pathlib import Path

from pmkit import (
    ColumnSchema,
    SplitPlan,
    build_positive_pairs,
    build_splits,
    clean_offers,
    emit_wdc,
    mine_negative_pairs,
    parse_offers,
)

OUT = Path(__file__).parent / "demo_out" / "build"

WORDS = (
    "woda mineralna gazowana sok pomarańczowy cola zero proszek do prania "
    "płyn naczyń mydło szampon pasta 500ml 1l 2l fresh gold max"
).split()


def make_dump(path: Path, n_products: int = 160) -> None:
    """Synthetic dump: each product listed by 2-3 stores, plus junk rows."""
    rng = random.Random(7)
    rows = []
    for i in range(n_products):
        base = rng.sample(WORDS, 4)
        category = "napoje" if i % 2 else "chemia"
        for store in rng.sample(["sklep-a", "sklep-b", "sklep-c"], rng.randint(2, 3)):
            words = base + ([rng.choice(WORDS)] if rng.random() < 0.5 else [])
            rng.shuffle(words)
            rows.append(
                {"ean": f"590{i:06d}", "store": store,
                 "name": " ".join(words), "cat": category}
            )
    rows.append({"ean": "", "store": "sklep-a", "name": "bez eanu", "cat": "chemia"})
    rows.append({"ean": "5901", "store": "", "name": "bez sklepu", "cat": "chemia"})
    rows.append(dict(rows[0]))  # duplicated listing
    rng.shuffle(rows)
    with gzip.open(path, "wt", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    print(f"wrote {len(rows)} raw rows -> {path}")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    dump = OUT / "offers.json.gz"
    make_dump(dump)

    schema = ColumnSchema(
        format="jsonl",
        columns={"ean": "ean", "seller": "store", "title": "name", "category": "cat"},
    )
    records = parse_offers(dump, schema)
    print(f"parsed {len(records)} records")

    table, report = clean_offers(records, category_map={"napoje": "drinks", "chemia": "chemistry"})
    print("cleaning report:", json.dumps(report.as_dict()))

    positives = build_positive_pairs(table)
    negatives = mine_negative_pairs(table, k=20)
    print(f"{len(positives)} positive pairs (same EAN), "
          f"{len(negatives)} hard negatives (top-20 title Jaccard)")

    plan = SplitPlan(seed=42, test_pos=30, test_neg=90)
    datasets = build_splits(positives, negatives, plan, name="demo")
    for split, ds in datasets.items():
        path = OUT / f"{split.value}.json.gz"
        emit_wdc(ds, path)
        print(f"{split.value}: {ds.n_positive} pos / {ds.n_negative} neg -> {path}")


if __name__ == "__main__":
    main()
