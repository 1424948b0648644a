"""Raw offer parsing, cleaning rules, and pair-file loading.

Raw dumps arrive as delimited text or JSON-lines (optionally gzipped)
with store-specific column names; a ColumnSchema maps them onto the
canonical offer fields. Cleaning applies three rules in order: drop
records missing seller/EAN/title, deduplicate on (EAN, seller) keeping
the first occurrence, then keep only EANs listed by at least two distinct
sellers. The loader for pair files accepts any JSON-lines file carrying
title_left / title_right / label and preserves unknown columns verbatim.
"""

from __future__ import annotations

import csv
import io
import json
import os
from collections import defaultdict
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, Mapping

from .errors import ConfigError, ParseError, PmkitError
from .fileio import iter_text_lines, open_bytes_reader
from .pairs import OfferPair, PairDataset, Split

CANONICAL_FIELDS = ("ean", "seller", "title", "category")


@dataclass(frozen=True)
class RawOfferRecord:
    """One pre-cleaning input row; field names already canonicalized."""

    source_row: int
    fields: Mapping[str, str]


@dataclass(frozen=True)
class Offer:
    id: str
    ean: str
    seller: str
    title: str
    category: str


@dataclass
class OfferTable:
    """Cleaned offers; ids unique, (ean, seller) unique when produced by clean_offers."""

    offers: list[Offer]
    category_filter: str | None = None

    def __len__(self) -> int:
        return len(self.offers)

    def categories(self) -> list[str]:
        return sorted({o.category for o in self.offers})

    def restrict_to_category(self, category: str) -> "OfferTable":
        kept = [o for o in self.offers if o.category == category]
        return OfferTable(offers=kept, category_filter=category)


@dataclass
class CleaningReport:
    """Per-rule drop counts; dropped + kept always equals the input size."""

    input_count: int
    dropped_missing: int
    dropped_duplicate: int
    dropped_single_store: int
    kept: int

    def as_dict(self) -> dict[str, int]:
        return {
            "input_count": self.input_count,
            "dropped_missing": self.dropped_missing,
            "dropped_duplicate": self.dropped_duplicate,
            "dropped_single_store": self.dropped_single_store,
            "kept": self.kept,
        }


@dataclass(frozen=True)
class ColumnSchema:
    """Maps source column names onto {ean, seller, title, category} (+ optional id)."""

    format: str
    columns: Mapping[str, str]
    delimiter: str = ","

    def __post_init__(self) -> None:
        if self.format not in ("csv", "jsonl"):
            raise ConfigError(f"unknown input format {self.format!r} (expected csv or jsonl)")
        missing = [f for f in CANONICAL_FIELDS if f not in self.columns]
        if missing:
            raise ConfigError(f"schema missing column mappings for: {', '.join(missing)}")
        unknown = [f for f in self.columns if f not in CANONICAL_FIELDS + ("id",)]
        if unknown:
            raise ConfigError(f"schema maps unknown canonical fields: {', '.join(unknown)}")

    @classmethod
    def from_dict(cls, cfg: Mapping) -> "ColumnSchema":
        try:
            return cls(
                format=cfg["format"],
                columns=dict(cfg["columns"]),
                delimiter=cfg.get("delimiter", ","),
            )
        except KeyError as exc:
            raise ConfigError(f"schema config missing key {exc.args[0]!r}") from exc

    def rename_map(self) -> dict[str, str]:
        """source column name -> canonical field name"""
        return {src: canon for canon, src in self.columns.items()}


def _stringify(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "1" if value else "0"
    return str(value)


def parse_offers(
    source: str | os.PathLike | bytes | BinaryIO, schema: ColumnSchema
) -> list[RawOfferRecord]:
    """Parse a raw dump into records, renaming columns per the schema.

    No rows are filtered; every input row becomes a record in file order
    (source_row is the 1-based data-row / line number). Mapped columns are
    renamed to their canonical names, all other columns pass through.
    """
    if schema.format == "csv":
        return _parse_delimited(source, schema)
    return _parse_jsonl(source, schema)


def _parse_delimited(source, schema: ColumnSchema) -> list[RawOfferRecord]:
    stream = open_bytes_reader(source)
    text = io.TextIOWrapper(stream, encoding="utf-8", newline="")
    reader = csv.reader(text, delimiter=schema.delimiter)
    try:
        header = next(reader)
    except StopIteration:
        return []
    rename = schema.rename_map()
    absent = [src for src in rename if src not in header]
    if absent:
        raise ConfigError(f"input header lacks mapped columns: {', '.join(absent)}")
    out_names = [rename.get(col, col) for col in header]
    if len(set(out_names)) != len(out_names):
        raise ConfigError(f"schema renaming collides with existing columns: {header}")

    records = []
    for row_idx, row in enumerate(reader, start=1):
        if len(row) != len(header):
            raise ParseError(
                f"expected {len(header)} fields, found {len(row)}", line=row_idx
            )
        fields = dict(zip(out_names, row))
        records.append(RawOfferRecord(source_row=row_idx, fields=fields))
    return records


def _parse_jsonl(source, schema: ColumnSchema) -> list[RawOfferRecord]:
    rename = schema.rename_map()
    records = []
    for line_no, line in enumerate(iter_text_lines(source), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=line_no) from exc
        if not isinstance(obj, dict):
            raise ParseError("expected a JSON object", line=line_no)
        fields = {rename.get(key, key): _stringify(value) for key, value in obj.items()}
        records.append(RawOfferRecord(source_row=line_no, fields=fields))
    return records


def clean_offers(
    records: Iterable[RawOfferRecord],
    category_map: Mapping[str, str] | None = None,
) -> tuple[OfferTable, CleaningReport]:
    """Apply the cleaning rules and unify category names.

    Rule order: missing-field drop, (ean, seller) dedupe keeping the first
    occurrence, then the two-store filter. Survivors keep input order.
    Category names are renamed through category_map; unmapped names pass
    through unchanged. Offers get the mapped id column when the schema
    provided one, otherwise a positional synthetic id.
    """
    category_map = dict(category_map or {})
    records = list(records)

    survivors: list[tuple[int, RawOfferRecord, str, str, str]] = []
    seen_keys: set[tuple[str, str]] = set()
    dropped_missing = 0
    dropped_duplicate = 0
    for position, rec in enumerate(records):
        ean = rec.fields.get("ean", "").strip()
        seller = rec.fields.get("seller", "").strip()
        title = rec.fields.get("title", "").strip()
        if not (ean and seller and title):
            dropped_missing += 1
            continue
        key = (ean, seller)
        if key in seen_keys:
            dropped_duplicate += 1
            continue
        seen_keys.add(key)
        survivors.append((position, rec, ean, seller, title))

    sellers_by_ean: dict[str, set[str]] = defaultdict(set)
    for _, _, ean, seller, _ in survivors:
        sellers_by_ean[ean].add(seller)

    offers: list[Offer] = []
    ids_seen: set[str] = set()
    dropped_single_store = 0
    for position, rec, ean, seller, title in survivors:
        if len(sellers_by_ean[ean]) < 2:
            dropped_single_store += 1
            continue
        category = rec.fields.get("category", "").strip()
        category = category_map.get(category, category)
        offer_id = rec.fields.get("id", "").strip() or f"o{position:06d}"
        if offer_id in ids_seen:
            raise PmkitError(f"duplicate offer id {offer_id!r} in input")
        ids_seen.add(offer_id)
        offers.append(Offer(id=offer_id, ean=ean, seller=seller, title=title, category=category))

    report = CleaningReport(
        input_count=len(records),
        dropped_missing=dropped_missing,
        dropped_duplicate=dropped_duplicate,
        dropped_single_store=dropped_single_store,
        kept=len(offers),
    )
    return OfferTable(offers=offers), report


_PAIR_FIELDS = {
    "pair_id",
    "id_left",
    "id_right",
    "title_left",
    "title_right",
    "category_left",
    "category_right",
    "ean_left",
    "ean_right",
    "label",
}


def _parse_label(value, line_no: int) -> int:
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int) and value in (0, 1):
        return value
    if isinstance(value, float) and value in (0.0, 1.0):
        return int(value)
    raise ParseError(f"label must be binary, found {value!r}", line=line_no)


def load_wdc_pairs(
    source: str | os.PathLike | bytes | BinaryIO, name: str = "pairs"
) -> PairDataset:
    """Load a suffixed-column JSON-lines pair file (optionally gzipped).

    Requires title_left, title_right, and a binary label on every line;
    every other column is retained, so a load / emit / load cycle is
    lossless. Missing pair ids are synthesized from the line number.
    """
    pairs = []
    for line_no, line in enumerate(iter_text_lines(source), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=line_no) from exc
        if not isinstance(obj, dict):
            raise ParseError("expected a JSON object", line=line_no)
        for required in ("title_left", "title_right", "label"):
            if required not in obj:
                raise ParseError(f"missing required field {required!r}", line=line_no)
        label = _parse_label(obj["label"], line_no)
        extras = {k: v for k, v in obj.items() if k not in _PAIR_FIELDS}
        pairs.append(
            OfferPair(
                pair_id=_stringify(obj.get("pair_id", line_no)),
                id_left=_stringify(obj.get("id_left", "")),
                title_left=_stringify(obj["title_left"]),
                id_right=_stringify(obj.get("id_right", "")),
                title_right=_stringify(obj["title_right"]),
                label=label,
                category_left=_stringify(obj.get("category_left", "")),
                category_right=_stringify(obj.get("category_right", "")),
                ean_left=_stringify(obj.get("ean_left", "")),
                ean_right=_stringify(obj.get("ean_right", "")),
                extras=extras,
            )
        )
    return PairDataset(name=name, split=Split.UNSPLIT, pairs=pairs)
