import gzip
import io
import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pmkit.errors import ConfigError, ParseError
from pmkit.ingest import (
    ColumnSchema,
    Offer,
    RawOfferRecord,
    clean_offers,
    load_wdc_pairs,
    parse_offers,
)
from pmkit.pairs import emit_wdc

from helpers import write_wdc_lines

IDENTITY_CSV_SCHEMA = ColumnSchema(
    format="csv",
    columns={"ean": "ean", "seller": "seller", "title": "title", "category": "category"},
)


def record(ean="59012345", seller="shop-a", title="some product", category="drinks", **extra):
    fields = {"ean": ean, "seller": seller, "title": title, "category": category}
    fields.update(extra)
    return RawOfferRecord(source_row=extra.pop("source_row", 0), fields=fields)


class TestParseOffersCsv:
    def test_three_rows_pass_through_in_order(self):
        data = (
            b"ean,seller,title,category\n"
            b"1,a,Alpha,chem\n"
            b"2,b,Beta,chem\n"
            b"3,c,Gamma,drinks\n"
        )
        records = parse_offers(data, IDENTITY_CSV_SCHEMA)
        assert [r.fields["title"] for r in records] == ["Alpha", "Beta", "Gamma"]
        assert [r.source_row for r in records] == [1, 2, 3]

    def test_quoted_delimiter_preserved(self):
        # Hand-written reference parse of the fixture: the quoted comma is
        # part of the title, so the row still has four fields.
        data = b'ean,seller,title,category\n77,shop,"Cola Zero, 0.5l",drinks\n'
        records = parse_offers(data, IDENTITY_CSV_SCHEMA)
        assert len(records) == 1
        assert records[0].fields == {
            "ean": "77",
            "seller": "shop",
            "title": "Cola Zero, 0.5l",
            "category": "drinks",
        }

    def test_empty_file(self):
        assert parse_offers(b"", IDENTITY_CSV_SCHEMA) == []

    def test_header_only(self):
        assert parse_offers(b"ean,seller,title,category\n", IDENTITY_CSV_SCHEMA) == []

    def test_renames_source_columns(self):
        schema = ColumnSchema(
            format="csv",
            columns={"ean": "EAN_CODE", "seller": "shop", "title": "name", "category": "cat"},
            delimiter=";",
        )
        data = b"EAN_CODE;shop;name;cat;price\n11;a;Thing;chem;9.99\n"
        records = parse_offers(data, schema)
        assert records[0].fields["ean"] == "11"
        assert records[0].fields["title"] == "Thing"
        assert records[0].fields["price"] == "9.99"  # unmapped column kept

    def test_malformed_row_reports_index(self):
        data = b"ean,seller,title,category\n1,a,ok,chem\n2,b,broken\n"
        with pytest.raises(ParseError) as err:
            parse_offers(data, IDENTITY_CSV_SCHEMA)
        assert err.value.line == 2

    def test_unmappable_schema_is_config_error(self):
        schema = ColumnSchema(
            format="csv",
            columns={"ean": "missing_col", "seller": "seller", "title": "title", "category": "category"},
        )
        with pytest.raises(ConfigError):
            parse_offers(b"ean,seller,title,category\n1,a,t,c\n", schema)

    def test_rename_collision_rejected(self):
        schema = ColumnSchema(
            format="csv",
            columns={"ean": "code", "seller": "seller", "title": "title", "category": "category"},
        )
        # Header already has an "ean" column; renaming "code" -> "ean" collides.
        data = b"code,ean,seller,title,category\n1,2,a,t,c\n"
        with pytest.raises(ConfigError):
            parse_offers(data, schema)


JSONL_SCHEMA = ColumnSchema(
    format="jsonl",
    columns={"ean": "kod", "seller": "sklep", "title": "nazwa", "category": "kat"},
)


class TestParseOffersJsonl:
    def test_basic_and_gzip(self):
        row = {"kod": 590123, "sklep": "a", "nazwa": "Mleko", "kat": "nabial"}
        raw = (json.dumps(row) + "\n").encode()
        for payload in (raw, gzip.compress(raw)):
            records = parse_offers(payload, JSONL_SCHEMA)
            assert len(records) == 1
            assert records[0].fields["ean"] == "590123"  # numbers stringified
            assert records[0].fields["title"] == "Mleko"

    def test_invalid_json_reports_line(self):
        data = b'{"kod": 1, "sklep": "a", "nazwa": "x", "kat": "c"}\nnot-json\n'
        with pytest.raises(ParseError) as err:
            parse_offers(data, JSONL_SCHEMA)
        assert err.value.line == 2

    def test_non_object_line_rejected(self):
        with pytest.raises(ParseError):
            parse_offers(b"[1, 2, 3]\n", JSONL_SCHEMA)

    def test_missing_keys_become_empty(self):
        records = parse_offers(b'{"nazwa": "tytul"}\n', JSONL_SCHEMA)
        assert records[0].fields.get("ean", "") == ""


class TestSchemaValidation:
    def test_missing_mapping_listed(self):
        with pytest.raises(ConfigError, match="seller"):
            ColumnSchema(format="csv", columns={"ean": "e", "title": "t", "category": "c"})

    def test_unknown_format(self):
        with pytest.raises(ConfigError):
            ColumnSchema(format="xml", columns={"ean": "e", "seller": "s", "title": "t", "category": "c"})

    def test_from_dict_roundtrip(self):
        cfg = {"format": "csv", "delimiter": ";", "columns": {"ean": "e", "seller": "s", "title": "t", "category": "c"}}
        schema = ColumnSchema.from_dict(cfg)
        assert schema.delimiter == ";"

    def test_from_dict_missing_key(self):
        with pytest.raises(ConfigError):
            ColumnSchema.from_dict({"columns": {}})


class TestCleanOffers:
    def test_missing_seller_dropped(self):
        table, report = clean_offers([record(seller="")])
        assert len(table) == 0
        assert report.dropped_missing == 1

    def test_missing_ean_or_title_dropped(self):
        _, report = clean_offers([record(ean=""), record(title="  ")])
        assert report.dropped_missing == 2

    def test_duplicate_ean_seller_keeps_first(self):
        first = record(title="first listing")
        second = record(title="second listing")
        other_store = record(seller="shop-b", title="other store")
        table, report = clean_offers([first, second, other_store])
        assert report.dropped_duplicate == 1
        assert [o.title for o in table.offers] == ["first listing", "other store"]

    def test_single_store_ean_dropped(self):
        lonely = record(ean="111", seller="only-shop")
        paired_a = record(ean="222", seller="shop-a")
        paired_b = record(ean="222", seller="shop-b")
        table, report = clean_offers([lonely, paired_a, paired_b])
        assert report.dropped_single_store == 1
        assert {o.ean for o in table.offers} == {"222"}

    def test_category_map_applied_unknown_passthrough(self):
        a = record(ean="1", seller="s1", category="napoje")
        b = record(ean="1", seller="s2", category="soft drinks")
        table, _ = clean_offers([a, b], category_map={"napoje": "drinks"})
        assert sorted(o.category for o in table.offers) == ["drinks", "soft drinks"]

    def test_explicit_id_column_used(self):
        a = record(ean="1", seller="s1", id="abc")
        b = record(ean="1", seller="s2")
        table, _ = clean_offers([a, b])
        assert table.offers[0].id == "abc"
        assert table.offers[1].id.startswith("o")

    def test_survivors_keep_input_order(self):
        rows = [
            record(ean=str(i % 5), seller=f"s{i % 3}", title=f"t{i}")
            for i in range(12)
        ]
        table, _ = clean_offers(rows)
        titles = [o.title for o in table.offers]
        assert titles == sorted(titles, key=lambda t: int(t[1:]))

    def _reclean(self, table):
        records = [
            RawOfferRecord(
                source_row=i,
                fields={
                    "id": o.id,
                    "ean": o.ean,
                    "seller": o.seller,
                    "title": o.title,
                    "category": o.category,
                },
            )
            for i, o in enumerate(table.offers)
        ]
        return clean_offers(records)

    def test_idempotent(self):
        rng = random.Random(99)
        rows = [
            record(
                ean=str(rng.randint(1, 8)),
                seller=f"s{rng.randint(1, 4)}",
                title=rng.choice(["alpha beta", "gamma", ""]),
                category=rng.choice(["x", "y"]),
            )
            for _ in range(60)
        ]
        table, _ = clean_offers(rows)
        again, report = self._reclean(table)
        assert again.offers == table.offers
        assert report.dropped_missing == report.dropped_duplicate == report.dropped_single_store == 0

    @given(st.lists(
        st.tuples(
            st.sampled_from(["", "1", "2", "3", "4"]),
            st.sampled_from(["", "a", "b", "c"]),
            st.sampled_from(["", "title x", "title y"]),
        ),
        max_size=40,
    ))
    def test_drop_counts_partition_input(self, rows):
        records = [
            record(ean=e, seller=s, title=t) for (e, s, t) in rows
        ]
        table, report = clean_offers(records)
        assert (
            report.dropped_missing
            + report.dropped_duplicate
            + report.dropped_single_store
            + len(table)
            == len(records)
        )
        assert report.kept == len(table)
        assert report.input_count == len(records)

    def test_two_store_invariant_holds(self):
        rng = random.Random(5)
        rows = [
            record(ean=str(rng.randint(1, 10)), seller=f"s{rng.randint(1, 5)}", title="t")
            for _ in range(80)
        ]
        table, _ = clean_offers(rows)
        sellers_by_ean = {}
        for o in table.offers:
            sellers_by_ean.setdefault(o.ean, set()).add(o.seller)
        assert all(len(s) >= 2 for s in sellers_by_ean.values())
        keys = [(o.ean, o.seller) for o in table.offers]
        assert len(keys) == len(set(keys))


class TestLoadWdcPairs:
    def test_single_positive_line(self):
        data = json.dumps({"title_left": "a", "title_right": "b", "label": 1}).encode() + b"\n"
        ds = load_wdc_pairs(data)
        assert len(ds.pairs) == 1
        assert ds.pairs[0].label == 1
        assert ds.n_positive == 1

    def test_missing_required_field_reports_line(self):
        good = json.dumps({"title_left": "a", "title_right": "b", "label": 0})
        bad = json.dumps({"title_left": "a", "label": 0})
        with pytest.raises(ParseError) as err:
            load_wdc_pairs(f"{good}\n{bad}\n".encode())
        assert err.value.line == 2

    def test_non_binary_label_rejected(self):
        for label in (2, 0.5, "yes", None):
            data = json.dumps({"title_left": "a", "title_right": "b", "label": label}).encode()
            with pytest.raises(ParseError):
                load_wdc_pairs(data)

    def test_unknown_fields_retained(self):
        row = {
            "pair_id": 7,
            "title_left": "a",
            "title_right": "b",
            "label": 0,
            "cluster_id_left": 123,
            "brand_right": "acme",
        }
        ds = load_wdc_pairs((json.dumps(row) + "\n").encode())
        pair = ds.pairs[0]
        assert pair.pair_id == "7"
        assert pair.extras == {"cluster_id_left": 123, "brand_right": "acme"}

    def test_file_order_preserved_and_gzip(self, tmp_path):
        records = [
            {"pair_id": i, "title_left": f"l{i}", "title_right": f"r{i}", "label": i % 2}
            for i in range(10)
        ]
        path = tmp_path / "pairs.json.gz"
        write_wdc_lines(path, records)
        ds = load_wdc_pairs(path)
        assert [p.pair_id for p in ds.pairs] == [str(i) for i in range(10)]

    def test_load_emit_load_identical(self, tmp_path):
        records = [
            {
                "pair_id": "10#20",
                "id_left": "10",
                "title_left": "Foo 1L",
                "category_left": "drinks",
                "id_right": "20",
                "title_right": "Foo 1 L",
                "category_right": "drinks",
                "label": 1,
                "price_left": 3.5,
            },
            {"title_left": "x", "title_right": "y", "label": 0},
        ]
        src = tmp_path / "src.json.gz"
        write_wdc_lines(src, records)
        first = load_wdc_pairs(src)
        out = tmp_path / "out.json.gz"
        emit_wdc(first, out)
        second = load_wdc_pairs(out)
        assert second.pairs == first.pairs
