import json
import math

import pytest

from _oracles import brute_force_bigram_counts
from shopsim.catalog import (Catalog, CatalogConfig, CatalogError,
                             apply_attributes, generate_synthetic_catalog,
                             load_catalog, mine_attributes, save_catalog)
from shopsim.text import tokenize

from conftest import make_product


def write_records(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")


def record(pid, price=10.0, **overrides):
    rec = {"id": pid, "title": f"Thing {pid}", "description": "plain thing",
           "overview": "", "price": price, "options": {}, "attributes": [],
           "category": "food", "subcategory_chain": ["pantry", "snacks"]}
    rec.update(overrides)
    return rec


class TestLoadCatalog:
    def test_loads_three_valid_records(self, tmp_path):
        path = tmp_path / "cat.jsonl"
        write_records(path, [record("a"), record("b"), record("c")])
        catalog = load_catalog(path)
        assert len(catalog) == 3
        assert [p.id for p in catalog.products] == ["a", "b", "c"]

    def test_duplicate_id_strict_names_the_id(self, tmp_path):
        path = tmp_path / "cat.jsonl"
        write_records(path, [record("dup"), record("dup")])
        with pytest.raises(CatalogError, match="dup"):
            load_catalog(path, strict=True)

    def test_non_strict_skips_and_counts_bad_price(self, tmp_path):
        path = tmp_path / "cat.jsonl"
        records = [record(f"p{i}") for i in range(100)]
        records[37]["price"] = -5
        write_records(path, records)
        catalog = load_catalog(path, strict=False)
        assert len(catalog) == 99
        assert catalog.skipped_records == 1

    def test_bad_price_strict_reports_line(self, tmp_path):
        path = tmp_path / "cat.jsonl"
        write_records(path, [record("ok"), record("bad", price=0)])
        with pytest.raises(CatalogError, match="line 2"):
            load_catalog(path)

    def test_malformed_json_reports_line(self, tmp_path):
        path = tmp_path / "cat.jsonl"
        path.write_text('{"id": "a", "title": "x", "price": 1}\n{oops\n')
        with pytest.raises(CatalogError, match="line 2"):
            load_catalog(path)

    def test_unknown_fields_ignored(self, tmp_path):
        path = tmp_path / "cat.jsonl"
        write_records(path, [record("a", extra_field="whatever")])
        assert len(load_catalog(path)) == 1

    def test_duplicate_option_value_rejected(self, tmp_path):
        path = tmp_path / "cat.jsonl"
        write_records(path, [record("a", options={"color": ["red", "red"]})])
        with pytest.raises(CatalogError, match="color"):
            load_catalog(path)

    def test_attribute_shape_enforced(self, tmp_path):
        path = tmp_path / "cat.jsonl"
        write_records(path, [record("a", attributes=["Four Token Phrase Here"])])
        with pytest.raises(CatalogError):
            load_catalog(path)


class TestRoundTrip:
    def test_save_then_load_is_equal(self, tmp_path, small_catalog):
        path = tmp_path / "cat.jsonl"
        save_catalog(small_catalog, path)
        assert load_catalog(path) == small_catalog


class TestGenerator:
    def test_deterministic_per_seed(self, tmp_path):
        cfg = CatalogConfig(n_products=20)
        a = generate_synthetic_catalog(cfg, seed=7)
        b = generate_synthetic_catalog(cfg, seed=7)
        pa, pb = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        save_catalog(a, pa)
        save_catalog(b, pb)
        assert pa.read_bytes() == pb.read_bytes()

    def test_seed_changes_output(self):
        cfg = CatalogConfig(n_products=20)
        assert (generate_synthetic_catalog(cfg, seed=7)
                != generate_synthetic_catalog(cfg, seed=8))

    def test_invariants_on_large_catalog(self):
        catalog = generate_synthetic_catalog(CatalogConfig(n_products=1000), seed=1)
        seen = set()
        for p in catalog.products:
            assert p.id not in seen
            seen.add(p.id)
            assert p.price > 0
            assert p.title
            assert p.attributes, "generator must give every product an attribute"
            for values in p.option_groups.values():
                assert len(set(values)) == len(values)
            for att in p.attributes:
                assert att == att.lower()
                assert 1 <= len(att.split()) <= 3
        assert catalog.attribute_lexicon == set().union(
            *(p.attributes for p in catalog.products))

    def test_invalid_config_rejected(self):
        with pytest.raises(CatalogError):
            generate_synthetic_catalog(CatalogConfig(n_products=0), seed=1)
        with pytest.raises(CatalogError):
            generate_synthetic_catalog(
                CatalogConfig(n_products=5, price_range=(9.0, 2.0)), seed=1)

    def test_attributes_mostly_appear_in_description(self):
        catalog = generate_synthetic_catalog(CatalogConfig(n_products=300), seed=5)
        hits = total = 0
        for p in catalog.products:
            for att in p.attributes:
                total += 1
                hits += att in p.description
        assert hits / total > 0.7  # embed probability defaults to 0.8


class TestMineAttributes:
    def test_rarer_bigram_outranks_common_one(self):
        # both products share "dry skin" (df=2, idf=0); only one has
        # "gift set" (df=1), so idf alone decides the ranking
        catalog = Catalog(products=[
            make_product("x", "lotion kit", "cream for dry skin gift set",
                         category="beauty"),
            make_product("y", "lotion kit", "cream for dry skin",
                         category="beauty"),
        ])
        mined = mine_attributes(catalog, top_k_per_category=1)
        assert mined["x"] == {"gift set"}
        assert mined["y"] == set()
        both = mine_attributes(catalog, top_k_per_category=2)
        assert "dry skin" not in both["x"] | both["y"]

    def test_scores_match_hand_computed_tfidf(self):
        catalog = Catalog(products=[
            make_product("x", "cream one", "gentle cream for dry skin gift set",
                         category="beauty"),
            make_product("y", "cream two", "rich cream for dry skin every day",
                         category="beauty"),
        ])
        per_doc, totals = brute_force_bigram_counts(catalog.products)
        df = {g: sum(1 for d in per_doc if g in d) for g in totals}
        scored = sorted(((totals[g] * math.log(2 / df[g]), g) for g in totals),
                        key=lambda t: (-t[0], t[1]))
        top3 = [g for _, g in scored[:3]]
        mined = mine_attributes(catalog, top_k_per_category=3)
        assigned = mined["x"] | mined["y"]
        assert assigned == {" ".join(g) for g in top3}

    def test_single_product_keeps_top_k_despite_zero_idf(self):
        catalog = Catalog(products=[
            make_product("solo", "alpha beta", "gamma delta epsilon")])
        per_doc, totals = brute_force_bigram_counts(catalog.products)
        mined = mine_attributes(catalog, top_k_per_category=2)
        # idf = ln(1/1) = 0 for every bigram; lexicographic order decides
        expected = sorted(" ".join(g) for g in totals)[:2]
        assert mined["solo"] == set(expected)

    def test_top_k_zero_rejected(self, small_catalog):
        with pytest.raises(CatalogError):
            mine_attributes(small_catalog, top_k_per_category=0)

    def test_empty_catalog_rejected(self):
        with pytest.raises(CatalogError):
            mine_attributes(Catalog(products=[]), top_k_per_category=1)

    def test_stoplist_removes_bigrams(self):
        catalog = Catalog(products=[
            make_product("x", "alpha beta", "gamma delta")])
        mined = mine_attributes(catalog, top_k_per_category=10,
                                stoplist={"gamma"})
        assert all("gamma" not in a for a in mined["x"])

    def test_mined_bigrams_occur_in_category_text(self, small_catalog):
        mined = mine_attributes(small_catalog, top_k_per_category=5)
        for pid, attrs in mined.items():
            product = small_catalog.by_id[pid]
            toks = tokenize(product.title + " " + product.description)
            grams = set(zip(toks, toks[1:]))
            for phrase in attrs:
                assert tuple(phrase.split()) in grams

    def test_apply_attributes_round_trip(self, small_catalog):
        mined = mine_attributes(small_catalog, top_k_per_category=8)
        updated = apply_attributes(small_catalog, mined)
        for p in updated.products:
            assert p.attributes == frozenset(mined[p.id])
