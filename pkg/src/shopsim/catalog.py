"""Product catalog: loading, validation, synthesis and attribute mining."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field, replace

from . import _vocab
from .text import tokenize


class CatalogError(ValueError):
    """Raised for malformed catalog files or invalid generator configs."""


@dataclass(frozen=True)
class Product:
    id: str
    title: str
    description: str
    overview: str
    price: float
    option_groups: dict[str, list[str]]
    attributes: frozenset[str]
    category: str
    subcategory_chain: tuple[str, ...]

    def text(self) -> str:
        """Full searchable text: title, description, overview, option values."""
        values = [v for vals in self.option_groups.values() for v in vals]
        return " | ".join([self.title, self.description, self.overview] + values)

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "description": self.description,
            "overview": self.overview,
            "price": self.price,
            "options": {k: list(v) for k, v in self.option_groups.items()},
            "attributes": sorted(self.attributes),
            "category": self.category,
            "subcategory_chain": list(self.subcategory_chain),
        }


@dataclass
class Catalog:
    products: list[Product]
    attribute_lexicon: set[str] = field(default_factory=set)
    categories: list[str] = field(default_factory=list)
    skipped_records: int = field(default=0, compare=False)

    def __post_init__(self):
        if not self.attribute_lexicon:
            self.attribute_lexicon = set().union(
                *(p.attributes for p in self.products)) if self.products else set()
        if not self.categories:
            seen: dict[str, None] = {}
            for p in self.products:
                seen.setdefault(p.category, None)
            self.categories = list(seen)
        self.by_id = {p.id: p for p in self.products}

    def __len__(self) -> int:
        return len(self.products)


def _validate_record(rec: dict, line_no: int) -> Product:
    try:
        price = float(rec["price"])
        options = {str(k): [str(v) for v in vals]
                   for k, vals in dict(rec.get("options", {})).items()}
        product = Product(
            id=str(rec["id"]),
            title=str(rec["title"]),
            description=str(rec.get("description", "")),
            overview=str(rec.get("overview", "")),
            price=price,
            option_groups=options,
            attributes=frozenset(str(a) for a in rec.get("attributes", [])),
            category=str(rec.get("category", "")),
            subcategory_chain=tuple(str(s) for s in rec.get("subcategory_chain", [])),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CatalogError(f"line {line_no}: malformed record ({exc})") from exc
    if product.price <= 0:
        raise CatalogError(f"line {line_no}: non-positive price for id {product.id!r}")
    if not product.title:
        raise CatalogError(f"line {line_no}: empty title for id {product.id!r}")
    for group, values in product.option_groups.items():
        if len(set(values)) != len(values):
            raise CatalogError(
                f"line {line_no}: duplicate option value in group {group!r}")
    for att in product.attributes:
        if att != att.lower() or not 1 <= len(att.split()) <= 3:
            raise CatalogError(
                f"line {line_no}: attribute {att!r} must be a lowercase 1-3 token phrase")
    return product


def load_catalog(path, strict: bool = True) -> Catalog:
    """Load a line-delimited JSON product file. Record order is preserved.

    In strict mode any bad record (malformed line, duplicate id, bad price)
    raises CatalogError with the offending line number; otherwise bad
    records are skipped and counted in ``Catalog.skipped_records``.
    """
    products: list[Product] = []
    seen_ids: set[str] = set()
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                if not isinstance(rec, dict):
                    raise CatalogError(f"line {line_no}: record is not an object")
                product = _validate_record(rec, line_no)
                if product.id in seen_ids:
                    raise CatalogError(f"line {line_no}: duplicate id {product.id!r}")
            except (json.JSONDecodeError, CatalogError) as exc:
                if strict:
                    if isinstance(exc, CatalogError):
                        raise
                    raise CatalogError(f"line {line_no}: invalid JSON ({exc})") from exc
                skipped += 1
                continue
            seen_ids.add(product.id)
            products.append(product)
    return Catalog(products=products, skipped_records=skipped)


def save_catalog(catalog: Catalog, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in catalog.products:
            fh.write(json.dumps(p.to_record(), sort_keys=True) + "\n")


@dataclass
class CatalogConfig:
    n_products: int = 100
    n_categories: int = 5
    vocab_seed_lists: dict | None = None
    max_options_per_group: int = 4
    price_range: tuple[float, float] = (5.0, 200.0)
    attribute_embed_prob: float = 0.8

    def validate(self) -> None:
        if self.n_products < 1:
            raise CatalogError("n_products must be >= 1")
        lo, hi = self.price_range
        if not (0 < lo < hi):
            raise CatalogError("price_range must satisfy 0 < min < max")
        if not 1 <= self.n_categories <= len(_vocab.DEFAULT_CATEGORIES):
            raise CatalogError(
                f"n_categories must be in 1..{len(_vocab.DEFAULT_CATEGORIES)}")
        if self.max_options_per_group < 2:
            raise CatalogError("max_options_per_group must be >= 2")
        if not 0.0 <= self.attribute_embed_prob <= 1.0:
            raise CatalogError("attribute_embed_prob must be in [0, 1]")


def _make_title(rng: random.Random, vocab: dict, noun: str, used: set[str]) -> str:
    # model code keeps titles unique and gives every product a rare token
    for _ in range(1000):
        brand = rng.choice(_vocab.BRANDS)
        adj = rng.choice(vocab["adjectives"])
        code = rng.choice(_vocab.MODEL_SYLLABLES) + str(rng.randint(10, 9999))
        title = f"{brand} {adj} {noun} {code}".title()
        if title not in used:
            used.add(title)
            return title
    raise CatalogError("could not generate a unique title")


def generate_synthetic_catalog(config: CatalogConfig, seed: int) -> Catalog:
    """Generate a deterministic catalog from (config, seed).

    Attribute phrases are embedded verbatim in descriptions with probability
    ``attribute_embed_prob`` so that reward-relevant signal is reachable by
    lexical search; every product gets at least one attribute.
    """
    config.validate()
    rng = random.Random(seed)
    categories = _vocab.DEFAULT_CATEGORIES[: config.n_categories]
    vocab_by_cat = {}
    for cat in categories:
        vocab = dict(_vocab.CATEGORY_VOCAB[cat])
        if config.vocab_seed_lists and cat in config.vocab_seed_lists:
            vocab.update(config.vocab_seed_lists[cat])
        vocab_by_cat[cat] = vocab

    used_titles: set[str] = set()
    products: list[Product] = []
    lo, hi = config.price_range
    for i in range(config.n_products):
        cat = categories[i % len(categories)]
        vocab = vocab_by_cat[cat]
        nouns = list(vocab["noun_chains"])
        noun = rng.choice(nouns)
        title = _make_title(rng, vocab, noun, used_titles)
        price = round(rng.uniform(lo, hi), 2)
        price = max(price, 0.01)
        # the chain ends in the product type, so the fine-grain category of
        # two same-type products is equal
        chain = tuple(vocab["noun_chains"][noun]) + (noun,)

        n_att = rng.randint(1, min(3, len(vocab["attributes"])))
        attributes = rng.sample(vocab["attributes"], n_att)

        fields = list(vocab["options"])
        n_groups = rng.randint(0, len(fields))
        chosen_fields = [f for f in fields if f in set(rng.sample(fields, n_groups))]
        option_groups: dict[str, list[str]] = {}
        for fname in chosen_fields:
            values = vocab["options"][fname]
            k = rng.randint(2, min(config.max_options_per_group, len(values)))
            option_groups[fname] = rng.sample(values, k)

        sentences = []
        for att in attributes:
            if rng.random() < config.attribute_embed_prob:
                sentences.append(
                    f"this {noun} is {att} and made for your "
                    f"{rng.choice(vocab['fillers'])}")
        sentences.append(
            f"a {rng.choice(vocab['adjectives'])} {rng.choice(nouns)} "
            f"for every {rng.choice(vocab['fillers'])}")
        if option_groups:
            fname = rng.choice(list(option_groups))
            sentences.append(f"available in {option_groups[fname][0]} {fname}")
        description = ". ".join(sentences) + "."
        overview = (f"{title} by {title.split()[0]}: a {rng.choice(vocab['adjectives'])} "
                    f"{chain[-1]} pick.")

        products.append(Product(
            id=f"p{i:05d}",
            title=title,
            description=description,
            overview=overview,
            price=price,
            option_groups=option_groups,
            attributes=frozenset(attributes),
            category=cat,
            subcategory_chain=chain,
        ))
    return Catalog(products=products)


def mine_attributes(catalog: Catalog, top_k_per_category: int,
                    stoplist: set[str] | frozenset[str] = frozenset()) -> dict[str, set[str]]:
    """Mine candidate attribute phrases as top TF-IDF bigrams per category.

    For each category the corpus is that category's products; a bigram's
    score is its total term frequency times ln(N / df). Bigrams containing a
    stoplisted token are dropped before the top-k cut. Ties break on the
    bigram text ascending, so the ranking is deterministic.
    """
    if not catalog.products:
        raise CatalogError("catalog is empty")
    if top_k_per_category < 1:
        raise CatalogError("top_k_per_category must be >= 1")

    by_category: dict[str, list[Product]] = {}
    for p in catalog.products:
        by_category.setdefault(p.category, []).append(p)

    result: dict[str, set[str]] = {p.id: set() for p in catalog.products}
    for cat, members in by_category.items():
        n_docs = len(members)
        doc_bigrams: list[set[tuple[str, str]]] = []
        tf_total: dict[tuple[str, str], int] = {}
        for p in members:
            tokens = tokenize(p.title + " " + p.description)
            grams = list(zip(tokens, tokens[1:]))
            doc_bigrams.append(set(grams))
            for g in grams:
                tf_total[g] = tf_total.get(g, 0) + 1
        df: dict[tuple[str, str], int] = {}
        for grams in doc_bigrams:
            for g in grams:
                df[g] = df.get(g, 0) + 1

        scored = []
        for g, tf in tf_total.items():
            if g[0] in stoplist or g[1] in stoplist:
                continue
            scored.append((tf * math.log(n_docs / df[g]), g))
        scored.sort(key=lambda item: (-item[0], item[1]))
        kept = [g for _, g in scored[:top_k_per_category]]

        for p, grams in zip(members, doc_bigrams):
            for g in kept:
                if g in grams:
                    result[p.id].add(" ".join(g))
    return result


def apply_attributes(catalog: Catalog, mined: dict[str, set[str]]) -> Catalog:
    """Return a new catalog whose product attributes are the mined sets."""
    products = [replace(p, attributes=frozenset(mined.get(p.id, set())))
                for p in catalog.products]
    return Catalog(products=products)
