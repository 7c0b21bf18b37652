"""Deterministic lexical search: inverted index, BM25 ranking, pagination."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .catalog import Catalog
from .text import tokenize

PAGE_SIZE = 10
MAX_PAGES = 5
MAX_RESULTS = PAGE_SIZE * MAX_PAGES


class SearchError(ValueError):
    pass


@dataclass
class SearchIndex:
    postings: dict[str, list[tuple[int, int]]]
    doc_lengths: list[int]
    avg_doc_length: float
    doc_count: int
    k1: float
    b: float
    product_ids: list[str]

    def idf(self, token: str) -> float:
        df = len(self.postings.get(token, ()))
        return math.log(1.0 + (self.doc_count - df + 0.5) / (df + 0.5))


@dataclass
class ResultPage:
    query: str
    page_index: int
    entries: list[tuple[str, str, float]]  # (product id, title, price)
    total_retrieved: int

    @property
    def has_prev(self) -> bool:
        return self.page_index > 1

    @property
    def has_next(self) -> bool:
        return (self.page_index < MAX_PAGES
                and self.page_index * PAGE_SIZE < self.total_retrieved)


def build_index(catalog: Catalog, k1: float = 1.2, b: float = 0.75) -> SearchIndex:
    """Index title + description + overview + option values per product."""
    if not catalog.products:
        raise SearchError("cannot index an empty catalog")
    if k1 < 0 or not 0.0 <= b <= 1.0:
        raise SearchError("require k1 >= 0 and 0 <= b <= 1")
    postings: dict[str, list[tuple[int, int]]] = {}
    doc_lengths: list[int] = []
    for ordinal, product in enumerate(catalog.products):
        tokens = tokenize(product.text())
        doc_lengths.append(len(tokens))
        counts: dict[str, int] = {}
        for t in tokens:
            counts[t] = counts.get(t, 0) + 1
        for t in sorted(counts):
            postings.setdefault(t, []).append((ordinal, counts[t]))
    avg = sum(doc_lengths) / len(doc_lengths)
    return SearchIndex(
        postings=postings,
        doc_lengths=doc_lengths,
        avg_doc_length=avg,
        doc_count=len(catalog.products),
        k1=k1,
        b=b,
        product_ids=[p.id for p in catalog.products],
    )


def bm25_score(index: SearchIndex, query_tokens: list[str], ordinal: int) -> float:
    """BM25 score of one document for the unique tokens of a query.

    idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5)); term contribution is
    idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len/avglen)). Repeating a
    query token does not change the score.
    """
    if not 0 <= ordinal < index.doc_count:
        raise SearchError(f"ordinal {ordinal} out of range")
    norm = index.k1 * (1.0 - index.b
                       + index.b * index.doc_lengths[ordinal] / index.avg_doc_length)
    score = 0.0
    for token in dict.fromkeys(query_tokens):
        plist = index.postings.get(token)
        if not plist:
            continue
        tf = 0
        for doc, count in plist:
            if doc == ordinal:
                tf = count
                break
        if tf == 0:
            continue
        score += index.idf(token) * tf * (index.k1 + 1.0) / (tf + norm)
    return score


def search(index: SearchIndex, query: str, max_results: int = MAX_RESULTS) -> list[str]:
    """Rank products by (BM25 desc, catalog ordinal asc); only score > 0."""
    tokens = list(dict.fromkeys(tokenize(query)))
    if not tokens:
        return []
    scores: dict[int, float] = {}
    for token in tokens:
        plist = index.postings.get(token)
        if not plist:
            continue
        idf = index.idf(token)
        for ordinal, tf in plist:
            norm = index.k1 * (1.0 - index.b
                               + index.b * index.doc_lengths[ordinal] / index.avg_doc_length)
            scores[ordinal] = scores.get(ordinal, 0.0) + (
                idf * tf * (index.k1 + 1.0) / (tf + norm))
    ranked = sorted(((s, o) for o, s in scores.items() if s > 0.0),
                    key=lambda pair: (-pair[0], pair[1]))
    return [index.product_ids[o] for _, o in ranked[:max_results]]


def paginate(results: list[str], page_index: int, catalog: Catalog,
             query: str = "") -> ResultPage:
    """Slice ranked results into a 10-entry page; out-of-range pages are empty."""
    if not 1 <= page_index <= MAX_PAGES:
        raise SearchError(f"page_index must be in 1..{MAX_PAGES}, got {page_index}")
    start = (page_index - 1) * PAGE_SIZE
    chunk = results[start:start + PAGE_SIZE]
    entries = [(pid, catalog.by_id[pid].title, catalog.by_id[pid].price)
               for pid in chunk]
    return ResultPage(query=query, page_index=page_index, entries=entries,
                      total_retrieved=min(len(results), MAX_RESULTS))


def save_index(index: SearchIndex, path) -> None:
    payload = {
        "format": 1,
        "k1": index.k1,
        "b": index.b,
        "doc_count": index.doc_count,
        "avg_doc_length": index.avg_doc_length,
        "doc_lengths": index.doc_lengths,
        "product_ids": index.product_ids,
        "postings": {t: [[o, tf] for o, tf in plist]
                     for t, plist in index.postings.items()},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)


def load_index(path) -> SearchIndex:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != 1:
        raise SearchError("unsupported index cache format")
    return SearchIndex(
        postings={t: [(int(o), int(tf)) for o, tf in plist]
                  for t, plist in payload["postings"].items()},
        doc_lengths=[int(n) for n in payload["doc_lengths"]],
        avg_doc_length=float(payload["avg_doc_length"]),
        doc_count=int(payload["doc_count"]),
        k1=float(payload["k1"]),
        b=float(payload["b"]),
        product_ids=[str(p) for p in payload["product_ids"]],
    )
