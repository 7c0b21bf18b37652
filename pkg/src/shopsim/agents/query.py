"""Deterministic search-query generation and reformulation.

Attempt 0 searches the raw instruction; later attempts apply one rewrite
rule each, in a fixed order, so repeated searches explore distinct queries.
"""

import re

from ..text import FUNCTION_WORDS, tokenize

POLITENESS = frozenset("""
i am looking can you find me please want need would like it should be
""".split())

_PRICE_CLAUSE = re.compile(
    r"[,.?]?\s*(and\s+)?(with\s+)?price lower than [0-9][0-9.]* dollars")

_MEASUREMENT_MAP = {"inches": None, "inch": None, "width": "w", "height": "h"}


def _drop_politeness(text: str) -> str:
    kept = [t for t in tokenize(text)
            if t not in POLITENESS and t not in FUNCTION_WORDS]
    return " ".join(kept)


def _drop_price_clause(text: str) -> str:
    return _PRICE_CLAUSE.sub("", text).strip()


def _content_only(text: str) -> str:
    return _drop_politeness(_drop_price_clause(text))


def _abbreviate_measurements(text: str) -> str:
    out = []
    for t in tokenize(_content_only(text)):
        if t in _MEASUREMENT_MAP:
            mapped = _MEASUREMENT_MAP[t]
            if mapped is not None:
                out.append(mapped)
        else:
            out.append(t)
    return " ".join(out)


_RULES = [_drop_politeness, _drop_price_clause, _content_only,
          _abbreviate_measurements]


def query_generate(instruction_text: str, attempt: int) -> str:
    """Attempt 0 returns the instruction verbatim; attempt k >= 1 applies the
    k-th rewrite rule, cycling (without a distinctness guarantee) past the
    end of the rule list."""
    if attempt < 0:
        raise ValueError("attempt must be >= 0")
    if attempt == 0:
        return instruction_text
    rule = _RULES[(attempt - 1) % len(_RULES)]
    return rule(instruction_text)


def n_rules() -> int:
    return len(_RULES)
