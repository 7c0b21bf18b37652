"""Tokenization shared by search, reward and the agents."""

import re

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumeric characters; digits kept."""
    return _TOKEN_RE.findall(text.lower())


# Function words dropped by the title-match filter and the query reformulation
# rules. Deliberately small: it only needs to strip grammar, not meaning.
FUNCTION_WORDS = frozenset("""
a an the and or but if then than so nor for of to in on at by with from as
is are was were be been being am do does did have has had having will would
can could shall should may might must it its this that these those there
here he she they them his her their you your i me my we us our what which
who whom whose when where why how not no yes all any each every some such
own same too very just also about into over under again further once more
most other only
""".split())
