"""Title normalization, tokenization, and Jaccard set similarity.

Normalized titles are the common currency of the pairing and baseline
stages: lowercase, Unicode letters/digits only, single spaces. Polish
diacritics are Unicode letters and survive normalization unchanged.
"""

from __future__ import annotations

import unicodedata
from functools import lru_cache


@lru_cache(maxsize=None)
def _is_alnum(ch: str) -> bool:
    # Unicode letter categories (L*) and decimal digits (Nd). Narrower than
    # str.isalnum(), which also admits Nl/No numerals like Roman numerals.
    cat = unicodedata.category(ch)
    return cat.startswith("L") or cat == "Nd"


def normalize_title(raw: str) -> str:
    """Lowercase, replace non-alphanumerics with spaces, collapse whitespace.

    Each non-alphanumeric character becomes a single space (so "Coca-Cola"
    keeps two words), runs of whitespace collapse to one space, and the
    result is trimmed. Empty or all-punctuation input yields "".
    """
    lowered = raw.lower()
    replaced = "".join(ch if _is_alnum(ch) else " " for ch in lowered)
    return " ".join(replaced.split())


def tokenize(title: str) -> frozenset[str]:
    """Whitespace tokens of a normalized title, as a set."""
    return frozenset(title.split())


def jaccard(a: frozenset[str] | set[str], b: frozenset[str] | set[str]) -> float:
    """|a ∩ b| / |a ∪ b|; defined as 0.0 when both sets are empty."""
    if not a and not b:
        return 0.0
    # len() arithmetic avoids materializing the union set.
    inter = len(a & b)
    return inter / (len(a) + len(b) - inter)
