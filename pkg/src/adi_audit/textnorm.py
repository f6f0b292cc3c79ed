"""Arabic-aware sentence normalization used before duplicate detection.

Keeps Arabic letters only: diacritics, tatweel, punctuation/symbols, Latin
letters and digits (ASCII or Arabic-Indic) are all stripped, and whitespace
runs are collapsed to single spaces.
"""

from __future__ import annotations

import re
import unicodedata

from sklearn.base import BaseEstimator, TransformerMixin

from .errors import ValidationError

# Harakat inventory plus superscript alef
_DIACRITICS = re.compile(r"[ً-ْٰ]")
_TATWEEL = "ـ"

# Arabic script blocks (main, supplement, extended-A, presentation forms A/B)
_ARABIC_BLOCKS = (
    (0x0600, 0x06FF),
    (0x0750, 0x077F),
    (0x08A0, 0x08FF),
    (0xFB50, 0xFDFF),
    (0xFE70, 0xFEFF),
)

# Orthographic folding (alef/hamza and yaa/alef-maqsura); opt-in only,
# since folding inflates the exact-duplicate counts downstream.
_FOLD_TABLE = str.maketrans(
    {
        "أ": "ا",  # أ → ا
        "إ": "ا",  # إ → ا
        "آ": "ا",  # آ → ا
        "ٱ": "ا",  # ٱ → ا
        "ى": "ي",  # ى → ي
    }
)

_keep_cache: dict[str, bool] = {}


def _is_arabic_letter(ch: str) -> bool:
    keep = _keep_cache.get(ch)
    if keep is None:
        cp = ord(ch)
        in_block = any(lo <= cp <= hi for lo, hi in _ARABIC_BLOCKS)
        keep = in_block and unicodedata.category(ch).startswith("L") and ch != _TATWEEL
        _keep_cache[ch] = keep
    return keep


def normalize_sentence(text: str, fold_orthography: bool = False, keep_chars: str = "") -> str:
    """Normalize one sentence; returns "" when nothing remains after stripping.

    Raises ValidationError (a ValueError) on NUL characters: corrupt input.
    """
    if "\x00" in text:
        raise ValidationError("sentence contains NUL character")
    text = _DIACRITICS.sub("", text)
    if fold_orthography:
        text = text.translate(_FOLD_TABLE)
    kept = []
    for ch in text:
        if ch.isspace():
            kept.append(" ")
        elif ch in keep_chars or _is_arabic_letter(ch):
            kept.append(ch)
    return " ".join("".join(kept).split())


def is_effectively_empty(text: str, fold_orthography: bool = False, keep_chars: str = "") -> bool:
    """True iff normalization leaves nothing (e.g. Latin-only or punctuation-only input)."""
    return normalize_sentence(text, fold_orthography, keep_chars) == ""


class ArabicTextNormalizer(BaseEstimator, TransformerMixin):
    """Stateless sklearn-style transformer over iterables of sentences.

    Parameters
    ----------
    fold_orthography : bool
        Also fold alef/hamza variants to bare alef and alef maqsura to yaa.
        Off by default: duplicate detection is meant to be exact.
    keep_chars : str
        Extra codepoints to whitelist verbatim (e.g. for experiments).
    """

    def __init__(self, fold_orthography: bool = False, keep_chars: str = ""):
        self.fold_orthography = fold_orthography
        self.keep_chars = keep_chars

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        return [
            normalize_sentence(s, self.fold_orthography, self.keep_chars) for s in X
        ]
