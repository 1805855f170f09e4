"""Shared string helpers: key normalization and the word pattern."""
import re
import unicodedata

# Letters and digits, plus combining marks so that vowelled Arabic or
# decomposed Latin stays inside one word.
WORD_RE = re.compile(
    r"(?:[^\W_]|[\u0300-\u036f\u0610-\u061a\u064b-\u065f\u0670\u06d6-\u06ed])+"
)

# Languages whose script has no case distinction: every word is a lookup candidate.
CASELESS_LANGS = frozenset(
    {"ar", "fa", "ur", "ps", "he", "yi", "zh", "ja", "ko", "th", "ka", "hy", "am"}
)


def normalize(text):
    """Lookup key for a surface form: NFC, case fold, collapse internal whitespace."""
    if not text.isascii():
        text = unicodedata.normalize("NFC", text)
    return " ".join(text.casefold().split())


def has_case(ch):
    return ch.lower() != ch.upper()


def word_spans(text):
    return [(m.start(), m.end()) for m in WORD_RE.finditer(text)]
