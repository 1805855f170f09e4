"""Tokenization and longest-match gazetteer scanning.

Offsets on :class:`Token` and :class:`CandidateMention` are UTF-8 byte
offsets into the document; ``char_start``/``char_end`` carry the matching
Python string indices.
"""
import logging
import re
from dataclasses import dataclass
from importlib import resources
from itertools import accumulate

from ._text import CASELESS_LANGS, WORD_RE, normalize

log = logging.getLogger(__name__)

DIRECT = "direct"
DEFAULT_MAX_TOKENS = 4


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int
    starts_uppercase: bool
    script_cased: bool
    char_start: int
    char_end: int


@dataclass(frozen=True)
class MorphRule:
    rule_id: str
    lang: str
    pattern: str
    replacement: str
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "_regex", re.compile(self.pattern))

    def apply(self, key):
        """Substituted key, or None when the pattern does not match or yields nothing."""
        if not self._regex.search(key):
            return None
        out = normalize(self._regex.sub(self.replacement, key))
        return out or None


@dataclass(frozen=True)
class CandidateMention:
    start: int
    end: int
    surface: str
    lookup_key: str
    candidates: frozenset
    matched_via: str = DIRECT
    char_start: int = 0
    char_end: int = 0

    def overlaps(self, start, end):
        return self.start < end and start < self.end


def byte_offsets(text):
    """Map character index -> UTF-8 byte offset (length len(text) + 1)."""
    if text.isascii():
        return range(len(text) + 1)
    return [0, *accumulate(len(ch.encode("utf-8")) for ch in text)]


def tokenize(text, lang):
    offsets = byte_offsets(text)
    caseless = lang in CASELESS_LANGS
    tokens = []
    for m in WORD_RE.finditer(text):
        s, e = m.span()
        surface = m.group()
        first = surface[0]
        cased = not caseless and surface.lower() != surface.upper()
        tokens.append(Token(surface, offsets[s], offsets[e], first.isupper(), cased, s, e))
    return tokens


def load_rules(path=None):
    """Read a rules file (``lang \\t pattern \\t replacement \\t note``).

    Without a path the bundled starter rules are returned.  Rule ids are
    ``<lang>:<line number>``.  Replacements use Python ``re`` syntax (``\\1``).
    """
    if path is None:
        text = resources.files("geotag").joinpath("data/rules.tsv").read_text("utf-8")
        origin = "rules.tsv"
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        origin = str(path)
    rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) < 3:
            raise ValueError(f"{origin}:{lineno}: expected lang, pattern, replacement")
        lang, pattern, replacement = cols[0].strip(), cols[1], cols[2]
        note = cols[3].strip() if len(cols) > 3 else ""
        try:
            rules.append(MorphRule(f"{lang}:{lineno}", lang, pattern, replacement, note))
        except re.error as exc:
            raise ValueError(f"{origin}:{lineno}: bad pattern: {exc}") from exc
    return rules


def candidate_keys(token, lang, rules):
    """Own normalized form first, then each rule's rewrite; order kept, duplicates dropped."""
    surface = token.surface if isinstance(token, Token) else token
    key = normalize(surface)
    keys = [(key, DIRECT)]
    seen = {key}
    for rule in rules:
        if rule.lang not in (lang, "*"):
            continue
        out = rule.apply(key)
        if out and out not in seen:
            seen.add(out)
            keys.append((out, rule.rule_id))
    return keys


def _eligible(token):
    return token.starts_uppercase or not token.script_cased


def scan(text, lang, index, rules=(), max_tokens=DEFAULT_MAX_TOKENS, tokens=None):
    """Greedy leftmost-longest gazetteer matching over the token sequence."""
    if tokens is None:
        tokens = tokenize(text, lang)
    rules = [r for r in rules if r.lang in (lang, "*")]
    mentions = []
    i, n = 0, len(tokens)
    while i < n:
        tok = tokens[i]
        if not _eligible(tok):
            i += 1
            continue
        first_key = normalize(tok.surface)
        found = None
        width = min(index.max_words(first_key), max_tokens, n - i)
        for j in range(i + width - 1, i - 1, -1):
            last = tokens[j]
            if j == i:
                key = first_key
            else:
                key = normalize(text[tok.char_start:last.char_end])
            ids = index.lookup_ids(key, lang)
            if ids:
                found = (j, key, ids, DIRECT)
                break
        if found is None and rules:
            for key, via in candidate_keys(tok, lang, rules)[1:]:
                ids = index.lookup_ids(key, lang)
                if ids:
                    found = (i, key, ids, via)
                    break
        if found is None:
            i += 1
            continue
        j, key, ids, via = found
        last = tokens[j]
        mentions.append(
            CandidateMention(
                tok.start, last.end, text[tok.char_start:last.char_end], key, ids, via,
                tok.char_start, last.char_end,
            )
        )
        i = j + 1
    return mentions
