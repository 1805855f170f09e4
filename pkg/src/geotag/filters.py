"""Person-name and geo-stop-word filters, plus the stop-word proposal builders."""
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from ._text import WORD_RE, has_case, normalize
from .gazetteer import ALL_LANGS

log = logging.getLogger(__name__)

PROVENANCES = ("firstname", "corpus", "manual")
DEFAULT_THRESHOLD = 5.0  # occurrences per million tokens


class PersonLexicon:
    """Known full names, matched as exact token sequences."""

    def __init__(self, names=()):
        self.entries = []
        self._by_first = {}
        for name in names:
            words = tuple(WORD_RE.findall(name))
            if not words:
                continue
            self.entries.append(words)
            self._by_first.setdefault(words[0], []).append(words)
        for seqs in self._by_first.values():
            seqs.sort(key=len, reverse=True)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls(line.strip() for line in fh if line.strip() and not line.startswith("#"))

    def __len__(self):
        return len(self.entries)

    def candidates(self, first_word):
        return self._by_first.get(first_word, ())


def match_persons(tokens, lexicon):
    """Return ``(spans, parts)``: byte spans of matched full names and their words."""
    spans = []
    parts = set()
    surfaces = [t.surface for t in tokens]
    i = 0
    while i < len(tokens):
        for seq in lexicon.candidates(surfaces[i]):
            if tuple(surfaces[i:i + len(seq)]) == seq:
                spans.append((tokens[i].start, tokens[i + len(seq) - 1].end))
                parts.update(seq)
                i += len(seq)
                break
        else:
            i += 1
    return spans, parts


def filter_persons(mentions, spans, parts):
    return [
        m for m in mentions
        if m.surface not in parts and not any(m.overlaps(s, e) for s, e in spans)
    ]


@dataclass(frozen=True)
class StopProposal:
    name: str
    key: str
    lang: str = ALL_LANGS
    provenance: str = "corpus"
    frequency: float = None  # per million tokens, corpus proposals only
    accepted: bool = False


class StopList:
    def __init__(self, entries=()):
        # (normalized name, lang) -> provenance
        self.entries = {}
        for name, lang, provenance in entries:
            self.add(name, lang, provenance)

    def add(self, name, lang=ALL_LANGS, provenance="manual"):
        key = normalize(name)
        if key:
            self.entries.setdefault((key, lang), provenance)

    def __contains__(self, item):
        return item in self.entries

    def __len__(self):
        return len(self.entries)

    def blocks(self, key, lang):
        return (key, lang) in self.entries or (key, ALL_LANGS) in self.entries

    @classmethod
    def from_proposals(cls, proposals):
        stop = cls()
        for p in proposals:
            if p.accepted:
                stop.add(p.key, p.lang, p.provenance)
        return stop

    @classmethod
    def load(cls, path):
        """Read ``name \\t lang \\t provenance``.

        Proposal files written by :func:`write_proposals` load too; their rows
        count only when the ``accepted`` column is set.
        """
        stop = cls()
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\r\n")
                if not line.strip() or line.startswith("#"):
                    continue
                cols = line.split("\t")
                lang = cols[1].strip() if len(cols) > 1 and cols[1].strip() else ALL_LANGS
                provenance = cols[2].strip() if len(cols) > 2 and cols[2].strip() else "manual"
                if len(cols) > 4 and cols[4].strip().lower() not in ("1", "true", "yes"):
                    continue
                stop.add(cols[0], lang, provenance)
        return stop

    def write(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# name\tlang\tprovenance\n")
            for (key, lang), prov in sorted(self.entries.items()):
                fh.write(f"{key}\t{lang}\t{prov}\n")


def filter_stopwords(mentions, stoplist, lang):
    return [m for m in mentions if not stoplist.blocks(m.lookup_key, lang)]


def _display_name(index, key):
    forms = index.surfaces(key)
    return forms[0] if forms else key


def build_stoplist_from_corpus(corpus_path, index, threshold=DEFAULT_THRESHOLD, lang=ALL_LANGS):
    """Propose single-word gazetteer names frequent in lowercase in a plain-text corpus."""
    if threshold <= 0:
        raise ValueError("threshold must be positive (occurrences per million tokens)")
    counts = Counter()
    total = 0
    with open(corpus_path, encoding="utf-8") as fh:
        for line in fh:
            for word in WORD_RE.findall(line):
                total += 1
                if word.islower() or not any(has_case(ch) for ch in word):
                    counts[normalize(word)] += 1
    if total == 0:
        raise ValueError(f"{corpus_path}: empty corpus, cannot estimate frequencies")
    limit = Fraction(threshold) * total
    proposals = []
    for key in sorted(counts):
        c = counts[key]
        if c * 1_000_000 >= limit and key in index.keys():
            proposals.append(
                StopProposal(_display_name(index, key), key, lang, "corpus", c * 1e6 / total)
            )
    return proposals


def build_stoplist_from_firstnames(firstnames, index, lang=ALL_LANGS):
    proposals = {}
    for name in firstnames:
        key = normalize(name)
        if key and key in index.keys() and key not in proposals:
            proposals[key] = StopProposal(name.strip(), key, lang, "firstname")
    return list(proposals.values())


def write_proposals(proposals, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# name\tlang\tprovenance\tper_million\taccepted\n")
        for p in proposals:
            freq = "" if p.frequency is None else f"{p.frequency:.3f}"
            fh.write(f"{p.name}\t{p.lang}\t{p.provenance}\t{freq}\t{int(p.accepted)}\n")
