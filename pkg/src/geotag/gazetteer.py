"""Gazetteer ingestion, merging and the name -> candidates index.

Two tab-separated inputs feed the index::

    places.tsv    place_id  canonical_name  country  lat  lon  class  source
    variants.tsv  place_id  name  lang  kind

Lines starting with ``#`` and blank lines are ignored.  Rows that fail
validation are skipped, logged and collected in an optional ``rejects`` list
as ``(path, line_number, reason)`` tuples.
"""
import hashlib
import json
import logging
import re
import struct
import zlib
from dataclasses import dataclass
from types import MappingProxyType

from ._text import WORD_RE, normalize

log = logging.getLogger(__name__)

MAX_CLASS = 6
VARIANT_KINDS = ("canonical", "exonym", "historical", "linguistic")
ALL_LANGS = "*"

MAGIC = b"GZIX"
FORMAT_VERSION = 1

_COUNTRY_RE = re.compile(r"^[A-Z]{2}$")
_LANG_RE = re.compile(r"^[a-z]{2}$")


class GazetteerError(Exception):
    pass


class DuplicatePlaceError(GazetteerError):
    def __init__(self, place_id, first_source, second_source):
        self.place_id = place_id
        self.sources = (first_source, second_source)
        super().__init__(
            f"duplicate place_id {place_id!r} in sources {first_source!r} and {second_source!r}"
        )


class IndexFormatError(GazetteerError):
    pass


class IndexVersionError(IndexFormatError):
    pass


@dataclass(frozen=True)
class PlaceEntry:
    place_id: str
    canonical_name: str
    country: str
    lat: float
    lon: float
    place_class: int
    source: str = ""

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat}")
        if not -180.0 < self.lon <= 180.0:
            raise ValueError(f"longitude out of range: {self.lon}")
        if not 0 <= self.place_class <= MAX_CLASS:
            raise ValueError(f"class out of range: {self.place_class}")
        if not _COUNTRY_RE.match(self.country):
            raise ValueError(f"bad country code: {self.country!r}")


@dataclass(frozen=True)
class NameVariant:
    place_id: str
    name: str
    lang: str = ALL_LANGS
    kind: str = "exonym"

    def __post_init__(self):
        if not normalize(self.name):
            raise ValueError("empty name")
        if self.lang != ALL_LANGS and not _LANG_RE.match(self.lang):
            raise ValueError(f"bad language code: {self.lang!r}")
        if self.kind not in VARIANT_KINDS:
            raise ValueError(f"unknown variant kind: {self.kind!r}")


def _rows(path):
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise GazetteerError(f"cannot read {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            yield lineno, line.split("\t")


def _reject(rejects, path, lineno, reason):
    log.warning("%s:%d: row rejected: %s", path, lineno, reason)
    if rejects is not None:
        rejects.append((str(path), lineno, reason))


def parse_class(value):
    """Parse a class column; values above 6 ("6 & more") clamp to 6."""
    m = re.match(r"\s*(-?\d+)", value)
    if not m:
        raise ValueError(f"bad class: {value!r}")
    cls = int(m.group(1))
    if cls < 0:
        raise ValueError(f"class out of range: {cls}")
    if cls > MAX_CLASS:
        log.warning("class %d clamped to %d", cls, MAX_CLASS)
        cls = MAX_CLASS
    return cls


def load_places(path, rejects=None):
    places = []
    for lineno, cols in _rows(path):
        if len(cols) < 6:
            _reject(rejects, path, lineno, f"expected 7 columns, got {len(cols)}")
            continue
        place_id, name, country, lat, lon, cls = (c.strip() for c in cols[:6])
        source = cols[6].strip() if len(cols) > 6 else ""
        try:
            lon_f = float(lon)
            if lon_f == -180.0:
                lon_f = 180.0
            entry = PlaceEntry(place_id, name, country, float(lat), lon_f, parse_class(cls), source)
            if not place_id or not name.strip():
                raise ValueError("empty place_id or name")
        except ValueError as exc:
            _reject(rejects, path, lineno, str(exc))
            continue
        places.append(entry)
    return places


def load_variants(path, rejects=None):
    variants = []
    for lineno, cols in _rows(path):
        if len(cols) < 3:
            _reject(rejects, path, lineno, f"expected 4 columns, got {len(cols)}")
            continue
        place_id, name, lang = (c.strip() for c in cols[:3])
        kind = cols[3].strip() if len(cols) > 3 and cols[3].strip() else "exonym"
        try:
            variants.append(NameVariant(place_id, name, lang, kind))
        except ValueError as exc:
            _reject(rejects, path, lineno, str(exc))
    return variants


def merge_places(*sources):
    """Merge place lists from several files; a place_id seen twice is fatal."""
    seen = {}
    for entries in sources:
        for entry in entries:
            other = seen.get(entry.place_id)
            if other is not None:
                raise DuplicatePlaceError(entry.place_id, other.source, entry.source)
            seen[entry.place_id] = entry
    return [seen[k] for k in sorted(seen)]


def _checksum(places, variants):
    h = hashlib.sha256()
    for p in sorted(places, key=lambda p: p.place_id):
        h.update(
            f"P\t{p.place_id}\t{p.canonical_name}\t{p.country}\t{p.lat!r}\t{p.lon!r}"
            f"\t{p.place_class}\t{p.source}\n".encode()
        )
    for v in sorted(variants, key=lambda v: (v.place_id, v.name, v.lang, v.kind)):
        h.update(f"V\t{v.place_id}\t{v.name}\t{v.lang}\t{v.kind}\n".encode())
    return h.hexdigest()


class GazetteerIndex:
    """Immutable lookup table from normalized names to places.

    Built by :func:`build_index`; do not construct directly.
    """

    __slots__ = ("places", "metadata", "_keys", "_first", "_surfaces", "_variants", "rejected")

    def __init__(self, places, variants, rejected=()):
        by_key = {}
        first = {}
        surfaces = {}
        for v in variants:
            key = normalize(v.name)
            slot = by_key.setdefault(key, {})
            slot.setdefault(v.lang, set()).add(v.place_id)
            surfaces.setdefault(key, set()).add(" ".join(v.name.split()))
            words = WORD_RE.findall(key)
            if words:
                n = len(words)
                if first.get(words[0], 0) < n:
                    first[words[0]] = n
        keys = {}
        for key, slot in by_key.items():
            star = frozenset(slot.pop(ALL_LANGS, ()))
            per_lang = {lang: frozenset(ids) | star for lang, ids in slot.items()}
            keys[key] = (star, per_lang)
        self.places = MappingProxyType(dict(places))
        self._keys = keys
        self._first = first
        self._surfaces = {k: tuple(sorted(s)) for k, s in surfaces.items()}
        self._variants = tuple(variants)
        self.rejected = tuple(rejected)
        self.metadata = MappingProxyType(
            {
                "places": len(self.places),
                "variants": len(variants),
                "keys": len(keys),
                "rejected_variants": len(self.rejected),
                "checksum": _checksum(self.places.values(), self._explicit_variants()),
            }
        )

    def __setattr__(self, name, value):
        if hasattr(self, "metadata"):
            raise AttributeError("GazetteerIndex is immutable")
        object.__setattr__(self, name, value)

    def _explicit_variants(self):
        return [v for v in self._variants if v.kind != "canonical" or v.lang != ALL_LANGS
                or v.name != self.places[v.place_id].canonical_name]

    def __contains__(self, key):
        return normalize(key) in self._keys

    def __len__(self):
        return len(self._keys)

    def keys(self):
        return self._keys.keys()

    def lookup_ids(self, key, lang=ALL_LANGS):
        """Place ids for an already-normalized key, visible in ``lang``."""
        slot = self._keys.get(key)
        if slot is None:
            return frozenset()
        star, per_lang = slot
        if lang == ALL_LANGS:
            return star.union(*per_lang.values())
        return per_lang.get(lang, star)

    def lookup(self, key, lang=ALL_LANGS):
        ids = self.lookup_ids(normalize(key), lang)
        return {self.places[i] for i in ids}

    def max_words(self, first_key):
        """Longest name (in words) beginning with the normalized word ``first_key``; 0 if none."""
        return self._first.get(first_key, 0)

    def surfaces(self, key):
        """Original-case spellings recorded for a normalized key."""
        return self._surfaces.get(normalize(key), ())

    def variants(self):
        return self._variants


def build_index(places, variants=(), rejects=None):
    by_id = {}
    for entry in places:
        other = by_id.get(entry.place_id)
        if other is not None:
            raise DuplicatePlaceError(entry.place_id, other.source, entry.source)
        by_id[entry.place_id] = entry
    accepted = [
        NameVariant(p.place_id, p.canonical_name, ALL_LANGS, "canonical") for p in by_id.values()
    ]
    seen = set(accepted)
    rejected = []
    for v in variants:
        if v in seen:
            continue
        seen.add(v)
        if v.place_id not in by_id:
            reason = f"unknown place_id {v.place_id!r} for variant {v.name!r}"
            log.warning("variant rejected: %s", reason)
            rejected.append((v, reason))
            if rejects is not None:
                rejects.append(("variants", 0, reason))
            continue
        accepted.append(v)
    return GazetteerIndex(by_id, accepted, rejected)


def lookup(index, key, lang=ALL_LANGS):
    return index.lookup(key, lang)


def persist_index(index, path):
    """Write the index as ``GZIX`` + version byte + length + zlib(JSON) + sha256."""
    doc = {
        "places": [
            [p.place_id, p.canonical_name, p.country, p.lat, p.lon, p.place_class, p.source]
            for p in sorted(index.places.values(), key=lambda p: p.place_id)
        ],
        # rejected variants are kept so a restored index reports the same metadata
        "variants": [
            [v.place_id, v.name, v.lang, v.kind]
            for v in (*index._explicit_variants(), *(v for v, _ in index.rejected))
        ],
        "checksum": index.metadata["checksum"],
    }
    payload = zlib.compress(
        json.dumps(doc, ensure_ascii=False, separators=(",", ":")).encode("utf-8"), 6
    )
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack(">BQ", FORMAT_VERSION, len(payload)))
        fh.write(payload)
        fh.write(hashlib.sha256(payload).digest())


def restore_index(path):
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise GazetteerError(f"cannot read index {path}: {exc}") from exc
    if data[:4] != MAGIC:
        raise IndexFormatError(f"{path}: not a gazetteer index (bad magic)")
    if len(data) < 13:
        raise IndexFormatError(f"{path}: truncated header")
    version, size = struct.unpack(">BQ", data[4:13])
    if version != FORMAT_VERSION:
        raise IndexVersionError(
            f"{path}: index format version {version}, this build reads {FORMAT_VERSION}"
        )
    payload = data[13:13 + size]
    digest = data[13 + size:]
    if len(payload) != size or len(digest) != 32:
        raise IndexFormatError(f"{path}: truncated index file")
    if hashlib.sha256(payload).digest() != digest:
        raise IndexFormatError(f"{path}: payload checksum mismatch")
    doc = json.loads(zlib.decompress(payload).decode("utf-8"))
    places = [PlaceEntry(*row) for row in doc["places"]]
    variants = [NameVariant(*row) for row in doc["variants"]]
    index = build_index(places, variants)
    if index.metadata["checksum"] != doc["checksum"]:
        raise IndexFormatError(f"{path}: rebuilt index does not match stored build checksum")
    return index
