"""Document geo-context: the countries a text is about."""
import logging
import re
from dataclasses import dataclass, field

log = logging.getLogger(__name__)

SHALLOW_MAX_CLASS = 2
_COUNTRY_RE = re.compile(r"^[A-Z]{2}$")


@dataclass(frozen=True)
class GeoContext:
    countries: frozenset = frozenset()
    # country -> frozenset of {"metadata", "shallow"}
    sources: dict = field(default_factory=dict, compare=False)

    def __contains__(self, country):
        return country in self.countries


def shallow_country(mention, index):
    """Country of a mention usable in the shallow pass, or None.

    Usable means every candidate is a country, capital or main city and all
    candidates lie in one country.
    """
    countries = set()
    for pid in mention.candidates:
        place = index.places[pid]
        if place.place_class > SHALLOW_MAX_CLASS:
            return None
        countries.add(place.country)
    if len(countries) != 1:
        return None
    return countries.pop()


def shallow_parse(mentions, index):
    found = set()
    for m in mentions:
        c = shallow_country(m, index)
        if c is not None:
            found.add(c)
    return found


def assemble_context(metadata=None, shallow=()):
    sources = {}
    code = (metadata or {}).get("source_country")
    if code:
        code = str(code).strip().upper()
        if _COUNTRY_RE.match(code):
            sources.setdefault(code, set()).add("metadata")
        else:
            log.warning("ignoring malformed source_country %r", code)
    for c in shallow:
        sources.setdefault(c, set()).add("shallow")
    return GeoContext(
        frozenset(sources), {c: frozenset(s) for c, s in sorted(sources.items())}
    )
