"""Per-document tagging: scan, filter, build context, resolve."""
from dataclasses import dataclass, field, replace

from .context import assemble_context, shallow_country, shallow_parse
from .disambig import SCORED, ScoringParams, resolve
from .filters import PersonLexicon, StopList, filter_persons, filter_stopwords, match_persons
from .textmatch import DEFAULT_MAX_TOKENS, scan, tokenize

HEURISTICS = ("geo-context", "class-importance", "km-distance", "person-filter", "stoplist")


@dataclass
class DocumentRecord:
    id: str
    lang: str
    text: str
    source_country: str = None
    story_id: str = None
    article_count: int = None
    extra: dict = field(default_factory=dict)

    FIELDS = ("id", "lang", "text", "source_country", "story_id", "article_count")

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict):
            raise ValueError("document record must be a JSON object")
        for key in ("id", "lang", "text"):
            if not isinstance(obj.get(key), str):
                raise ValueError(f"document record needs string field {key!r}")
        count = obj.get("article_count")
        if count is not None and (not isinstance(count, int) or count < 1):
            raise ValueError("article_count must be a positive integer")
        extra = {k: v for k, v in obj.items() if k not in cls.FIELDS}
        return cls(obj["id"], obj["lang"], obj["text"], obj.get("source_country"),
                   obj.get("story_id"), count, extra)


@dataclass
class TaggedRecord:
    doc: DocumentRecord
    mentions: list  # ResolvedMention, sorted by start
    methods: list  # "shallow" or "deep", parallel to mentions
    context: object = None

    def to_json(self):
        d = self.doc
        out = {"id": d.id, "lang": d.lang, "text": d.text}
        for key in ("source_country", "story_id", "article_count"):
            if getattr(d, key) is not None:
                out[key] = getattr(d, key)
        out.update(sorted(d.extra.items()))
        out["context"] = sorted(self.context.countries) if self.context else []
        out["mentions"] = [
            {
                "start": m.start,
                "end": m.end,
                "surface": m.surface,
                "place_id": m.place_id,
                "name": m.place.canonical_name,
                "country": m.place.country,
                "lat": m.place.lat,
                "lon": m.place.lon,
                "class": m.place.place_class,
                "score": round(m.score, 6),
                "method": method,
                "matched_via": m.matched_via,
                "decided_by": m.decided_by,
            }
            for m, method in zip(self.mentions, self.methods)
        ]
        return out


@dataclass
class Tagger:
    index: object
    rules: list = field(default_factory=list)
    persons: PersonLexicon = field(default_factory=PersonLexicon)
    stoplist: StopList = field(default_factory=StopList)
    params: ScoringParams = field(default_factory=ScoringParams)
    mode: str = SCORED
    disabled: frozenset = frozenset()
    max_tokens: int = DEFAULT_MAX_TOKENS

    def __post_init__(self):
        unknown = set(self.disabled) - set(HEURISTICS)
        if unknown:
            raise ValueError(f"unknown heuristics: {sorted(unknown)}")
        self.disabled = frozenset(self.disabled)
        self.effective_params = effective_params(self.params, self.disabled)

    def tag(self, doc):
        tokens = tokenize(doc.text, doc.lang)
        mentions = scan(doc.text, doc.lang, self.index, self.rules, self.max_tokens, tokens)
        if "person-filter" not in self.disabled and len(self.persons):
            spans, parts = match_persons(tokens, self.persons)
            mentions = filter_persons(mentions, spans, parts)
        if "stoplist" not in self.disabled:
            mentions = filter_stopwords(mentions, self.stoplist, doc.lang)
        shallow = shallow_parse(mentions, self.index)
        context = assemble_context({"source_country": doc.source_country}, shallow)
        resolved = resolve(mentions, context, self.index, self.effective_params, self.mode)
        shallow_spans = {(m.start, m.end) for m in mentions
                         if shallow_country(m, self.index) is not None}
        methods = ["shallow" if (r.start, r.end) in shallow_spans else "deep" for r in resolved]
        return TaggedRecord(doc, resolved, methods, context)


def effective_params(params, disabled):
    """Zero the score terms of disabled heuristics."""
    if "class-importance" in disabled:
        params = replace(params, class_weights={k: 0.0 for k in params.class_weights})
    if "geo-context" in disabled:
        params = replace(params, context_bonus=0.0)
    if "km-distance" in disabled:
        params = replace(params, km_coefficient=0.0)
    return params
