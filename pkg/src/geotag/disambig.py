"""Candidate scoring and resolution of ambiguous toponyms.

    score = class_weight[class] + context_bonus * [country in context]
            + km_coefficient * km_weight(distance to nearest anchor)

Anchors are the places of unambiguous (single-candidate) mentions in the
same document.
"""
import math
from dataclasses import dataclass, field, fields, replace

EARTH_RADIUS_KM = 6371.0

SCORED = "scored"
STRICT = "strict"
MODES = (SCORED, STRICT)

DEFAULT_CLASS_WEIGHTS = {0: 80.0, 1: 80.0, 2: 80.0, 3: 30.0, 4: 20.0, 5: 10.0, 6: 5.0}


def _default_class_weights():
    return dict(DEFAULT_CLASS_WEIGHTS)


@dataclass(frozen=True)
class ScoringParams:
    class_weights: dict = field(default_factory=_default_class_weights)
    context_bonus: float = 100.0
    km_coefficient: float = 20.0
    inflexion_km: float = 300.0
    steepness_km: float = 100.0
    earth_radius_km: float = EARTH_RADIUS_KM

    def __post_init__(self):
        weights = {int(k): float(v) for k, v in self.class_weights.items()}
        if sorted(weights) != list(range(7)):
            raise ValueError("class_weights needs exactly the classes 0..6")
        object.__setattr__(self, "class_weights", weights)
        if min(weights.values()) < 0 or self.context_bonus < 0 or self.km_coefficient < 0:
            raise ValueError("weights must be non-negative")
        if self.inflexion_km <= 0 or self.steepness_km <= 0 or self.earth_radius_km <= 0:
            raise ValueError("inflexion_km, steepness_km and earth_radius_km must be positive")

    def scaled(self, factor):
        """All three score terms multiplied by ``factor``."""
        return replace(
            self,
            class_weights={k: v * factor for k, v in self.class_weights.items()},
            context_bonus=self.context_bonus * factor,
            km_coefficient=self.km_coefficient * factor,
        )

    @classmethod
    def from_mapping(cls, values, base=None):
        """Build from string key/values, as read from a ``key=value`` file or CLI flags.

        ``class_weights`` takes seven comma-separated numbers (classes 0..6);
        ``class_weight.N`` overrides a single class.
        """
        base = base or cls()
        weights = dict(base.class_weights)
        kwargs = {}
        names = {f.name for f in fields(cls)} - {"class_weights"}
        for key, raw in values.items():
            key = key.strip()
            raw = str(raw).strip()
            if key == "class_weights":
                parts = [p for p in raw.replace(";", ",").split(",") if p.strip()]
                if all(":" in p for p in parts):
                    weights.update({int(k): float(v) for k, v in (p.split(":") for p in parts)})
                elif len(parts) == 7:
                    weights = {i: float(v) for i, v in enumerate(parts)}
                else:
                    raise ValueError("class_weights needs 7 values or class:weight pairs")
            elif key.startswith("class_weight."):
                weights[int(key.split(".", 1)[1])] = float(raw)
            elif key in names:
                kwargs[key] = float(raw)
            else:
                raise ValueError(f"unknown scoring parameter {key!r}")
        return replace(base, class_weights=weights, **kwargs)

    @classmethod
    def load(cls, path, base=None):
        values = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key=value")
                k, v = line.split("=", 1)
                values[k.strip()] = v.strip()
        return cls.from_mapping(values, base)


def haversine_km(p1, p2, radius=EARTH_RADIUS_KM):
    """Great-circle distance between two (lat, lon) pairs in degrees."""
    lat1, lon1 = map(math.radians, p1)
    lat2, lon2 = map(math.radians, p2)
    h = (math.sin((lat2 - lat1) / 2) ** 2
         + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2) ** 2)
    return 2 * radius * math.asin(min(1.0, math.sqrt(h)))


def arccot(x):
    # continuous branch, range (0, pi)
    return math.pi / 2 - math.atan(x)


def km_weight(d, params=None):
    """Closeness weight in (0, 1]: 1 at distance 0, decreasing through the inflexion point."""
    p = params or _DEFAULT
    return arccot((d - p.inflexion_km) / p.steepness_km) / arccot(-p.inflexion_km / p.steepness_km)


_DEFAULT = ScoringParams()


@dataclass(frozen=True)
class Anchor:
    lat: float
    lon: float
    start: int
    end: int
    place_id: str

    def __post_init__(self):
        phi = math.radians(self.lat)
        object.__setattr__(self, "_rad", (phi, math.radians(self.lon), math.cos(phi)))


def anchors_from(mentions, index):
    out = []
    for m in mentions:
        if len(m.candidates) == 1:
            (pid,) = m.candidates
            p = index.places[pid]
            out.append(Anchor(p.lat, p.lon, m.start, m.end, pid))
    return out


@dataclass(frozen=True)
class CandidateScore:
    place_id: str
    place_class: int
    class_term: float
    context_term: float
    km_term: float
    min_distance_km: float = None  # None when no anchor was available

    @property
    def total(self):
        return self.class_term + self.context_term + self.km_term


def score_candidate(place, context, anchors, params=_DEFAULT, exclude_span=None):
    """Score one candidate place; anchors at ``exclude_span`` (the mention itself) are skipped."""
    class_term = params.class_weights[place.place_class]
    context_term = params.context_bonus if place.country in context.countries else 0.0
    # same haversine as haversine_km, inlined with the anchor trig precomputed
    phi = math.radians(place.lat)
    lam = math.radians(place.lon)
    cos_phi = math.cos(phi)
    hmin = None
    for a in anchors:
        if exclude_span is not None and (a.start, a.end) == exclude_span:
            continue
        aphi, alam, acos = a._rad
        h = math.sin((aphi - phi) / 2) ** 2 + cos_phi * acos * math.sin((alam - lam) / 2) ** 2
        if hmin is None or h < hmin:
            hmin = h
    dmin = None
    if hmin is not None:
        dmin = 2 * params.earth_radius_km * math.asin(min(1.0, math.sqrt(hmin)))
    km_term = 0.0 if dmin is None else params.km_coefficient * km_weight(dmin, params)
    return CandidateScore(place.place_id, place.place_class, class_term, context_term, km_term, dmin)


@dataclass(frozen=True)
class ResolvedMention:
    start: int
    end: int
    surface: str
    lookup_key: str
    place: object  # PlaceEntry
    score: float
    trace: tuple  # CandidateScore per candidate, best first
    decided_by: str  # "single", "score" or "tie-break"
    matched_via: str = "direct"
    char_start: int = 0
    char_end: int = 0

    @property
    def place_id(self):
        return self.place.place_id


def _rank_key(cs):
    return (-cs.total, cs.place_class, cs.place_id)


def resolve(mentions, context, index, params=_DEFAULT, mode=SCORED, anchors=None):
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if anchors is None:
        anchors = anchors_from(mentions, index)
    resolved = []
    for m in mentions:
        span = (m.start, m.end)
        trace = sorted(
            (score_candidate(index.places[pid], context, anchors, params, span)
             for pid in m.candidates),
            key=_rank_key,
        )
        best = trace[0]
        if len(trace) == 1:
            how = "single"
        elif trace[1].total == best.total:
            how = "tie-break"
        else:
            how = "score"
        place = index.places[best.place_id]
        if (mode == STRICT and place.place_class >= 3
                and place.country not in context.countries):
            continue
        resolved.append(
            ResolvedMention(m.start, m.end, m.surface, m.lookup_key, place, best.total,
                            tuple(trace), how, m.matched_via, m.char_start, m.char_end)
        )
    return resolved
