"""Multilingual geoparsing: gazetteer lookup, toponym disambiguation, evaluation, map export."""
from .context import GeoContext, assemble_context, shallow_parse
from .disambig import ScoringParams, haversine_km, km_weight, resolve, score_candidate
from .gazetteer import (
    GazetteerIndex,
    NameVariant,
    PlaceEntry,
    build_index,
    load_places,
    load_variants,
    lookup,
    persist_index,
    restore_index,
)
from .pipeline import DocumentRecord, TaggedRecord, Tagger
from .textmatch import CandidateMention, candidate_keys, load_rules, scan, tokenize

__version__ = "0.1.0"
