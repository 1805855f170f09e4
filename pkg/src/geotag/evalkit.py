"""Mention-level precision / recall / F-measure against gold annotations."""
import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import chain, combinations

from .disambig import haversine_km
from .pipeline import HEURISTICS, Tagger

log = logging.getLogger(__name__)

PLACE = "place"
COUNTRY = "country"
# gold rows without a place_id match a predicted place of the same country this close
COORD_TOLERANCE_KM = 25.0


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class GoldAnnotation:
    doc_id: str
    start: int
    end: int
    place_id: str = None
    country: str = None
    lat: float = None
    lon: float = None
    lang: str = None


@dataclass(frozen=True)
class Prediction:
    doc_id: str
    start: int
    end: int
    place_id: str
    country: str
    lat: float = None
    lon: float = None
    lang: str = None


@dataclass(frozen=True)
class EvalCounts:
    true_positives: int = 0
    predicted_total: int = 0
    gold_total: int = 0

    def __post_init__(self):
        if min(self.true_positives, self.predicted_total, self.gold_total) < 0:
            raise ValueError("counts must be non-negative")
        if self.true_positives > min(self.predicted_total, self.gold_total):
            raise ValueError("true positives exceed predicted or gold totals")

    def __add__(self, other):
        return EvalCounts(self.true_positives + other.true_positives,
                          self.predicted_total + other.predicted_total,
                          self.gold_total + other.gold_total)


@dataclass
class MetricsReport:
    precision: float
    recall: float
    f_measure: float
    counts: EvalCounts = field(default_factory=EvalCounts)
    label: str = ""
    per_language: dict = field(default_factory=dict)  # lang -> MetricsReport
    macro: tuple = None  # unweighted mean (P, R, F) over languages


def prf(counts, label=""):
    tp, pred, gold = counts.true_positives, counts.predicted_total, counts.gold_total
    if pred:
        p = tp / pred
    else:
        p = 1.0 if gold == 0 else 0.0
    r = tp / gold if gold else 1.0
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return MetricsReport(p, r, f, counts, label)


def _matches(pred, gold, mode):
    if mode == COUNTRY:
        return pred.country is not None and pred.country == gold.country
    if gold.place_id is not None:
        return pred.place_id == gold.place_id
    if gold.country is None or pred.country != gold.country:
        return False
    if gold.lat is None or pred.lat is None:
        return True
    return haversine_km((gold.lat, gold.lon), (pred.lat, pred.lon)) <= COORD_TOLERANCE_KM


def _group(items):
    out = defaultdict(list)
    for it in items:
        out[it.doc_id].append(it)
    return out


def compare_by_doc(gold, predicted, mode=PLACE, doc_ids=None):
    """Per-document EvalCounts.  ``doc_ids`` lists the corpus (defaults to gold doc ids)."""
    if mode not in (PLACE, COUNTRY):
        raise ValueError(f"unknown match mode {mode!r}")
    gold_by = _group(gold)
    pred_by = _group(predicted)
    known = set(gold_by) if doc_ids is None else set(doc_ids)
    missing = sorted(set(pred_by) - known)
    if missing:
        raise EvalError(f"predictions for documents absent from the gold corpus: {missing[:5]}")
    result = {}
    for doc_id in sorted(known | set(pred_by)):
        golds = sorted(gold_by.get(doc_id, ()), key=lambda g: (g.start, g.end))
        preds = sorted(pred_by.get(doc_id, ()), key=lambda p: (p.start, p.end))
        credited = [False] * len(golds)
        tp = 0
        for p in preds:
            for k, g in enumerate(golds):
                if credited[k] or not (p.start < g.end and g.start < p.end):
                    continue
                if _matches(p, g, mode):
                    credited[k] = True
                    tp += 1
                    break
        result[doc_id] = EvalCounts(tp, len(preds), len(golds))
    return result


def compare(gold, predicted, mode=PLACE, doc_ids=None):
    total = EvalCounts()
    for c in compare_by_doc(gold, predicted, mode, doc_ids).values():
        total = total + c
    return total


def evaluate(gold, predicted, mode=PLACE, doc_ids=None, doc_langs=None, label="all"):
    """Micro-averaged report with per-language sub-reports and their macro average."""
    per_doc = compare_by_doc(gold, predicted, mode, doc_ids)
    langs = dict(doc_langs or {})
    for item in chain(gold, predicted):
        if item.lang and item.doc_id not in langs:
            langs[item.doc_id] = item.lang
    by_lang = defaultdict(EvalCounts)
    total = EvalCounts()
    for doc_id, c in per_doc.items():
        by_lang[langs.get(doc_id, "?")] += c
        total = total + c
    report = prf(total, label)
    report.per_language = {lang: prf(c, lang) for lang, c in sorted(by_lang.items())}
    if report.per_language:
        rows = report.per_language.values()
        n = len(rows)
        report.macro = (sum(r.precision for r in rows) / n,
                        sum(r.recall for r in rows) / n,
                        sum(r.f_measure for r in rows) / n)
    return report


def predictions_from(tagged):
    out = []
    for rec in tagged:
        for m in rec.mentions:
            out.append(Prediction(rec.doc.id, m.start, m.end, m.place_id, m.place.country,
                                  m.place.lat, m.place.lon, rec.doc.lang))
    return out


def predictions_from_json(records):
    out = []
    for rec in records:
        for m in rec.get("mentions", ()):
            out.append(Prediction(rec["id"], m["start"], m["end"], m.get("place_id"),
                                  m.get("country"), m.get("lat"), m.get("lon"), rec.get("lang")))
    return out


def read_gold(path):
    """Read gold JSONL.

    A row without ``start``/``end`` only declares a document (and its ``lang``),
    so documents with no places still belong to the corpus.
    Returns ``(annotations, {doc_id: lang})``.
    """
    gold = []
    docs = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                doc_id = obj["doc_id"]
                docs.setdefault(doc_id, obj.get("lang"))
                if "start" not in obj and "end" not in obj:
                    continue
                ann = GoldAnnotation(doc_id, int(obj["start"]), int(obj["end"]),
                                     obj.get("place_id"), obj.get("country"),
                                     obj.get("lat"), obj.get("lon"), obj.get("lang"))
            except (ValueError, KeyError, TypeError) as exc:
                raise EvalError(f"{path}:{lineno}: bad gold record: {exc}") from exc
            if ann.start >= ann.end:
                raise EvalError(f"{path}:{lineno}: empty or inverted span")
            gold.append(ann)
    _check_no_overlap(gold)
    return gold, docs


def _check_no_overlap(gold):
    for doc_id, anns in _group(gold).items():
        anns = sorted(anns, key=lambda g: g.start)
        for a, b in zip(anns, anns[1:]):
            if b.start < a.end:
                raise EvalError(f"overlapping gold spans in document {doc_id!r}")


ABLATION_ROWS = (
    ("none", ()),
    ("geo-context", ("geo-context",)),
    ("class-importance", ("class-importance",)),
    ("km-distance", ("km-distance",)),
    ("person-filter", ("person-filter",)),
    ("stoplist", ("stoplist",)),
    ("all", HEURISTICS),
)


def ablation_run(docs, gold, tagger, configs=ABLATION_ROWS, mode=PLACE):
    """One tag + evaluate cycle per ``(label, enabled heuristics)`` configuration.

    ``tagger`` supplies index, rules, lexicons and base parameters; each row
    disables every heuristic not listed as enabled.
    """
    doc_ids = [d.id for d in docs]
    langs = {d.id: d.lang for d in docs}
    reports = []
    for label, enabled in configs:
        unknown = set(enabled) - set(HEURISTICS)
        if unknown:
            raise ValueError(f"unknown heuristics: {sorted(unknown)}")
        t = Tagger(tagger.index, tagger.rules, tagger.persons, tagger.stoplist, tagger.params,
                   tagger.mode, frozenset(HEURISTICS) - set(enabled), tagger.max_tokens)
        preds = predictions_from(t.tag(d) for d in docs)
        reports.append(evaluate(gold, preds, mode, doc_ids, langs, label))
    return reports


def all_subsets():
    """Every toggle configuration (32 rows), labelled by the enabled heuristics."""
    rows = []
    for k in range(len(HEURISTICS) + 1):
        for combo in combinations(HEURISTICS, k):
            rows.append(("+".join(combo) or "none", combo))
    return rows


def format_tsv(reports):
    lines = ["label\tlang\tprecision\trecall\tf_measure\ttp\tpredicted\tgold"]
    for r in reports:
        rows = [("*", r)] + list(r.per_language.items())
        for lang, x in rows:
            c = x.counts
            lines.append(f"{r.label}\t{lang}\t{x.precision:.4f}\t{x.recall:.4f}\t"
                         f"{x.f_measure:.4f}\t{c.true_positives}\t{c.predicted_total}\t"
                         f"{c.gold_total}")
        if r.macro:
            p, rc, f = r.macro
            lines.append(f"{r.label}\tmacro\t{p:.4f}\t{rc:.4f}\t{f:.4f}\t\t\t")
    return "\n".join(lines) + "\n"


def format_text(reports):
    out = []
    for r in reports:
        out.append(f"== {r.label or 'report'} ==")
        out.append(f"{'lang':<8}{'P':>8}{'R':>8}{'F':>8}{'tp':>6}{'pred':>6}{'gold':>6}")
        for lang, x in r.per_language.items():
            c = x.counts
            out.append(f"{lang:<8}{x.precision:>8.1%}{x.recall:>8.1%}{x.f_measure:>8.1%}"
                       f"{c.true_positives:>6}{c.predicted_total:>6}{c.gold_total:>6}")
        if r.macro:
            p, rc, f = r.macro
            out.append(f"{'macro':<8}{p:>8.1%}{rc:>8.1%}{f:>8.1%}")
        c = r.counts
        out.append(f"{'micro':<8}{r.precision:>8.1%}{r.recall:>8.1%}{r.f_measure:>8.1%}"
                   f"{c.true_positives:>6}{c.predicted_total:>6}{c.gold_total:>6}")
        out.append("")
    return "\n".join(out)
