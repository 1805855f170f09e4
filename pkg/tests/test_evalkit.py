import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geotag.evalkit import (
    COUNTRY,
    PLACE,
    ABLATION_ROWS,
    EvalCounts,
    EvalError,
    GoldAnnotation,
    Prediction,
    ablation_run,
    all_subsets,
    compare,
    evaluate,
    format_text,
    format_tsv,
    predictions_from,
    prf,
    read_gold,
)
from geotag.pipeline import Tagger


def G(doc, s, e, pid=None, country=None, lat=None, lon=None, lang=None):
    return GoldAnnotation(doc, s, e, pid, country, lat, lon, lang)


def P(doc, s, e, pid, country="XX", lat=None, lon=None, lang=None):
    return Prediction(doc, s, e, pid, country, lat, lon, lang)


def test_prf_worked_example():
    r = prf(EvalCounts(3, 4, 5))
    assert abs(r.precision - 0.75) < 1e-9
    assert abs(r.recall - 0.60) < 1e-9
    assert abs(r.f_measure - 2 / 3) < 1e-9


def test_prf_degenerate_cases():
    assert (prf(EvalCounts(0, 0, 0)).precision, prf(EvalCounts(0, 0, 0)).recall) == (1.0, 1.0)
    assert prf(EvalCounts(0, 0, 0)).f_measure == 1.0
    r = prf(EvalCounts(0, 0, 4))
    assert (r.precision, r.recall, r.f_measure) == (0.0, 0.0, 0.0)
    r = prf(EvalCounts(0, 3, 0))
    assert (r.precision, r.recall, r.f_measure) == (0.0, 1.0, 0.0)
    r = prf(EvalCounts(0, 3, 3))
    assert r.f_measure == 0.0


def test_counts_validate():
    with pytest.raises(ValueError):
        EvalCounts(5, 4, 6)
    with pytest.raises(ValueError):
        EvalCounts(-1, 0, 0)


def exact_prf(tp, pred, gold):
    p = Fraction(tp, pred)
    r = Fraction(tp, gold)
    return p, r, 2 * p * r / (p + r)


# five hand-constructed gold/prediction sets, expected (tp, pred, gold)
CASES = [
    # 3 right, 1 wrong place, 2 missed
    ([G("a", 0, 5, "X"), G("a", 10, 15, "Y"), G("a", 20, 25, "Z"), G("b", 0, 4, "X"),
      G("b", 8, 12, "W")],
     [P("a", 0, 5, "X"), P("a", 10, 15, "Y"), P("a", 20, 25, "Q"), P("b", 0, 4, "X")],
     (3, 4, 5)),
    # perfect
    ([G("a", 0, 5, "X"), G("a", 6, 9, "Y")], [P("a", 0, 5, "X"), P("a", 6, 9, "Y")], (2, 2, 2)),
    # overlapping but not identical spans still count
    ([G("a", 0, 10, "X"), G("a", 20, 30, "Y")], [P("a", 2, 5, "X"), P("a", 25, 35, "Y"),
                                                  P("a", 40, 45, "Z")], (2, 3, 2)),
    # two predictions on one gold span: one credit
    ([G("a", 0, 10, "X")], [P("a", 0, 4, "X"), P("a", 5, 10, "X")], (1, 2, 1)),
    # right place, wrong document
    ([G("a", 0, 5, "X"), G("b", 0, 5, "Y")], [P("b", 0, 5, "X"), P("a", 0, 5, "X")], (1, 2, 2)),
]


@pytest.mark.parametrize("gold,pred,expected", CASES)
def test_compare_and_prf_hand_computed(gold, pred, expected):
    c = compare(gold, pred)
    assert (c.true_positives, c.predicted_total, c.gold_total) == expected
    p, r, f = exact_prf(*expected)
    rep = prf(c)
    assert abs(rep.precision - float(p)) < 1e-9
    assert abs(rep.recall - float(r)) < 1e-9
    assert abs(rep.f_measure - float(f)) < 1e-9


def test_unknown_document_is_an_error():
    with pytest.raises(EvalError, match="zz"):
        compare([G("a", 0, 5, "X")], [P("zz", 0, 5, "X")])
    # declared document without gold mentions is fine
    c = compare([G("a", 0, 5, "X")], [P("zz", 0, 5, "X")], doc_ids=["a", "zz"])
    assert c == EvalCounts(0, 1, 1)


def test_country_mode():
    gold = [G("a", 0, 5, "US-TX-PARIS", "US")]
    pred = [P("a", 0, 5, "US-TN-PARIS", "US")]
    assert compare(gold, pred, PLACE).true_positives == 0
    assert compare(gold, pred, COUNTRY).true_positives == 1
    with pytest.raises(ValueError):
        compare(gold, pred, "fuzzy")


def test_coordinate_fallback():
    gold = [G("a", 0, 5, None, "FR", 48.8566, 2.3522)]
    near = [P("a", 0, 5, "FR-PAR-X", "FR", 48.86, 2.35)]
    far = [P("a", 0, 5, "FR-LYS", "FR", 45.76, 4.84)]
    assert compare(gold, near).true_positives == 1
    assert compare(gold, far).true_positives == 0


def test_read_gold(tmp_path):
    p = tmp_path / "gold.jsonl"
    rows = [{"doc_id": "empty", "lang": "fr"},
            {"doc_id": "a", "lang": "en", "start": 0, "end": 5, "place_id": "X"}]
    p.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    gold, docs = read_gold(p)
    assert docs == {"empty": "fr", "a": "en"}
    assert gold == [G("a", 0, 5, "X", lang="en")]
    p.write_text(json.dumps({"doc_id": "a", "start": 0, "end": 5}) + "\n"
                 + json.dumps({"doc_id": "a", "start": 3, "end": 8}) + "\n", encoding="utf-8")
    with pytest.raises(EvalError, match="overlapping"):
        read_gold(p)
    p.write_text('{"doc_id": "a", "start": 5, "end": 5}\n', encoding="utf-8")
    with pytest.raises(EvalError):
        read_gold(p)


def test_per_language_rows_sum_to_global():
    gold = [G("a", 0, 5, "X", lang="en"), G("b", 0, 5, "Y", lang="fr"), G("c", 0, 5, "Z", lang="fr")]
    pred = [P("a", 0, 5, "X", lang="en"), P("b", 0, 5, "Q", lang="fr")]
    rep = evaluate(gold, pred)
    assert set(rep.per_language) == {"en", "fr"}
    total = sum((r.counts for r in rep.per_language.values()), EvalCounts())
    assert total == rep.counts
    assert rep.per_language["en"].f_measure == 1.0
    assert rep.macro[2] == pytest.approx((1.0 + 0.0) / 2)
    assert "macro" in format_text([rep]) and "micro" in format_text([rep])
    lines = format_tsv([rep]).splitlines()
    assert lines[0].startswith("label\tlang") and len(lines) == 5


# --- invariants -----------------------------------------------------------

@st.composite
def gold_and_pred(draw):
    gold, pred = [], []
    for doc in ("a", "b", "c"):
        n = draw(st.integers(0, 5))
        for k in range(n):
            gold.append(G(doc, 10 * k, 10 * k + 5, draw(st.sampled_from("XYZ"))))
        for _ in range(draw(st.integers(0, 6))):
            s = draw(st.integers(0, 60))
            pred.append(P(doc, s, s + draw(st.integers(1, 8)), draw(st.sampled_from("XYZ"))))
    return gold, pred


@settings(max_examples=200, deadline=None)
@given(gold_and_pred())
def test_metric_invariants(gp):
    gold, pred = gp
    c = compare(gold, pred, doc_ids=["a", "b", "c"])
    assert c.true_positives <= min(c.predicted_total, c.gold_total)
    r = prf(c)
    for v in (r.precision, r.recall, r.f_measure):
        assert 0.0 <= v <= 1.0
    assert compare(gold, list(gold and [P(g.doc_id, g.start, g.end, g.place_id) for g in gold]),
                   doc_ids=["a", "b", "c"]).true_positives == len(gold)
    # adding a prediction never lowers tp
    extra = pred + [P("a", 0, 5, "X")]
    assert compare(gold, extra, doc_ids=["a", "b", "c"]).true_positives >= c.true_positives


@settings(max_examples=100, deadline=None)
@given(gold_and_pred(), st.randoms(use_true_random=False))
def test_order_independent(gp, rnd):
    gold, pred = gp
    shuffled = pred[:]
    rnd.shuffle(shuffled)
    ids = ["a", "b", "c"]
    assert compare(gold, pred, doc_ids=ids) == compare(gold, shuffled, doc_ids=ids)


# --- ablation on the fixture corpus ---------------------------------------

def test_fixture_all_heuristics_beat_none(docs, gold, tagger):
    reports = {r.label: r for r in ablation_run(docs, gold, tagger)}
    assert [label for label, _ in ABLATION_ROWS] == list(reports)
    assert reports["all"].f_measure > reports["none"].f_measure
    assert reports["all"].f_measure == 1.0
    assert set(reports["all"].per_language) == {"en", "de", "fr", "es", "it", "ro", "ar"}


def test_empty_toggle_set_is_none_row(docs, gold, tagger):
    (none,) = ablation_run(docs, gold, tagger, [("none", ())])
    off = Tagger(tagger.index, tagger.rules, tagger.persons, tagger.stoplist,
                 disabled=frozenset(["geo-context", "class-importance", "km-distance",
                                     "person-filter", "stoplist"]))
    preds = predictions_from(off.tag(d) for d in docs)
    direct = evaluate(gold, preds, doc_ids=[d.id for d in docs])
    assert direct.counts == none.counts


def test_km_toggle_changes_brest_path(docs, tagger):
    doc = next(d for d in docs if d.id == "en-02")
    on = {m.surface: m for m in tagger.tag(doc).mentions}
    off_tagger = Tagger(tagger.index, tagger.rules, tagger.persons, tagger.stoplist,
                        disabled=frozenset({"km-distance"}))
    off = {m.surface: m for m in off_tagger.tag(doc).mentions}
    assert on["Brest"].place_id == "BY-BREST" and on["Brest"].decided_by == "score"
    assert off["Brest"].decided_by == "tie-break"


def test_all_subsets():
    rows = all_subsets()
    assert len(rows) == 32
    assert rows[0] == ("none", ())
    with pytest.raises(ValueError):
        ablation_run([], [], Tagger(None), [("bad", ("magic",))])
