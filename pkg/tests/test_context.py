from hypothesis import given, settings
from hypothesis import strategies as st

from geotag.context import GeoContext, assemble_context, shallow_country, shallow_parse
from geotag.textmatch import CandidateMention, scan


def mention(*ids, start=0):
    return CandidateMention(start, start + 1, "x", "x", frozenset(ids))


def test_unambiguous_capital(index):
    assert shallow_parse([mention("PL-WAW")], index) == {"PL"}


def test_monaco_in_italian_contributes_nothing(index):
    (m,) = scan("La polizia di Monaco", "it", index)
    assert m.candidates == {"DE-MUC", "MC"}
    assert shallow_parse([m], index) == set()


def test_low_class_names_ignored(index):
    assert shallow_parse([mention("FR-BREST", "BY-BREST")], index) == set()
    assert shallow_parse([mention("US-NH-BERLIN")], index) == set()


def test_rule_oracle_over_fixture_names(index):
    for key in index.keys():
        ids = index.lookup_ids(key, "*")
        places = [index.places[i] for i in ids]
        eligible = all(p.place_class <= 2 for p in places) and len({p.country for p in places}) == 1
        got = shallow_country(mention(*ids), index)
        assert (got is not None) == eligible
        if eligible:
            assert got == places[0].country


def test_same_country_homographs_still_count(index):
    # two class <= 2 entries of one country
    assert shallow_parse([mention("FR", "FR-PAR")], index) == {"FR"}


def test_publishing_place_only():
    ctx = assemble_context({"source_country": "ZW"}, set())
    assert ctx.countries == {"ZW"}
    assert ctx.sources == {"ZW": {"metadata"}}


def test_shallow_only():
    assert assemble_context(None, {"PL"}).countries == {"PL"}


def test_union_with_provenance():
    ctx = assemble_context({"source_country": "FR"}, {"PL", "DE", "FR"})
    assert ctx.countries == {"FR", "PL", "DE"}
    assert ctx.sources["FR"] == {"metadata", "shallow"}
    assert ctx.sources["PL"] == {"shallow"}


def test_malformed_source_country_ignored(caplog):
    ctx = assemble_context({"source_country": "Zimbabwe"}, {"PL"})
    assert ctx.countries == {"PL"}
    assert "malformed" in caplog.text


def test_empty_context():
    assert assemble_context() == GeoContext()
    assert "FR" not in GeoContext()


POOL = ["PL-WAW", "FR-PAR", "DE-BER", "IT-ROM", "US-TX-PARIS", "FR-BREST", "BY-BREST", "MC",
        "DE-MUC", "RU-MOW", "ZW-HRE", "GB-NOR"]
mention_sets = st.lists(st.frozensets(st.sampled_from(POOL), min_size=1, max_size=3), max_size=8)


@settings(max_examples=100, deadline=None)
@given(mention_sets, st.randoms(use_true_random=False))
def test_order_independent(index, sets, rnd):
    ms = [mention(*s, start=i) for i, s in enumerate(sets)]
    shuffled = ms[:]
    rnd.shuffle(shuffled)
    assert shallow_parse(ms, index) == shallow_parse(shuffled, index)


@settings(max_examples=100, deadline=None)
@given(mention_sets, st.sampled_from(["PL-WAW", "FR-PAR", "DE-BER", "RU-MOW", "ZW-HRE", "FR"]))
def test_monotone_in_unambiguous_mentions(index, sets, extra):
    ms = [mention(*s, start=i) for i, s in enumerate(sets)]
    before = assemble_context(None, shallow_parse(ms, index)).countries
    after = assemble_context(None, shallow_parse(ms + [mention(extra, start=99)], index)).countries
    assert before <= after
