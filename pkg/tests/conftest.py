import json
from pathlib import Path

import pytest

from geotag import build_index, load_places, load_rules, load_variants
from geotag.evalkit import read_gold
from geotag.filters import PersonLexicon, StopList
from geotag.pipeline import DocumentRecord, Tagger

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "geotag" / "data" / "fixtures"


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def index():
    return build_index(load_places(FIXTURES / "places.tsv"), load_variants(FIXTURES / "variants.tsv"))


@pytest.fixture(scope="session")
def rules():
    return load_rules()


@pytest.fixture(scope="session")
def persons():
    return PersonLexicon.load(FIXTURES / "persons.txt")


@pytest.fixture(scope="session")
def stoplist():
    return StopList.load(FIXTURES / "stoplist.tsv")


@pytest.fixture(scope="session")
def tagger(index, rules, persons, stoplist):
    return Tagger(index, rules, persons, stoplist)


@pytest.fixture(scope="session")
def docs():
    with open(FIXTURES / "docs.jsonl", encoding="utf-8") as fh:
        return [DocumentRecord.from_json(json.loads(line)) for line in fh]


@pytest.fixture(scope="session")
def gold():
    return read_gold(FIXTURES / "gold.jsonl")[0]



def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
        terminalreporter.write_line(line)
