"""Seeded synthetic gazetteers and documents for load testing."""
import random

from .gazetteer import NameVariant, PlaceEntry

_SYLLABLES = (
    "ka ra mo li sa ne to vi da lo ber ham stad burg ton ville grad pol ar en is ur an "
    "el os mi ta ko ru zi fa no be ga sha dor nov sk ia ev ol um ex qua pri dan lin"
).split()
_FILLER = (
    "the of and to in a is that for it as was with be by on not he this are or his from at "
    "which but have an they you were her all she there would their we him been has when who "
    "will more no if out so said what up its about into than them can only other new some "
    "could time these two may then do first any my now such like our over man me even most "
    "made after also did many before must through back years where much your way well down "
    "should because each just those people how too little state good very make world still "
    "own see men work long get here between both life being under never day same another "
    "know while last might us great old year off come since against go came right used take"
).split()
_COUNTRIES = [a + b for a in "ABCDEFGHIKLMNPRSTUVZ" for b in "ABDEGLMNORSTUZ"]


def _name(rng):
    n = rng.choice((2, 2, 3, 3, 4))
    return "".join(rng.choice(_SYLLABLES) for _ in range(n)).capitalize()


def make_gazetteer(n_places=50_000, seed=0, homograph_rate=0.15, multiword_rate=0.1):
    """``(places, variants)`` with ~``n_places`` entries, some sharing names."""
    rng = random.Random(seed)
    places = []
    variants = []
    names = []
    for i in range(n_places):
        if names and rng.random() < homograph_rate:
            name = rng.choice(names)
        else:
            name = _name(rng)
            if rng.random() < multiword_rate:
                name = f"{name} {_name(rng)}"
            names.append(name)
        cls = rng.choices(range(7), weights=(1, 1, 3, 10, 25, 35, 25))[0]
        places.append(PlaceEntry(
            f"P{i:06d}", name, rng.choice(_COUNTRIES),
            round(rng.uniform(-89.9, 89.9), 4), round(rng.uniform(-179.9, 180.0), 4),
            cls, "synthetic",
        ))
        if rng.random() < 0.2:
            variants.append(NameVariant(places[-1].place_id, _name(rng),
                                        rng.choice(("en", "fr", "de", "*")), "exonym"))
    return places, variants


def make_documents(places, n_docs=15_000, size=2048, seed=1, place_rate=0.04, lang="en"):
    """Yield JSON-ready document dicts of roughly ``size`` characters."""
    rng = random.Random(seed)
    names = [p.canonical_name for p in places]
    for i in range(n_docs):
        words = []
        length = 0
        start_sentence = True
        while length <= size:
            r = rng.random()
            if r < place_rate:
                w = rng.choice(names)
            elif r < place_rate + 0.05:
                w = _name(rng)
            else:
                w = rng.choice(_FILLER)
                if start_sentence:
                    w = w.capitalize()
            start_sentence = rng.random() < 0.07
            if start_sentence:
                w += "."
            words.append(w)
            length += len(w) + 1
        yield {"id": f"d{i:05d}", "lang": lang, "text": " ".join(words)[:size]}
