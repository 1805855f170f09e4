"""Regenerate the bundled 20-document fixture corpus and its gold annotations.

Documents are written with inline markup ``[[surface|place_id]]``; the markup
is stripped and gold byte offsets are computed from the clean text.

    python scripts/make_fixture_corpus.py [outdir]
"""
import json
import re
import sys
from pathlib import Path

MARK = re.compile(r"\[\[([^|\]]+)\|([^\]]+)\]\]")

# id, lang, source_country, story_id, article_count, marked-up text
CORPUS = [
    ("en-01", "en", None, "s-brussels", 4,
     "EU-general secretary Javier Solana said in [[Brussels|BE-BRU]] on Monday that talks "
     "with the ministers would resume next week."),
    ("en-02", "en", None, "s-border", 12,
     "The delegation travelled from [[Warsaw|PL-WAW]] to [[Brest|BY-BREST]] on Tuesday. "
     "And the border crossing stayed closed for most of the day."),
    ("en-03", "en", None, "s-fashion", 25,
     "Fashion week opened in [[Paris|FR-PAR]] on Friday with record attendance. "
     "But critics were unimpressed by the collections."),
    ("en-04", "en", "US", "s-tornado", 3,
     "Police in [[Paris|US-TX-PARIS]] said a tornado damaged dozens of homes. "
     "Emergency crews from [[Dallas|US-DAL]] arrived before dawn."),
    ("en-05", "en", None, "s-summit", 30,
     "Tony Blair met George Bush in [[Washington|US-WAS]] to discuss the summit. "
     "We expect a joint statement, an aide said."),
    ("en-06", "en", None, "s-summit", 30,
     "Kofi Annan arrived in [[Istanbul|TR-IST]] ahead of the NATO summit. "
     "To the surprise of many, he praised [[Ankara|TR-ANK]] for its efforts."),
    ("en-07", "en", "ZW", "s-floods", 2,
     "Floods cut the road to [[Norton|ZW-NOR]] on Sunday. "
     "She said relief trucks had left [[Harare|ZW-HRE]] at noon."),
    ("de-01", "de", None, "s-arrests", 8,
     "Die Polizei in [[Berlin|DE-BER]] nahm am Montag drei Männer fest. "
     "Auch in [[München|DE-MUC]] gab es Festnahmen."),
    ("de-02", "de", None, "s-border", 12,
     "Der Zug fuhr von [[Warschau|PL-WAW]] nach [[Brest|BY-BREST]]. "
     "Im Grenzgebiet kam es zu langen Verspätungen."),
    ("de-03", "de", None, "s-joyce", 1,
     "James Joyce lebte viele Jahre in [[Zürich|CH-ZRH]] und in [[Triest|IT-TRS]]."),
    ("fr-01", "fr", None, "s-strike", 15,
     "Les [[Parisiens|FR-PAR]] ont manifesté à [[Lyon|FR-LYS]] samedi. "
     "De nombreux habitants de [[Brest|FR-BREST]] ont rejoint le cortège."),
    ("fr-02", "fr", None, "s-festival", 9,
     "Jack Nicholson est arrivé à [[Venise|IT-VEN]] pour le festival. "
     "Sur place, il a rencontré des journalistes."),
    ("fr-03", "fr", "FR", "s-fire", 1,
     "Un incendie a détruit une ferme à [[Saint-Cyr|FR-SCY-DOU]], près de [[Dourdan|FR-DOU]]."),
    ("es-01", "es", None, "s-solana", 6,
     "Javier Solana viajó a [[Madrid|ES-MAD]] y luego a [[Moscú|RU-MOW]] para reunirse "
     "con el ministro."),
    ("es-02", "es", None, "s-quake", 11,
     "El terremoto en el norte de [[Irán|IR]] causó daños en [[Baladeh|IR-BAL]]. "
     "[[Teherán|IR-THR]] envió ayuda a la zona."),
    ("it-01", "it", None, "s-arrests", 8,
     "La polizia di [[Monaco|DE-MUC]] e di [[Norimberga|DE-NUE]] ha arrestato due uomini. "
     "A [[Roma|IT-ROM]] il governo ha commentato."),
    ("it-02", "it", "IT", "s-research", 1,
     "[[Ispra|IT-ISP]] ospita un centro di ricerca vicino a [[Varese|IT-VAR]] "
     "e [[Sesto Calende|IT-SES]]. Il centro impiega duemila persone."),
    ("it-03", "it", None, "s-grozny", 10,
     "Il presidente ceceno è stato ucciso da una bomba a [[Grozny|RU-GRZ]]. "
     "[[Mosca|RU-MOW]] ha condannato l'attentato."),
    ("ro-01", "ro", None, "s-mayor", 1,
     "Primarul [[Parisului|FR-PAR]] a vizitat [[Bucureștiul|RO-BUH]] săptămâna trecută."),
    ("ar-01", "ar", None, "s-mayor", 1,
     "استقبل [[الباريسيون|FR-PAR]] رئيس البلدية في [[باريس|FR-PAR]] أمس."),
]


def strip_markup(marked):
    """Return clean text and ``(start_byte, end_byte, surface, place_id)`` spans."""
    out = []
    spans = []
    pos = 0
    nbytes = 0
    for m in MARK.finditer(marked):
        before = marked[pos:m.start()]
        out.append(before)
        nbytes += len(before.encode("utf-8"))
        surface, pid = m.group(1), m.group(2)
        start = nbytes
        out.append(surface)
        nbytes += len(surface.encode("utf-8"))
        spans.append((start, nbytes, surface, pid))
        pos = m.end()
    out.append(marked[pos:])
    return "".join(out), spans


def read_places(path):
    places = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            cols = line.rstrip("\n").split("\t")
            places[cols[0]] = (cols[2], float(cols[3]), float(cols[4]))
    return places


def main(outdir):
    outdir = Path(outdir)
    places = read_places(outdir / "places.tsv")
    with open(outdir / "docs.jsonl", "w", encoding="utf-8") as docs, \
         open(outdir / "gold.jsonl", "w", encoding="utf-8") as gold:
        for doc_id, lang, country, story, count, marked in CORPUS:
            text, spans = strip_markup(marked)
            rec = {"id": doc_id, "lang": lang, "text": text}
            if country:
                rec["source_country"] = country
            rec["story_id"] = story
            rec["article_count"] = count
            docs.write(json.dumps(rec, ensure_ascii=False) + "\n")
            gold.write(json.dumps({"doc_id": doc_id, "lang": lang}) + "\n")
            for start, end, surface, pid in spans:
                assert text.encode("utf-8")[start:end].decode("utf-8") == surface
                country, lat, lon = places[pid]
                gold.write(json.dumps({"doc_id": doc_id, "lang": lang, "start": start,
                                       "end": end, "place_id": pid, "country": country,
                                       "lat": lat, "lon": lon, "surface": surface},
                                      ensure_ascii=False) + "\n")


if __name__ == "__main__":
    default = Path(__file__).resolve().parent.parent / "src/geotag/data/fixtures"
    main(sys.argv[1] if len(sys.argv) > 1 else default)
