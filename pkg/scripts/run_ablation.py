"""Heuristic ablation on the bundled fixture corpus.

    python scripts/run_ablation.py            # one row per heuristic, plus none/all
    python scripts/run_ablation.py --all      # all 32 toggle combinations
    python scripts/run_ablation.py --tsv
"""
import argparse
import json
from importlib import resources

from geotag import build_index, load_places, load_rules, load_variants
from geotag.evalkit import ABLATION_ROWS, ablation_run, all_subsets, format_tsv, read_gold
from geotag.filters import PersonLexicon, StopList
from geotag.pipeline import DocumentRecord, Tagger


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--all", action="store_true", help="every subset of the five heuristics")
    ap.add_argument("--tsv", action="store_true")
    ap.add_argument("--match", choices=("place", "country"), default="place")
    args = ap.parse_args()

    fx = resources.files("geotag") / "data" / "fixtures"
    index = build_index(load_places(fx / "places.tsv"), load_variants(fx / "variants.tsv"))
    tagger = Tagger(index, load_rules(), PersonLexicon.load(fx / "persons.txt"),
                    StopList.load(fx / "stoplist.tsv"))
    with open(fx / "docs.jsonl", encoding="utf-8") as fh:
        docs = [DocumentRecord.from_json(json.loads(line)) for line in fh]
    gold, _ = read_gold(fx / "gold.jsonl")

    reports = ablation_run(docs, gold, tagger, all_subsets() if args.all else ABLATION_ROWS,
                           args.match)
    if args.tsv:
        print(format_tsv(reports), end="")
        return
    width = max(len(r.label) for r in reports)
    print(f"{'heuristics':<{width}}  {'P':>6}  {'R':>6}  {'F':>6}")
    for r in reports:
        print(f"{r.label:<{width}}  {r.precision:6.1%}  {r.recall:6.1%}  {r.f_measure:6.1%}")


if __name__ == "__main__":
    main()
