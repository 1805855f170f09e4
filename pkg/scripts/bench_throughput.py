"""Tagging throughput on a seeded synthetic gazetteer and document stream.

    python scripts/bench_throughput.py --places 50000 --docs 15000
"""
import argparse
import time

from geotag.gazetteer import build_index
from geotag.pipeline import DocumentRecord, Tagger
from geotag.synth import make_documents, make_gazetteer


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--places", type=int, default=50_000)
    ap.add_argument("--docs", type=int, default=15_000)
    ap.add_argument("--size", type=int, default=2048, help="characters per document")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    t0 = time.perf_counter()
    places, variants = make_gazetteer(args.places, seed=args.seed)
    index = build_index(places, variants)
    print(f"gazetteer: {len(index.places)} places, {len(index)} keys "
          f"({time.perf_counter() - t0:.1f} s)")
    docs = [DocumentRecord.from_json(d)
            for d in make_documents(places, args.docs, args.size, seed=args.seed + 1)]
    tagger = Tagger(index)
    t0 = time.perf_counter()
    mentions = sum(len(tagger.tag(d).mentions) for d in docs)
    dt = time.perf_counter() - t0
    print(f"tagged {len(docs)} docs / {mentions} mentions in {dt:.1f} s "
          f"= {len(docs) / dt:.0f} docs/s, {len(docs) * 86400 / dt / 1e6:.1f}M docs/day")


if __name__ == "__main__":
    main()
