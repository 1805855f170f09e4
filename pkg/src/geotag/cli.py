"""Command-line front end.

Exit codes: 0 success, 1 data error, 2 usage error.
"""
import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor

from . import evalkit, export, filters, gazetteer, textmatch
from .disambig import MODES, ScoringParams
from .pipeline import HEURISTICS, DocumentRecord, Tagger

log = logging.getLogger("geotag")


class DataError(Exception):
    pass


def _open_out(path):
    if path in (None, "-"):
        return open(sys.stdout.fileno(), "w", encoding="utf-8", closefd=False)
    return open(path, "w", encoding="utf-8")


def read_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON: {exc}") from exc


def cmd_build_index(args):
    rejects = []
    place_lists = [gazetteer.load_places(p, rejects) for p in args.places]
    places = gazetteer.merge_places(*place_lists)
    variants = []
    for p in args.variants or ():
        variants.extend(gazetteer.load_variants(p, rejects))
    index = gazetteer.build_index(places, variants, rejects)
    gazetteer.persist_index(index, args.out)
    meta = index.metadata
    print(f"places\t{meta['places']}")
    print(f"variants\t{meta['variants']}")
    print(f"keys\t{meta['keys']}")
    print(f"rejected_rows\t{len(rejects)}")
    print(f"checksum\t{meta['checksum']}")
    return 0


def _make_tagger(args):
    index = gazetteer.restore_index(args.index)
    params = ScoringParams()
    if args.params:
        params = ScoringParams.load(args.params)
    if args.set:
        params = ScoringParams.from_mapping(dict(kv.split("=", 1) for kv in args.set), params)
    return Tagger(
        index,
        rules=[] if args.no_rules else textmatch.load_rules(args.rules),
        persons=filters.PersonLexicon.load(args.persons) if args.persons else filters.PersonLexicon(),
        stoplist=filters.StopList.load(args.stoplist) if args.stoplist else filters.StopList(),
        params=params,
        mode=args.mode,
        disabled=frozenset(args.disable or ()),
        max_tokens=args.max_tokens,
    )


_worker_tagger = None


def _init_worker(args):
    global _worker_tagger
    _worker_tagger = _make_tagger(args)


def _tag_one(item):
    lineno, obj = item
    try:
        doc = DocumentRecord.from_json(obj)
        return lineno, json.dumps(_worker_tagger.tag(doc).to_json(), ensure_ascii=False), None
    except (ValueError, TypeError) as exc:
        return lineno, None, str(exc)


def cmd_tag(args):
    global _worker_tagger
    items = list(read_jsonl(args.input))
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers, initializer=_init_worker, initargs=(args,)) as pool:
            results = list(pool.map(_tag_one, items, chunksize=64))
    else:
        _worker_tagger = _make_tagger(args)
        results = map(_tag_one, items)
    skipped = 0
    with _open_out(args.output) as out:
        for lineno, line, err in results:
            if err is not None:
                log.error("%s:%d: document skipped: %s", args.input, lineno, err)
                skipped += 1
                continue
            out.write(line + "\n")
    if skipped:
        log.warning("%d document(s) skipped", skipped)
    return 0


def cmd_eval(args):
    gold, gold_docs = evalkit.read_gold(args.gold)
    records = [obj for _, obj in read_jsonl(args.pred)]
    for rec in records:
        if "id" not in rec:
            raise DataError(f"{args.pred}: tagged record without 'id'")
    langs = {d: lang for d, lang in gold_docs.items() if lang}
    langs.update({r["id"]: r.get("lang") for r in records if r.get("lang")})
    try:
        preds = evalkit.predictions_from_json(records)
    except KeyError as exc:
        raise DataError(f"{args.pred}: mention missing field {exc}") from exc
    report = evalkit.evaluate(gold, preds, args.match, set(gold_docs), langs, args.label)
    text = evalkit.format_tsv([report]) if args.format == "tsv" else evalkit.format_text([report])
    with _open_out(args.out) as out:
        out.write(text)
    return 0


def cmd_export(args):
    records = []
    for lineno, obj in read_jsonl(args.input):
        if not isinstance(obj, dict) or "id" not in obj or "mentions" not in obj:
            raise DataError(f"{args.input}:{lineno}: not a tagged record")
        records.append(obj)
    try:
        if args.format == "kml":
            text = export.to_kml(export.stories_from(records))
        elif args.format == "georss":
            text, skipped = export.to_georss(records, title=args.title)
            if skipped:
                log.info("%d document(s) without places skipped", len(skipped))
        else:
            text = export.to_geojson(records)
    except (KeyError, TypeError) as exc:
        raise DataError(f"{args.input}: malformed mention: {exc}") from exc
    with _open_out(args.out) as out:
        out.write(text)
    return 0


def cmd_stopwords_build(args):
    if not args.corpus and not args.firstnames:
        raise SystemExit("stopwords build: need --corpus and/or --firstnames")
    index = gazetteer.restore_index(args.index)
    proposals = []
    if args.corpus:
        try:
            proposals += filters.build_stoplist_from_corpus(args.corpus, index, args.threshold,
                                                            args.lang)
        except ValueError as exc:
            raise DataError(str(exc)) from exc
    if args.firstnames:
        with open(args.firstnames, encoding="utf-8") as fh:
            names = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
        proposals += filters.build_stoplist_from_firstnames(names, index, args.lang)
    if args.accept_all:
        proposals = [filters.StopProposal(p.name, p.key, p.lang, p.provenance, p.frequency, True)
                     for p in proposals]
    filters.write_proposals(proposals, args.out)
    print(f"proposals\t{len(proposals)}")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="geotag", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-index", help="ingest places/variants TSV and write a binary index")
    p.add_argument("--places", required=True, action="append", help="places.tsv (repeatable)")
    p.add_argument("--variants", action="append", help="variants.tsv (repeatable)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_index)

    p = sub.add_parser("tag", help="geotag a JSONL document stream")
    p.add_argument("--index", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", "-o")
    p.add_argument("--persons")
    p.add_argument("--stoplist")
    p.add_argument("--rules", help="morphological rules TSV (default: bundled starter set)")
    p.add_argument("--no-rules", action="store_true")
    p.add_argument("--mode", choices=MODES, default="scored")
    p.add_argument("--params", help="key=value scoring parameter file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override one scoring parameter")
    p.add_argument("--disable", action="append", choices=HEURISTICS)
    p.add_argument("--max-tokens", type=int, default=textmatch.DEFAULT_MAX_TOKENS)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("eval", help="score tagged output against gold annotations")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--match", choices=(evalkit.PLACE, evalkit.COUNTRY), default=evalkit.PLACE)
    p.add_argument("--format", choices=("text", "tsv"), default="text")
    p.add_argument("--label", default="all")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("export", help="write tagged output as KML, GeoRSS or GeoJSON")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("kml", "georss", "geojson"), required=True)
    p.add_argument("--title", default="geotag feed")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("stopwords", help="geo-stop-word tools")
    ssub = p.add_subparsers(dest="stop_command", required=True)
    b = ssub.add_parser("build", help="propose stop words from a corpus and/or first names")
    b.add_argument("--index", required=True)
    b.add_argument("--corpus")
    b.add_argument("--firstnames")
    b.add_argument("--threshold", type=float, default=filters.DEFAULT_THRESHOLD,
                   help="occurrences per million tokens (default %(default)s)")
    b.add_argument("--lang", default="*")
    b.add_argument("--accept-all", action="store_true",
                   help="mark every proposal accepted so the file works as a stop list")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_stopwords_build)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            ap.error(exc.code)
        raise
    except (DataError, gazetteer.GazetteerError, evalkit.EvalError, ValueError, OSError) as exc:
        print(f"geotag: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
