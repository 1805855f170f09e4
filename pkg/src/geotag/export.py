"""GeoRSS, KML 2.0 and GeoJSON writers for tagged documents.

Every writer takes tagged records (``TaggedRecord`` objects or their JSON
form as read back from ``tag`` output) and returns text.  Output is
deterministic: fixed element order and coordinates with six decimals.
"""
import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

GEO_NS = "http://www.w3.org/2003/01/geo/wgs84_pos#"
KML_NS = "http://earth.google.com/kml/2.0"

KML_MAX_CLASS = 3
ICON_STYLES = {
    "high": "http://maps.google.com/mapfiles/kml/paddle/red-circle.png",
    "medium": "http://maps.google.com/mapfiles/kml/paddle/ylw-circle.png",
    "low": "http://maps.google.com/mapfiles/kml/paddle/grn-circle.png",
}


def _fmt(x):
    return f"{x:.6f}"


def _as_dict(rec):
    return rec.to_json() if hasattr(rec, "to_json") else rec


def _title(rec):
    return rec.get("title") or " ".join(rec.get("text", "").split()[:12]) or rec["id"]


def best_mention(mentions):
    """Highest score; ties go to the earliest span."""
    if not mentions:
        return None
    return min(mentions, key=lambda m: (-m["score"], m["start"], m["end"]))


def icon_style(article_count):
    if article_count > 20:
        return "high"
    if article_count >= 10:
        return "medium"
    return "low"


def _serialize(root):
    ET.indent(root, space="  ")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def to_georss(records, title="geotag feed", link="", description="Geotagged documents"):
    """RSS 2.0 with one item per document located at its best mention.

    Returns ``(xml_text, skipped_ids)``; documents without mentions are skipped.
    """
    ET.register_namespace("geo", GEO_NS)
    rss = ET.Element("rss", {"version": "2.0"})
    channel = ET.SubElement(rss, "channel")
    ET.SubElement(channel, "title").text = title
    ET.SubElement(channel, "link").text = link
    ET.SubElement(channel, "description").text = description
    skipped = []
    for rec in map(_as_dict, records):
        best = best_mention(rec.get("mentions", ()))
        if best is None:
            skipped.append(rec["id"])
            continue
        item = ET.SubElement(channel, "item")
        ET.SubElement(item, "title").text = _title(rec)
        if rec.get("link"):
            ET.SubElement(item, "link").text = rec["link"]
        ET.SubElement(item, "description").text = f"{best['surface']} ({best['country']})"
        ET.SubElement(item, "guid", {"isPermaLink": "false"}).text = rec["id"]
        ET.SubElement(item, f"{{{GEO_NS}}}lat").text = _fmt(best["lat"])
        ET.SubElement(item, f"{{{GEO_NS}}}long").text = _fmt(best["lon"])
    return _serialize(rss), skipped


@dataclass
class Story:
    story_id: str
    title: str
    description: str = ""
    link: str = ""
    article_count: int = 1
    mentions: list = field(default_factory=list)  # mention dicts

    def __post_init__(self):
        if self.article_count < 1:
            raise ValueError("article_count must be >= 1")


def stories_from(records):
    """Group tagged records into stories by ``story_id`` (default: the document id).

    A story's article count is the largest ``article_count`` given, else the
    number of its documents; each place appears once per story.
    """
    grouped = {}
    for rec in map(_as_dict, records):
        sid = rec.get("story_id") or rec["id"]
        grouped.setdefault(sid, []).append(rec)
    stories = []
    for sid, recs in grouped.items():
        counts = [r["article_count"] for r in recs if r.get("article_count")]
        seen = set()
        mentions = []
        for r in recs:
            for m in r.get("mentions", ()):
                if m["place_id"] not in seen:
                    seen.add(m["place_id"])
                    mentions.append(m)
        first = recs[0]
        stories.append(Story(sid, _title(first), first.get("description", ""),
                             first.get("link", ""), max(counts) if counts else len(recs),
                             mentions))
    return stories


def to_kml(stories):
    root = ET.Element("kml", {"xmlns": KML_NS})
    doc = ET.SubElement(root, "Document")
    for name, href in ICON_STYLES.items():
        style = ET.SubElement(doc, "Style", {"id": name})
        icon = ET.SubElement(ET.SubElement(style, "IconStyle"), "Icon")
        ET.SubElement(icon, "href").text = href
    for story in stories:
        folder = ET.SubElement(doc, "Folder")
        ET.SubElement(folder, "name").text = story.title
        desc = story.description or story.title
        if story.link:
            desc = f"{desc}\n{story.link}"
        ET.SubElement(folder, "description").text = desc
        style = icon_style(story.article_count)
        for m in story.mentions:
            if m["class"] > KML_MAX_CLASS:
                continue
            pm = ET.SubElement(folder, "Placemark")
            ET.SubElement(pm, "name").text = m.get("name") or m["surface"]
            text = f"{m['surface']} ({m['country']}): {story.title}"
            if story.link:
                text = f"{text}\n{story.link}"
            ET.SubElement(pm, "description").text = text
            ET.SubElement(pm, "styleUrl").text = f"#{style}"
            point = ET.SubElement(pm, "Point")
            ET.SubElement(point, "coordinates").text = f"{_fmt(m['lon'])},{_fmt(m['lat'])},0"
    return _serialize(root)


def to_geojson(records):
    features = []
    for rec in map(_as_dict, records):
        for m in rec.get("mentions", ()):
            features.append({
                "type": "Feature",
                "geometry": {
                    "type": "Point",
                    "coordinates": [round(m["lon"], 6), round(m["lat"], 6)],
                },
                "properties": {
                    "doc_id": rec["id"],
                    "surface": m["surface"],
                    "place_id": m["place_id"],
                    "country": m["country"],
                    "class": m["class"],
                    "score": round(m["score"], 6),
                    "span": [m["start"], m["end"]],
                },
            })
    return json.dumps({"type": "FeatureCollection", "features": features},
                      ensure_ascii=False, indent=1) + "\n"
