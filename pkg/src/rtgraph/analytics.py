"""Per-community profiling: hashtag tables, unigram/bigram tables and
regional histograms.

All three analyses are pure functions of their inputs, so identical inputs
always produce identical tables. Geocoding is an offline gazetteer lookup
(normalized free-text location -> region) over the 13 regions of
Metropolitan France; anything that does not match is excluded.
"""

from __future__ import annotations

import csv
import json
import math
import re
import unicodedata
from collections import Counter
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import ConfigError
from .partition import Partition
from .records import TweetRecord, UserProfile

METRO_REGIONS = (
    "Auvergne-Rhône-Alpes",
    "Bourgogne-Franche-Comté",
    "Bretagne",
    "Centre-Val de Loire",
    "Corse",
    "Grand Est",
    "Hauts-de-France",
    "Île-de-France",
    "Normandie",
    "Nouvelle-Aquitaine",
    "Occitanie",
    "Pays de la Loire",
    "Provence-Alpes-Côte d'Azur",
)

_URL_RE = re.compile(r"(?:https?://|www\.)\S+")
_MENTION_RE = re.compile(r"@\w+")
_NON_WORD_RE = re.compile(r"[^\w\s]|_")


def _community_mapping(partition) -> Mapping[int, int]:
    return partition.community_of if isinstance(partition, Partition) else partition


def _community_ids(mapping: Mapping[int, int]) -> list[int]:
    return sorted(set(mapping.values()))


def tokenize(text: str, stopwords: frozenset[str] | set[str] = frozenset()) -> list[str]:
    """Lowercase, drop URLs/@-mentions/'#'/punctuation, split, drop stop words."""
    text = text.lower()
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    text = text.replace("#", " ")
    text = _NON_WORD_RE.sub(" ", text)
    return [tok for tok in text.split() if tok not in stopwords]


def hashtag_frequencies(
    tweets: Sequence[TweetRecord], partition, top_n: int
) -> dict[int, list[tuple[str, int]]]:
    """Per community, the top hashtags by number of distinct users.

    A user posting the same hashtag many times counts once, so counts never
    exceed the community size. Rows are sorted by descending user count,
    then lexicographically.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    mapping = _community_mapping(partition)
    users_per_tag: dict[int, dict[str, set[int]]] = {}
    for rec in tweets:
        cid = mapping.get(rec.user_id)
        if cid is None:
            continue
        per_tag = users_per_tag.setdefault(cid, {})
        for tag in rec.hashtags:
            per_tag.setdefault(tag, set()).add(rec.user_id)
    table: dict[int, list[tuple[str, int]]] = {}
    for cid in _community_ids(mapping):
        rows = [(tag, len(users)) for tag, users in users_per_tag.get(cid, {}).items()]
        rows.sort(key=lambda r: (-r[1], r[0]))
        table[cid] = rows[:top_n]
    return table


def ngram_frequencies(
    tweets: Sequence[TweetRecord],
    partition,
    stopwords: frozenset[str] | set[str],
    top_n: int,
) -> dict[int, list[tuple[str, int]]]:
    """Per community, the top unigrams and bigrams by occurrence count.

    Stop words are removed before pairing, so tokens made adjacent by the
    removal do form bigrams. Bigrams are space-joined. Counts cover every
    tweet authored by community members, retweets included.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    mapping = _community_mapping(partition)
    counts: dict[int, Counter] = {cid: Counter() for cid in _community_ids(mapping)}
    for rec in tweets:
        cid = mapping.get(rec.user_id)
        if cid is None:
            continue
        tokens = tokenize(rec.text, stopwords)
        counter = counts[cid]
        counter.update(tokens)
        counter.update(f"{a} {b}" for a, b in zip(tokens, tokens[1:]))
    table: dict[int, list[tuple[str, int]]] = {}
    for cid, counter in counts.items():
        rows = sorted(counter.items(), key=lambda r: (-r[1], r[0]))
        table[cid] = rows[:top_n]
    return table


def strip_accents(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def normalize_location(text: str) -> str:
    """Case-fold, strip accents and trim a free-text location."""
    return strip_accents(text.casefold()).strip()


def load_gazetteer(path=None) -> dict[str, str]:
    """Load a location -> region table; rows must map into the 13 regions."""
    if path is None:
        path = default_gazetteer_path()
    table: dict[str, str] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(row for row in fh if not row.startswith("#"))
        header = next(reader, None)
        if header != ["location_normalized", "region"]:
            raise ConfigError(f"{path}: gazetteer header must be location_normalized,region")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 2 or not row[0].strip() or not row[1].strip():
                raise ConfigError(f"{path}:{lineno}: malformed gazetteer row {row!r}")
            location, region = row[0], row[1]
            if region not in METRO_REGIONS:
                raise ConfigError(f"{path}:{lineno}: unknown region {region!r}")
            table[normalize_location(location)] = region
    return table


def load_stopwords(path=None) -> frozenset[str]:
    if path is None:
        path = default_stopwords_path()
    words = set()
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            word = raw.strip()
            if word and not word.startswith("#"):
                words.add(word.lower())
    return frozenset(words)


def default_gazetteer_path() -> Path:
    return Path(resources.files("rtgraph") / "data" / "gazetteer_fr.csv")


def default_stopwords_path() -> Path:
    return Path(resources.files("rtgraph") / "data" / "stopwords_fr.txt")


def default_region_shapes_path() -> Path:
    return Path(resources.files("rtgraph") / "data" / "regions_fr.geojson")


def region_histogram(
    users: Sequence[UserProfile],
    partition,
    gazetteer: Mapping[str, str],
) -> dict[int, list[tuple[str, int, float]]]:
    """Per community, (region, user_count, log10(1 + user_count)) rows.

    Members whose location misses the gazetteer (or who have no profile)
    are excluded, so per-community totals never exceed the community size.
    Only regions with at least one user appear.
    """
    mapping = _community_mapping(partition)
    counts: dict[int, Counter] = {cid: Counter() for cid in _community_ids(mapping)}
    for user in users:
        cid = mapping.get(user.user_id)
        if cid is None:
            continue
        region = gazetteer.get(normalize_location(user.location))
        if region is not None:
            counts[cid][region] += 1
    table: dict[int, list[tuple[str, int, float]]] = {}
    for cid, counter in counts.items():
        table[cid] = [
            (region, counter[region], math.log10(1 + counter[region]))
            for region in METRO_REGIONS
            if counter[region] > 0
        ]
    return table


def load_region_shapes(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        shapes = json.load(fh)
    if shapes.get("type") != "FeatureCollection" or "features" not in shapes:
        raise ConfigError(f"{path}: region shapes must be a GeoJSON FeatureCollection")
    return shapes


def join_regions_geojson(
    histogram: Mapping[int, Iterable[tuple[str, int, float]]], shapes: dict
) -> dict:
    """Attach per-community user counts and log values to region features.

    Raises ConfigError when the histogram names a region absent from the
    shapes file. Regions without data keep an empty community map.
    """
    features_by_name = {}
    for feature in shapes["features"]:
        name = feature.get("properties", {}).get("name")
        if name:
            features_by_name[name] = feature
    joined = {"type": "FeatureCollection", "features": []}
    attach: dict[str, dict] = {name: {} for name in features_by_name}
    for cid in sorted(histogram):
        for region, count, log_value in histogram[cid]:
            if region not in features_by_name:
                raise ConfigError(f"region {region!r} not present in the shapes file")
            attach[region][str(cid)] = {"user_count": count, "log_value": log_value}
    for feature in shapes["features"]:
        name = feature.get("properties", {}).get("name")
        new_props = dict(feature.get("properties", {}))
        new_props["communities"] = attach.get(name, {})
        joined["features"].append(
            {"type": "Feature", "properties": new_props, "geometry": feature.get("geometry")}
        )
    return joined
