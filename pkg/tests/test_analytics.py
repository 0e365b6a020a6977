"""Hashtag tables, n-gram tables and regional histograms vs hand oracles."""

import math
import random

import pytest

from rtgraph.analytics import (
    hashtag_frequencies,
    join_regions_geojson,
    load_gazetteer,
    load_region_shapes,
    load_stopwords,
    default_region_shapes_path,
    ngram_frequencies,
    normalize_location,
    region_histogram,
    tokenize,
)
from rtgraph.errors import ConfigError

from conftest import make_tweet, make_user


# ---------------------------------------------------------------- hashtags


def test_repeated_hashtag_by_one_user_counts_once():
    tweets = [make_tweet(i, 1, hashtags=("a",)) for i in range(5)]
    table = hashtag_frequencies(tweets, {1: 0}, top_n=10)
    assert table == {0: [("a", 1)]}


def test_hashtags_match_per_user_set_union_oracle():
    rng = random.Random(21)
    tags = ["vote", "demain", "alpha", "bravo", "debat", "soir"]
    users = list(range(1, 21))
    partition = {u: (0 if u <= 12 else 1) for u in users}
    tweets = []
    for i in range(400):
        u = rng.choice(users)
        chosen = rng.sample(tags, rng.randint(0, 3))
        tweets.append(make_tweet(i, u, hashtags=tuple(chosen)))
    table = hashtag_frequencies(tweets, partition, top_n=len(tags))
    # oracle: per community and tag, union the posting users into sets
    seen = {}
    for t in tweets:
        for tag in t.hashtags:
            seen.setdefault((partition[t.user_id], tag), set()).add(t.user_id)
    for cid in (0, 1):
        expected = sorted(
            ((tag, len(us)) for (c, tag), us in seen.items() if c == cid),
            key=lambda r: (-r[1], r[0]),
        )
        assert table[cid] == expected
        size = sum(1 for u in partition if partition[u] == cid)
        assert all(count <= size for _, count in table[cid])


def test_hashtag_table_invariant_under_tweet_duplication():
    tweets = [make_tweet(1, 1, hashtags=("x",)), make_tweet(2, 2, hashtags=("x", "y"))]
    partition = {1: 0, 2: 0}
    base = hashtag_frequencies(tweets, partition, top_n=5)
    doubled = hashtag_frequencies(tweets + [make_tweet(3, 1, hashtags=("x",))], partition, top_n=5)
    assert base == doubled


def test_top_n_truncates_rows():
    tweets = [make_tweet(i, 1, hashtags=(f"t{i}",)) for i in range(8)]
    table = hashtag_frequencies(tweets, {1: 0}, top_n=3)
    assert len(table[0]) == 3


# ------------------------------------------------------------------ ngrams


def test_stop_word_removal_then_pairing():
    tweets = [make_tweet(1, 1, text="justice sociale pour tous")]
    table = ngram_frequencies(tweets, {1: 0}, stopwords={"pour"}, top_n=20)
    got = dict(table[0])
    assert set(got) == {"justice", "sociale", "tous", "justice sociale", "sociale tous"}
    assert all(count == 1 for count in got.values())


def test_empty_community_has_empty_table():
    table = ngram_frequencies([], {5: 0}, stopwords=frozenset(), top_n=5)
    assert table == {0: []}


def test_tokenizer_strips_urls_mentions_hash_and_punctuation():
    tokens = tokenize("Vive l'élection! #Vote2022 @candidat http://t.co/abc", {"l"})
    assert tokens == ["vive", "élection", "vote2022"]


def test_ngrams_match_independent_tokenizer_oracle():
    rng = random.Random(33)
    stopwords = frozenset({"le", "la", "de", "et", "pour", "l"})
    bank = ["justice", "sociale", "élection", "débat", "programme", "le", "la",
            "pour", "climat", "économie", "santé", "de", "et", "vote2022"]
    extras = ["#Alpha", "@quelquun", "http://t.co/xyz", ""]
    users = list(range(1, 9))
    partition = {u: u % 2 for u in users}
    tweets = []
    for i in range(500):
        words = rng.choices(bank, k=rng.randint(1, 8))
        if rng.random() < 0.4:
            words.insert(rng.randrange(len(words) + 1), rng.choice(extras))
        text = " ".join(w for w in words if w)
        if rng.random() < 0.3:
            text += "!"
        tweets.append(make_tweet(i, rng.choice(users), text=text))
    table = ngram_frequencies(tweets, partition, stopwords, top_n=10_000)

    # oracle: character-walk tokenizer and manual pair counting
    def oracle_tokens(text):
        out = []
        for word in text.lower().split():
            if word.startswith(("http://", "https://", "www.")) or word.startswith("@"):
                continue
            buf = ""
            for ch in word:
                if ch.isalnum() and ch != "_":
                    buf += ch
                elif buf:
                    out.append(buf)
                    buf = ""
            if buf:
                out.append(buf)
        return [t for t in out if t not in stopwords]

    expected = {0: {}, 1: {}}
    for t in tweets:
        toks = oracle_tokens(t.text)
        bucket = expected[partition[t.user_id]]
        for tok in toks:
            bucket[tok] = bucket.get(tok, 0) + 1
        for a, b in zip(toks, toks[1:]):
            bucket[f"{a} {b}"] = bucket.get(f"{a} {b}", 0) + 1
    for cid in (0, 1):
        assert dict(table[cid]) == expected[cid]
        counts = [c for _, c in table[cid]]
        assert counts == sorted(counts, reverse=True)


# ------------------------------------------------------------------- geo


def test_known_city_maps_to_region():
    gaz = load_gazetteer()
    users = [make_user(1, location="Paris")]
    table = region_histogram(users, {1: 0}, gaz)
    assert table[0] == [("Île-de-France", 1, math.log10(2))]


def test_unmatched_location_is_excluded():
    gaz = load_gazetteer()
    users = [make_user(1, location="Bruxelles"), make_user(2, location="")]
    table = region_histogram(users, {1: 0, 2: 0}, gaz)
    assert table[0] == []


def test_count_99_gives_log_value_2():
    gaz = load_gazetteer()
    users = [make_user(i, location="paris") for i in range(1, 100)]
    table = region_histogram(users, {u.user_id: 0 for u in users}, gaz)
    assert table[0] == [("Île-de-France", 99, 2.0)]


def test_fifty_user_fixture_matches_hand_tally():
    gaz = load_gazetteer()
    spec = (
        [("Paris", 12), ("Lyon", 8), ("Marseille", 5), ("Bordeaux", 4), ("Nantes", 3),
         ("Strasbourg", 2), ("Lille", 1), ("Bruxelles", 5), ("", 4), ("Mars", 6)]
    )
    users = []
    uid = 1
    for location, count in spec:
        for _ in range(count):
            users.append(make_user(uid, location=location))
            uid += 1
    assert len(users) == 50
    table = region_histogram(users, {u.user_id: 0 for u in users}, gaz)
    expected = [
        ("Auvergne-Rhône-Alpes", 8, math.log10(9)),
        ("Grand Est", 2, math.log10(3)),
        ("Hauts-de-France", 1, math.log10(2)),
        ("Île-de-France", 12, math.log10(13)),
        ("Nouvelle-Aquitaine", 4, math.log10(5)),
        ("Pays de la Loire", 3, math.log10(4)),
        ("Provence-Alpes-Côte d'Azur", 5, math.log10(6)),
    ]
    assert table[0] == expected
    assert sum(count for _, count, _ in table[0]) <= 50


def test_location_normalization():
    assert normalize_location("  ÎLE-DE-FRANCE ") == "ile-de-france"
    assert normalize_location("Besançon") == "besancon"


def test_malformed_gazetteer_rows_are_fatal(tmp_path):
    bad_header = tmp_path / "g1.csv"
    bad_header.write_text("loc,region\nparis,Île-de-France\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_gazetteer(bad_header)
    bad_region = tmp_path / "g2.csv"
    bad_region.write_text(
        "location_normalized,region\nparis,Ile de Paris\n", encoding="utf-8"
    )
    with pytest.raises(ConfigError):
        load_gazetteer(bad_region)
    short_row = tmp_path / "g3.csv"
    short_row.write_text("location_normalized,region\nparis\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_gazetteer(short_row)


def test_geojson_join_attaches_log_values():
    shapes = load_region_shapes(default_region_shapes_path())
    histogram = {0: [("Île-de-France", 9, 1.0)], 1: [("Corse", 99, 2.0)]}
    joined = join_regions_geojson(histogram, shapes)
    by_name = {f["properties"]["name"]: f["properties"]["communities"] for f in joined["features"]}
    assert by_name["Île-de-France"] == {"0": {"user_count": 9, "log_value": 1.0}}
    assert by_name["Corse"] == {"1": {"user_count": 99, "log_value": 2.0}}
    assert by_name["Bretagne"] == {}
    with pytest.raises(ConfigError):
        join_regions_geojson({0: [("Atlantis", 1, 0.3)]}, shapes)


def test_analyses_are_pure_functions():
    rng = random.Random(4)
    tweets = [
        make_tweet(i, rng.randint(1, 6), text="le vote élection demain", hashtags=("vote",))
        for i in range(50)
    ]
    partition = {u: 0 for u in range(1, 7)}
    stop = load_stopwords()
    assert ngram_frequencies(tweets, partition, stop, 10) == ngram_frequencies(
        tweets, partition, stop, 10
    )
    assert hashtag_frequencies(tweets, partition, 10) == hashtag_frequencies(
        tweets, partition, 10
    )
