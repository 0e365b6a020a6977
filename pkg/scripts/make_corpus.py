#!/usr/bin/env python3
"""Generate the shipped synthetic 10k-tweet corpus (data/corpus10k/).

Entirely synthetic: four planted factions (alpha/bravo/charlie/delta) with
dense intra-faction retweeting so the k-core keeps them and Louvain splits
them apart, plus low-degree peripheral users that the pruning removes.
Faction vocabularies vary in offensive-word rate, account metadata mixes
human and bot archetypes, and locations mix real French cities with junk.

Deterministic for a fixed --seed; writes tweets.jsonl, users.jsonl,
keywords.txt, offense_train.csv, bot_train.csv and config.txt.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

WINDOW_START = datetime(2022, 2, 14, tzinfo=timezone.utc)
WINDOW_DAYS = 50

# partners = ring width: every member retweets the next 10 members of its
# faction, giving each exactly 20 intra-faction neighbors, so all four
# factions share one core number and survive k selection together
FACTIONS = {
    "alpha": {"core": 60, "partners": 10, "offense_rate": 0.10},
    "bravo": {"core": 48, "partners": 10, "offense_rate": 0.25},
    "charlie": {"core": 36, "partners": 10, "offense_rate": 0.18},
    "delta": {"core": 24, "partners": 10, "offense_rate": 0.05},
}
N_PERIPHERY = 120
N_TWEETS = 10_000

KEYWORDS = ["élection", "présidentielle", "scrutin", "second tour"]

COMMON_WORDS = (
    "élection présidentielle scrutin campagne programme débat vote sondage "
    "meeting candidat projet avenir république citoyens demain france"
).split()

POLITE_WORDS = (
    "merci bravo ensemble espoir confiance solidarité sérieux clair honnête "
    "convaincant courage respect engagement idées"
).split()

OFFENSIVE_WORDS = (
    "abruti idiot honteux minable menteur clown escroc nul lamentable "
    "pitoyable imposteur guignol"
).split()

CITY_POOL = [
    ("Paris", 18), ("Lyon", 8), ("Marseille", 8), ("Toulouse", 5), ("Bordeaux", 5),
    ("Lille", 4), ("Nantes", 4), ("Strasbourg", 3), ("Rennes", 3), ("Nice", 3),
    ("Montpellier", 3), ("Grenoble", 2), ("Dijon", 2), ("Rouen", 2), ("Tours", 2),
    ("Ajaccio", 1), ("Brest", 1), ("Metz", 1), ("Amiens", 1), ("Limoges", 1),
]
JUNK_LOCATIONS = ["Bruxelles", "Genève", "quelque part", "Mars", "Atlantide", "🌍"]


def iso(dt):
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def faction_hashtags(name):
    return [f"{name}gagnant", f"vote{name}", f"team{name}", f"{name}2022", f"avec{name}"]


def make_users(rng):
    """Returns (users, faction_of, bots, periphery_ids)."""
    users = []
    faction_of = {}
    uid = 100
    for name, cfg in FACTIONS.items():
        for _ in range(cfg["core"]):
            users.append(uid)
            faction_of[uid] = name
            uid += 1
    periphery = []
    for _ in range(N_PERIPHERY):
        users.append(uid)
        periphery.append(uid)
        uid += 1
    bots = set(rng.sample(users, int(0.15 * len(users))))
    return users, faction_of, bots, periphery


def human_profile(rng, uid):
    age = rng.randint(300, 4000)
    created = WINDOW_START - timedelta(days=age, hours=rng.randint(0, 23))
    statuses = int(age * rng.uniform(0.2, 6.0))
    name = rng.choice(["jean", "marie", "luc", "emma", "paul", "lea", "hugo", "zoe"])
    name += rng.choice(["", "_", ""]) + rng.choice(["", str(rng.randint(1, 99))])
    return {
        "user_id": uid,
        "screen_name": f"{name}{uid % 97}",
        "created_at": iso(created),
        "description": rng.choice(
            ["citoyen engagé", "j'aime le débat public", "", "prof et parent", "ici pour discuter"]
        ),
        "location": "",
        "statuses_count": statuses,
        "followers_count": int(rng.lognormvariate(4.5, 1.2)),
        "friends_count": int(rng.lognormvariate(4.8, 0.9)),
        "favourites_count": int(age * rng.uniform(0.1, 4.0)),
        "listed_count": rng.randint(0, 25),
        "default_profile": rng.random() < 0.25,
        "verified": rng.random() < 0.02,
        "geo_enabled": rng.random() < 0.40,
    }


def bot_profile(rng, uid):
    age = rng.randint(5, 400)
    created = WINDOW_START - timedelta(days=age, hours=rng.randint(0, 23))
    return {
        "user_id": uid,
        "screen_name": f"actu{rng.randint(100, 99999)}_{uid % 89}",
        "created_at": iso(created),
        "description": rng.choice(["", "", "news 24/7", "bot? jamais"]),
        "location": "",
        "statuses_count": int(age * rng.uniform(20, 200)),
        "followers_count": rng.randint(0, 120),
        "friends_count": rng.randint(200, 4000),
        "favourites_count": rng.randint(0, 50),
        "listed_count": 0,
        "default_profile": rng.random() < 0.8,
        "verified": False,
        "geo_enabled": rng.random() < 0.05,
    }


def pick_location(rng):
    roll = rng.random()
    if roll < 0.68:
        cities = [c for c, w in CITY_POOL for _ in range(w)]
        return rng.choice(cities)
    if roll < 0.80:
        return rng.choice(JUNK_LOCATIONS)
    return ""


def tweet_text(rng, faction, offensive, force_keyword=False):
    words = rng.choices(COMMON_WORDS, k=rng.randint(3, 7))
    if faction:
        words.insert(rng.randrange(len(words)), f"avec {faction}")
    words += rng.choices(OFFENSIVE_WORDS if offensive else POLITE_WORDS, k=rng.randint(1, 3))
    if force_keyword or rng.random() < 0.9:  # most tweets carry a tracked keyword
        words.insert(rng.randrange(len(words)), rng.choice(KEYWORDS))
    text = " ".join(words)
    return text[0].upper() + text[1:] + rng.choice([".", " !", "", " ?"])


def random_stamp(rng):
    return WINDOW_START + timedelta(
        days=rng.randint(0, WINDOW_DAYS - 1),
        seconds=rng.randint(0, 86_399),
    )


def build_corpus(seed):
    rng = random.Random(seed)
    users, faction_of, bots, periphery = make_users(rng)

    # retweet skeleton: ring structure inside each faction (every member
    # retweets the next `partners` members), so intra-faction degree is
    # exactly 2 * partners; cross-faction retweets and low-degree periphery
    # activity sit on top as noise
    retweet_pairs = []
    members = {name: [u for u, f in faction_of.items() if f == name] for name in FACTIONS}
    for name, cfg in FACTIONS.items():
        ring = members[name]
        for i, u in enumerate(ring):
            for step in range(1, cfg["partners"] + 1):
                v = ring[(i + step) % len(ring)]
                retweet_pairs.append((u, v))
                if rng.random() < 0.10:
                    retweet_pairs.append((u, v))
        # occasional self-retweet keeps the directed graph's self-loop path warm
        retweet_pairs.append((members[name][0], members[name][0]))
    all_core = [u for m in members.values() for u in m]
    for _ in range(int(0.02 * len(retweet_pairs))):
        retweet_pairs.append((rng.choice(all_core), rng.choice(all_core)))
    for p in periphery:
        for _ in range(rng.randint(1, 3)):
            retweet_pairs.append((p, rng.choice(all_core)))

    n_originals = N_TWEETS - len(retweet_pairs)
    if n_originals <= 0:
        raise SystemExit("retweet skeleton exceeded the tweet budget")

    authors = []
    for _ in range(n_originals):
        if rng.random() < 0.8:
            authors.append(rng.choice(all_core))
        else:
            authors.append(rng.choice(periphery))

    tweets = []
    tid = 1
    for u, v in retweet_pairs:
        faction = faction_of.get(v)
        text = "RT @u{}: {}".format(
            v, tweet_text(rng, faction, rng.random() < 0.15, force_keyword=True)
        )
        tweets.append(
            {
                "tweet_id": tid,
                "user_id": u,
                "text": text,
                "created_at": iso(random_stamp(rng)),
                "hashtags": rng.sample(faction_hashtags(faction), rng.randint(0, 2))
                if faction
                else [],
                "retweeted_user_id": v,
                "retweeted_status_id": 10**12 + tid,  # source ids from outside the sample
                "lang": "fr",
            }
        )
        tid += 1
    for u in authors:
        faction = faction_of.get(u)
        rate = FACTIONS[faction]["offense_rate"] if faction else 0.08
        offensive = rng.random() < rate
        tags = rng.sample(faction_hashtags(faction), rng.randint(0, 3)) if faction else []
        if rng.random() < 0.2:
            tags.append("presidentielle2022")
        tweets.append(
            {
                "tweet_id": tid,
                "user_id": u,
                "text": tweet_text(rng, faction, offensive),
                "created_at": iso(random_stamp(rng)),
                "hashtags": tags,
                "lang": "fr",
            }
        )
        tid += 1

    profiles = []
    skip_profiles = set(rng.sample(periphery, 8))  # some users stay profile-less
    for uid in users:
        if uid in skip_profiles:
            continue
        profile = bot_profile(rng, uid) if uid in bots else human_profile(rng, uid)
        profile["location"] = pick_location(rng)
        profiles.append(profile)
    return tweets, profiles


def build_offense_training(rng):
    rows = []
    for i in range(240):
        words = rng.choices(COMMON_WORDS, k=rng.randint(2, 6)) + rng.choices(
            POLITE_WORDS, k=rng.randint(1, 3)
        )
        rows.append((" ".join(words), "normal"))
    for i in range(480):
        words = rng.choices(COMMON_WORDS, k=rng.randint(1, 4)) + rng.choices(
            OFFENSIVE_WORDS, k=rng.randint(1, 3)
        )
        rows.append((" ".join(words), "offensive"))
    rng.shuffle(rows)
    return rows


def build_bot_training(rng, n_per_class=400):
    from rtgraph.botdetect import FEATURE_NAMES, extract_features
    from rtgraph.records import user_from_json

    collection = WINDOW_START + timedelta(days=WINDOW_DAYS)
    rows = []
    for cls, builder in (("human", human_profile), ("bot", bot_profile)):
        for i in range(n_per_class):
            profile = user_from_json(builder(rng, 10_000 + i))
            vec = extract_features(profile, collection)
            rows.append([f"{x:.6f}" for x in vec] + [cls])
    rng.shuffle(rows)
    return list(FEATURE_NAMES) + ["label"], rows


CONFIG_TEMPLATE = """\
# Pipeline configuration for the shipped synthetic corpus.
# Paths are resolved relative to this file.
tweets = tweets.jsonl
users = users.jsonl
keywords = keywords.txt
offense_scorer = baseline
offense_train = offense_train.csv
bot_train = bot_train.csv
seed = 42
min_community_size = 10
offense_threshold = 0.5
bot_threshold = 0.75
top_hashtags = 10
top_ngrams = 30
"""


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=20220410)
    parser.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "data" / "corpus10k"))
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)

    tweets, profiles = build_corpus(args.seed)
    assert len(tweets) == N_TWEETS, len(tweets)
    with open(out / "tweets.jsonl", "w", encoding="utf-8") as fh:
        for t in tweets:
            fh.write(json.dumps(t, ensure_ascii=False) + "\n")
    with open(out / "users.jsonl", "w", encoding="utf-8") as fh:
        for p in profiles:
            fh.write(json.dumps(p, ensure_ascii=False) + "\n")
    with open(out / "keywords.txt", "w", encoding="utf-8") as fh:
        fh.write("\n".join(KEYWORDS) + "\n")
    with open(out / "offense_train.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["text", "label"])
        writer.writerows(build_offense_training(rng))
    header, rows = build_bot_training(rng)
    with open(out / "bot_train.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    (out / "config.txt").write_text(CONFIG_TEMPLATE, encoding="utf-8")
    print(f"wrote {len(tweets)} tweets, {len(profiles)} profiles to {out}")


if __name__ == "__main__":
    main()
