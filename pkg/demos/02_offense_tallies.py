#!/usr/bin/env python3
"""Walkthrough: offensive-tweet tallies per community.

Shows the dedup rules, the pluggable scorer surface, and the arithmetic
cross-check against the published reference tallies.
"""

from pathlib import Path

from rtgraph.graph import build_retweet_graph, to_undirected
from rtgraph.offense import dedup_unique, load_labeled_csv, offense_report, train_baseline
from rtgraph.partition import select_k
from rtgraph.records import filter_by_keywords, load_keywords, parse_corpus
from rtgraph.reference import check_offense_rows

CORPUS = Path(__file__).resolve().parents[1] / "data" / "corpus10k"

corpus = parse_corpus(CORPUS / "tweets.jsonl", CORPUS / "users.jsonl")
tweets = filter_by_keywords(corpus.tweets, load_keywords(CORPUS / "keywords.txt"))
selection = select_k(to_undirected(build_retweet_graph(tweets)), 10, seed=42)
partition = selection.partition

# -- 1. Deduplication: retweets out, exact normalized texts collapsed --------
community0 = [t for t in tweets if partition.community_of.get(t.user_id) == 0]
unique = dedup_unique(community0)
print(f"community 0: {len(community0)} tweets -> {len(unique)} unique originals")

# -- 2. Train the bag-of-words baseline scorer on labeled rows ---------------
rows = load_labeled_csv(CORPUS / "offense_train.csv")
scorer = train_baseline(rows, seed=42)
print(f"baseline scorer held-out f1: {scorer.holdout_f1:.3f}")
print(f"  score('programme sérieux')     = {scorer.score_text('programme sérieux'):.3f}")
print(f"  score('abruti minable honteux') = {scorer.score_text('abruti minable honteux'):.3f}")

# -- 3. Per-community report at the 0.5 threshold -----------------------------
for row in offense_report(tweets, partition, scorer, threshold=0.5):
    print(f"  community-{row.community}: {row.offensive_tweets}/{row.unique_tweets} "
          f"offensive, proportion {row.proportion:.3f}")

# -- 4. The published tallies reproduce from their own counts -----------------
print("\npublished-table arithmetic:")
for check in check_offense_rows():
    status = "ok" if check.matches else "DEVIATES"
    print(f"  {check.community:12s} {check.offensive_tweets:>9,}/{check.unique_tweets:<9,} "
          f"-> {check.computed:.3f} (published {check.published:.3f}) {status}")
