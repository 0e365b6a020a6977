#!/usr/bin/env python3
"""Walkthrough: metadata features, the random forest, and bot tallies."""

from datetime import datetime, timezone
from pathlib import Path

from rtgraph.botdetect import (
    FEATURE_NAMES,
    bot_report,
    cross_validate,
    extract_features,
    feature_importance,
    feature_label_correlation,
    load_training_csv,
    train_forest,
)
from rtgraph.graph import build_retweet_graph, to_undirected
from rtgraph.partition import select_k
from rtgraph.records import filter_by_keywords, load_keywords, parse_corpus

CORPUS = Path(__file__).resolve().parents[1] / "data" / "corpus10k"

# -- 1. One account -> one 17-dimensional vector -----------------------------
corpus = parse_corpus(CORPUS / "tweets.jsonl", CORPUS / "users.jsonl")
collection = datetime(2022, 4, 6, tzinfo=timezone.utc)
sample = corpus.users[0]
vec = extract_features(sample, collection)
print(f"features for @{sample.screen_name}:")
for name, value in zip(FEATURE_NAMES, vec):
    print(f"  {name:20s} {value:,.3f}")

# -- 2. Train on the shipped labeled archetypes and cross-validate -----------
X, y = load_training_csv(CORPUS / "bot_train.csv")
forest = train_forest(X, y, n_trees=100, seed=42)
cv = cross_validate(X, y, folds=10, seed=42, n_trees=50)
print(f"\n10-fold CV f1 on the training archetypes: {cv.mean_f1:.3f}")

# -- 3. Which features carry the signal? --------------------------------------
r, _ = feature_label_correlation(X, y)
imp = feature_importance(forest)
print("\nfeature                 corr(label)   importance")
for i in sorted(range(17), key=lambda i: -imp[i])[:6]:
    print(f"  {FEATURE_NAMES[i]:20s} {r[i]:+9.3f} {imp[i]:12.3f}")

# -- 4. Apply to the corpus at the precision-oriented 0.75 threshold ----------
tweets = filter_by_keywords(corpus.tweets, load_keywords(CORPUS / "keywords.txt"))
selection = select_k(to_undirected(build_retweet_graph(tweets)), 10, seed=42)
print("\nper-community bot statistics (threshold 0.75):")
for row in bot_report(corpus.users, tweets, selection.partition, forest, 0.75, collection):
    print(f"  community-{row.community}: {row.bots}/{row.accounts} bots "
          f"({row.bot_proportion:.3f}), {row.automated_tweets}/{row.tweets} "
          f"automated tweets ({row.automated_proportion:.3f})")
