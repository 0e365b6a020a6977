"""Offensive-tweet tallies per community.

Retweets are excluded and texts deduplicated before scoring, so the counts
describe where offensive language originates rather than how it spreads.
Scoring is pluggable: probabilities can come from a file keyed by tweet id
(for externally run classifiers) or from a small bag-of-words logistic
scorer trained on a labeled CSV.

Reported proportions are truncated (not rounded) to 3 decimals, which is
the convention that reproduces the published per-community tallies exactly;
see reference.py.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from typing import Mapping, Protocol, Sequence

import numpy as np

from .analytics import tokenize
from .errors import DataError, MissingScoresError, TrainingError
from .metrics import f1_binary
from .partition import Partition
from .records import TweetRecord

LABELS = ("normal", "offensive")


def normalize_whitespace(text: str) -> str:
    return " ".join(text.split())


def dedup_unique(tweets: Sequence[TweetRecord]) -> list[TweetRecord]:
    """Originals only (no retweets), first occurrence of each normalized text.

    "First" means smallest tweet_id, so the result does not depend on input
    order. Deduplicating twice changes nothing.
    """
    originals = sorted((t for t in tweets if not t.is_retweet), key=lambda t: t.tweet_id)
    seen: set[str] = set()
    unique: list[TweetRecord] = []
    for rec in originals:
        key = normalize_whitespace(rec.text)
        if key not in seen:
            seen.add(key)
            unique.append(rec)
    return unique


def offense_proportion(offensive: int, unique: int) -> float:
    """Offensive share truncated to 3 decimals, exact in integer arithmetic."""
    if unique == 0:
        return 0.0
    return (1000 * offensive // unique) / 1000


class TweetScorer(Protocol):
    def score(self, tweet: TweetRecord) -> float:
        """Probability in [0, 1] that the tweet is offensive."""


class ExternalScores:
    """Per-tweet probabilities loaded from a CSV keyed by tweet id."""

    def __init__(self, scores: Mapping[int, float]):
        for tweet_id, p in scores.items():
            if not 0.0 <= p <= 1.0:
                raise DataError(f"score for tweet {tweet_id} outside [0, 1]: {p}")
        self.scores = dict(scores)

    @classmethod
    def from_csv(cls, path) -> "ExternalScores":
        scores: dict[int, float] = {}
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(row for row in fh if not row.startswith("#"))
            header = next(reader, None)
            if header != ["tweet_id", "probability"]:
                raise DataError(f"{path}: score file header must be tweet_id,probability")
            for lineno, row in enumerate(reader, start=2):
                try:
                    scores[int(row[0])] = float(row[1])
                except (IndexError, ValueError) as exc:
                    raise DataError(f"{path}:{lineno}: bad score row {row!r}") from exc
        return cls(scores)

    def check_coverage(self, tweets: Sequence[TweetRecord]) -> None:
        missing = [t.tweet_id for t in tweets if t.tweet_id not in self.scores]
        if missing:
            raise MissingScoresError(missing)

    def score(self, tweet: TweetRecord) -> float:
        try:
            return self.scores[tweet.tweet_id]
        except KeyError:
            raise MissingScoresError([tweet.tweet_id]) from None


class BaselineLinear:
    """Bag-of-words logistic scorer; deterministic for fixed data and seed."""

    def __init__(self, vocabulary: dict[str, int], weights: np.ndarray, bias: float,
                 holdout_f1: float | None = None):
        self.vocabulary = vocabulary
        self.weights = weights
        self.bias = bias
        self.holdout_f1 = holdout_f1

    def score_text(self, text: str) -> float:
        z = self.bias
        for token in tokenize(text):
            idx = self.vocabulary.get(token)
            if idx is not None:
                z += float(self.weights[idx])
        return float(1.0 / (1.0 + np.exp(-z)))

    def score(self, tweet: TweetRecord) -> float:
        return self.score_text(tweet.text)


def load_labeled_csv(path) -> list[tuple[str, str]]:
    """Read text,label rows; labels must be normal|offensive."""
    rows: list[tuple[str, str]] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(row for row in fh if not row.startswith("#"))
        header = next(reader, None)
        if header != ["text", "label"]:
            raise DataError(f"{path}: training file header must be text,label")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 2 or row[1] not in LABELS:
                raise DataError(f"{path}:{lineno}: bad labeled row {row!r}")
            rows.append((row[0], row[1]))
    return rows


def _stratified_split(labels: Sequence[int], train_frac: float, rng: random.Random):
    train_idx: list[int] = []
    test_idx: list[int] = []
    for cls in (0, 1):
        members = [i for i, y in enumerate(labels) if y == cls]
        rng.shuffle(members)
        n_train = int(round(train_frac * len(members)))
        n_train = min(max(n_train, 1), len(members) - 1) if len(members) > 1 else len(members)
        train_idx += members[:n_train]
        test_idx += members[n_train:]
    return sorted(train_idx), sorted(test_idx)


def train_baseline(
    rows: Sequence[tuple[str, str]],
    epochs: int = 300,
    seed: int = 0,
    learning_rate: float = 0.5,
    l2: float = 1e-4,
) -> BaselineLinear:
    """Train the logistic scorer on text,label rows.

    Full-batch gradient descent over unigram counts; the vocabulary comes
    from the 80% training side of a seeded stratified split and F1 of the
    offensive class on the held-out 20% is stored on the model.
    """
    if not rows:
        raise TrainingError("no training rows")
    labels = [1 if label == "offensive" else 0 for _, label in rows]
    if len(set(labels)) < 2:
        raise TrainingError("training data must contain both classes")
    rng = random.Random(seed)
    train_idx, test_idx = _stratified_split(labels, 0.8, rng)

    token_lists = [tokenize(text) for text, _ in rows]
    vocab_tokens = sorted({tok for i in train_idx for tok in token_lists[i]})
    vocabulary = {tok: j for j, tok in enumerate(vocab_tokens)}

    def matrix(indices):
        X = np.zeros((len(indices), len(vocabulary)))
        for r, i in enumerate(indices):
            for tok in token_lists[i]:
                j = vocabulary.get(tok)
                if j is not None:
                    X[r, j] += 1.0
        return X

    X_train = matrix(train_idx)
    y_train = np.asarray([labels[i] for i in train_idx], dtype=np.float64)
    w = np.zeros(len(vocabulary))
    b = 0.0
    n = len(train_idx)
    for _ in range(epochs):
        z = X_train @ w + b
        p = 1.0 / (1.0 + np.exp(-z))
        err = p - y_train
        w -= learning_rate * (X_train.T @ err / n + l2 * w)
        b -= learning_rate * float(err.mean())

    model = BaselineLinear(vocabulary, w, b)
    if test_idx:
        preds = [1 if model.score_text(rows[i][0]) >= 0.5 else 0 for i in test_idx]
        model.holdout_f1 = f1_binary([labels[i] for i in test_idx], preds)
    return model


@dataclass
class OffenseRow:
    community: int
    unique_tweets: int
    offensive_tweets: int
    proportion: float
    undefined: bool = False  # no unique tweets; proportion reported as 0


def offense_report(
    tweets: Sequence[TweetRecord],
    partition,
    scorer: TweetScorer,
    threshold: float = 0.5,
) -> list[OffenseRow]:
    """Dedup, score and tally tweets per community.

    A tweet counts as offensive when its score reaches the threshold
    (inclusive). With an ExternalScores scorer, coverage is checked up
    front so one error lists every missing tweet id.
    """
    mapping = partition.community_of if isinstance(partition, Partition) else partition
    per_community: dict[int, list[TweetRecord]] = {cid: [] for cid in sorted(set(mapping.values()))}
    for rec in tweets:
        cid = mapping.get(rec.user_id)
        if cid is not None:
            per_community[cid].append(rec)

    deduped = {cid: dedup_unique(members) for cid, members in per_community.items()}
    if isinstance(scorer, ExternalScores):
        scorer.check_coverage([t for batch in deduped.values() for t in batch])

    report = []
    for cid, unique in sorted(deduped.items()):
        offensive = sum(1 for t in unique if scorer.score(t) >= threshold)
        report.append(
            OffenseRow(
                community=cid,
                unique_tweets=len(unique),
                offensive_tweets=offensive,
                proportion=offense_proportion(offensive, len(unique)),
                undefined=not unique,
            )
        )
    return report
