"""Dedup, scorers and per-community offense tallies."""

import random

import pytest

from rtgraph.errors import MissingScoresError, TrainingError
from rtgraph.offense import (
    BaselineLinear,
    ExternalScores,
    dedup_unique,
    load_labeled_csv,
    offense_proportion,
    offense_report,
    train_baseline,
)

from conftest import make_tweet


def test_identical_texts_dedup_to_one():
    tweets = [make_tweet(2, 1, text="même texte"), make_tweet(1, 2, text="même texte")]
    unique = dedup_unique(tweets)
    assert [t.tweet_id for t in unique] == [1]  # first by ascending id


def test_whitespace_only_differences_collapse():
    tweets = [make_tweet(1, 1, text="un  texte "), make_tweet(2, 1, text=" un texte")]
    assert len(dedup_unique(tweets)) == 1


def test_retweets_are_excluded_before_dedup():
    tweets = [
        make_tweet(1, 1, text="original"),
        make_tweet(2, 2, text="RT: original", rt_user=1, rt_status=1),
    ]
    assert [t.tweet_id for t in dedup_unique(tweets)] == [1]


def test_dedup_matches_hash_set_oracle_and_is_order_free():
    rng = random.Random(17)
    base_texts = [f"texte numéro {i}" for i in range(300)]
    tweets = []
    for i in range(1000):
        text = rng.choice(base_texts)
        if rng.random() < 0.3:
            text = "  " + text + "  "
        tweets.append(make_tweet(i, rng.randint(1, 9), text=text))
    unique = dedup_unique(tweets)
    # oracle: hash set over normalized text, scanning in ascending id order
    seen, expected = set(), []
    for t in sorted(tweets, key=lambda t: t.tweet_id):
        key = " ".join(t.text.split())
        if key not in seen:
            seen.add(key)
            expected.append(t.tweet_id)
    assert [t.tweet_id for t in unique] == expected
    shuffled = tweets[:]
    rng.shuffle(shuffled)
    assert dedup_unique(shuffled) == unique
    assert dedup_unique(unique) == unique  # idempotent
    assert len(unique) <= len(tweets)


def test_proportion_truncates_to_three_decimals():
    assert offense_proportion(208_178, 756_318) == 0.275
    assert offense_proportion(1_632, 12_340) == 0.132
    assert offense_proportion(316_214, 1_034_538) == 0.305
    assert offense_proportion(0, 500) == 0.0
    assert offense_proportion(0, 0) == 0.0


def test_external_scores_roundtrip_and_errors(tmp_path):
    path = tmp_path / "scores.csv"
    path.write_text("tweet_id,probability\n1,0.9\n2,0.1\n", encoding="utf-8")
    scorer = ExternalScores.from_csv(path)
    assert scorer.score(make_tweet(1, 1)) == 0.9
    with pytest.raises(MissingScoresError):
        scorer.score(make_tweet(3, 1))
    with pytest.raises(Exception):
        ExternalScores({1: 1.5})


def test_external_scores_report_lists_all_missing_ids():
    tweets = [make_tweet(i, 1, text=f"texte {i}") for i in range(1, 6)]
    scorer = ExternalScores({1: 0.9, 3: 0.2})
    with pytest.raises(MissingScoresError) as err:
        offense_report(tweets, {1: 0}, scorer)
    assert err.value.missing_ids == [2, 4, 5]


def toy_rows(n_per_class=25):
    rows = []
    for i in range(n_per_class):
        rows.append((f"gentil message {i}", "normal"))
        rows.append((f"vilain insulte {i}", "offensive"))
    return rows


def test_baseline_separable_toy_set_reaches_f1_one():
    model = train_baseline(toy_rows(), epochs=200, seed=3)
    assert model.holdout_f1 == 1.0
    assert model.score_text("encore un vilain insulte") > 0.5
    assert model.score_text("gentil message du soir") < 0.5
    assert 0.0 <= model.score_text("hors vocabulaire") <= 1.0


def test_baseline_training_is_deterministic():
    a = train_baseline(toy_rows(), epochs=50, seed=9)
    b = train_baseline(toy_rows(), epochs=50, seed=9)
    assert (a.weights == b.weights).all() and a.bias == b.bias
    assert a.vocabulary == b.vocabulary


def test_baseline_rejects_degenerate_inputs(tmp_path):
    with pytest.raises(TrainingError):
        train_baseline([])
    with pytest.raises(TrainingError):
        train_baseline([("a", "normal"), ("b", "normal")])
    empty = tmp_path / "train.csv"
    empty.write_text("text,label\n", encoding="utf-8")
    with pytest.raises(TrainingError):
        train_baseline(load_labeled_csv(empty))


def test_offense_report_counts_at_threshold():
    tweets = [
        make_tweet(1, 1, text="insulte grave"),
        make_tweet(2, 1, text="tout doux"),
        make_tweet(3, 2, text="insulte grave bis"),
        make_tweet(4, 2, text="RT insulte", rt_user=1, rt_status=1),
    ]
    scorer = ExternalScores({1: 0.9, 2: 0.1, 3: 0.5})
    report = offense_report(tweets, {1: 0, 2: 1}, scorer, threshold=0.5)
    by_cid = {row.community: row for row in report}
    assert by_cid[0].unique_tweets == 2 and by_cid[0].offensive_tweets == 1
    assert by_cid[0].proportion == 0.5
    assert by_cid[1].unique_tweets == 1 and by_cid[1].offensive_tweets == 1  # 0.5 >= 0.5
    assert by_cid[1].proportion == 1.0


def test_offense_report_flags_empty_communities():
    report = offense_report([], {1: 0}, ExternalScores({}))
    assert report[0].undefined and report[0].proportion == 0.0


def test_offense_report_invariant_under_reordering():
    rng = random.Random(1)
    tweets = [make_tweet(i, (i % 3) + 1, text=f"texte {i % 40}") for i in range(120)]
    scorer = BaselineLinear({}, __import__("numpy").zeros(0), bias=2.0)  # scores ~0.88
    partition = {1: 0, 2: 0, 3: 1}
    base = offense_report(tweets, partition, scorer)
    shuffled = tweets[:]
    rng.shuffle(shuffled)
    assert offense_report(shuffled, partition, scorer) == base
