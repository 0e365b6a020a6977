"""Metadata-based bot detection.

A 17-dimensional feature vector is derived from each account's metadata
(raw counts, profile booleans, age, activity rates and name/description
shape) and fed to a random forest grown from scratch: bootstrapped trees,
Gini splits over a random subset of ceil(sqrt(d)) features per node, grown
until pure. Classification uses a precision-oriented probability threshold
of 0.75 by default.
"""

from __future__ import annotations

import csv
import math
import struct
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DataError, TrainingError
from .metrics import f1_binary
from .partition import Partition
from .records import TweetRecord, UserProfile, user_from_json
from .seeding import derive_seed

FEATURE_NAMES = (
    "statuses_count",
    "followers_count",
    "friends_count",
    "favourites_count",
    "listed_count",
    "default_profile",
    "verified",
    "geo_enabled",
    "user_age_days",
    "tweet_frequency",
    "followers_growth",
    "friends_growth",
    "favourites_growth",
    "listed_growth",
    "screen_name_length",
    "screen_name_digits",
    "description_length",
)
N_FEATURES = len(FEATURE_NAMES)

BF_MAGIC = b"BF01"

LABEL_VALUES = {"human": 0, "bot": 1}


def extract_features(profile: UserProfile, collection_date: datetime) -> np.ndarray:
    """17-dimensional feature vector in FEATURE_NAMES order.

    Account age is in (possibly fractional) days, floored at 1 so the
    per-day rates stay finite.
    """
    created = profile.created_at
    if created.tzinfo is None:
        created = created.replace(tzinfo=timezone.utc)
    if collection_date.tzinfo is None:
        collection_date = collection_date.replace(tzinfo=timezone.utc)
    if created > collection_date:
        raise DataError(
            f"user {profile.user_id}: created_at {created.isoformat()} is after "
            f"the collection date {collection_date.isoformat()}"
        )
    age_days = max(1.0, (collection_date - created).total_seconds() / 86400.0)
    return np.array(
        [
            profile.statuses_count,
            profile.followers_count,
            profile.friends_count,
            profile.favourites_count,
            profile.listed_count,
            1.0 if profile.default_profile else 0.0,
            1.0 if profile.verified else 0.0,
            1.0 if profile.geo_enabled else 0.0,
            age_days,
            profile.statuses_count / age_days,
            profile.followers_count / age_days,
            profile.friends_count / age_days,
            profile.favourites_count / age_days,
            profile.listed_count / age_days,
            len(profile.screen_name),
            sum(ch.isdigit() for ch in profile.screen_name),
            len(profile.description),
        ],
        dtype=np.float64,
    )


def features_matrix(profiles: Sequence[UserProfile], collection_date: datetime) -> np.ndarray:
    if not profiles:
        return np.zeros((0, N_FEATURES))
    return np.vstack([extract_features(p, collection_date) for p in profiles])


def default_collection_date(tweets=(), profiles=()) -> datetime:
    """Latest created_at seen in the corpus plus one day."""
    stamps = [t.created_at for t in tweets] + [p.created_at for p in profiles]
    if not stamps:
        raise DataError("cannot infer a collection date from an empty corpus")
    return max(stamps) + timedelta(days=1)


# ------------------------------------------------------------------ forest


@dataclass
class _Tree:
    feature: np.ndarray  # int32, -1 marks a leaf
    threshold: np.ndarray  # float64
    left: np.ndarray  # int32
    right: np.ndarray  # int32
    value: np.ndarray  # float64 bot fraction per node
    importance: np.ndarray  # float64 per-feature Gini decrease, unnormalized

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf bot-fraction for each row."""
        node = np.zeros(len(X), dtype=np.int32)
        while True:
            feat = self.feature[node]
            active = np.nonzero(feat >= 0)[0]
            if not len(active):
                return self.value[node]
            go_left = X[active, feat[active]] <= self.threshold[node[active]]
            node[active[go_left]] = self.left[node[active[go_left]]]
            node[active[~go_left]] = self.right[node[active[~go_left]]]


@dataclass
class BotForest:
    trees: list[_Tree]
    n_trees: int
    seed: int
    feature_names: tuple[str, ...] = FEATURE_NAMES
    max_features: int = 5

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        total = np.zeros(len(X))
        for tree in self.trees:
            total += tree.apply(X)
        return total / len(self.trees)


def _gini(pos: np.ndarray, total: np.ndarray) -> np.ndarray:
    p = pos / total
    return 1.0 - p * p - (1.0 - p) * (1.0 - p)


def _best_split(X, y, rows, max_features, rng):
    """(feature, threshold, weighted_child_impurity, left_rows, right_rows).

    Considers max_features randomly ordered features, extending past that
    count only until some feature admits a valid split; returns None when
    every feature is constant over the rows.
    """
    n = len(rows)
    best = None
    best_score = math.inf
    tried_valid = 0
    for f in rng.permutation(X.shape[1]):
        if tried_valid >= max_features and best is not None:
            break
        x = X[rows, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        changes = np.nonzero(xs[1:] != xs[:-1])[0] + 1
        if not len(changes):
            continue
        tried_valid += 1
        ys = y[rows][order]
        prefix_pos = np.cumsum(ys)
        left_n = changes.astype(np.float64)
        left_pos = prefix_pos[changes - 1].astype(np.float64)
        right_n = n - left_n
        right_pos = prefix_pos[-1] - left_pos
        score = (left_n * _gini(left_pos, left_n) + right_n * _gini(right_pos, right_n)) / n
        i = int(np.argmin(score))
        if score[i] < best_score - 1e-15:
            best_score = float(score[i])
            pos = int(changes[i])
            mid = (float(xs[pos - 1]) + float(xs[pos])) / 2.0
            if mid >= float(xs[pos]):  # midpoint rounded up to the right value
                mid = float(xs[pos - 1])
            best = (int(f), mid, best_score, rows[order[:pos]], rows[order[pos:]])
    return best


def _grow_tree(X, y, rng, max_features) -> _Tree:
    n_total = len(X)
    bootstrap = rng.integers(0, n_total, size=n_total)
    Xb, yb = X, y  # trees index the original arrays through row lists
    feature, threshold, left, right, value = [], [], [], [], []
    importance = np.zeros(X.shape[1])

    def new_node(rows):
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(float(yb[rows].mean()))
        return len(feature) - 1

    root_rows = bootstrap
    stack = [(new_node(root_rows), root_rows)]
    while stack:
        node, rows = stack.pop()
        pos = int(yb[rows].sum())
        if pos == 0 or pos == len(rows) or len(rows) < 2:
            continue  # pure or too small: stays a leaf
        split = _best_split(Xb, yb, rows, max_features, rng)
        if split is None:
            continue
        f, thr, child_impurity, rows_l, rows_r = split
        parent_impurity = float(_gini(np.array([pos], float), np.array([len(rows)], float))[0])
        importance[f] += len(rows) / n_total * (parent_impurity - child_impurity)
        feature[node] = f
        threshold[node] = thr
        node_l = new_node(rows_l)
        node_r = new_node(rows_r)
        left[node] = node_l
        right[node] = node_r
        stack.append((node_r, rows_r))
        stack.append((node_l, rows_l))

    return _Tree(
        feature=np.asarray(feature, dtype=np.int32),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int32),
        right=np.asarray(right, dtype=np.int32),
        value=np.asarray(value, dtype=np.float64),
        importance=importance,
    )


def train_forest(
    X: np.ndarray,
    y: np.ndarray,
    n_trees: int = 100,
    seed: int = 0,
    max_features: int | None = None,
) -> BotForest:
    """Train the ensemble; bit-reproducible for a fixed seed.

    Each tree sees its own bootstrap sample and draws feature subsets from
    its own substream, so trees are independent and could be grown in
    parallel without changing the result.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("X must be (n_samples, n_features) aligned with y")
    classes = set(np.unique(y).tolist())
    if not classes <= {0, 1}:
        raise ValueError("labels must be 0 (human) or 1 (bot)")
    if len(classes) < 2:
        raise TrainingError("training data must contain both classes")
    if max_features is None:
        max_features = math.ceil(math.sqrt(X.shape[1]))
    streams = np.random.SeedSequence(seed).spawn(n_trees)
    trees = [
        _grow_tree(X, y, np.random.default_rng(stream), max_features) for stream in streams
    ]
    names = FEATURE_NAMES if X.shape[1] == N_FEATURES else tuple(
        f"f{i}" for i in range(X.shape[1])
    )
    return BotForest(trees=trees, n_trees=n_trees, seed=seed, feature_names=names,
                     max_features=max_features)


def classify(forest: BotForest, vectors: np.ndarray, threshold: float = 0.75):
    """(is_bot, probability); bot when probability >= threshold."""
    proba = forest.predict_proba(vectors)
    return proba >= threshold, proba


@dataclass
class CVResult:
    fold_f1: list[float]
    mean_f1: float


def stratified_folds(y: np.ndarray, folds: int, seed: int) -> np.ndarray:
    """Fold index per sample: each class is shuffled with the substream
    derive_seed(seed, "folds") (label 0 first, then label 1) and dealt
    round-robin, so both classes spread evenly across folds."""
    if folds < 2:
        raise ValueError("folds must be >= 2")
    y = np.asarray(y, dtype=np.int64)
    counts = [int((y == cls).sum()) for cls in (0, 1)]
    if min(counts) < folds:
        raise DataError(
            f"degenerate stratification: class counts {counts} cannot fill {folds} folds"
        )
    rng = np.random.default_rng(derive_seed(seed, "folds"))
    assign = np.empty(len(y), dtype=np.int64)
    for cls in (0, 1):
        members = np.nonzero(y == cls)[0]
        rng.shuffle(members)
        assign[members] = np.arange(len(members)) % folds
    return assign


def cross_validate(
    X: np.ndarray,
    y: np.ndarray,
    folds: int = 10,
    seed: int = 0,
    n_trees: int = 100,
) -> CVResult:
    """Stratified k-fold; F1 of the bot class per fold at the 0.5 vote
    threshold. Fold f's forest is seeded with derive_seed(seed, "fold-f")."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    assign = stratified_folds(y, folds, seed)
    scores = []
    for f in range(folds):
        test = assign == f
        forest = train_forest(
            X[~test], y[~test], n_trees=n_trees, seed=derive_seed(seed, f"fold-{f}")
        )
        pred = forest.predict_proba(X[test]) >= 0.5
        scores.append(f1_binary(y[test], pred.astype(int)))
    return CVResult(fold_f1=scores, mean_f1=float(np.mean(scores)))


def feature_label_correlation(X: np.ndarray, y: np.ndarray):
    """Pearson r between each feature column and the 0/1 labels.

    Returns (r, constant_flags); a constant column is reported as r = 0
    with its flag set rather than NaN.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(X) < 2:
        raise DataError("correlation needs at least 2 samples")
    xc = X - X.mean(axis=0)
    yc = y - y.mean()
    sx = np.sqrt((xc * xc).sum(axis=0))
    sy = float(np.sqrt((yc * yc).sum()))
    flags = (sx == 0.0) | (sy == 0.0)
    r = np.zeros(X.shape[1])
    ok = ~flags
    if sy > 0.0:
        r[ok] = (xc[:, ok] * yc[:, None]).sum(axis=0) / (sx[ok] * sy)
    return r, flags


def feature_importance(forest: BotForest) -> np.ndarray:
    """Mean decrease in Gini impurity per feature, normalized to sum to 1.

    A forest with no splits at all (every feature constant) yields a zero
    vector with a warning instead of dividing by zero.
    """
    total = np.zeros(len(forest.feature_names))
    for tree in forest.trees:
        total += tree.importance
    s = float(total.sum())
    if s == 0.0:
        warnings.warn("forest contains no splits; importance undefined, reporting zeros")
        return total
    return total / s


# ------------------------------------------------------------- persistence


def save_forest(forest: BotForest, path) -> None:
    """Versioned binary model file (magic BF01); layout in the README."""
    with open(path, "wb") as fh:
        fh.write(BF_MAGIC)
        fh.write(struct.pack("<IIQI", 1, forest.n_trees, forest.seed, len(forest.feature_names)))
        fh.write(struct.pack("<I", forest.max_features))
        for name in forest.feature_names:
            raw = name.encode("utf-8")
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)
        for tree in forest.trees:
            fh.write(struct.pack("<I", len(tree.feature)))
            fh.write(tree.feature.astype("<i4").tobytes())
            fh.write(tree.threshold.astype("<f8").tobytes())
            fh.write(tree.left.astype("<i4").tobytes())
            fh.write(tree.right.astype("<i4").tobytes())
            fh.write(tree.value.astype("<f8").tobytes())
            fh.write(tree.importance.astype("<f8").tobytes())


def load_forest(path) -> BotForest:
    data = Path(path).read_bytes()
    if data[:4] != BF_MAGIC:
        raise DataError(f"{path}: not a bot forest model file (bad magic)")
    version, n_trees, seed, n_feat = struct.unpack_from("<IIQI", data, 4)
    if version != 1:
        raise DataError(f"{path}: unsupported model version {version}")
    pos = 4 + struct.calcsize("<IIQI")
    (max_features,) = struct.unpack_from("<I", data, pos)
    pos += 4
    names = []
    for _ in range(n_feat):
        (ln,) = struct.unpack_from("<I", data, pos)
        pos += 4
        names.append(data[pos : pos + ln].decode("utf-8"))
        pos += ln
    trees = []
    for _ in range(n_trees):
        (n_nodes,) = struct.unpack_from("<I", data, pos)
        pos += 4

        def arr(dtype, count, width):
            nonlocal pos
            out = np.frombuffer(data, dtype=dtype, count=count, offset=pos).copy()
            pos += width * count
            return out

        feature = arr("<i4", n_nodes, 4)
        threshold = arr("<f8", n_nodes, 8)
        left = arr("<i4", n_nodes, 4)
        right = arr("<i4", n_nodes, 4)
        value = arr("<f8", n_nodes, 8)
        importance = arr("<f8", n_feat, 8)
        trees.append(
            _Tree(
                feature.astype(np.int32),
                threshold.astype(np.float64),
                left.astype(np.int32),
                right.astype(np.int32),
                value.astype(np.float64),
                importance.astype(np.float64),
            )
        )
    if pos != len(data):
        raise DataError(f"{path}: trailing bytes in model file")
    return BotForest(trees=trees, n_trees=n_trees, seed=seed,
                     feature_names=tuple(names), max_features=max_features)


# ------------------------------------------------------------ training CSV


def load_training_csv(path, raw: bool = False, collection_date: datetime | None = None):
    """Load labeled training data.

    Default shape: the 17 feature columns (FEATURE_NAMES order) plus a
    ``label`` column with values human|bot. With raw=True the columns are
    user-profile fields instead and features are derived here, using
    collection_date (default: latest created_at in the file plus one day).
    """
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(row for row in fh if not row.startswith("#"))
        rows = list(reader)
    if not rows:
        raise TrainingError(f"{path}: no training rows")
    labels = []
    for row in rows:
        label = (row.get("label") or "").strip()
        if label not in LABEL_VALUES:
            raise DataError(f"{path}: label must be human|bot, got {label!r}")
        labels.append(LABEL_VALUES[label])
    y = np.asarray(labels, dtype=np.int64)

    if raw:
        profiles = []
        for row in rows:
            obj = {k: v for k, v in row.items() if k != "label" and v not in (None, "")}
            for key in ("user_id", *[f for f in obj if f.endswith("_count")]):
                if key in obj:
                    obj[key] = int(obj[key])
            for key in ("default_profile", "verified", "geo_enabled"):
                if key in obj:
                    obj[key] = obj[key].lower() in ("1", "true", "yes")
            profiles.append(user_from_json(obj))
        if collection_date is None:
            collection_date = default_collection_date(profiles=profiles)
        X = features_matrix(profiles, collection_date)
    else:
        missing = [name for name in FEATURE_NAMES if name not in rows[0]]
        if missing:
            raise DataError(f"{path}: missing feature columns {missing}")
        X = np.asarray(
            [[float(row[name]) for name in FEATURE_NAMES] for row in rows], dtype=np.float64
        )
    return X, y


# ---------------------------------------------------------------- reporting


@dataclass
class BotReportRow:
    community: int
    accounts: int
    bots: int
    bot_proportion: float
    tweets: int
    automated_tweets: int
    automated_proportion: float
    unprofiled: int = 0  # members without a profile: counted, not classified


def bot_report(
    profiles: Sequence[UserProfile],
    tweets: Sequence[TweetRecord],
    partition,
    forest: BotForest,
    threshold: float = 0.75,
    collection_date: datetime | None = None,
) -> list[BotReportRow]:
    """Per-community account/bot and tweet/automated-tweet tallies.

    Tweets are deliberately not deduplicated here: retweets carry most of
    the automation signal. Proportions are rounded to 3 decimals.
    """
    mapping = partition.community_of if isinstance(partition, Partition) else partition
    if collection_date is None:
        collection_date = default_collection_date(tweets, profiles)
    by_id = {p.user_id: p for p in profiles}

    members: dict[int, list[int]] = {cid: [] for cid in sorted(set(mapping.values()))}
    for uid, cid in mapping.items():
        members[cid].append(uid)

    bot_users: set[int] = set()
    unprofiled: dict[int, int] = {}
    bots_per_community: dict[int, int] = {}
    for cid, uids in members.items():
        profiled = [uid for uid in uids if uid in by_id]
        unprofiled[cid] = len(uids) - len(profiled)
        if profiled:
            X = features_matrix([by_id[uid] for uid in profiled], collection_date)
            is_bot, _ = classify(forest, X, threshold)
            flagged = [uid for uid, b in zip(profiled, is_bot) if b]
        else:
            flagged = []
        bots_per_community[cid] = len(flagged)
        bot_users.update(flagged)

    tweet_count: dict[int, int] = {cid: 0 for cid in members}
    automated: dict[int, int] = {cid: 0 for cid in members}
    for rec in tweets:
        cid = mapping.get(rec.user_id)
        if cid is None:
            continue
        tweet_count[cid] += 1
        if rec.user_id in bot_users:
            automated[cid] += 1

    report = []
    for cid, uids in members.items():
        n_accounts = len(uids)
        n_bots = bots_per_community[cid]
        n_tweets = tweet_count[cid]
        n_auto = automated[cid]
        report.append(
            BotReportRow(
                community=cid,
                accounts=n_accounts,
                bots=n_bots,
                bot_proportion=round(n_bots / n_accounts, 3) if n_accounts else 0.0,
                tweets=n_tweets,
                automated_tweets=n_auto,
                automated_proportion=round(n_auto / n_tweets, 3) if n_tweets else 0.0,
                unprofiled=unprofiled[cid],
            )
        )
    return report
