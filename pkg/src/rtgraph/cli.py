"""Command-line interface: one subcommand per pipeline stage plus run-all.

Stage outputs are plain files, so each subcommand can also run standalone
from a previous run's artifacts. Exit codes: 0 success, 2 configuration
error, 3 data error, 4 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

from . import __version__, analytics, botdetect, offense, reference
from .errors import ConfigError, DataError, PipelineError
from .graph import build_retweet_graph, edge_rows, load_rtg, save_rtg, to_undirected
from .partition import core_numbers, kcore, select_k
from .records import (
    filter_by_keywords,
    load_keywords,
    parse_corpus,
    parse_timestamp,
    parse_tweet_file,
    parse_user_file,
    write_tweets,
    write_users,
)
from .graph import induced_subgraph
from .reportio import (
    fmt3,
    fmt6,
    provenance_lines,
    read_commented_csv,
    sha256_file,
    write_csv,
    write_json,
)
from .seeding import derive_seed

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_INTERNAL = 0, 2, 3, 4

CONFIG_KEYS = {
    "tweets", "users", "keywords", "gazetteer", "stopwords", "region_shapes",
    "labels", "offense_scorer", "offense_train", "offense_scores",
    "offense_threshold", "bot_train", "bot_model", "bot_raw", "bot_threshold",
    "collection_date", "seed", "min_community_size", "top_hashtags", "top_ngrams",
}

PATH_KEYS = {
    "tweets", "users", "keywords", "gazetteer", "stopwords", "region_shapes",
    "labels", "offense_train", "offense_scores", "bot_train", "bot_model",
}


@dataclass
class PipelineConfig:
    tweets: Path
    users: Path
    keywords: Path
    gazetteer: Path
    stopwords: Path
    region_shapes: Path
    labels: Path | None = None
    offense_scorer: str = "baseline"
    offense_train: Path | None = None
    offense_scores: Path | None = None
    offense_threshold: float = 0.5
    bot_train: Path | None = None
    bot_model: Path | None = None
    bot_raw: bool = False
    bot_threshold: float = 0.75
    collection_date: datetime | None = None
    seed: int = 42
    min_community_size: int = 10
    top_hashtags: int = 10
    top_ngrams: int = 30

    def validate(self) -> None:
        for name in ("tweets", "users", "keywords", "gazetteer", "stopwords",
                     "region_shapes", "labels", "offense_train", "offense_scores",
                     "bot_train", "bot_model"):
            path = getattr(self, name)
            if path is not None and not Path(path).exists():
                raise ConfigError(f"{name} file does not exist: {path}")
        if self.offense_scorer not in ("baseline", "external"):
            raise ConfigError("offense_scorer must be baseline or external")
        if self.offense_scorer == "baseline" and self.offense_train is None:
            raise ConfigError("baseline scorer needs offense_train")
        if self.offense_scorer == "external" and self.offense_scores is None:
            raise ConfigError("external scorer needs offense_scores")
        if self.bot_model is None and self.bot_train is None:
            raise ConfigError("either bot_model or bot_train is required")

    def input_digests(self) -> dict[str, str]:
        digests = {}
        for name in sorted(PATH_KEYS):
            path = getattr(self, name)
            if path is not None:
                digests[name] = sha256_file(path)
        return digests


def load_config(path, overrides: dict | None = None) -> PipelineConfig:
    """Parse the key = value config file; flags override file values."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file does not exist: {path}")
    raw: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        raw[key] = value
    if overrides:
        raw.update({k: v for k, v in overrides.items() if v is not None})

    base = path.parent

    def as_path(key):
        if key not in raw or raw[key] == "":
            return None
        p = Path(raw[key])
        return p if p.is_absolute() else (base / p)

    for required in ("tweets", "users", "keywords"):
        if required not in raw:
            raise ConfigError(f"config is missing required key {required!r}")

    try:
        cfg = PipelineConfig(
            tweets=as_path("tweets"),
            users=as_path("users"),
            keywords=as_path("keywords"),
            gazetteer=as_path("gazetteer") or analytics.default_gazetteer_path(),
            stopwords=as_path("stopwords") or analytics.default_stopwords_path(),
            region_shapes=as_path("region_shapes") or analytics.default_region_shapes_path(),
            labels=as_path("labels"),
            offense_scorer=raw.get("offense_scorer", "baseline"),
            offense_train=as_path("offense_train"),
            offense_scores=as_path("offense_scores"),
            offense_threshold=float(raw.get("offense_threshold", 0.5)),
            bot_train=as_path("bot_train"),
            bot_model=as_path("bot_model"),
            bot_raw=raw.get("bot_raw", "false").lower() in ("1", "true", "yes"),
            bot_threshold=float(raw.get("bot_threshold", 0.75)),
            collection_date=parse_timestamp(raw["collection_date"])
            if "collection_date" in raw
            else None,
            seed=int(raw.get("seed", 42)),
            min_community_size=int(raw.get("min_community_size", 10)),
            top_hashtags=int(raw.get("top_hashtags", 10)),
            top_ngrams=int(raw.get("top_ngrams", 30)),
        )
    except ValueError as exc:
        raise ConfigError(f"bad config value: {exc}") from exc
    return cfg


# ----------------------------------------------------------------- helpers


def corpus_path(arg: str, filename: str) -> Path:
    """Accept either a normalized-corpus directory or a direct file path."""
    path = Path(arg)
    if path.is_dir():
        path = path / filename
    if not path.exists():
        raise ConfigError(f"input file does not exist: {path}")
    return path


def read_partition_csv(path) -> dict[int, int]:
    header, rows = read_commented_csv(path)
    if header != ["user_id", "community_id"]:
        raise DataError(f"{path}: partition header must be user_id,community_id")
    try:
        return {int(u): int(c) for u, c in rows}
    except ValueError as exc:
        raise DataError(f"{path}: bad partition row: {exc}") from exc


def write_partition_csv(path, comments, partition) -> None:
    rows = sorted(partition.community_of.items())
    write_csv(path, comments, ["user_id", "community_id"], rows)


def load_label_map(path, known_communities) -> dict[int, str]:
    header, rows = read_commented_csv(path)
    if header != ["community_id", "label"]:
        raise ConfigError(f"{path}: label map header must be community_id,label")
    labels = {}
    for cid_text, label in rows:
        cid = int(cid_text)
        if cid not in known_communities:
            raise ConfigError(f"{path}: label map references unknown community {cid}")
        labels[cid] = label
    return labels


def emit_community_table(
    community_sizes: dict[int, int],
    hashtag_table: dict[int, list[tuple[str, int]]],
    labels: dict[int, str] | None = None,
) -> list[tuple[str, int, str]]:
    """Rows of (label, account count, top-3 hashtags) per community."""
    labels = labels or {}
    rows = []
    for cid in sorted(community_sizes):
        label = labels.get(cid, f"community-{cid}")
        tags = " ".join(f"#{tag}" for tag, _ in hashtag_table.get(cid, [])[:3])
        rows.append((label, community_sizes[cid], tags))
    return rows


def build_scorer(cfg_scorer: str, scores_path, train_path, seed: int):
    if cfg_scorer == "external":
        return offense.ExternalScores.from_csv(scores_path)
    rows = offense.load_labeled_csv(train_path)
    return offense.train_baseline(rows, seed=derive_seed(seed, "baseline"))


def obtain_forest(model_path, train_path, raw, collection_date, seed):
    """(forest, X, y); X/y are None when a prebuilt model file is used."""
    if model_path is not None:
        return botdetect.load_forest(model_path), None, None
    X, y = botdetect.load_training_csv(train_path, raw=raw, collection_date=collection_date)
    forest = botdetect.train_forest(X, y, seed=derive_seed(seed, "forest"))
    return forest, X, y


class StageFiles:
    """Tracks files created by a run so a failed run can clean up."""

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)
        self.created: list[Path] = []
        self.made_dirs: list[Path] = []

    def dir(self, *parts) -> Path:
        d = self.out_dir.joinpath(*parts)
        if not d.exists():
            d.mkdir(parents=True)
            self.made_dirs.append(d)
        return d

    def path(self, *parts) -> Path:
        p = self.out_dir.joinpath(*parts)
        if not p.parent.exists():
            self.dir(*parts[:-1])
        self.created.append(p)
        return p

    def cleanup(self) -> None:
        for p in reversed(self.created):
            p.unlink(missing_ok=True)
        for d in reversed(self.made_dirs):
            try:
                d.rmdir()
            except OSError:
                pass


# ------------------------------------------------------------------ stages


def run_pipeline(cfg: PipelineConfig, out_dir: Path) -> Path:
    """Execute every stage; on failure remove this run's partial outputs."""
    cfg.validate()
    digests = cfg.input_digests()
    comments = provenance_lines(cfg.seed, digests)
    files = StageFiles(out_dir)
    if not files.out_dir.exists():
        files.out_dir.mkdir(parents=True)
        files.made_dirs.append(files.out_dir)

    stage = "setup"
    try:
        stage = "ingest"
        corpus = parse_corpus(cfg.tweets, cfg.users)
        keywords = load_keywords(cfg.keywords)
        tweets = filter_by_keywords(corpus.tweets, keywords)
        files.dir("ingest")
        write_tweets(files.path("ingest", "tweets.jsonl"), tweets)
        write_users(files.path("ingest", "users.jsonl"), corpus.users)
        write_json(
            files.path("ingest", "ingest_stats.json"),
            {
                "tweets_kept": len(tweets),
                "tweets_parsed": len(corpus.tweets),
                "tweet_malformed": corpus.stats.tweet_malformed,
                "users_parsed": len(corpus.users),
                "user_malformed": corpus.stats.user_malformed,
                "keywords": keywords,
            },
            generator={"tool": f"rtgraph {__version__}", "seed": cfg.seed},
        )

        stage = "graph"
        graph = build_retweet_graph(tweets)
        save_rtg(graph, files.path("graph.rtg"))
        write_csv(files.path("edges.csv"), comments, ["src", "dst", "weight"], edge_rows(graph))

        stage = "communities"
        undirected = to_undirected(graph)
        selection = select_k(undirected, cfg.min_community_size, seed=derive_seed(cfg.seed, "louvain"))
        partition = selection.partition
        write_partition_csv(files.path("partition.csv"), comments, partition)
        write_csv(
            files.path("core_numbers.csv"),
            comments,
            ["user_id", "core_number"],
            sorted(selection.cores.as_dict().items()),
        )
        write_json(
            files.path("selection.json"),
            {
                "k": selection.k,
                "modularity": round(partition.modularity, 9),
                "community_sizes": partition.sizes(),
                "min_community_size": cfg.min_community_size,
            },
            generator={"tool": f"rtgraph {__version__}", "seed": cfg.seed},
        )

        stage = "hashtags"
        hashtag_table = analytics.hashtag_frequencies(tweets, partition, cfg.top_hashtags)
        write_csv(
            files.path("hashtags_top.csv"),
            comments,
            ["community", "hashtag", "user_count"],
            ((cid, tag, count) for cid in sorted(hashtag_table) for tag, count in hashtag_table[cid]),
        )

        stage = "ngrams"
        stopwords = analytics.load_stopwords(cfg.stopwords)
        ngram_table = analytics.ngram_frequencies(tweets, partition, stopwords, cfg.top_ngrams)
        write_csv(
            files.path("ngrams_top.csv"),
            comments,
            ["community", "ngram", "count"],
            ((cid, gram, count) for cid in sorted(ngram_table) for gram, count in ngram_table[cid]),
        )

        stage = "geo"
        gazetteer = analytics.load_gazetteer(cfg.gazetteer)
        histogram = analytics.region_histogram(corpus.users, partition, gazetteer)
        write_csv(
            files.path("geo_regions.csv"),
            comments,
            ["community", "region", "user_count", "log_value"],
            (
                (cid, region, count, fmt6(log))
                for cid in sorted(histogram)
                for region, count, log in histogram[cid]
            ),
        )
        shapes = analytics.load_region_shapes(cfg.region_shapes)
        joined = analytics.join_regions_geojson(histogram, shapes)
        write_json(
            files.path("geo_regions.geojson"),
            joined,
            generator={"tool": f"rtgraph {__version__}", "seed": cfg.seed, "inputs": digests},
        )

        stage = "offense"
        scorer = build_scorer(cfg.offense_scorer, cfg.offense_scores, cfg.offense_train, cfg.seed)
        offense_rows = offense.offense_report(tweets, partition, scorer, cfg.offense_threshold)
        _write_offense_csv(files.path("offense_stats.csv"), comments, offense_rows)

        stage = "bot"
        forest, X, y = obtain_forest(
            cfg.bot_model, cfg.bot_train, cfg.bot_raw, cfg.collection_date, cfg.seed
        )
        if cfg.bot_model is None:
            botdetect.save_forest(forest, files.path("model.bf"))
        if X is not None:
            _write_correlation_csv(files.path("correlation.csv"), comments, X, y)
        _write_importance_csv(files.path("importance.csv"), comments, forest)
        bot_rows = botdetect.bot_report(
            corpus.users, tweets, partition, forest, cfg.bot_threshold, cfg.collection_date
        )
        _write_bot_csv(files.path("bot_stats.csv"), comments, bot_rows)

        stage = "report"
        labels = (
            load_label_map(cfg.labels, set(partition.community_of.values()))
            if cfg.labels
            else {}
        )
        sizes = {cid: len(members) for cid, members in enumerate(partition.communities)}
        table = emit_community_table(sizes, hashtag_table, labels)
        write_csv(
            files.path("community_table.csv"),
            comments,
            ["community_label", "account_count", "top_hashtags"],
            table,
        )
        _write_reference_check(files.path("reference_check.csv"), comments)
        summary = _summary_markdown(
            seed=cfg.seed,
            digests=digests,
            selection=selection,
            community_rows=table,
            offense_rows=offense_rows,
            bot_rows=bot_rows,
        )
        files.path("summary.md").write_text(summary, encoding="utf-8")
    except Exception as exc:
        files.cleanup()
        message = f"stage {stage} failed: {exc}"
        if isinstance(exc, PipelineError):
            raise type(exc)(message) from exc
        if isinstance(exc, OSError):
            raise DataError(message) from exc
        raise PipelineError(message) from exc
    return files.out_dir


def _write_offense_csv(path, comments, rows):
    flagged = [str(r.community) for r in rows if r.undefined]
    extra = [f"# communities with no unique tweets: {' '.join(flagged)}"] if flagged else []
    write_csv(
        path,
        list(comments) + extra,
        ["community", "unique_tweets", "offensive_tweets", "proportion"],
        ((r.community, r.unique_tweets, r.offensive_tweets, fmt3(r.proportion)) for r in rows),
    )


def _write_bot_csv(path, comments, rows):
    write_csv(
        path,
        comments,
        ["community", "accounts", "bots", "bot_proportion", "tweets",
         "automated_tweets", "automated_proportion", "unprofiled"],
        (
            (r.community, r.accounts, r.bots, fmt3(r.bot_proportion), r.tweets,
             r.automated_tweets, fmt3(r.automated_proportion), r.unprofiled)
            for r in rows
        ),
    )


def _write_correlation_csv(path, comments, X, y):
    r, flags = botdetect.feature_label_correlation(X, y)
    names = botdetect.FEATURE_NAMES if X.shape[1] == botdetect.N_FEATURES else [
        f"f{i}" for i in range(X.shape[1])
    ]
    constant = [names[i] for i in range(len(names)) if flags[i]]
    extra = [f"# constant features reported as r=0: {' '.join(constant)}"] if constant else []
    write_csv(
        path,
        list(comments) + extra,
        ["feature", "r"],
        ((names[i], fmt6(float(r[i]))) for i in range(len(names))),
    )


def _write_importance_csv(path, comments, forest):
    imp = botdetect.feature_importance(forest)
    write_csv(
        path,
        comments,
        ["feature", "weight"],
        ((name, fmt6(float(w))) for name, w in zip(forest.feature_names, imp)),
    )


def _write_reference_check(path, comments):
    rows = []
    for check in reference.check_offense_rows():
        rows.append(
            ("offense_proportion", check.community, fmt3(check.computed),
             fmt3(check.published), "yes" if check.matches else "no")
        )
    for check in reference.check_bot_rows():
        rows.append(
            ("bot_proportion", check.community, fmt3(check.computed_bot_proportion),
             fmt3(check.published_bot_proportion), "yes" if check.bot_matches else "no")
        )
        rows.append(
            ("automated_proportion", check.community,
             fmt3(check.computed_automated_proportion),
             fmt3(check.published_automated_proportion),
             "yes" if check.automated_matches else "no")
        )
    write_csv(path, comments, ["table", "community", "computed", "published", "matches"], rows)


def _summary_markdown(seed, digests, selection, community_rows, offense_rows, bot_rows):
    lines = [
        "# Pipeline summary",
        "",
        f"- generator: rtgraph {__version__}",
        f"- seed: {seed}",
    ]
    for name in sorted(digests):
        lines.append(f"- input {name}: sha256 {digests[name][:16]}…")
    lines += [
        "",
        f"## Communities (k = {selection.k}, modularity = {selection.partition.modularity:.4f})",
        "",
        "| community | accounts | frequent hashtags |",
        "|---|---|---|",
    ]
    for label, accounts, tags in community_rows:
        lines.append(f"| {label} | {accounts:,} | {tags} |")
    lines += [
        "",
        "## Offensive tweets",
        "",
        "| community | unique tweets | offensive tweets | proportion |",
        "|---|---|---|---|",
    ]
    for r in offense_rows:
        flag = " (no unique tweets)" if r.undefined else ""
        lines.append(
            f"| community-{r.community} | {r.unique_tweets:,} | "
            f"{r.offensive_tweets:,} | {fmt3(r.proportion)}{flag} |"
        )
    lines += [
        "",
        "## Bot statistics",
        "",
        "| community | accounts | bots | proportion | tweets | automated | proportion | unprofiled |",
        "|---|---|---|---|---|---|---|---|",
    ]
    for r in bot_rows:
        lines.append(
            f"| community-{r.community} | {r.accounts:,} | {r.bots:,} | {fmt3(r.bot_proportion)} "
            f"| {r.tweets:,} | {r.automated_tweets:,} | {fmt3(r.automated_proportion)} "
            f"| {r.unprofiled} |"
        )
    lines.append("")
    return "\n".join(lines)


# -------------------------------------------------------------- subcommands


def cmd_ingest(args):
    out = StageFiles(Path(args.out))
    out.dir()
    corpus = parse_corpus(args.tweets, args.users)
    keywords = load_keywords(args.keywords)
    tweets = filter_by_keywords(corpus.tweets, keywords)
    write_tweets(out.path("tweets.jsonl"), tweets)
    write_users(out.path("users.jsonl"), corpus.users)
    write_json(
        out.path("ingest_stats.json"),
        {
            "tweets_kept": len(tweets),
            "tweets_parsed": len(corpus.tweets),
            "tweet_malformed": corpus.stats.tweet_malformed,
            "users_parsed": len(corpus.users),
            "user_malformed": corpus.stats.user_malformed,
            "keywords": keywords,
        },
        generator={"tool": f"rtgraph {__version__}"},
    )
    print(
        f"kept {len(tweets)}/{len(corpus.tweets)} tweets "
        f"({corpus.stats.tweet_malformed} malformed lines), "
        f"{len(corpus.users)} users ({corpus.stats.user_malformed} malformed)",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_build_graph(args):
    tweets_file = corpus_path(args.tweets, "tweets.jsonl")
    tweets, _ = parse_tweet_file(tweets_file)
    graph = build_retweet_graph(tweets)
    save_rtg(graph, args.out)
    if args.edges_csv:
        comments = provenance_lines(None, {"tweets": sha256_file(tweets_file)})
        write_csv(args.edges_csv, comments, ["src", "dst", "weight"], edge_rows(graph))
    print(f"graph: {graph.n_nodes} nodes, {graph.edge_count} edges", file=sys.stderr)
    return EXIT_OK


def _load_undirected(path):
    graph = load_rtg(path)
    return to_undirected(graph) if graph.directed else graph


def cmd_kcore(args):
    if args.k is not None and args.k < 1:
        raise ConfigError("--k must be >= 1")
    undirected = _load_undirected(args.graph)
    cores = core_numbers(undirected)
    comments = provenance_lines(None, {"graph": sha256_file(args.graph)})
    write_csv(
        args.out, comments, ["user_id", "core_number"], sorted(cores.as_dict().items())
    )
    if args.k is not None:
        if not args.subgraph:
            raise ConfigError("--k needs --subgraph to write the core graph")
        save_rtg(induced_subgraph(undirected, cores.core >= args.k), args.subgraph)
    print(f"max core number: {cores.max_core}", file=sys.stderr)
    return EXIT_OK


def cmd_communities(args):
    undirected = _load_undirected(args.graph)
    selection = select_k(undirected, args.min_size, seed=derive_seed(args.seed, "louvain"))
    out = StageFiles(Path(args.out))
    out.dir()
    comments = provenance_lines(args.seed, {"graph": sha256_file(args.graph)})
    write_partition_csv(out.path("partition.csv"), comments, selection.partition)
    write_csv(
        out.path("core_numbers.csv"),
        comments,
        ["user_id", "core_number"],
        sorted(selection.cores.as_dict().items()),
    )
    write_json(
        out.path("selection.json"),
        {
            "k": selection.k,
            "modularity": round(selection.partition.modularity, 9),
            "community_sizes": selection.partition.sizes(),
            "min_community_size": args.min_size,
        },
        generator={"tool": f"rtgraph {__version__}", "seed": args.seed},
    )
    print(
        f"k = {selection.k}, {selection.partition.n_communities} communities, "
        f"Q = {selection.partition.modularity:.4f}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_hashtags(args):
    tweets_file = corpus_path(args.tweets, "tweets.jsonl")
    tweets, _ = parse_tweet_file(tweets_file)
    partition = read_partition_csv(args.partition)
    table = analytics.hashtag_frequencies(tweets, partition, args.top)
    comments = provenance_lines(
        None, {"tweets": sha256_file(tweets_file), "partition": sha256_file(args.partition)}
    )
    out = StageFiles(Path(args.out))
    out.dir()
    write_csv(
        out.path("hashtags_top.csv"),
        comments,
        ["community", "hashtag", "user_count"],
        ((cid, tag, count) for cid in sorted(table) for tag, count in table[cid]),
    )
    return EXIT_OK


def cmd_ngrams(args):
    tweets_file = corpus_path(args.tweets, "tweets.jsonl")
    tweets, _ = parse_tweet_file(tweets_file)
    partition = read_partition_csv(args.partition)
    stopwords = analytics.load_stopwords(args.stopwords)
    table = analytics.ngram_frequencies(tweets, partition, stopwords, args.top)
    comments = provenance_lines(
        None, {"tweets": sha256_file(tweets_file), "partition": sha256_file(args.partition)}
    )
    out = StageFiles(Path(args.out))
    out.dir()
    write_csv(
        out.path("ngrams_top.csv"),
        comments,
        ["community", "ngram", "count"],
        ((cid, gram, count) for cid in sorted(table) for gram, count in table[cid]),
    )
    return EXIT_OK


def cmd_geo(args):
    users_file = corpus_path(args.tweets, "users.jsonl")
    users, _ = parse_user_file(users_file)
    partition = read_partition_csv(args.partition)
    gazetteer = analytics.load_gazetteer(args.gazetteer)
    histogram = analytics.region_histogram(users, partition, gazetteer)
    comments = provenance_lines(
        None, {"users": sha256_file(users_file), "partition": sha256_file(args.partition)}
    )
    out = StageFiles(Path(args.out))
    out.dir()
    write_csv(
        out.path("geo_regions.csv"),
        comments,
        ["community", "region", "user_count", "log_value"],
        (
            (cid, region, count, fmt6(log))
            for cid in sorted(histogram)
            for region, count, log in histogram[cid]
        ),
    )
    shapes = analytics.load_region_shapes(args.region_shapes)
    write_json(
        out.path("geo_regions.geojson"),
        analytics.join_regions_geojson(histogram, shapes),
        generator={"tool": f"rtgraph {__version__}"},
    )
    return EXIT_OK


def cmd_offense(args):
    if args.scorer == "external" and not args.scores:
        raise ConfigError("--scorer external needs --scores")
    if args.scorer == "baseline" and not args.train:
        raise ConfigError("--scorer baseline needs --train")
    tweets_file = corpus_path(args.tweets, "tweets.jsonl")
    tweets, _ = parse_tweet_file(tweets_file)
    partition = read_partition_csv(args.partition)
    scorer = build_scorer(args.scorer, args.scores, args.train, args.seed)
    rows = offense.offense_report(tweets, partition, scorer, args.threshold)
    comments = provenance_lines(
        args.seed, {"tweets": sha256_file(tweets_file), "partition": sha256_file(args.partition)}
    )
    out = StageFiles(Path(args.out))
    out.dir()
    _write_offense_csv(out.path("offense_stats.csv"), comments, rows)
    if args.scorer == "baseline" and getattr(scorer, "holdout_f1", None) is not None:
        print(f"baseline scorer held-out f1: {scorer.holdout_f1:.4f}", file=sys.stderr)
    return EXIT_OK


def cmd_bot_train(args):
    X, y = botdetect.load_training_csv(args.data, raw=args.raw)
    forest = botdetect.train_forest(X, y, n_trees=args.trees, seed=derive_seed(args.seed, "forest"))
    botdetect.save_forest(forest, args.out)
    out_dir = Path(args.out).parent
    comments = provenance_lines(args.seed, {"data": sha256_file(args.data)})
    _write_correlation_csv(out_dir / "correlation.csv", comments, X, y)
    _write_importance_csv(out_dir / "importance.csv", comments, forest)
    print(f"trained {forest.n_trees} trees on {len(X)} samples", file=sys.stderr)
    return EXIT_OK


def cmd_bot_eval(args):
    X, y = botdetect.load_training_csv(args.data, raw=args.raw)
    result = botdetect.cross_validate(X, y, folds=args.folds, seed=args.seed, n_trees=args.trees)
    for i, score in enumerate(result.fold_f1):
        print(f"fold {i}: f1 = {score:.4f}")
    print(f"mean f1 over {args.folds} folds: {result.mean_f1:.4f}")
    return EXIT_OK


def cmd_bot_apply(args):
    forest = botdetect.load_forest(args.model)
    users_file = corpus_path(args.users, "users.jsonl")
    tweets_file = corpus_path(args.tweets, "tweets.jsonl")
    users, _ = parse_user_file(users_file)
    tweets, _ = parse_tweet_file(tweets_file)
    partition = read_partition_csv(args.partition)
    collection = parse_timestamp(args.collection_date) if args.collection_date else None
    rows = botdetect.bot_report(users, tweets, partition, forest, args.threshold, collection)
    comments = provenance_lines(
        None,
        {
            "model": sha256_file(args.model),
            "users": sha256_file(users_file),
            "tweets": sha256_file(tweets_file),
            "partition": sha256_file(args.partition),
        },
    )
    out = StageFiles(Path(args.out))
    out.dir()
    _write_bot_csv(out.path("bot_stats.csv"), comments, rows)
    return EXIT_OK


def cmd_report(args):
    partition = read_partition_csv(args.partition)
    sizes: dict[int, int] = {}
    for cid in partition.values():
        sizes[cid] = sizes.get(cid, 0) + 1
    header, rows = read_commented_csv(args.hashtags)
    if header != ["community", "hashtag", "user_count"]:
        raise DataError(f"{args.hashtags}: unexpected hashtags header")
    hashtag_table: dict[int, list[tuple[str, int]]] = {}
    for cid_text, tag, count in rows:
        hashtag_table.setdefault(int(cid_text), []).append((tag, int(count)))
    labels = load_label_map(args.labels, set(sizes)) if args.labels else {}
    table = emit_community_table(sizes, hashtag_table, labels)
    comments = provenance_lines(
        None,
        {"partition": sha256_file(args.partition), "hashtags": sha256_file(args.hashtags)},
    )
    out = StageFiles(Path(args.out))
    out.dir()
    write_csv(
        out.path("community_table.csv"),
        comments,
        ["community_label", "account_count", "top_hashtags"],
        table,
    )
    _write_reference_check(out.path("reference_check.csv"), comments)
    return EXIT_OK


def cmd_run_all(args):
    overrides = {"seed": str(args.seed) if args.seed is not None else None}
    cfg = load_config(args.config, overrides)
    out = run_pipeline(cfg, Path(args.out))
    print(f"pipeline complete: {out}", file=sys.stderr)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rtgraph",
        description="Retweet-graph community mining pipeline.",
    )
    parser.add_argument("--version", action="version", version=f"rtgraph {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse, keyword-filter and normalize record files")
    p.add_argument("--tweets", required=True)
    p.add_argument("--users", required=True)
    p.add_argument("--keywords", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("build-graph", help="build the directed retweet graph")
    p.add_argument("--tweets", required=True, help="normalized corpus dir or tweets file")
    p.add_argument("--out", required=True, help="output .rtg path")
    p.add_argument("--edges-csv", help="also export src,dst,weight csv")
    p.set_defaults(func=cmd_build_graph)

    p = sub.add_parser("kcore", help="core decomposition of the undirected projection")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True, help="core_numbers csv path")
    p.add_argument("--k", type=int, help="also write the k-core subgraph")
    p.add_argument("--subgraph", help=".rtg path for the k-core subgraph")
    p.set_defaults(func=cmd_kcore)

    p = sub.add_parser("communities", help="select k and run community detection")
    p.add_argument("--graph", required=True)
    p.add_argument("--min-size", type=int, default=10)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_communities)

    p = sub.add_parser("hashtags", help="per-community hashtag user counts")
    p.add_argument("--tweets", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_hashtags)

    p = sub.add_parser("ngrams", help="per-community unigram/bigram counts")
    p.add_argument("--tweets", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--top", type=int, default=30)
    p.add_argument("--stopwords", default=analytics.default_stopwords_path())
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ngrams)

    p = sub.add_parser("geo", help="per-community regional histograms")
    p.add_argument("--tweets", required=True, help="normalized corpus dir (holds users.jsonl)")
    p.add_argument("--partition", required=True)
    p.add_argument("--gazetteer", default=analytics.default_gazetteer_path())
    p.add_argument("--region-shapes", default=analytics.default_region_shapes_path())
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_geo)

    p = sub.add_parser("offense", help="per-community offensive-tweet tallies")
    p.add_argument("--tweets", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--scorer", choices=("external", "baseline"), required=True)
    p.add_argument("--scores", help="tweet_id,probability csv (external scorer)")
    p.add_argument("--train", help="text,label csv (baseline scorer)")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_offense)

    p = sub.add_parser("bot-train", help="train the bot-detection forest")
    p.add_argument("--data", required=True, help="feature csv with a label column")
    p.add_argument("--raw", action="store_true", help="data holds raw profile columns")
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True, help="model .bf path")
    p.set_defaults(func=cmd_bot_train)

    p = sub.add_parser("bot-eval", help="stratified cross-validation of the forest")
    p.add_argument("--data", required=True)
    p.add_argument("--raw", action="store_true")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_bot_eval)

    p = sub.add_parser("bot-apply", help="classify accounts and tally automated tweets")
    p.add_argument("--model", required=True)
    p.add_argument("--users", required=True)
    p.add_argument("--tweets", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--threshold", type=float, default=0.75)
    p.add_argument("--collection-date", help="RFC 3339; default: day after latest record")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bot_apply)

    p = sub.add_parser("report", help="community table and published-value checks")
    p.add_argument("--partition", required=True)
    p.add_argument("--hashtags", required=True)
    p.add_argument("--labels", help="community_id,label csv")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("run-all", help="run the full pipeline from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, help="override the config seed")
    p.set_defaults(func=cmd_run_all)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # pragma: no cover - safety net
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
