"""Tweet and user record ingestion.

Input corpora are line-delimited JSON: one tweet or one user profile per
line. Field names are documented in the README. Parsing is stateless per
line, so a file may be split at any line boundary and parsed in chunks
without changing the resulting record multiset.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CorpusFormatError

MAX_ID = 2**64 - 1

TWEET_FIELDS = (
    "tweet_id",
    "user_id",
    "text",
    "created_at",
    "hashtags",
    "retweeted_user_id",
    "retweeted_status_id",
    "lang",
)

USER_COUNT_FIELDS = (
    "statuses_count",
    "followers_count",
    "friends_count",
    "favourites_count",
    "listed_count",
)

USER_BOOL_FIELDS = ("default_profile", "verified", "geo_enabled")


@dataclass(frozen=True)
class TweetRecord:
    tweet_id: int
    user_id: int
    text: str
    created_at: datetime
    hashtags: tuple[str, ...]
    lang: str
    retweeted_user_id: int | None = None
    retweeted_status_id: int | None = None

    @property
    def is_retweet(self) -> bool:
        return self.retweeted_status_id is not None


@dataclass(frozen=True)
class UserProfile:
    user_id: int
    screen_name: str
    created_at: datetime
    description: str = ""
    location: str = ""
    statuses_count: int = 0
    followers_count: int = 0
    friends_count: int = 0
    favourites_count: int = 0
    listed_count: int = 0
    default_profile: bool = False
    verified: bool = False
    geo_enabled: bool = False
    # False when any optional field was absent from the source record and
    # had to be defaulted; downstream stages may surface this.
    complete: bool = True


@dataclass
class CorpusStats:
    tweet_lines: int = 0
    tweet_malformed: int = 0
    user_lines: int = 0
    user_malformed: int = 0


@dataclass
class Corpus:
    tweets: list[TweetRecord] = field(default_factory=list)
    users: list[UserProfile] = field(default_factory=list)
    stats: CorpusStats = field(default_factory=CorpusStats)


def parse_timestamp(value) -> datetime:
    """Parse an RFC 3339 timestamp into an aware UTC datetime."""
    if not isinstance(value, str):
        raise ValueError("timestamp must be a string")
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_timestamp(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _require_id(obj, key) -> int:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{key} must be an integer")
    if not 0 <= value <= MAX_ID:
        raise ValueError(f"{key} out of range")
    return value


def normalize_hashtag(tag: str) -> str:
    """Lowercase a hashtag and strip a single leading '#'."""
    if not isinstance(tag, str):
        raise ValueError("hashtag must be a string")
    tag = tag[1:] if tag.startswith("#") else tag
    tag = tag.lower()
    if any(ch.isspace() for ch in tag):
        raise ValueError(f"hashtag contains whitespace: {tag!r}")
    return tag


def tweet_from_json(obj: dict) -> TweetRecord:
    """Build a TweetRecord from a decoded JSON object, validating the schema.

    Raises ValueError on any violation; callers treat that line as malformed.
    """
    if not isinstance(obj, dict):
        raise ValueError("tweet record must be an object")
    tweet_id = _require_id(obj, "tweet_id")
    user_id = _require_id(obj, "user_id")
    text = obj["text"]
    if not isinstance(text, str):
        raise ValueError("text must be a string")
    created_at = parse_timestamp(obj["created_at"])
    raw_tags = obj.get("hashtags", [])
    if not isinstance(raw_tags, list):
        raise ValueError("hashtags must be an array")
    hashtags = tuple(t for t in (normalize_hashtag(x) for x in raw_tags) if t)
    lang = obj.get("lang", "")
    if not isinstance(lang, str):
        raise ValueError("lang must be a string")

    rt_user = obj.get("retweeted_user_id")
    rt_status = obj.get("retweeted_status_id")
    if (rt_user is None) != (rt_status is None):
        raise ValueError("retweeted_user_id and retweeted_status_id must come together")
    if rt_user is not None:
        rt_user = _require_id(obj, "retweeted_user_id")
        rt_status = _require_id(obj, "retweeted_status_id")
    return TweetRecord(
        tweet_id=tweet_id,
        user_id=user_id,
        text=text,
        created_at=created_at,
        hashtags=hashtags,
        lang=lang,
        retweeted_user_id=rt_user,
        retweeted_status_id=rt_status,
    )


def user_from_json(obj: dict) -> UserProfile:
    """Build a UserProfile from a decoded JSON object.

    user_id, screen_name and created_at are mandatory. Counts default to 0
    and booleans to False when absent, with ``complete`` flipped to False so
    partial metadata dumps stay processable but detectable.
    """
    if not isinstance(obj, dict):
        raise ValueError("user record must be an object")
    user_id = _require_id(obj, "user_id")
    screen_name = obj["screen_name"]
    if not isinstance(screen_name, str):
        raise ValueError("screen_name must be a string")
    created_at = parse_timestamp(obj["created_at"])

    complete = True
    counts = {}
    for key in USER_COUNT_FIELDS:
        if key in obj:
            value = obj[key]
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"{key} must be an integer")
            if value < 0:
                raise ValueError(f"{key} must be non-negative")
            counts[key] = value
        else:
            counts[key] = 0
            complete = False
    bools = {}
    for key in USER_BOOL_FIELDS:
        if key in obj:
            value = obj[key]
            if not isinstance(value, bool):
                raise ValueError(f"{key} must be a boolean")
            bools[key] = value
        else:
            bools[key] = False
            complete = False
    for key in ("description", "location"):
        if key in obj and not isinstance(obj[key], str):
            raise ValueError(f"{key} must be a string")
        if key not in obj:
            complete = False

    return UserProfile(
        user_id=user_id,
        screen_name=screen_name,
        created_at=created_at,
        description=obj.get("description", ""),
        location=obj.get("location", ""),
        complete=complete,
        **counts,
        **bools,
    )


def tweet_to_json(rec: TweetRecord) -> dict:
    obj = {
        "tweet_id": rec.tweet_id,
        "user_id": rec.user_id,
        "text": rec.text,
        "created_at": format_timestamp(rec.created_at),
        "hashtags": list(rec.hashtags),
        "lang": rec.lang,
    }
    if rec.retweeted_user_id is not None:
        obj["retweeted_user_id"] = rec.retweeted_user_id
        obj["retweeted_status_id"] = rec.retweeted_status_id
    return obj


def user_to_json(user: UserProfile) -> dict:
    obj = {
        "user_id": user.user_id,
        "screen_name": user.screen_name,
        "created_at": format_timestamp(user.created_at),
        "description": user.description,
        "location": user.location,
    }
    for key in USER_COUNT_FIELDS + USER_BOOL_FIELDS:
        obj[key] = getattr(user, key)
    return obj


def _parse_lines(path: Path, builder) -> tuple[list, int, int]:
    records = []
    malformed = 0
    lines = 0
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            if not raw.strip():
                continue
            lines += 1
            try:
                records.append(builder(json.loads(raw)))
            except (ValueError, KeyError, TypeError):
                malformed += 1
    return records, malformed, lines


def _check_malformed_ratio(path, malformed, lines):
    if lines and malformed * 2 > lines:
        raise CorpusFormatError(
            f"{path}: {malformed} of {lines} lines malformed; file does not look like a record corpus"
        )


def parse_tweet_file(path) -> tuple[list[TweetRecord], int]:
    path = Path(path)
    records, malformed, lines = _parse_lines(path, tweet_from_json)
    _check_malformed_ratio(path, malformed, lines)
    return records, malformed


def parse_user_file(path) -> tuple[list[UserProfile], int]:
    path = Path(path)
    records, malformed, lines = _parse_lines(path, user_from_json)
    _check_malformed_ratio(path, malformed, lines)
    return records, malformed


def parse_corpus(tweet_path, user_path) -> Corpus:
    """Parse a tweet file and a user file into a Corpus.

    Unreadable files raise OSError. Individual malformed lines are skipped
    and counted; a file that is mostly malformed raises CorpusFormatError.
    """
    corpus = Corpus()
    corpus.tweets, corpus.stats.tweet_malformed = parse_tweet_file(tweet_path)
    corpus.users, corpus.stats.user_malformed = parse_user_file(user_path)
    corpus.stats.tweet_lines = len(corpus.tweets) + corpus.stats.tweet_malformed
    corpus.stats.user_lines = len(corpus.users) + corpus.stats.user_malformed
    return corpus


def write_tweets(path, tweets: Iterable[TweetRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in tweets:
            fh.write(json.dumps(tweet_to_json(rec), ensure_ascii=False) + "\n")


def write_users(path, users: Iterable[UserProfile]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for user in users:
            fh.write(json.dumps(user_to_json(user), ensure_ascii=False) + "\n")


def load_keywords(path) -> list[str]:
    """Read a keyword file: one keyword per line, '#' comments allowed."""
    keywords = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            word = raw.strip()
            if word and not word.startswith("#"):
                keywords.append(word.casefold())
    return keywords


def filter_by_keywords(
    tweets: Sequence[TweetRecord], keywords: Sequence[str]
) -> list[TweetRecord]:
    """Keep tweets whose case-folded text contains any keyword as a substring.

    Matching preserves accents: "élection" does not match "election".
    Order is preserved; filtering twice is a no-op.
    """
    if not keywords:
        raise ValueError("keyword list must not be empty")
    folded = [kw.casefold() for kw in keywords]
    if any(not kw for kw in folded):
        raise ValueError("keywords must be non-empty strings")
    kept = []
    for rec in tweets:
        text = rec.text.casefold()
        if any(kw in text for kw in folded):
            kept.append(rec)
    return kept
