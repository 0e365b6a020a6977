"""Shared fixtures and graph-building helpers for the test suite."""

from __future__ import annotations

import random
from datetime import datetime, timezone

import numpy as np
import pytest

from rtgraph.graph import RetweetGraph, _from_edge_list
from rtgraph.records import TweetRecord, UserProfile


def make_tweet(
    tweet_id,
    user_id,
    text="bonjour",
    created="2022-03-01T10:00:00Z",
    hashtags=(),
    rt_user=None,
    rt_status=None,
    lang="fr",
):
    from rtgraph.records import parse_timestamp

    return TweetRecord(
        tweet_id=tweet_id,
        user_id=user_id,
        text=text,
        created_at=parse_timestamp(created),
        hashtags=tuple(hashtags),
        lang=lang,
        retweeted_user_id=rt_user,
        retweeted_status_id=rt_status,
    )


def make_user(user_id, screen_name=None, created="2022-01-01T00:00:00Z", **kwargs):
    from rtgraph.records import parse_timestamp

    return UserProfile(
        user_id=user_id,
        screen_name=screen_name or f"user{user_id}",
        created_at=parse_timestamp(created),
        **kwargs,
    )


def undirected_from_edges(edges, extra_nodes=()):
    """Build an undirected RetweetGraph from (u, v[, w]) user-id tuples."""
    nodes = set(extra_nodes)
    norm = []
    for edge in edges:
        u, v = edge[0], edge[1]
        w = edge[2] if len(edge) > 2 else 1
        if u == v:
            raise ValueError("undirected test graphs must not have self-loops")
        nodes.update((u, v))
        norm.append((u, v, w))
    node_ids = np.asarray(sorted(nodes), dtype=np.uint64)
    index = {u: i for i, u in enumerate(node_ids.tolist())}
    src, dst, wgt = [], [], []
    for u, v, w in norm:
        src += [index[u], index[v]]
        dst += [index[v], index[u]]
        wgt += [w, w]
    return _from_edge_list(
        node_ids,
        np.asarray(src, dtype=np.int64),
        np.asarray(dst, dtype=np.int64),
        np.asarray(wgt, dtype=np.int64),
        directed=False,
    )


def random_undirected(rng: random.Random, n_max=500, weighted=False):
    """Random simple undirected graph with ids spread over a sparse range."""
    n = rng.randint(1, n_max)
    ids = rng.sample(range(1, n_max * 20), n)
    m = rng.randint(0, max(0, min(3 * n, n * (n - 1) // 2)))
    edges = set()
    while len(edges) < m:
        u, v = rng.sample(ids, 2)
        edges.add((min(u, v), max(u, v)))
    triples = [
        (u, v, rng.randint(1, 5) if weighted else 1) for u, v in sorted(edges)
    ]
    return undirected_from_edges(triples, extra_nodes=ids)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
