"""Retweet graph construction, projection, degrees and serialization."""

import random
from collections import Counter

import numpy as np
import pytest

from rtgraph.graph import (
    build_retweet_graph,
    degree,
    edge_rows,
    load_rtg,
    save_rtg,
    to_undirected,
    weighted_degree,
)

from conftest import make_tweet, random_undirected, undirected_from_edges


def retweet(i, u, v):
    return make_tweet(i, u, text=f"RT @{v}", rt_user=v, rt_status=i * 1000)


def edge_set(g):
    return {(int(g.node_ids[s]), int(g.node_ids[d]), int(w)) for s, d, w in zip(*g.edge_arrays())}


def test_no_retweets_gives_isolated_author_nodes():
    tweets = [make_tweet(1, 5), make_tweet(2, 3), make_tweet(3, 5)]
    g = build_retweet_graph(tweets)
    assert g.node_ids.tolist() == [3, 5]
    assert g.edge_count == 0
    assert degree(g, 5) == 0


def test_repeat_and_self_retweets_collapse_into_weights():
    tweets = [retweet(1, 7, 9), retweet(2, 7, 9), retweet(3, 7, 7)]
    g = build_retweet_graph(tweets)
    assert edge_set(g) == {(7, 9, 2), (7, 7, 1)}
    assert g.directed


def test_random_events_match_counting_oracle():
    rng = random.Random(42)
    users = list(range(1, 30))
    tweets = []
    for i in range(100):
        u = rng.choice(users)
        v = rng.choice(users)
        tweets.append(retweet(i, u, v))
    g = build_retweet_graph(tweets)
    # independent oracle: plain event tally
    tally = Counter((t.user_id, t.retweeted_user_id) for t in tweets)
    assert edge_set(g) == {(u, v, c) for (u, v), c in tally.items()}
    assert g.total_weight == 100  # sum of weights == number of retweet events


def test_undirected_sums_directions_and_drops_self_loops():
    tweets = [retweet(1, 1, 2), retweet(2, 1, 2), retweet(3, 2, 1), retweet(4, 2, 1), retweet(5, 2, 1), retweet(6, 1, 1)]
    g = build_retweet_graph(tweets)
    u = to_undirected(g)
    assert not u.directed
    assert edge_set(u) == {(1, 2, 5), (2, 1, 5)}
    assert u.edge_count == 1
    assert u.node_ids.tolist() == g.node_ids.tolist()


def test_undirected_of_edgeless_graph_is_edgeless():
    g = build_retweet_graph([make_tweet(1, 4)])
    u = to_undirected(g)
    assert u.edge_count == 0 and u.n_nodes == 1


def test_undirected_rejects_undirected_input():
    g = to_undirected(build_retweet_graph([retweet(1, 1, 2)]))
    with pytest.raises(ValueError):
        to_undirected(g)


def test_undirected_matches_transpose_add_oracle():
    rng = random.Random(7)
    tweets = [retweet(i, rng.randint(1, 40), rng.randint(1, 40)) for i in range(300)]
    g = build_retweet_graph(tweets)
    u = to_undirected(g)
    # oracle: dense adjacency, A + A.T with zeroed diagonal
    n = g.n_nodes
    dense = np.zeros((n, n), dtype=np.int64)
    for s, d, w in zip(*g.edge_arrays()):
        dense[s, d] = w
    sym = dense + dense.T
    np.fill_diagonal(sym, 0)
    got = np.zeros((n, n), dtype=np.int64)
    for s, d, w in zip(*u.edge_arrays()):
        got[s, d] = w
    assert np.array_equal(got, sym)
    # weight preserved minus self-loops
    assert u.total_weight == g.total_weight - int(np.trace(dense))


def test_degree_trivial_cases():
    g = undirected_from_edges([(1, 2), (2, 3), (1, 3)], extra_nodes=[99])
    assert degree(g, 99) == 0
    assert degree(g, 1) == 2
    assert weighted_degree(g, 1) == 2
    with pytest.raises(KeyError):
        degree(g, 1234)


def test_degree_matches_adjacency_scan_oracle(rng):
    g = random_undirected(rng, n_max=120, weighted=True)
    src, dst, wgt = g.edge_arrays()
    for idx in range(g.n_nodes):
        uid = int(g.node_ids[idx])
        neighbor_count = sum(1 for s in src.tolist() if s == idx)
        incident_weight = sum(int(w) for s, w in zip(src.tolist(), wgt.tolist()) if s == idx)
        assert degree(g, uid) == neighbor_count
        assert weighted_degree(g, uid) == incident_weight


def test_construction_is_deterministic_for_shuffled_input(tmp_path):
    rng = random.Random(3)
    tweets = [retweet(i, rng.randint(1, 25), rng.randint(1, 25)) for i in range(150)]
    tweets += [make_tweet(1000 + i, rng.randint(1, 25)) for i in range(50)]
    shuffled = tweets[:]
    rng.shuffle(shuffled)
    a, b = tmp_path / "a.rtg", tmp_path / "b.rtg"
    save_rtg(build_retweet_graph(tweets), a)
    save_rtg(build_retweet_graph(shuffled), b)
    assert a.read_bytes() == b.read_bytes()


def test_rtg_file_roundtrip(tmp_path):
    tweets = [retweet(1, 2**63, 2**64 - 1), retweet(2, 5, 2**63)]
    g = build_retweet_graph(tweets)
    path = tmp_path / "g.rtg"
    save_rtg(g, path)
    back = load_rtg(path)
    assert back.directed == g.directed
    assert back.node_ids.tolist() == g.node_ids.tolist()
    assert edge_set(back) == edge_set(g)
    with pytest.raises(ValueError):
        load_rtg(__file__)


def test_edge_rows_emit_undirected_edges_once():
    und = undirected_from_edges([(1, 2, 3), (2, 5, 1)])
    assert sorted(edge_rows(und)) == [(1, 2, 3), (2, 5, 1)]
    directed = build_retweet_graph([retweet(1, 2, 1), retweet(2, 1, 2)])
    assert sorted(edge_rows(directed)) == [(1, 2, 1), (2, 1, 1)]
