"""Weighted directed retweet graph over user ids, stored as compressed
sparse adjacency (offset + neighbor + weight arrays).

Edge weight A[u, v] counts how many times user u retweeted user v. The
undirected projection drops self-loops and sums the two directions. Node
order is always ascending user id, which makes construction deterministic:
the same input multiset yields a bit-identical serialized graph.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .records import TweetRecord

RTG_MAGIC = b"RTG1"


@dataclass
class RetweetGraph:
    node_ids: np.ndarray  # uint64, strictly ascending
    offsets: np.ndarray  # int64, length n_nodes + 1
    neighbors: np.ndarray  # int64 indices into node_ids
    weights: np.ndarray  # int64, all >= 1
    directed: bool

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)

    @property
    def edge_count(self) -> int:
        """Distinct weighted edges; undirected edges are counted once."""
        if self.directed:
            return len(self.neighbors)
        return len(self.neighbors) // 2

    @property
    def total_weight(self) -> int:
        """Sum of edge weights, each undirected edge counted once."""
        total = int(self.weights.sum()) if len(self.weights) else 0
        return total if self.directed else total // 2

    def index_of(self, user_id: int) -> int:
        idx = int(np.searchsorted(self.node_ids, np.uint64(user_id)))
        if idx >= self.n_nodes or int(self.node_ids[idx]) != int(user_id):
            raise KeyError(f"user id {user_id} not in graph")
        return idx

    def has_node(self, user_id: int) -> bool:
        idx = int(np.searchsorted(self.node_ids, np.uint64(user_id)))
        return idx < self.n_nodes and int(self.node_ids[idx]) == int(user_id)

    def neighbor_slice(self, idx: int) -> slice:
        return slice(int(self.offsets[idx]), int(self.offsets[idx + 1]))

    def degrees(self) -> np.ndarray:
        """Per-node neighbor count (unweighted), in node-index order."""
        return np.diff(self.offsets)

    def weighted_degrees(self) -> np.ndarray:
        """Per-node sum of incident edge weights, in node-index order."""
        out = np.zeros(self.n_nodes, dtype=np.int64)
        np.add.at(out, np.repeat(np.arange(self.n_nodes), np.diff(self.offsets)), self.weights)
        return out

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(src_index, dst_index, weight) for every stored adjacency entry."""
        src = np.repeat(np.arange(self.n_nodes, dtype=np.int64), np.diff(self.offsets))
        return src, self.neighbors, self.weights


def degree(g: RetweetGraph, user_id: int) -> int:
    """Number of stored neighbors of a node (out-neighbors when directed)."""
    idx = g.index_of(user_id)
    return int(g.offsets[idx + 1] - g.offsets[idx])


def weighted_degree(g: RetweetGraph, user_id: int) -> int:
    """Sum of incident edge weights (used by modularity)."""
    idx = g.index_of(user_id)
    return int(g.weights[g.neighbor_slice(idx)].sum())


def _from_edge_list(
    node_ids: np.ndarray, src: np.ndarray, dst: np.ndarray, weight: np.ndarray, directed: bool
) -> RetweetGraph:
    """Assemble CSR arrays from parallel edge arrays (indices, not ids).

    Collapses duplicate (src, dst) pairs by summing weights and sorts each
    adjacency row by neighbor index.
    """
    n = len(node_ids)
    if len(src):
        key = src.astype(np.int64) * n + dst.astype(np.int64)
        uniq, inv = np.unique(key, return_inverse=True)
        summed = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(summed, inv, weight.astype(np.int64))
        src = (uniq // n).astype(np.int64)
        dst = (uniq % n).astype(np.int64)
        weight = summed
    else:
        src = np.zeros(0, dtype=np.int64)
        dst = np.zeros(0, dtype=np.int64)
        weight = np.zeros(0, dtype=np.int64)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.add.at(offsets, src + 1, 1)
    np.cumsum(offsets, out=offsets)
    return RetweetGraph(
        node_ids=node_ids.astype(np.uint64),
        offsets=offsets,
        neighbors=dst,
        weights=weight,
        directed=directed,
    )


def build_retweet_graph(tweets: Sequence[TweetRecord]) -> RetweetGraph:
    """Build the directed retweet graph from tweet records.

    Nodes are all users appearing as a tweet author or as a retweet source;
    edge (u -> v) weight counts tweets by u whose retweeted_user_id is v.
    Self-retweets become self-loops.
    """
    authors = np.fromiter((t.user_id for t in tweets), dtype=np.uint64, count=len(tweets))
    rt_pairs = [
        (t.user_id, t.retweeted_user_id) for t in tweets if t.retweeted_user_id is not None
    ]
    if rt_pairs:
        pairs = np.asarray(rt_pairs, dtype=np.uint64)
        node_ids = np.unique(np.concatenate([authors, pairs[:, 0], pairs[:, 1]]))
        src = np.searchsorted(node_ids, pairs[:, 0]).astype(np.int64)
        dst = np.searchsorted(node_ids, pairs[:, 1]).astype(np.int64)
        weight = np.ones(len(pairs), dtype=np.int64)
    else:
        node_ids = np.unique(authors)
        src = dst = weight = np.zeros(0, dtype=np.int64)
    return _from_edge_list(node_ids, src, dst, weight, directed=True)


def to_undirected(g: RetweetGraph) -> RetweetGraph:
    """Undirected projection: self-loops dropped, weights summed per pair."""
    if not g.directed:
        raise ValueError("graph is already undirected")
    src, dst, weight = g.edge_arrays()
    keep = src != dst
    src, dst, weight = src[keep], dst[keep], weight[keep]
    both_src = np.concatenate([src, dst])
    both_dst = np.concatenate([dst, src])
    both_w = np.concatenate([weight, weight])
    return _from_edge_list(g.node_ids, both_src, both_dst, both_w, directed=False)


def induced_subgraph(g: RetweetGraph, keep_mask: np.ndarray) -> RetweetGraph:
    """Subgraph induced on the node-index mask; user ids are preserved."""
    keep_mask = np.asarray(keep_mask, dtype=bool)
    new_index = np.cumsum(keep_mask) - 1
    src, dst, weight = g.edge_arrays()
    sel = keep_mask[src] & keep_mask[dst]
    return _from_edge_list(
        g.node_ids[keep_mask],
        new_index[src[sel]],
        new_index[dst[sel]],
        weight[sel],
        directed=g.directed,
    )


def save_rtg(g: RetweetGraph, path) -> None:
    """Write the binary graph file.

    Layout (all integers little-endian unsigned 64-bit): magic 'RTG1',
    node count, stored adjacency entry count, flags (bit 0 = directed),
    then the node-id table, the offset array (node count + 1 entries), the
    neighbor-index array and the weight array. For undirected graphs each
    edge is stored in both endpoint rows, so the entry count is twice the
    logical edge count.
    """
    with open(path, "wb") as fh:
        fh.write(RTG_MAGIC)
        fh.write(struct.pack("<QQQ", g.n_nodes, len(g.neighbors), 1 if g.directed else 0))
        fh.write(g.node_ids.astype("<u8").tobytes())
        fh.write(g.offsets.astype("<u8").tobytes())
        fh.write(g.neighbors.astype("<u8").tobytes())
        fh.write(g.weights.astype("<u8").tobytes())


def load_rtg(path) -> RetweetGraph:
    data = Path(path).read_bytes()
    if data[:4] != RTG_MAGIC:
        raise ValueError(f"{path}: not a retweet graph file (bad magic)")
    n, entries, flags = struct.unpack_from("<QQQ", data, 4)
    pos = 4 + 24
    expected = pos + 8 * (n + (n + 1) + 2 * entries)
    if len(data) != expected:
        raise ValueError(f"{path}: truncated graph file")

    def take(count):
        nonlocal pos
        arr = np.frombuffer(data, dtype="<u8", count=count, offset=pos)
        pos += 8 * count
        return arr

    node_ids = take(n).astype(np.uint64)
    offsets = take(n + 1).astype(np.int64)
    neighbors = take(entries).astype(np.int64)
    weights = take(entries).astype(np.int64)
    return RetweetGraph(node_ids, offsets, neighbors, weights, directed=bool(flags & 1))


def edge_rows(g: RetweetGraph) -> Iterable[tuple[int, int, int]]:
    """(src_user_id, dst_user_id, weight) rows; undirected edges once (u <= v)."""
    src, dst, weight = g.edge_arrays()
    for s, d, w in zip(src, dst, weight):
        if not g.directed and s > d:
            continue
        yield int(g.node_ids[s]), int(g.node_ids[d]), int(w)
