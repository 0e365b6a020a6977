"""Core decomposition, Louvain community detection and k selection.

All operations work on the undirected, self-loop-free projection of the
retweet graph. Core decomposition uses linear-time bucket peeling;
community size rather than edge weight drives the k-core ("at least k
neighbors"), while modularity uses edge weights throughout.

Louvain is deterministic for a fixed seed: node visiting order is a single
seeded shuffle per aggregation level, and move gains are compared in exact
integer arithmetic (edge weights are integers), with ties resolved toward
the smallest community label.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .errors import NoValidKError
from .graph import RetweetGraph, induced_subgraph

__all__ = [
    "CoreDecomposition",
    "Partition",
    "KSelection",
    "core_numbers",
    "kcore",
    "louvain",
    "modularity",
    "select_k",
]


@dataclass
class CoreDecomposition:
    """Largest k at which each node survives the recursive pruning."""

    node_ids: np.ndarray
    core: np.ndarray

    def core_number(self, user_id: int) -> int:
        idx = int(np.searchsorted(self.node_ids, np.uint64(user_id)))
        if idx >= len(self.node_ids) or int(self.node_ids[idx]) != int(user_id):
            raise KeyError(f"user id {user_id} not in decomposition")
        return int(self.core[idx])

    def as_dict(self) -> dict[int, int]:
        return {int(u): int(c) for u, c in zip(self.node_ids, self.core)}

    @property
    def max_core(self) -> int:
        return int(self.core.max()) if len(self.core) else 0


@dataclass
class Partition:
    """Node -> community assignment with dense ids.

    Community ids are ordered by descending size, ties broken by the
    smallest member user id. ``pass_modularity`` records modularity after
    each Louvain local-moving pass (diagnostic; trivially empty for
    partitions not produced by Louvain).
    """

    community_of: dict[int, int]
    communities: list[list[int]]
    modularity: float
    pass_modularity: list[float] = field(default_factory=list)

    @property
    def n_communities(self) -> int:
        return len(self.communities)

    def sizes(self) -> list[int]:
        return [len(members) for members in self.communities]


@dataclass
class KSelection:
    k: int
    cores: CoreDecomposition
    partition: Partition


def _require_undirected_simple(g: RetweetGraph, op: str) -> None:
    if g.directed:
        raise ValueError(f"{op} requires an undirected graph")
    src, dst, _ = g.edge_arrays()
    if len(src) and bool(np.any(src == dst)):
        raise ValueError(f"{op} requires a graph without self-loops")


def core_numbers(g: RetweetGraph) -> CoreDecomposition:
    """Bucket-peeling core decomposition (O(nodes + edges))."""
    _require_undirected_simple(g, "core decomposition")
    n = g.n_nodes
    if n == 0:
        return CoreDecomposition(g.node_ids.copy(), np.zeros(0, dtype=np.int64))
    deg = np.diff(g.offsets).tolist()
    offsets = g.offsets.tolist()
    nbrs = g.neighbors.tolist()
    max_deg = max(deg)

    # bin-sort nodes by degree: starts[d] = first slot of degree-d bucket
    count = [0] * (max_deg + 1)
    for d in deg:
        count[d] += 1
    starts = [0] * (max_deg + 1)
    acc = 0
    for d in range(max_deg + 1):
        starts[d] = acc
        acc += count[d]
    fill = starts[:]
    pos = [0] * n
    vert = [0] * n
    for v in range(n):
        p = fill[deg[v]]
        pos[v] = p
        vert[p] = v
        fill[deg[v]] = p + 1

    core = deg[:]
    for i in range(n):
        v = vert[i]
        cv = core[v]
        for p in range(offsets[v], offsets[v + 1]):
            u = nbrs[p]
            cu = core[u]
            if cu > cv:
                # swap u to the front of its degree bucket, then shrink it
                pu = pos[u]
                pw = starts[cu]
                w = vert[pw]
                if u != w:
                    vert[pu], vert[pw] = w, u
                    pos[u], pos[w] = pw, pu
                starts[cu] += 1
                core[u] = cu - 1
    return CoreDecomposition(g.node_ids.copy(), np.asarray(core, dtype=np.int64))


def _kcore_from(g: RetweetGraph, cores: CoreDecomposition, k: int) -> RetweetGraph:
    return induced_subgraph(g, cores.core >= k)


def kcore(g: RetweetGraph, k: int) -> RetweetGraph:
    """Maximal subgraph in which every node keeps >= k neighbors.

    Equivalent to repeatedly deleting nodes of degree < k until a fixpoint;
    the result does not depend on deletion order. k = 0 would return the
    graph unchanged and is rejected so callers state that explicitly.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    return _kcore_from(g, core_numbers(g), k)


def _partition_from_labels(
    g: RetweetGraph, labels: np.ndarray, pass_history: list[float]
) -> Partition:
    """Renumber arbitrary labels into dense ids ordered by community size."""
    groups: dict[int, list[int]] = {}
    for idx, lab in enumerate(labels.tolist()):
        groups.setdefault(lab, []).append(idx)
    ordered = sorted(
        groups.values(), key=lambda m: (-len(m), int(g.node_ids[m[0]]))
    )
    community_of: dict[int, int] = {}
    communities: list[list[int]] = []
    for cid, members in enumerate(ordered):
        ids = [int(g.node_ids[i]) for i in members]
        communities.append(ids)
        for uid in ids:
            community_of[uid] = cid
    q = modularity(g, community_of)
    return Partition(community_of, communities, q, pass_history)


def modularity(g: RetweetGraph, partition) -> float:
    """Weighted Newman modularity of a partition, in [-1, 1].

    Accepts a Partition or a {user_id: community} mapping, which must cover
    exactly the graph's nodes. An empty or edgeless graph scores 0.
    """
    _require_undirected_simple(g, "modularity")
    mapping = partition.community_of if isinstance(partition, Partition) else partition
    if len(mapping) != g.n_nodes:
        raise ValueError("partition must cover exactly the graph's nodes")
    comm = np.empty(g.n_nodes, dtype=np.int64)
    for idx in range(g.n_nodes):
        uid = int(g.node_ids[idx])
        try:
            comm[idx] = mapping[uid]
        except KeyError:
            raise ValueError(f"partition missing node {uid}") from None
    src, dst, weight = g.edge_arrays()
    two_m = int(weight.sum())
    if two_m == 0:
        return 0.0
    internal = int(weight[comm[src] == comm[dst]].sum())
    tot = np.zeros(int(comm.max()) + 1, dtype=np.int64)
    np.add.at(tot, comm[src], weight)
    sum_tot_sq = sum(int(t) * int(t) for t in tot)
    return internal / two_m - sum_tot_sq / (two_m * two_m)


class _Level:
    """One Louvain aggregation level: CSR adjacency plus self-loop weights.

    ``self_weight[i]`` holds the ordered-pair weight a meta node carries
    from edges internal to the community it replaced.
    """

    def __init__(self, offsets, neighbors, weights, self_weight):
        self.offsets = offsets
        self.neighbors = neighbors
        self.weights = weights
        self.self_weight = self_weight
        self.n = len(self_weight)
        row_sums = np.zeros(self.n, dtype=np.int64)
        np.add.at(
            row_sums, np.repeat(np.arange(self.n), np.diff(offsets)), weights
        )
        self.k = (row_sums + self_weight).tolist()
        self.two_m = int(sum(self.k))

    @classmethod
    def from_graph(cls, g: RetweetGraph) -> "_Level":
        return cls(
            g.offsets.tolist() if isinstance(g.offsets, np.ndarray) else g.offsets,
            g.neighbors,
            g.weights,
            np.zeros(g.n_nodes, dtype=np.int64),
        )

    def q_of(self, comm: list[int]) -> float:
        """Modularity of a label assignment on this level's graph."""
        if self.two_m == 0:
            return 0.0
        carr = np.asarray(comm, dtype=np.int64)
        src = np.repeat(np.arange(self.n), np.diff(np.asarray(self.offsets)))
        same = carr[src] == carr[np.asarray(self.neighbors)]
        internal = int(np.asarray(self.weights)[same].sum()) + int(self.self_weight.sum())
        tot = np.zeros(int(carr.max()) + 1, dtype=np.int64)
        np.add.at(tot, carr, np.asarray(self.k, dtype=np.int64))
        sum_tot_sq = sum(int(t) * int(t) for t in tot)
        return internal / self.two_m - sum_tot_sq / (self.two_m * self.two_m)


def _local_moving(level: _Level, rng: random.Random, history: list[float]):
    """Greedy node moves until a full pass makes none.

    Gains are compared as scaled integers: moving node i into community D
    scores 2m * k_{i,D} - k_i * tot_D (tot_D with i removed). Strictly
    positive improvement over the node's current community is required, and
    equal-gain candidates resolve to the smallest community label.
    """
    n = level.n
    comm = list(range(n))
    tot = level.k[:]
    offsets, nbrs = level.offsets, level.neighbors.tolist()
    weights = level.weights.tolist()
    k = level.k
    two_m = level.two_m
    order = list(range(n))
    rng.shuffle(order)

    moved_total = 0
    while True:
        moves = 0
        for i in order:
            ci = comm[i]
            links: dict[int, int] = {}
            for p in range(offsets[i], offsets[i + 1]):
                j = nbrs[p]
                if j != i:
                    cj = comm[j]
                    links[cj] = links.get(cj, 0) + weights[p]
            tot[ci] -= k[i]
            best_c = ci
            best_score = two_m * links.get(ci, 0) - k[i] * tot[ci]
            for cand in sorted(links):
                if cand == ci:
                    continue
                score = two_m * links[cand] - k[i] * tot[cand]
                if score > best_score:
                    best_score = score
                    best_c = cand
            tot[best_c] += k[i]
            if best_c != ci:
                comm[i] = best_c
                moves += 1
        history.append(level.q_of(comm))
        moved_total += moves
        if moves == 0:
            break
    return comm, moved_total


def _aggregate(level: _Level, comm: list[int]) -> tuple[_Level, np.ndarray]:
    """Collapse communities into meta nodes; returns the new level and the
    dense community index of each node of the old level."""
    labels = sorted(set(comm))
    dense = {lab: i for i, lab in enumerate(labels)}
    carr = np.asarray([dense[c] for c in comm], dtype=np.int64)
    nc = len(labels)

    src = np.repeat(np.arange(level.n), np.diff(np.asarray(level.offsets)))
    dst = np.asarray(level.neighbors, dtype=np.int64)
    w = np.asarray(level.weights, dtype=np.int64)
    csrc, cdst = carr[src], carr[dst]

    self_weight = np.zeros(nc, dtype=np.int64)
    np.add.at(self_weight, carr, level.self_weight)
    same = csrc == cdst
    np.add.at(self_weight, csrc[same], w[same])

    csrc, cdst, w = csrc[~same], cdst[~same], w[~same]
    if len(csrc):
        key = csrc * nc + cdst
        uniq, inv = np.unique(key, return_inverse=True)
        summed = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(summed, inv, w)
        msrc = (uniq // nc).astype(np.int64)
        mdst = (uniq % nc).astype(np.int64)
    else:
        msrc = mdst = summed = np.zeros(0, dtype=np.int64)
    offsets = np.zeros(nc + 1, dtype=np.int64)
    np.add.at(offsets, msrc + 1, 1)
    np.cumsum(offsets, out=offsets)
    return _Level(offsets.tolist(), mdst, summed, self_weight), carr


def louvain(g: RetweetGraph, seed: int = 0) -> Partition:
    """Two-phase greedy modularity maximization (local moves + aggregation).

    Runs until no move improves modularity. Modularity after each
    local-moving pass is recorded in the returned partition and never
    decreases. An edgeless graph yields singleton communities with Q = 0.
    """
    _require_undirected_simple(g, "louvain")
    if g.n_nodes == 0:
        raise ValueError("louvain requires at least one node")
    rng = random.Random(seed)
    history: list[float] = []

    level = _Level.from_graph(g)
    assignment = np.arange(g.n_nodes, dtype=np.int64)
    while True:
        comm, moved = _local_moving(level, rng, history)
        level, carr = _aggregate(level, comm)
        assignment = carr[assignment]
        if moved == 0:
            break

    eps = 1e-12
    for prev, cur in zip(history, history[1:]):
        assert cur >= prev - eps, "modularity decreased across passes"
    return _partition_from_labels(g, assignment, history)


def singleton_partition(g: RetweetGraph) -> Partition:
    labels = np.arange(g.n_nodes, dtype=np.int64)
    return _partition_from_labels(g, labels, [])


def one_community_partition(g: RetweetGraph) -> Partition:
    labels = np.zeros(g.n_nodes, dtype=np.int64)
    return _partition_from_labels(g, labels, [])


def select_k(
    g: RetweetGraph, min_community_size: int = 10, seed: int = 0
) -> KSelection:
    """Largest k whose k-core partitions into communities of the given
    minimum size.

    Searches downward from the maximum core number, running Louvain on each
    candidate core. Raises NoValidKError (with per-k diagnostics) when no k
    qualifies, including for an empty or edgeless graph.
    """
    _require_undirected_simple(g, "select_k")
    if min_community_size < 1:
        raise ValueError("min_community_size must be >= 1")
    per_k: dict[int, dict] = {}
    if g.n_nodes == 0:
        raise NoValidKError(per_k)
    cores = core_numbers(g)
    for k in range(cores.max_core, 0, -1):
        sub = _kcore_from(g, cores, k)
        part = louvain(sub, seed=seed)
        smallest = min(part.sizes())
        if smallest >= min_community_size:
            return KSelection(k, cores, part)
        per_k[k] = {"core_nodes": sub.n_nodes, "smallest_community": smallest}
    raise NoValidKError(per_k)
