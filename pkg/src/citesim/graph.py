"""Gender-labeled co-authorship graphs: synthesis, ingestion, and queries.

The graph is the static "true field" that every agent estimates and cites
from. Nodes are dense author ids 0..n-1, edges are binary undirected
co-authorship links, and each author carries a binary gender label.
"""

from __future__ import annotations

import enum
import math
from bisect import insort

import numpy as np

from .errors import ConfigurationError, IngestionError


class Gender(enum.Enum):
    """Binary author/agent gender label."""

    WOMAN = "W"
    MAN = "M"

    @property
    def tag(self) -> str:
        return self.value


def _seed_sequence(*entropy) -> np.random.SeedSequence:
    """SeedSequence over a tuple of ints; negative values are folded to uint range."""
    return np.random.SeedSequence(tuple(int(e) % (1 << 63) for e in entropy))


class CoauthorGraph:
    """Immutable undirected binary graph over authors with gender labels.

    Edges are stored in CSR form. Invariants enforced at construction:
    no self-loops, no duplicate edges, minimum degree 1, a gender for
    every author. Safe to share across threads/processes once built.
    """

    def __init__(self, n_authors: int, edges, is_woman) -> None:
        n = int(n_authors)
        if n < 1:
            raise ConfigurationError("graph needs at least one author")
        is_woman = np.asarray(is_woman, dtype=bool)
        if is_woman.shape != (n,):
            raise ConfigurationError("gender map must cover all %d authors" % n)
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size == 0:
            raise ConfigurationError("graph has no edges")
        u, v = edges[:, 0], edges[:, 1]
        if (u < 0).any() or (u >= n).any() or (v < 0).any() or (v >= n).any():
            raise ConfigurationError("edge endpoint out of range")
        if (u == v).any():
            raise ConfigurationError("self-loops are not allowed")
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        keys = lo * n + hi
        if len(np.unique(keys)) != len(keys):
            raise ConfigurationError("duplicate edges are not allowed")
        order = np.lexsort((hi, lo))
        self._edge_lo = lo[order]
        self._edge_hi = hi[order]

        big_u = np.concatenate([lo, hi])
        big_v = np.concatenate([hi, lo])
        deg = np.bincount(big_u, minlength=n)
        if (deg == 0).any():
            raise ConfigurationError("isolated authors are not allowed")
        self.n_authors = n
        self.m_edges = len(lo)
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=self.indptr[1:])
        ordr = np.lexsort((big_v, big_u))
        self.nbr = big_v[ordr]
        self.is_woman = is_woman
        self.woman_count = int(is_woman.sum())
        self._split = None

    # -- queries ---------------------------------------------------------

    def degree(self, u: int) -> int:
        return int(self.indptr[u + 1] - self.indptr[u])

    def neighbors(self, u: int) -> np.ndarray:
        return self.nbr[self.indptr[u]:self.indptr[u + 1]]

    def gender(self, u: int) -> Gender:
        return Gender.WOMAN if self.is_woman[u] else Gender.MAN

    def edges(self):
        """Edges as (lo, hi) pairs in lexicographic order."""
        return list(zip(self._edge_lo.tolist(), self._edge_hi.tolist()))

    def woman_fraction(self) -> float:
        return self.woman_count / self.n_authors

    def same_gender_edge_fraction(self) -> float:
        same = self.is_woman[self._edge_lo] == self.is_woman[self._edge_hi]
        return float(same.sum()) / self.m_edges

    def split_neighbors(self, u: int):
        """(women, men) neighbor tuples of u, as plain python ints."""
        if self._split is None:
            self._build_split()
        return self._split[u]

    def _build_split(self) -> None:
        isw = self.is_woman
        split = []
        for u in range(self.n_authors):
            nbrs = self.nbr[self.indptr[u]:self.indptr[u + 1]].tolist()
            split.append((tuple(x for x in nbrs if isw[x]),
                          tuple(x for x in nbrs if not isw[x])))
        self._split = split


class Estimate:
    """An agent's subjective subgraph of the field.

    Holds a node subset of a CoauthorGraph; edges are always the ones the
    true graph induces on that subset. Per-node in-estimate neighborhoods
    (split by gender) are built lazily and maintained incrementally when
    learning swaps nodes, so citation walks stay cheap.
    """

    __slots__ = ("graph", "nodes", "_members", "_adj")

    def __init__(self, graph: CoauthorGraph, nodes) -> None:
        self.graph = graph
        self._members = set(int(x) for x in nodes)
        self.nodes = sorted(self._members)
        self._adj: dict = {}

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, u: int) -> bool:
        return u in self._members

    def woman_count(self) -> int:
        isw = self.graph.is_woman
        return int(sum(1 for u in self.nodes if isw[u]))

    def woman_fraction(self) -> float:
        return self.woman_count() / len(self.nodes)

    def split_neighbors_in(self, u: int):
        """(women, men) neighbors of u restricted to the estimate."""
        entry = self._adj.get(u)
        if entry is None:
            wt, mt = self.graph.split_neighbors(u)
            members = self._members
            entry = ([x for x in wt if x in members],
                     [x for x in mt if x in members])
            self._adj[u] = entry
        return entry

    def induced_edges(self):
        """Edges of the true graph induced on the estimate, lexicographic."""
        members = self._members
        out = []
        for u in self.nodes:
            for v in self.graph.neighbors(u).tolist():
                if v > u and v in members:
                    out.append((u, v))
        return out

    def replace(self, forgotten, learned) -> None:
        """Swap node sets; induced neighborhoods are patched in place."""
        members = self._members
        adj = self._adj
        graph = self.graph
        isw = self.graph.is_woman
        for u in forgotten:
            members.remove(u)
            self.nodes.remove(u)
            adj.pop(u, None)
            side = 0 if isw[u] else 1
            for v in graph.neighbors(u).tolist():
                entry = adj.get(v)
                if entry is not None:
                    entry[side].remove(u)
        for u in learned:
            members.add(u)
            insort(self.nodes, u)
            side = 0 if isw[u] else 1
            for v in graph.neighbors(u).tolist():
                entry = adj.get(v)
                if entry is not None:
                    entry[side].append(u)


# -- synthesis -------------------------------------------------------------


def generate_synthetic(n_authors: int, woman_fraction: float, mean_degree: float,
                       gender_assortativity: float, seed: int,
                       hub_bias: float = 0.3) -> CoauthorGraph:
    """Generate a connected gender-labeled graph.

    Edges come from a degree-heterogeneous attachment process: each new
    node links to existing nodes picked preferentially by degree with
    probability `hub_bias`, uniformly otherwise (1.0 = pure preferential
    attachment with its extreme hubs; 0.0 = uniform attachment). Mixed-gender
    edge pairs are then rewired into same-gender pairs until the same-gender
    edge fraction reaches the target implied by `gender_assortativity`
    (0 = random mixing, 1 = the maximum reachable while staying connected).
    Rewiring preserves every node's degree and rejects swaps that would
    disconnect the graph. Deterministic under a fixed seed.
    """
    n = int(n_authors)
    if n < 2:
        raise ConfigurationError("n_authors must be >= 2")
    if not 0.0 <= woman_fraction <= 1.0:
        raise ConfigurationError("woman_fraction must be in [0, 1]")
    if not 0.0 <= gender_assortativity <= 1.0:
        raise ConfigurationError("gender_assortativity must be in [0, 1]")
    if not 0.0 < mean_degree < n:
        raise ConfigurationError("mean_degree must be positive and below n_authors")
    if not 0.0 <= hub_bias <= 1.0:
        raise ConfigurationError("hub_bias must be in [0, 1]")

    rng = np.random.default_rng(_seed_sequence(seed, 0xC0A0))
    half = mean_degree / 2.0
    m0 = max(2, min(n, int(math.ceil(half)) + 1))

    # attachment phase: seed path, then attachment via an endpoint urn
    # (each edge feeds both endpoints back into the urn)
    edge_u = []
    edge_v = []
    urn = []
    for i in range(1, m0):
        edge_u.append(i - 1)
        edge_v.append(i)
        urn.append(i - 1)
        urn.append(i)
    base = int(half)
    frac = half - base
    for t in range(m0, n):
        mi = base + (1 if rng.random() < frac else 0)
        mi = max(1, min(mi, t))
        targets = set()
        while len(targets) < mi:
            if rng.random() < hub_bias:
                targets.add(urn[int(rng.random() * len(urn))])
            else:
                targets.add(int(rng.random() * t))
        for tgt in sorted(targets):
            edge_u.append(t)
            edge_v.append(tgt)
            urn.append(t)
            urn.append(tgt)

    edge_u = np.asarray(edge_u, dtype=np.int64)
    edge_v = np.asarray(edge_v, dtype=np.int64)

    # assign genders per degree group with largest-remainder quotas so gender
    # carries no degree signal (a lopsided draw would bias walk statistics)
    n_w = int(round(n * woman_fraction))
    deg = np.bincount(np.concatenate([edge_u, edge_v]), minlength=n)
    is_woman = np.zeros(n, dtype=bool)
    groups = [np.where(deg == d)[0] for d in sorted(set(deg.tolist()))]
    take = [min(int(woman_fraction * len(g)), len(g)) for g in groups]
    by_remainder = sorted(range(len(groups)),
                          key=lambda i: (take[i] - woman_fraction * len(groups[i]), i))
    while sum(take) < n_w:
        for i in by_remainder:
            if sum(take) >= n_w:
                break
            if take[i] < len(groups[i]):
                take[i] += 1
    for g, k in zip(groups, take):
        if k > 0:
            sel = rng.permutation(len(g))[:k]
            is_woman[g[sel]] = True
    _rewire_assortative(edge_u, edge_v, is_woman, gender_assortativity, rng, n)
    return CoauthorGraph(n, np.stack([edge_u, edge_v], axis=1), is_woman)


def _rewire_assortative(edge_u, edge_v, is_woman, assort, rng, n) -> None:
    """Degree-preserving double-edge swaps toward same-gender pairs, in place.

    Swaps two mixed edges (w1,m1),(w2,m2) into (w1,w2),(m1,m2); a swap is
    rejected if it duplicates an edge, creates a self-loop, or disconnects
    the graph.
    """
    m = len(edge_u)
    fw = float(is_woman.sum()) / n
    p_random = fw * fw + (1.0 - fw) ** 2
    target = p_random + assort * (1.0 - p_random)

    adj = [set() for _ in range(n)]
    for a, b in zip(edge_u.tolist(), edge_v.tolist()):
        adj[a].add(b)
        adj[b].add(a)

    mixed = [i for i in range(m)
             if is_woman[edge_u[i]] != is_woman[edge_v[i]]]
    same = m - len(mixed)
    fails = 0
    while same / m < target - 1e-12 and len(mixed) >= 2 and fails < 500:
        pi = int(rng.random() * len(mixed))
        pj = int(rng.random() * len(mixed))
        if pi == pj:
            fails += 1
            continue
        i, j = mixed[pi], mixed[pj]
        w1, m1 = int(edge_u[i]), int(edge_v[i])
        if not is_woman[w1]:
            w1, m1 = m1, w1
        w2, m2 = int(edge_u[j]), int(edge_v[j])
        if not is_woman[w2]:
            w2, m2 = m2, w2
        if w1 == w2 or m1 == m2 or w2 in adj[w1] or m2 in adj[m1]:
            fails += 1
            continue
        adj[w1].discard(m1)
        adj[m1].discard(w1)
        adj[w2].discard(m2)
        adj[m2].discard(w2)
        adj[w1].add(w2)
        adj[w2].add(w1)
        adj[m1].add(m2)
        adj[m2].add(m1)
        if not _connected(adj, n):
            adj[w1].discard(w2)
            adj[w2].discard(w1)
            adj[m1].discard(m2)
            adj[m2].discard(m1)
            adj[w1].add(m1)
            adj[m1].add(w1)
            adj[w2].add(m2)
            adj[m2].add(w2)
            fails += 1
            continue
        edge_u[i], edge_v[i] = w1, w2
        edge_u[j], edge_v[j] = m1, m2
        # swap-pop both positions, higher index first
        for p in sorted((pi, pj), reverse=True):
            mixed[p] = mixed[-1]
            mixed.pop()
        same += 2
        fails = 0


def _connected(adj, n) -> bool:
    seen = bytearray(n)
    stack = [0]
    seen[0] = 1
    count = 1
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = 1
                count += 1
                stack.append(v)
    return count == n


# -- ingestion and serialization --------------------------------------------


def load_edge_list(path, gender_path):
    """Read a graph from an edge-list file and a gender file.

    Returns (graph, id_map) where id_map sends original ids to the dense
    compacted ids of the returned graph. Self-loops are dropped, edges are
    symmetrized, and isolated nodes are removed.
    """
    first_seen = {}
    pairs = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            toks = line.split()
            if len(toks) != 2:
                raise IngestionError("%s:%d: expected 'u v', got %r" % (path, lineno, line))
            try:
                a, b = int(toks[0]), int(toks[1])
            except ValueError:
                raise IngestionError("%s:%d: non-integer author id" % (path, lineno)) from None
            if a < 0 or b < 0:
                raise IngestionError("%s:%d: negative author id" % (path, lineno))
            first_seen.setdefault(a, lineno)
            first_seen.setdefault(b, lineno)
            if a == b:
                continue
            pairs.add((min(a, b), max(a, b)))

    genders = {}
    with open(gender_path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            toks = line.split()
            if len(toks) != 2 or toks[1] not in ("W", "M"):
                raise IngestionError("%s:%d: expected 'id {W|M}', got %r"
                                     % (gender_path, lineno, line))
            try:
                a = int(toks[0])
            except ValueError:
                raise IngestionError("%s:%d: non-integer author id" % (gender_path, lineno)) from None
            if a not in first_seen:
                raise IngestionError("%s:%d: unknown author id %d (not in edge list)"
                                     % (gender_path, lineno, a))
            if a in genders:
                raise IngestionError("%s:%d: duplicate gender entry for id %d"
                                     % (gender_path, lineno, a))
            genders[a] = toks[1]

    kept = sorted({a for pair in pairs for a in pair})
    if not kept:
        raise IngestionError("%s: all nodes isolated after self-loop removal" % path)
    for a in kept:
        if a not in genders:
            raise IngestionError("%s:%d: author %d has no gender entry"
                                 % (path, first_seen[a], a))
    id_map = {orig: new for new, orig in enumerate(kept)}
    edges = np.asarray([(id_map[a], id_map[b]) for a, b in sorted(pairs)], dtype=np.int64)
    is_woman = np.asarray([genders[a] == "W" for a in kept], dtype=bool)
    return CoauthorGraph(len(kept), edges, is_woman), id_map


def save_graph(graph: CoauthorGraph, edges_path, genders_path) -> None:
    """Write the two-file serialization, deterministically ordered."""
    with open(edges_path, "w", encoding="utf-8", newline="\n") as fh:
        for u, v in zip(graph._edge_lo.tolist(), graph._edge_hi.tolist()):
            fh.write("%d %d\n" % (u, v))
    with open(genders_path, "w", encoding="utf-8", newline="\n") as fh:
        for u in range(graph.n_authors):
            fh.write("%d %s\n" % (u, "W" if graph.is_woman[u] else "M"))


def gender_fraction(graph: CoauthorGraph, gender: Gender) -> float:
    count = graph.woman_count if gender is Gender.WOMAN else graph.n_authors - graph.woman_count
    return count / graph.n_authors
