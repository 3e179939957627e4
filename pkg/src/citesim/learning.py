"""Transition-estimate learning: how agents absorb discussed authors.

After a successful meeting the receiving agent builds the true transition
structure A over the distinct discussed authors, forms the internal
estimate Ahat = (1 - e^-zeta) A (I - e^-zeta A)^-1, keeps authors whose
incident estimated weights exceed a threshold, and swaps them into its
field estimate against an equal number of nodes that are not part of the
current discussion, so estimate sizes never drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StatsError
from .graph import CoauthorGraph
from .agents import Agent


@dataclass(frozen=True)
class TransitionEstimate:
    authors: tuple
    matrix: np.ndarray


@dataclass(frozen=True)
class LearnReport:
    n_learned: int
    learned: tuple = ()
    forgotten: tuple = ()


def _induced_row_stochastic(graph: CoauthorGraph, aut: np.ndarray):
    """(A, mark) for distinct author ids; mark maps global id -> row or -1."""
    k = len(aut)
    indptr, nbr = graph.indptr, graph.nbr
    mark = np.full(graph.n_authors, -1, dtype=np.int64)
    mark[aut] = np.arange(k)
    counts = indptr[aut + 1] - indptr[aut]
    all_nb = np.concatenate([nbr[indptr[a]:indptr[a + 1]] for a in aut])
    loc = mark[all_nb]
    rows = np.repeat(np.arange(k), counts)
    valid = loc >= 0
    A = np.zeros((k, k))
    A[rows[valid], loc[valid]] = 1.0
    deg = A.sum(axis=1)
    dead = deg == 0
    for i in np.where(dead)[0]:
        A[i] = 1.0 / (k - 1)
        A[i, i] = 0.0
    live = ~dead
    A[live] /= deg[live, None]
    return A, mark


def true_transition_matrix(graph: CoauthorGraph, authors) -> np.ndarray:
    """Row-normalized adjacency of the graph induced on `authors`.

    Rows with no induced neighbors become uniform over the other authors
    (or [[1.]] for a single author), so every row is stochastic.
    """
    authors = list(authors)
    k = len(authors)
    if k == 0:
        raise StatsError("need at least one author")
    if len(set(authors)) != k:
        raise StatsError("authors must be distinct")
    if k == 1:
        return np.ones((1, 1))
    A, _ = _induced_row_stochastic(graph, np.asarray(authors, dtype=np.int64))
    return A


def _resolvent(A: np.ndarray, zeta: float) -> np.ndarray:
    """(1 - e^-zeta) A (I - e^-zeta A)^-1 with a residual check at 1e-10."""
    k = A.shape[0]
    q = math.exp(-zeta)
    lhs = -q * A
    lhs.flat[:: k + 1] += 1.0
    X = np.linalg.solve(lhs, A)
    resid = np.abs(lhs @ X - A).max()
    if resid > 1e-10:
        raise StatsError("transition-estimate solve residual %.3g too large" % resid)
    return (1.0 - q) * X


def learned_transition_estimate(A: np.ndarray, zeta: float, authors=None) -> TransitionEstimate:
    """Internal transition estimate for a row-stochastic A and zeta > 0.

    Computed by a direct dense solve of (I - e^-zeta A) X = A; valid because
    the spectral radius of e^-zeta A is below 1.
    """
    A = np.array(A, dtype=float)
    ahat = _resolvent(A, zeta)
    if authors is None:
        authors = tuple(range(A.shape[0]))
    return TransitionEstimate(authors=tuple(authors), matrix=ahat)


def _max_incident_weights(matrix: np.ndarray) -> np.ndarray:
    """Per author: the largest estimated weight on any incident pair (diag excluded)."""
    m = np.maximum(matrix, matrix.T).astype(float, copy=True)
    np.fill_diagonal(m, -np.inf)
    return m.max(axis=1)


def select_central_authors(est: TransitionEstimate, threshold: float = 0.1) -> set:
    """Authors with at least one incident estimated weight above the threshold."""
    if len(est.authors) < 2:
        return set()
    w = _max_incident_weights(est.matrix)
    return {est.authors[i] for i in np.where(w > threshold)[0]}


def apply_learning(agent: Agent, discussed, graph: CoauthorGraph,
                   threshold: float = 0.1, rng=None) -> LearnReport:
    """Swap centrally-discussed new authors into the agent's estimate.

    Candidate authors are those outside the current estimate whose incident
    weight in the transition estimate exceeds the threshold; they are ranked
    by that weight (ties to the smaller id). The same number of estimate
    nodes is forgotten, drawn uniformly (from `rng`) among the nodes absent
    from the current discussion, so the estimate never shrinks or grows.
    Without an rng the draw falls back to a deterministic spread over the
    non-discussed nodes.
    """
    if not discussed:
        raise StatsError("discussed list must be non-empty")
    d_authors = list(dict.fromkeys(discussed))
    estimate = agent.estimate
    if len(d_authors) < 2:
        return LearnReport(0)
    # everything selectable is inside d_authors, so a discussion that brings
    # no new authors can be skipped before any matrix work
    members = estimate._members
    if all(a in members for a in d_authors):
        return LearnReport(0)

    d_arr = np.fromiter(d_authors, np.int64, len(d_authors))
    A, mark = _induced_row_stochastic(graph, d_arr)
    weights = _max_incident_weights(_resolvent(A, agent.params.zeta))
    passing = weights > threshold
    cand = [(-weights[i], d_authors[i]) for i in range(len(d_authors))
            if passing[i] and d_authors[i] not in members]
    if not cand:
        return LearnReport(0)

    # forgettable = estimate nodes absent from the discussion (mark < 0)
    nodes_arr = np.fromiter(estimate.nodes, np.int64, len(estimate.nodes))
    forgettable = nodes_arr[mark[nodes_arr] < 0]
    k = min(len(cand), max(0, len(estimate) - 1), len(forgettable))
    if k == 0:
        return LearnReport(0)

    cand.sort()
    learned = tuple(a for _, a in cand[:k])
    nf = len(forgettable)
    if rng is not None:
        pick = rng.choice(nf, size=k, replace=False)
    else:
        pick = (np.arange(k) * nf) // k
    forgotten = tuple(sorted(forgettable[pick].tolist()))
    estimate.replace(forgotten, learned)
    return LearnReport(n_learned=k, learned=learned, forgotten=forgotten)
