"""Gender-biased random walk kernels.

Two walks drive the model: a diffusive walk with Pareto-distributed hop
counts that builds an agent's estimate of the field, and a unit-step walk
over that estimate that produces discussion/citation lists. Both bias the
choice of the next author by gender: a neighbor that is a woman is picked
with weight `bias`, a man with weight `1 - bias`, normalized over the
current neighborhood. Single-gender neighborhoods fall back to a uniform
choice regardless of the bias.

All kernels are pure functions of (graph, rng); callers own the random
streams, so walks parallelize across agents.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, StateError
from .graph import CoauthorGraph, Estimate


@dataclass(frozen=True)
class DiffusionParams:
    """Step-size law of the estimate-building walk.

    Hop counts follow a discretized, truncated Pareto: P(s) proportional to
    s^-(mu+1) on {1..d}. `length` is the number of recorded landings.
    """

    mu: float = 3.0
    d: int = 3
    length: int = 500

    def __post_init__(self):
        if self.mu <= 0:
            raise ConfigurationError("mu must be positive")
        if self.d < 1:
            raise ConfigurationError("d must be >= 1")
        if self.length < 1:
            raise ConfigurationError("length must be >= 1")


def step_size_pmf(params: DiffusionParams) -> np.ndarray:
    """Probabilities of step sizes 1..d."""
    s = np.arange(1, params.d + 1, dtype=float)
    w = s ** (-(params.mu + 1.0))
    return w / w.sum()


def sample_step_size(params: DiffusionParams, rng) -> int:
    cdf = np.cumsum(step_size_pmf(params))
    return int(np.searchsorted(cdf, rng.random(), side="right")) + 1


def _pick(women, men, bias, u_gender, u_pick):
    """One biased neighbor choice; single-gender neighborhoods are uniform."""
    nw = len(women)
    nm = len(men)
    if nw == 0:
        return men[int(u_pick * nm)]
    if nm == 0:
        return women[int(u_pick * nw)]
    pw = bias * nw
    if u_gender * (pw + (1.0 - bias) * nm) < pw:
        return women[int(u_pick * nw)]
    return men[int(u_pick * nm)]


def biased_step(graph: CoauthorGraph, current: int, bias: float, rng) -> int:
    """Single biased move from `current` to one of its neighbors."""
    women, men = graph.split_neighbors(current)
    assert women or men, "walk reached an isolated node"
    u = rng.random(2)
    return _pick(women, men, bias, u[0], u[1])


def diffusive_walk(graph: CoauthorGraph, start: int, bias: float,
                   params: DiffusionParams, rng) -> list[int]:
    """Record `params.length` landings of a Pareto-step biased walk.

    Each recorded position is reached by sampling a hop count s and chaining
    s biased unit moves; intermediate nodes are not recorded, and the bias
    applies at every hop.
    """
    pmf = step_size_pmf(params)
    cdf = np.cumsum(pmf).tolist()
    d = params.d
    length = params.length
    # worst case per recorded landing: 1 step-size draw + 2 per hop
    u = rng.random(length * (2 * d + 1)).tolist()
    k = 0
    split = graph.split_neighbors
    out = []
    cur = int(start)
    for _ in range(length):
        x = u[k]
        k += 1
        s = 1
        while s <= d and x > cdf[s - 1]:
            s += 1
        for _hop in range(s):
            women, men = split(cur)
            cur = _pick(women, men, bias, u[k], u[k + 1])
            k += 2
        out.append(cur)
    return out


def citation_walk(estimate: Estimate, bias: float, list_length: int, rng) -> list[int]:
    """Produce an ordered author list by a unit-step biased walk on an estimate.

    The start node is uniform over the estimate. Dead ends (no neighbors
    within the estimate) teleport to a uniform estimate node; the teleport
    is recorded, so the output always has exactly `list_length` entries.
    Revisits are kept (lists count multiplicity).
    """
    nodes = estimate.nodes
    n_est = len(nodes)
    if n_est == 0:
        raise StateError("citation walk requires a non-empty estimate")
    u = rng.random(2 * list_length + 1).tolist()
    cur = nodes[int(u[0] * n_est)]
    k = 1
    adj = estimate._adj
    adj_get = adj.get
    build = estimate.split_neighbors_in
    out = []
    append = out.append
    for _ in range(list_length):
        entry = adj_get(cur)
        if entry is None:
            entry = build(cur)
        women, men = entry
        nw = len(women)
        nm = len(men)
        if nw == 0:
            if nm == 0:
                cur = nodes[int(u[k] * n_est)]
                k += 1
            else:
                cur = men[int(u[k] * nm)]
                k += 1
        elif nm == 0:
            cur = women[int(u[k] * nw)]
            k += 1
        else:
            pw = bias * nw
            if u[k] * (pw + (1.0 - bias) * nm) < pw:
                cur = women[int(u[k + 1] * nw)]
            else:
                cur = men[int(u[k + 1] * nm)]
            k += 2
        append(cur)
    return out
