"""Agent state: gendered parameter sampling, estimates, citation histories."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field, asdict

import numpy as np

from .errors import ConfigurationError, StateError
from .graph import CoauthorGraph, Estimate, Gender
from .walks import DiffusionParams, citation_walk, diffusive_walk


@dataclass(frozen=True)
class AgentParams:
    """One agent's homophily knobs.

    alpha: gender tilt of the estimate-building walk.
    beta:  gender tilt of discussion/citation sampling.
    gamma: minimum citation-history overlap required to learn from a partner.
    zeta:  fidelity of the transition-estimate learning rule.
    """

    alpha: float
    beta: float
    gamma: float
    zeta: float


@dataclass(frozen=True)
class GenderParamDist:
    alpha_mean: float
    alpha_sd: float
    beta_mean: float
    beta_sd: float
    beta_skew: float
    gamma_mean: float
    gamma_sd: float
    zeta_mean: float

    def validate(self):
        if min(self.alpha_sd, self.beta_sd, self.gamma_sd) < 0:
            raise ConfigurationError("parameter standard deviations must be >= 0")
        if self.zeta_mean <= 0:
            raise ConfigurationError("zeta must be positive")


@dataclass(frozen=True)
class ParamDistributions:
    women: GenderParamDist
    men: GenderParamDist

    def for_gender(self, gender: Gender) -> GenderParamDist:
        return self.women if gender is Gender.WOMAN else self.men

    def validate(self):
        self.women.validate()
        self.men.validate()


def default_param_distributions() -> ParamDistributions:
    """Baseline gendered parameter distributions."""
    return ParamDistributions(
        women=GenderParamDist(alpha_mean=0.51, alpha_sd=0.01,
                              beta_mean=0.60, beta_sd=0.10, beta_skew=0.0,
                              gamma_mean=0.04, gamma_sd=0.005, zeta_mean=0.1),
        men=GenderParamDist(alpha_mean=0.45, alpha_sd=0.01,
                            beta_mean=0.44, beta_sd=0.10, beta_skew=0.0,
                            gamma_mean=0.06, gamma_sd=0.005, zeta_mean=0.1),
    )


_CLAMP_LO = 0.001
_CLAMP_HI = 0.999


def _skew_normal(loc: float, scale: float, shape: float, rng) -> float:
    """Skew-normal draw via two correlated standard normals.

    Always consumes two normals, so the draw count does not depend on shape.
    """
    z = rng.standard_normal(2)
    delta = shape / math.sqrt(1.0 + shape * shape)
    x = delta * abs(z[0]) + math.sqrt(1.0 - delta * delta) * z[1]
    return loc + scale * x


def sample_params(gender: Gender, dists: ParamDistributions, rng) -> AgentParams:
    """Draw one agent's parameters from its gender's distributions.

    alpha and beta are clamped to [0.001, 0.999], gamma to [0, 1]; beta uses
    a skew-normal when beta_skew is nonzero. zeta is the configured constant.
    """
    d = dists.for_gender(gender)
    alpha = d.alpha_mean + d.alpha_sd * rng.standard_normal()
    beta = _skew_normal(d.beta_mean, d.beta_sd, d.beta_skew, rng)
    gamma = d.gamma_mean + d.gamma_sd * rng.standard_normal()
    return AgentParams(
        alpha=min(max(alpha, _CLAMP_LO), _CLAMP_HI),
        beta=min(max(beta, _CLAMP_LO), _CLAMP_HI),
        gamma=min(max(gamma, 0.0), 1.0),
        zeta=d.zeta_mean,
    )


@dataclass
class Agent:
    """A simulated academic with an estimate of the field and a citation history.

    The history is a multiset of cited/discussed author ids, stored as a
    dense count array indexed by author id (fast frequency lookups for the
    forget rule); `history_keys` tracks the distinct ids for overlap tests.
    """

    id: int
    gender: Gender
    params: AgentParams
    estimate: Estimate
    history: np.ndarray = None
    history_keys: set = field(default_factory=set)

    def __post_init__(self):
        if self.history is None:
            self.history = np.zeros(self.estimate.graph.n_authors, dtype=np.int64)

    def record_citations(self, authors) -> None:
        np.add.at(self.history, authors, 1)
        self.history_keys.update(authors)

    def history_counts(self) -> Counter:
        """History as an explicit {author id: count} multiset."""
        return Counter({int(i): int(c) for i, c in enumerate(self.history) if c})


def init_estimate(graph: CoauthorGraph, params: AgentParams,
                  diffusion: DiffusionParams, rng) -> Estimate:
    """Build an estimate: deduplicated landings of one biased diffusive walk."""
    start = int(rng.random() * graph.n_authors)
    visited = diffusive_walk(graph, start, params.alpha, diffusion, rng)
    return Estimate(graph, visited)


def seed_history(agent: Agent, list_length: int, rng) -> Agent:
    """Initialize a history with one self-emitted citation list."""
    if len(agent.estimate) == 0:
        raise StateError("cannot seed history from an empty estimate")
    agent.record_citations(citation_walk(agent.estimate, agent.params.beta,
                                         list_length, rng))
    return agent


def history_overlap(a: Agent, b: Agent, mode: str = "field_fraction") -> float:
    """Share of distinct authors common to two citation histories.

    "field_fraction" divides the shared-author count by the field size
    (the number of authors in the graph), "jaccard" by the union of the two
    histories, "own_fraction" by the first agent's distinct history
    (asymmetric). Empty histories give 0.
    """
    ka, kb = a.history_keys, b.history_keys
    inter = len(ka & kb)
    if mode == "field_fraction":
        return inter / a.estimate.graph.n_authors
    if mode == "jaccard":
        union = len(ka) + len(kb) - inter
        return inter / union if union else 0.0
    if mode == "own_fraction":
        return inter / len(ka) if ka else 0.0
    raise ConfigurationError("unknown overlap mode %r" % mode)


# -- population snapshots ------------------------------------------------------


def population_to_json(agents) -> str:
    """Serialize agents (params, estimate nodes, history counts) to JSON."""
    blob = []
    for a in sorted(agents, key=lambda x: x.id):
        blob.append({
            "id": a.id,
            "gender": a.gender.value,
            "params": asdict(a.params),
            "estimate_nodes": list(a.estimate.nodes),
            "history": {str(k): v for k, v in sorted(a.history_counts().items())},
        })
    return json.dumps(blob, indent=1, sort_keys=True)


def population_from_json(text: str, graph: CoauthorGraph) -> list[Agent]:
    """Rebuild agents from a snapshot; estimates re-induce edges from `graph`."""
    out = []
    for rec in json.loads(text):
        hist = np.zeros(graph.n_authors, dtype=np.int64)
        for k, v in rec["history"].items():
            hist[int(k)] = int(v)
        agent = Agent(
            id=int(rec["id"]),
            gender=Gender(rec["gender"]),
            params=AgentParams(**rec["params"]),
            estimate=Estimate(graph, rec["estimate_nodes"]),
            history=hist,
            history_keys={int(k) for k in rec["history"]},
        )
        out.append(agent)
    return out
