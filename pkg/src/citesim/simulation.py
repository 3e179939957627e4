"""Yearly simulation loop: meetings, learning, papers, population growth.

Every random draw comes from a stream keyed by (master_seed, domain,
agent id, year, round), so runs are reproducible and adding agents never
perturbs the streams of existing ones.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .agents import (Agent, ParamDistributions, GenderParamDist, sample_params,
                     init_estimate, seed_history, history_overlap,
                     default_param_distributions)
from .errors import ConfigurationError
from .graph import CoauthorGraph, Gender, _seed_sequence
from .learning import apply_learning
from .walks import DiffusionParams, citation_walk

# stream domains
_DOM_POPULATION = 0
_DOM_AGENT_INIT = 1
_DOM_ROUND = 2
_DOM_PAIRING = 3
_DOM_PAPER = 4
_DOM_ADOPTION = 5

OVERLAP_MODES = ("field_fraction", "jaccard", "own_fraction")
PAIRING_MODES = ("random", "round_robin")


@dataclass(frozen=True)
class CdsParams:
    """Parameter overrides given to adopters of a citation diversity statement."""

    beta_mean: float = 0.60
    beta_sd: float = 0.10
    beta_skew: float = 10.0
    gamma_mean: float = 0.01


@dataclass(frozen=True)
class SimConfig:
    years: int = 23
    meetings_per_year: int = 10
    list_length: int = 70
    n_initial_agents: int = 200
    initial_woman_fraction: float = 0.36
    target_final_woman_fraction: float = 0.50
    final_agent_count: int = 256
    diffusion: DiffusionParams = field(default_factory=DiffusionParams)
    dists: ParamDistributions = field(default_factory=default_param_distributions)
    learning_threshold: float = 0.2
    master_seed: int = 12345
    overlap_mode: str = "field_fraction"
    pairing: str = "random"
    cds_adoption_fraction: float = 0.0
    cds_params: CdsParams = field(default_factory=CdsParams)

    def validate(self) -> None:
        if self.years < 0:
            raise ConfigurationError("years must be >= 0")
        if self.meetings_per_year < 0:
            raise ConfigurationError("meetings_per_year must be >= 0")
        if self.list_length < 1:
            raise ConfigurationError("list_length must be >= 1")
        if self.n_initial_agents < 2:
            raise ConfigurationError("n_initial_agents must be >= 2")
        if not 0.0 <= self.initial_woman_fraction <= 1.0:
            raise ConfigurationError("initial_woman_fraction must be in [0, 1]")
        if not 0.0 <= self.target_final_woman_fraction <= 1.0:
            raise ConfigurationError("target_final_woman_fraction must be in [0, 1]")
        if self.final_agent_count < self.n_initial_agents:
            raise ConfigurationError("final_agent_count must be >= n_initial_agents")
        if self.years == 0 and self.final_agent_count != self.n_initial_agents:
            raise ConfigurationError("cannot grow the population in 0 years")
        if self.master_seed < 0:
            raise ConfigurationError("master_seed must be >= 0")
        if self.overlap_mode not in OVERLAP_MODES:
            raise ConfigurationError("overlap_mode must be one of %s" % (OVERLAP_MODES,))
        if self.pairing not in PAIRING_MODES:
            raise ConfigurationError("pairing must be one of %s" % (PAIRING_MODES,))
        if not 0.0 <= self.cds_adoption_fraction <= 1.0:
            raise ConfigurationError("cds_adoption_fraction must be in [0, 1]")
        self.dists.validate()
        # growth adds women only, so the target fraction is implied; allow
        # one agent of rounding slack
        initial_women = round(self.n_initial_agents * self.initial_woman_fraction)
        implied = (initial_women + self.final_agent_count - self.n_initial_agents) \
            / self.final_agent_count
        if abs(implied - self.target_final_woman_fraction) > 1.0 / self.final_agent_count + 1e-9:
            raise ConfigurationError(
                "target_final_woman_fraction %.4f unreachable: women-only growth "
                "implies %.4f" % (self.target_final_woman_fraction, implied))


@dataclass
class YearRecord:
    year: int
    woman_agent_fraction: float
    reference_lists: dict
    learn_counts: dict
    agent_genders: dict
    author_is_woman: np.ndarray


def growth_schedule(config: SimConfig) -> list[int]:
    """New woman agents per year; linear interpolation with integer rounding."""
    total = config.final_agent_count - config.n_initial_agents
    years = config.years
    if years == 0:
        return []
    marks = [round(total * (y + 1) / years) for y in range(years)]
    out = [marks[0]] + [marks[y] - marks[y - 1] for y in range(1, years)]
    return out


def expected_woman_fraction(record: YearRecord) -> float:
    """Woman share of the agent population in that simulated year."""
    return record.woman_agent_fraction


def run_simulation(graph: CoauthorGraph, config: SimConfig,
                   out_dir: str | None = None) -> list[YearRecord]:
    """Run the full yearly loop; optionally stream per-year CSVs to out_dir."""
    records, _ = Simulator(graph, config).run(out_dir=out_dir)
    return records


class Simulator:
    """One seeded simulation over a fixed co-authorship graph."""

    def __init__(self, graph: CoauthorGraph, config: SimConfig) -> None:
        config.validate()
        self.graph = graph
        self.config = config
        self.agents: dict[int, Agent] = {}
        self.ids: list[int] = []
        self._adopters: set[int] = set()

    # -- rng streams ------------------------------------------------------

    def _rng(self, *key):
        return np.random.default_rng(_seed_sequence(self.config.master_seed, *key))

    # -- population -------------------------------------------------------

    def _adopter_dist(self) -> GenderParamDist:
        men = self.config.dists.men
        cds = self.config.cds_params
        return dataclasses.replace(men, beta_mean=cds.beta_mean, beta_sd=cds.beta_sd,
                                   beta_skew=cds.beta_skew, gamma_mean=cds.gamma_mean)

    def _create_agent(self, agent_id: int, gender: Gender) -> Agent:
        rng = self._rng(_DOM_AGENT_INIT, agent_id)
        dists = self.config.dists
        if gender is Gender.MAN and agent_id in self._adopters:
            dists = ParamDistributions(women=dists.women, men=self._adopter_dist())
        params = sample_params(gender, dists, rng)
        estimate = init_estimate(self.graph, params, self.config.diffusion, rng)
        agent = Agent(id=agent_id, gender=gender, params=params, estimate=estimate)
        seed_history(agent, self.config.list_length, rng)
        self.agents[agent_id] = agent
        self.ids.append(agent_id)
        return agent

    def _init_population(self) -> None:
        cfg = self.config
        n0 = cfg.n_initial_agents
        n_women = round(n0 * cfg.initial_woman_fraction)
        perm = self._rng(_DOM_POPULATION).permutation(n0)
        woman_ids = set(int(x) for x in perm[:n_women])
        if cfg.cds_adoption_fraction > 0.0:
            men_ids = [i for i in range(n0) if i not in woman_ids]
            k = round(cfg.cds_adoption_fraction * len(men_ids))
            order = self._rng(_DOM_ADOPTION).permutation(len(men_ids))
            self._adopters = {men_ids[int(j)] for j in order[:k]}
        for agent_id in range(n0):
            gender = Gender.WOMAN if agent_id in woman_ids else Gender.MAN
            self._create_agent(agent_id, gender)

    # -- meetings ---------------------------------------------------------

    def _partners(self, year: int, rnd: int) -> list[int]:
        """Partner id for each agent (by position in self.ids)."""
        ids = self.ids
        n = len(ids)
        if self.config.pairing == "round_robin":
            off = (rnd % (n - 1)) + 1
            return [ids[(pos + off) % n] for pos in range(n)]
        rng = self._rng(_DOM_PAIRING, year, rnd)
        u = rng.random(n)
        out = []
        for pos in range(n):
            r = int(u[pos] * (n - 1))
            out.append(ids[r + 1 if r >= pos else r])
        return out

    def _run_round(self, year: int, rnd: int, learn_counts: dict) -> None:
        cfg = self.config
        agents = self.agents
        partners = self._partners(year, rnd)
        gens: dict[int, object] = {}

        def gen(agent_id):
            g = gens.get(agent_id)
            if g is None:
                g = self._rng(_DOM_ROUND, agent_id, year, rnd)
                gens[agent_id] = g
            return g

        for pos, aid in enumerate(self.ids):
            a = agents[aid]
            b = agents[partners[pos]]
            # gates use pre-meeting histories; both sides see the same overlap
            overlap = history_overlap(a, b, cfg.overlap_mode)
            list_a = citation_walk(a.estimate, a.params.beta, cfg.list_length, gen(a.id))
            list_b = citation_walk(b.estimate, b.params.beta, cfg.list_length, gen(b.id))
            a.record_citations(list_a)
            b.record_citations(list_b)
            if overlap > a.params.gamma:
                rep = apply_learning(a, list_b, self.graph, cfg.learning_threshold,
                                     rng=gen(a.id))
                learn_counts[a.id] += rep.n_learned
            if overlap > b.params.gamma:
                rep = apply_learning(b, list_a, self.graph, cfg.learning_threshold,
                                     rng=gen(b.id))
                learn_counts[b.id] += rep.n_learned

    # -- main loop ---------------------------------------------------------

    def run(self, out_dir: str | None = None):
        cfg = self.config
        self._init_population()
        schedule = growth_schedule(cfg)
        next_id = cfg.n_initial_agents
        records: list[YearRecord] = []
        if out_dir is not None:
            os.makedirs(out_dir, exist_ok=True)

        for year in range(cfg.years):
            woman_frac = self._woman_fraction()
            learn_counts = {aid: 0 for aid in self.ids}
            for rnd in range(cfg.meetings_per_year):
                self._run_round(year, rnd, learn_counts)

            reference_lists = {}
            genders = {}
            for aid in self.ids:
                agent = self.agents[aid]
                rng = self._rng(_DOM_PAPER, aid, year)
                lst = citation_walk(agent.estimate, agent.params.beta,
                                    cfg.list_length, rng)
                agent.record_citations(lst)
                reference_lists[aid] = lst
                genders[aid] = agent.gender
            record = YearRecord(year=year, woman_agent_fraction=woman_frac,
                                reference_lists=reference_lists,
                                learn_counts=learn_counts,
                                agent_genders=genders,
                                author_is_woman=self.graph.is_woman)
            records.append(record)
            if out_dir is not None:
                write_year_csvs(record, self.agents, out_dir)

            for _ in range(schedule[year]):
                self._create_agent(next_id, Gender.WOMAN)
                next_id += 1
        return records, self.agents

    def _woman_fraction(self) -> float:
        women = sum(1 for aid in self.ids if self.agents[aid].gender is Gender.WOMAN)
        return women / len(self.ids)


# -- serialization -------------------------------------------------------------


def _fmt(x: float) -> str:
    return "%.10g" % x


def write_year_csvs(record: YearRecord, agents: dict, out_dir: str) -> None:
    """citations_year_<Y>.csv and population_year_<Y>.csv for one year."""
    isw = record.author_is_woman
    path = os.path.join(out_dir, "citations_year_%d.csv" % record.year)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("agent_id,agent_gender,position,cited_author_id,cited_gender\n")
        for aid in sorted(record.reference_lists):
            tag = record.agent_genders[aid].value
            for pos, author in enumerate(record.reference_lists[aid]):
                fh.write("%d,%s,%d,%d,%s\n"
                         % (aid, tag, pos, author, "W" if isw[author] else "M"))
    path = os.path.join(out_dir, "population_year_%d.csv" % record.year)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("agent_id,agent_gender,alpha,beta,gamma,zeta,estimate_size,learn_count\n")
        for aid in sorted(record.reference_lists):
            a = agents[aid]
            fh.write("%d,%s,%s,%s,%s,%s,%d,%d\n"
                     % (aid, a.gender.value, _fmt(a.params.alpha), _fmt(a.params.beta),
                        _fmt(a.params.gamma), _fmt(a.params.zeta),
                        len(a.estimate), record.learn_counts[aid]))


# -- config JSON ----------------------------------------------------------------

_GENDER_DIST_FIELDS = ("alpha_mean", "alpha_sd", "beta_mean", "beta_sd",
                       "beta_skew", "gamma_mean", "gamma_sd", "zeta_mean")


def sim_config_to_json(config: SimConfig) -> str:
    doc = {
        "years": config.years,
        "meetings_per_year": config.meetings_per_year,
        "list_length": config.list_length,
        "n_initial_agents": config.n_initial_agents,
        "initial_woman_fraction": config.initial_woman_fraction,
        "target_final_woman_fraction": config.target_final_woman_fraction,
        "final_agent_count": config.final_agent_count,
        "diffusion": {"mu": config.diffusion.mu, "d": config.diffusion.d,
                      "length": config.diffusion.length},
        "dists": {
            "women": {f: getattr(config.dists.women, f) for f in _GENDER_DIST_FIELDS},
            "men": {f: getattr(config.dists.men, f) for f in _GENDER_DIST_FIELDS},
        },
        "learning_threshold": config.learning_threshold,
        "master_seed": config.master_seed,
        "overlap_mode": config.overlap_mode,
        "pairing": config.pairing,
        "cds_adoption_fraction": config.cds_adoption_fraction,
        "cds_params": {
            "beta_mean": config.cds_params.beta_mean,
            "beta_sd": config.cds_params.beta_sd,
            "beta_skew": config.cds_params.beta_skew,
            "gamma_mean": config.cds_params.gamma_mean,
        },
    }
    return json.dumps(doc, indent=1, sort_keys=True)


def _take(mapping: dict, key: str, pointer: str, expected=(int, float)):
    if key not in mapping:
        raise ConfigurationError("missing key at %s/%s" % (pointer, key))
    val = mapping.pop(key)
    if expected is str or expected is dict:
        if not isinstance(val, expected):
            raise ConfigurationError("expected %s at %s/%s"
                                     % (expected.__name__, pointer, key))
        return val
    if isinstance(val, bool) or not isinstance(val, expected):
        raise ConfigurationError("expected number at %s/%s" % (pointer, key))
    return val


def _reject_unknown(mapping: dict, pointer: str) -> None:
    if mapping:
        key = sorted(mapping)[0]
        raise ConfigurationError("unknown key at %s/%s" % (pointer, key))


def _gender_dist_from(doc, pointer: str) -> GenderParamDist:
    if not isinstance(doc, dict):
        raise ConfigurationError("expected object at %s" % pointer)
    doc = dict(doc)
    vals = {f: float(_take(doc, f, pointer)) for f in _GENDER_DIST_FIELDS}
    _reject_unknown(doc, pointer)
    return GenderParamDist(**vals)


def sim_config_from_json(text: str) -> SimConfig:
    """Parse and validate a config document; unknown keys are rejected.

    Errors carry a JSON-pointer-style path to the offending key. Missing
    keys fall back to defaults.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError("config is not valid JSON: %s" % exc) from None
    if not isinstance(doc, dict):
        raise ConfigurationError("config root must be an object")
    doc = dict(doc)
    defaults = SimConfig()
    kwargs = {}
    for key, caster in (("years", int), ("meetings_per_year", int), ("list_length", int),
                        ("n_initial_agents", int), ("final_agent_count", int),
                        ("master_seed", int)):
        if key in doc:
            kwargs[key] = caster(_take(doc, key, ""))
    for key in ("initial_woman_fraction", "target_final_woman_fraction",
                "learning_threshold", "cds_adoption_fraction"):
        if key in doc:
            kwargs[key] = float(_take(doc, key, ""))
    for key in ("overlap_mode", "pairing"):
        if key in doc:
            kwargs[key] = _take(doc, key, "", expected=str)
    if "diffusion" in doc:
        sub = doc.pop("diffusion")
        if not isinstance(sub, dict):
            raise ConfigurationError("expected object at /diffusion")
        sub = dict(sub)
        kwargs["diffusion"] = DiffusionParams(
            mu=float(_take(sub, "mu", "/diffusion")),
            d=int(_take(sub, "d", "/diffusion")),
            length=int(_take(sub, "length", "/diffusion")))
        _reject_unknown(sub, "/diffusion")
    if "dists" in doc:
        sub = doc.pop("dists")
        if not isinstance(sub, dict):
            raise ConfigurationError("expected object at /dists")
        sub = dict(sub)
        women = _gender_dist_from(_take(sub, "women", "/dists", expected=dict), "/dists/women")
        men = _gender_dist_from(_take(sub, "men", "/dists", expected=dict), "/dists/men")
        _reject_unknown(sub, "/dists")
        kwargs["dists"] = ParamDistributions(women=women, men=men)
    if "cds_params" in doc:
        sub = doc.pop("cds_params")
        if not isinstance(sub, dict):
            raise ConfigurationError("expected object at /cds_params")
        sub = dict(sub)
        kwargs["cds_params"] = CdsParams(
            beta_mean=float(_take(sub, "beta_mean", "/cds_params")),
            beta_sd=float(_take(sub, "beta_sd", "/cds_params")),
            beta_skew=float(_take(sub, "beta_skew", "/cds_params")),
            gamma_mean=float(_take(sub, "gamma_mean", "/cds_params")))
        _reject_unknown(sub, "/cds_params")
    _reject_unknown(doc, "")
    config = dataclasses.replace(defaults, **kwargs)
    config.validate()
    return config


def config_fingerprint(config: SimConfig) -> str:
    """Stable hash of the full configuration, seed included."""
    return hashlib.sha256(sim_config_to_json(config).encode("utf-8")).hexdigest()
