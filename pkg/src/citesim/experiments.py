"""Scripted experiments: baseline replication, parameter sweeps, CDS scenario.

Each experiment runs seeded replicate simulations (replicate r uses
master_seed + r and its own synthetic graph from graph seed + r, shared
across sweep values so comparisons are paired) and aggregates woman-
overcitation summaries per citer gender.
"""

from __future__ import annotations

import dataclasses
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .graph import CoauthorGraph, Gender, generate_synthetic
from .simulation import (SimConfig, Simulator, sim_config_to_json,
                         config_fingerprint)
from .stats import (one_sample_t_test, ols_trend,
                    per_agent_mean_overcitation, per_year_mean_overcitation,
                    yearly_overcitation)

SWEEP_PARAMETERS = ("beta_mean_men", "gamma_mean_men", "meetings_per_year",
                    "cds_adoption_fraction")


@dataclass(frozen=True)
class GraphSpec:
    """Synthetic network used by an experiment; replicate r uses seed + r."""

    n_authors: int = 2000
    woman_fraction: float = 0.30
    mean_degree: float = 2.5
    gender_assortativity: float = 0.1
    hub_bias: float = 0.3
    seed: int = 1

    def build(self, replicate: int = 0) -> CoauthorGraph:
        return generate_synthetic(self.n_authors, self.woman_fraction,
                                  self.mean_degree, self.gender_assortativity,
                                  seed=self.seed + replicate,
                                  hub_bias=self.hub_bias)


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple
    base: SimConfig = field(default_factory=SimConfig)
    graph: GraphSpec = field(default_factory=GraphSpec)
    replicates: int = 5
    name: str = "sweep"

    def validate(self) -> None:
        if self.parameter not in SWEEP_PARAMETERS:
            raise ConfigurationError("unknown sweep parameter %r (one of %s)"
                                     % (self.parameter, ", ".join(SWEEP_PARAMETERS)))
        if len(self.values) == 0:
            raise ConfigurationError("sweep values must be non-empty")
        if list(self.values) != sorted(self.values):
            raise ConfigurationError("sweep values must be sorted ascending")
        if self.replicates < 1:
            raise ConfigurationError("replicates must be >= 1")
        self.base.validate()


@dataclass(frozen=True)
class ExperimentRow:
    """Per (sweep value, replicate, citer gender) woman-overcitation summary."""

    sweep_value: float
    replicate: int
    citer_gender: str  # "W", "M", or "all"
    mean_overcitation_w: float
    t_stat: float
    p_value: float
    slope: float
    slope_t: float
    slope_p: float
    final_year_mean: float
    fingerprint: str


@dataclass
class ExperimentResult:
    name: str
    rows: list
    configs: dict = field(default_factory=dict)  # fingerprint -> config JSON

    def select(self, citer_gender: str, sweep_value=None) -> list:
        out = [r for r in self.rows if r.citer_gender == citer_gender]
        if sweep_value is not None:
            out = [r for r in out if r.sweep_value == sweep_value]
        return out

    def replicate_means(self, citer_gender: str) -> list:
        """(sweep value, mean over replicates of mean_overcitation_w) pairs."""
        vals = sorted({r.sweep_value for r in self.rows})
        out = []
        for v in vals:
            rows = self.select(citer_gender, v)
            out.append((v, float(np.mean([r.mean_overcitation_w for r in rows]))))
        return out


def _apply_sweep_value(base: SimConfig, parameter: str, value: float) -> SimConfig:
    if parameter == "beta_mean_men":
        dists = dataclasses.replace(
            base.dists, men=dataclasses.replace(base.dists.men, beta_mean=value))
        return dataclasses.replace(base, dists=dists)
    if parameter == "gamma_mean_men":
        dists = dataclasses.replace(
            base.dists, men=dataclasses.replace(base.dists.men, gamma_mean=value))
        return dataclasses.replace(base, dists=dists)
    if parameter == "meetings_per_year":
        return dataclasses.replace(base, meetings_per_year=int(value))
    if parameter == "cds_adoption_fraction":
        return dataclasses.replace(base, cds_adoption_fraction=value)
    raise ConfigurationError("unknown sweep parameter %r" % parameter)


def _run_one(task):
    """One seeded simulation -> summary rows; module-level for process pools."""
    sweep_value, replicate, graph_spec, config = task
    graph = graph_spec.build(replicate)
    records, _ = Simulator(graph, config).run()
    oc = yearly_overcitation(records)
    fp = config_fingerprint(config)
    rows = []
    for gender, tag in ((None, "all"), (Gender.WOMAN, "W"), (Gender.MAN, "M")):
        means = list(per_agent_mean_overcitation(oc, Gender.WOMAN, gender).values())
        test = one_sample_t_test(means, 0.0)
        series = per_year_mean_overcitation(oc, Gender.WOMAN, gender)
        trend = ols_trend(series)
        rows.append(ExperimentRow(
            sweep_value=sweep_value, replicate=replicate, citer_gender=tag,
            mean_overcitation_w=float(np.mean(means)),
            t_stat=test.statistic, p_value=test.p_value,
            slope=trend.estimate, slope_t=trend.statistic, slope_p=trend.p_value,
            final_year_mean=series[-1][1], fingerprint=fp))
    return rows


def _run_tasks(tasks, n_jobs: int = 1) -> list:
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            nested = list(pool.map(_run_one, tasks))
    else:
        nested = [_run_one(t) for t in tasks]
    return [row for rows in nested for row in rows]


def _replicated(base: SimConfig, replicate: int) -> SimConfig:
    return dataclasses.replace(base, master_seed=base.master_seed + replicate)


def run_baseline(base: SimConfig | None = None, replicates: int = 5,
                 graph: GraphSpec | None = None, n_jobs: int = 1) -> ExperimentResult:
    """Replicated runs of one configuration (default: the baseline parameterization)."""
    base = base if base is not None else SimConfig()
    graph = graph if graph is not None else GraphSpec()
    base.validate()
    tasks = []
    configs = {}
    for rep in range(replicates):
        cfg = _replicated(base, rep)
        configs[config_fingerprint(cfg)] = sim_config_to_json(cfg)
        tasks.append((0.0, rep, graph, cfg))
    return ExperimentResult("baseline", _run_tasks(tasks, n_jobs), configs)


def run_sweep(spec: SweepSpec, n_jobs: int = 1) -> ExperimentResult:
    """Run `replicates` seeded simulations per sweep value and aggregate."""
    spec.validate()
    tasks = []
    configs = {}
    for value in spec.values:
        for rep in range(spec.replicates):
            cfg = _replicated(_apply_sweep_value(spec.base, spec.parameter, value), rep)
            configs[config_fingerprint(cfg)] = sim_config_to_json(cfg)
            tasks.append((float(value), rep, spec.graph, cfg))
    return ExperimentResult(spec.name, _run_tasks(tasks, n_jobs), configs)


def zero_crossing(points) -> float | None:
    """Smallest x where the piecewise-linear interpolant of (x, y) reaches 0."""
    points = sorted(points)
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        if y0 >= 0:
            return x0
        if y1 >= 0:
            return x1 - y1 * (x1 - x0) / (y1 - y0)
    if points and points[-1][1] >= 0:
        return points[-1][0]
    return None


@dataclass
class CdsScenarioResult:
    full_adoption: ExperimentResult
    meetings: ExperimentResult
    adoption: ExperimentResult
    min_equitable_fraction: float | None


def cds_full_adoption_config(base: SimConfig) -> SimConfig:
    """All agents draw beta from the CDS skew-normal; men's gamma recentered."""
    cds = base.cds_params
    dists = dataclasses.replace(
        base.dists,
        women=dataclasses.replace(base.dists.women, beta_mean=cds.beta_mean,
                                  beta_sd=cds.beta_sd, beta_skew=cds.beta_skew),
        men=dataclasses.replace(base.dists.men, beta_mean=cds.beta_mean,
                                beta_sd=cds.beta_sd, beta_skew=cds.beta_skew,
                                gamma_mean=cds.gamma_mean))
    return dataclasses.replace(base, dists=dists)


def run_cds_scenario(base: SimConfig | None = None,
                     meetings_variants=(10, 20),
                     adoption_fractions=(0.0, 0.2, 0.4, 0.6, 0.8, 1.0),
                     replicates: int = 5,
                     graph: GraphSpec | None = None,
                     n_jobs: int = 1) -> CdsScenarioResult:
    """Citation-diversity-statement scenario.

    (1) full adoption: every agent's beta comes from the CDS skew-normal and
    men's gamma is recentered; (2) the same configuration at each meeting
    frequency; (3) an adoption sweep where only a fraction of man agents
    receive the CDS parameters. Reports the smallest fraction with
    non-negative mean woman-overcitation by men.
    """
    base = base if base is not None else SimConfig()
    graph = graph if graph is not None else GraphSpec()
    full_base = cds_full_adoption_config(base)

    full = run_baseline(full_base, replicates, graph, n_jobs)
    full.name = "cds_full_adoption"

    # the variant equal to the base meeting count is identical to the
    # full-adoption runs, so reuse those rows instead of recomputing
    others = tuple(v for v in sorted(meetings_variants)
                   if v != full_base.meetings_per_year)
    meet_spec = SweepSpec(parameter="meetings_per_year", values=others,
                          base=full_base, graph=graph, replicates=replicates,
                          name="cds_meetings")
    if others:
        meetings = run_sweep(meet_spec, n_jobs)
    else:
        meetings = ExperimentResult("cds_meetings", [], {})
    if full_base.meetings_per_year in meetings_variants:
        for row in full.rows:
            meetings.rows.append(dataclasses.replace(
                row, sweep_value=float(full_base.meetings_per_year)))
        meetings.configs.update(full.configs)
        meetings.rows.sort(key=lambda r: (r.sweep_value, r.replicate,
                                          r.citer_gender))

    adopt_spec = SweepSpec(parameter="cds_adoption_fraction",
                           values=tuple(sorted(adoption_fractions)),
                           base=base, graph=graph, replicates=replicates,
                           name="cds_adoption")
    adoption = run_sweep(adopt_spec, n_jobs)
    min_frac = zero_crossing(adoption.replicate_means("M"))
    return CdsScenarioResult(full_adoption=full, meetings=meetings,
                             adoption=adoption, min_equitable_fraction=min_frac)


# -- serialization ------------------------------------------------------------


def _fmt(x: float) -> str:
    return "%.10g" % x


def write_summary_csv(result: ExperimentResult, path) -> None:
    rows = sorted(result.rows, key=lambda r: (r.sweep_value, r.replicate,
                                              r.citer_gender))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("sweep_value,replicate,citer_gender,mean_overcitation_w,"
                 "slope,t_stat,p_value\n")
        for r in rows:
            if r.citer_gender == "all":
                continue
            fh.write("%s,%d,%s,%s,%s,%s,%s\n"
                     % (_fmt(r.sweep_value), r.replicate, r.citer_gender,
                        _fmt(r.mean_overcitation_w), _fmt(r.slope),
                        _fmt(r.t_stat), _fmt(r.p_value)))


def write_run_artifacts(result: ExperimentResult, out_dir) -> None:
    """Per-run config documents, keyed by fingerprint, for reproducibility."""
    os.makedirs(out_dir, exist_ok=True)
    for fp, cfg_json in sorted(result.configs.items()):
        with open(os.path.join(out_dir, "config_%s.json" % fp[:16]), "w",
                  encoding="utf-8", newline="\n") as fh:
            fh.write(cfg_json)


def sweep_spec_from_json(text: str) -> SweepSpec:
    """Parse an experiment spec document."""
    from .simulation import sim_config_from_json
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError("experiment spec is not valid JSON: %s" % exc) from None
    if not isinstance(doc, dict):
        raise ConfigurationError("experiment spec root must be an object")
    doc = dict(doc)
    name = doc.pop("name", "sweep")
    parameter = doc.pop("parameter", None)
    values = doc.pop("values", None)
    replicates = doc.pop("replicates", 5)
    base_doc = doc.pop("base", {})
    graph_doc = doc.pop("graph", {})
    if doc:
        raise ConfigurationError("unknown key at /%s" % sorted(doc)[0])
    if parameter is None:
        raise ConfigurationError("missing key at /parameter")
    if not isinstance(values, list):
        raise ConfigurationError("missing or non-list key at /values")
    base = sim_config_from_json(json.dumps(base_doc))
    if not isinstance(graph_doc, dict):
        raise ConfigurationError("expected object at /graph")
    graph_doc = dict(graph_doc)
    graph_kwargs = {}
    for key, caster in (("n_authors", int), ("seed", int)):
        if key in graph_doc:
            graph_kwargs[key] = caster(graph_doc.pop(key))
    for key in ("woman_fraction", "mean_degree", "gender_assortativity", "hub_bias"):
        if key in graph_doc:
            graph_kwargs[key] = float(graph_doc.pop(key))
    if graph_doc:
        raise ConfigurationError("unknown key at /graph/%s" % sorted(graph_doc)[0])
    spec = SweepSpec(parameter=parameter, values=tuple(values), base=base,
                     graph=GraphSpec(**graph_kwargs),
                     replicates=int(replicates), name=str(name))
    spec.validate()
    return spec
