import json

import numpy as np
import pytest

import citesim as cs
from citesim.errors import ConfigurationError
from citesim.experiments import (GraphSpec, SweepSpec, _apply_sweep_value,
                                 _run_one, run_baseline, run_sweep,
                                 run_cds_scenario, sweep_spec_from_json,
                                 write_summary_csv, zero_crossing)


def tiny_base(**overrides):
    base = dict(years=3, meetings_per_year=3, list_length=20,
                n_initial_agents=12, final_agent_count=15,
                initial_woman_fraction=1 / 3,
                target_final_woman_fraction=(4 + 3) / 15,
                diffusion=cs.DiffusionParams(length=80),
                master_seed=5)
    base.update(overrides)
    return cs.SimConfig(**base)


TINY_GRAPH = GraphSpec(n_authors=200, woman_fraction=0.35, mean_degree=2.5,
                       gender_assortativity=0.1, seed=3)


def test_sweep_spec_validation():
    with pytest.raises(ConfigurationError):
        SweepSpec(parameter="nope", values=(1,), base=tiny_base()).validate()
    with pytest.raises(ConfigurationError):
        SweepSpec(parameter="beta_mean_men", values=(), base=tiny_base()).validate()
    with pytest.raises(ConfigurationError):
        SweepSpec(parameter="beta_mean_men", values=(0.7, 0.5),
                  base=tiny_base()).validate()
    with pytest.raises(ConfigurationError):
        SweepSpec(parameter="beta_mean_men", values=(0.5,), replicates=0,
                  base=tiny_base()).validate()


def test_apply_sweep_value_targets_the_right_knob():
    base = tiny_base()
    c = _apply_sweep_value(base, "beta_mean_men", 0.71)
    assert c.dists.men.beta_mean == 0.71
    assert c.dists.women == base.dists.women
    c = _apply_sweep_value(base, "gamma_mean_men", 0.013)
    assert c.dists.men.gamma_mean == 0.013
    c = _apply_sweep_value(base, "meetings_per_year", 20)
    assert c.meetings_per_year == 20
    c = _apply_sweep_value(base, "cds_adoption_fraction", 0.4)
    assert c.cds_adoption_fraction == 0.4


def test_run_baseline_shapes():
    res = run_baseline(tiny_base(), replicates=2, graph=TINY_GRAPH)
    assert len(res.rows) == 2 * 3  # (all, W, M) per replicate
    tags = {r.citer_gender for r in res.rows}
    assert tags == {"all", "W", "M"}
    assert len(res.configs) == 2


def test_rows_reproducible_from_their_config():
    res = run_baseline(tiny_base(), replicates=2, graph=TINY_GRAPH)
    row = res.select("M")[1]
    cfg = cs.sim_config_from_json(res.configs[row.fingerprint])
    redo = _run_one((row.sweep_value, row.replicate, TINY_GRAPH, cfg))
    redone = [r for r in redo if r.citer_gender == "M"][0]
    assert redone == row


def test_run_sweep_row_counts_and_order():
    spec = SweepSpec(parameter="beta_mean_men", values=(0.44, 0.6, 0.8),
                     base=tiny_base(), graph=TINY_GRAPH, replicates=2,
                     name="t")
    res = run_sweep(spec)
    assert len(res.rows) == 3 * 2 * 3
    means = res.replicate_means("M")
    assert [v for v, _ in means] == [0.44, 0.6, 0.8]


def test_run_sweep_jobs_match_serial():
    spec = SweepSpec(parameter="beta_mean_men", values=(0.44, 0.7),
                     base=tiny_base(), graph=TINY_GRAPH, replicates=2,
                     name="t")
    serial = run_sweep(spec, n_jobs=1)
    parallel = run_sweep(spec, n_jobs=2)
    assert serial.rows == parallel.rows


def test_summary_csv_excludes_all_rows(tmp_path):
    spec = SweepSpec(parameter="beta_mean_men", values=(0.44, 0.7),
                     base=tiny_base(), graph=TINY_GRAPH, replicates=2,
                     name="t")
    res = run_sweep(spec)
    path = tmp_path / "summary.csv"
    write_summary_csv(res, path)
    lines = path.read_text().splitlines()
    assert lines[0] == ("sweep_value,replicate,citer_gender,"
                        "mean_overcitation_w,slope,t_stat,p_value")
    assert len(lines) == 1 + 2 * 2 * 2


def test_zero_crossing():
    assert zero_crossing([(0.4, -0.2), (0.6, -0.1), (0.8, 0.1)]) == pytest.approx(0.7)
    assert zero_crossing([(0.4, 0.05), (0.8, 0.2)]) == 0.4
    assert zero_crossing([(0.4, -0.2), (0.8, -0.1)]) is None
    assert zero_crossing([(0.0, -1.0), (1.0, 1.0)]) == pytest.approx(0.5)


def test_cds_full_adoption_config():
    base = tiny_base()
    cfg = cs.cds_full_adoption_config(base)
    for dist in (cfg.dists.women, cfg.dists.men):
        assert dist.beta_mean == base.cds_params.beta_mean
        assert dist.beta_skew == base.cds_params.beta_skew
    assert cfg.dists.men.gamma_mean == base.cds_params.gamma_mean
    assert cfg.dists.women.gamma_mean == base.dists.women.gamma_mean


def test_run_cds_scenario_shapes():
    res = run_cds_scenario(tiny_base(), meetings_variants=(3, 5),
                           adoption_fractions=(0.0, 1.0), replicates=1,
                           graph=TINY_GRAPH)
    assert {r.sweep_value for r in res.meetings.rows} == {3.0, 5.0}
    assert {r.sweep_value for r in res.adoption.rows} == {0.0, 1.0}
    assert len(res.full_adoption.rows) == 3
    assert res.min_equitable_fraction is None or 0 <= res.min_equitable_fraction <= 1


def test_sweep_spec_from_json():
    doc = {"name": "x", "parameter": "gamma_mean_men", "values": [0.01, 0.02],
           "replicates": 2,
           "base": {"years": 3, "final_agent_count": 200,
                    "target_final_woman_fraction": 0.36},
           "graph": {"n_authors": 300, "seed": 4}}
    spec = sweep_spec_from_json(json.dumps(doc))
    assert spec.parameter == "gamma_mean_men"
    assert spec.values == (0.01, 0.02)
    assert spec.graph.n_authors == 300
    assert spec.base.years == 3
    with pytest.raises(ConfigurationError, match="/bogus"):
        sweep_spec_from_json(json.dumps({**doc, "bogus": 1}))
    with pytest.raises(ConfigurationError, match="/graph/hmm"):
        sweep_spec_from_json(json.dumps({**doc, "graph": {"hmm": 1}}))
    with pytest.raises(ConfigurationError, match="/parameter"):
        sweep_spec_from_json(json.dumps({"values": [1], "base": {}}))


def test_bundled_specs_parse():
    import importlib.resources as ir
    for name in ("beta_sweep.json", "gamma_sweep.json"):
        text = ir.files("citesim.data").joinpath(name).read_text("utf-8")
        spec = sweep_spec_from_json(text)
        assert len(spec.values) == 10
        assert spec.replicates == 5
