import dataclasses
import filecmp
import json
import os

import numpy as np
import pytest

import citesim as cs
from citesim.errors import ConfigurationError
from citesim.graph import Gender
from citesim.simulation import Simulator, sim_config_from_json, sim_config_to_json


def small_config(**overrides):
    base = dict(years=3, meetings_per_year=4, list_length=30,
                n_initial_agents=16, final_agent_count=20,
                initial_woman_fraction=0.375,
                target_final_woman_fraction=0.5,
                diffusion=cs.DiffusionParams(length=120),
                master_seed=77)
    base.update(overrides)
    return cs.SimConfig(**base)


@pytest.fixture(scope="module")
def small_graph():
    return cs.generate_synthetic(250, 0.32, 2.5, 0.1, seed=21)


# -- growth schedule -------------------------------------------------------------


def test_growth_schedule_defaults_sum():
    sched = cs.growth_schedule(cs.SimConfig())
    assert sum(sched) == 56
    assert len(sched) == 23
    assert set(sched) <= {2, 3}


def test_growth_schedule_no_growth():
    cfg = cs.SimConfig(final_agent_count=200, target_final_woman_fraction=0.36)
    assert cs.growth_schedule(cfg) == [0] * 23


def test_growth_schedule_even_split():
    cfg = cs.SimConfig(years=5, n_initial_agents=200, final_agent_count=210,
                       initial_woman_fraction=0.36,
                       target_final_woman_fraction=(72 + 10) / 210)
    assert cs.growth_schedule(cfg) == [2, 2, 2, 2, 2]


def test_growth_schedule_zero_years():
    cfg = cs.SimConfig(years=0, final_agent_count=200,
                       target_final_woman_fraction=0.36)
    assert cs.growth_schedule(cfg) == []


# -- config validation and JSON -----------------------------------------------------


def test_config_validation_errors():
    with pytest.raises(ConfigurationError):
        cs.SimConfig(final_agent_count=100).validate()
    with pytest.raises(ConfigurationError):
        cs.SimConfig(initial_woman_fraction=1.2).validate()
    with pytest.raises(ConfigurationError):
        cs.SimConfig(years=0).validate()  # cannot reach 256 agents in 0 years
    with pytest.raises(ConfigurationError):
        cs.SimConfig(target_final_woman_fraction=0.8).validate()  # unreachable
    with pytest.raises(ConfigurationError):
        cs.SimConfig(overlap_mode="cosine").validate()
    with pytest.raises(ConfigurationError):
        cs.SimConfig(master_seed=-3).validate()


def test_config_json_round_trip():
    cfg = cs.SimConfig()
    text = sim_config_to_json(cfg)
    back = sim_config_from_json(text)
    assert back == cfg


def test_config_json_rejects_unknown_keys():
    doc = json.loads(sim_config_to_json(cs.SimConfig()))
    doc["bogus"] = 1
    with pytest.raises(ConfigurationError, match="/bogus"):
        sim_config_from_json(json.dumps(doc))
    doc = json.loads(sim_config_to_json(cs.SimConfig()))
    doc["dists"]["women"]["extra_knob"] = 2
    with pytest.raises(ConfigurationError, match="/dists/women/extra_knob"):
        sim_config_from_json(json.dumps(doc))


def test_config_json_missing_keys_use_defaults():
    cfg = sim_config_from_json('{"years": 5, "final_agent_count": 200, '
                               '"target_final_woman_fraction": 0.36}')
    assert cfg.years == 5
    assert cfg.meetings_per_year == 10
    assert cfg.dists == cs.default_param_distributions()


def test_config_json_type_errors_have_pointers():
    with pytest.raises(ConfigurationError, match="/years"):
        sim_config_from_json('{"years": "many"}')
    with pytest.raises(ConfigurationError, match="/diffusion/mu"):
        sim_config_from_json('{"diffusion": {"mu": "x", "d": 3, "length": 5}}')


# -- the simulation loop --------------------------------------------------------------


def test_zero_years_returns_empty(small_graph):
    cfg = small_config(years=0, final_agent_count=16,
                       target_final_woman_fraction=0.375)
    assert cs.run_simulation(small_graph, cfg) == []


def test_run_shapes_and_population(small_graph):
    cfg = small_config()
    records = cs.run_simulation(small_graph, cfg)
    assert len(records) == 3
    assert records[0].woman_agent_fraction == pytest.approx(6 / 16)
    assert len(records[0].reference_lists) == 16
    # growth adds women only: counts per year from the schedule
    sched = cs.growth_schedule(cfg)
    for y, rec in enumerate(records):
        expect_agents = 16 + sum(sched[:y])
        assert len(rec.reference_lists) == expect_agents
        for lst in rec.reference_lists.values():
            assert len(lst) == cfg.list_length
    # men count constant, women non-decreasing
    men = [sum(1 for g in rec.agent_genders.values() if g is Gender.MAN)
           for rec in records]
    women = [sum(1 for g in rec.agent_genders.values() if g is Gender.WOMAN)
             for rec in records]
    assert len(set(men)) == 1
    assert all(a <= b for a, b in zip(women, women[1:]))


def test_expected_woman_fraction(small_graph):
    cfg = small_config()
    records = cs.run_simulation(small_graph, cfg)
    assert cs.expected_woman_fraction(records[0]) == pytest.approx(0.375)
    rec = dataclasses.replace(records[0], woman_agent_fraction=1.0)
    assert cs.expected_woman_fraction(rec) == 1.0


def test_full_growth_reaches_target_population(small_graph):
    cfg = small_config()
    sim = Simulator(small_graph, cfg)
    records, agents = sim.run()
    assert len(agents) == cfg.final_agent_count
    women = sum(1 for a in agents.values() if a.gender is Gender.WOMAN)
    assert women == 6 + (20 - 16)


def test_determinism_records_and_csvs(small_graph, tmp_path):
    cfg = small_config()
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    rec1 = cs.run_simulation(small_graph, cfg, out_dir=str(out1))
    rec2 = cs.run_simulation(small_graph, cfg, out_dir=str(out2))
    for a, b in zip(rec1, rec2):
        assert a.reference_lists == b.reference_lists
        assert a.learn_counts == b.learn_counts
    files = sorted(os.listdir(out1))
    assert files == sorted(os.listdir(out2))
    for name in files:
        assert filecmp.cmp(out1 / name, out2 / name, shallow=False), name


def test_master_seed_changes_output(small_graph):
    rec1 = cs.run_simulation(small_graph, small_config(master_seed=77))
    rec2 = cs.run_simulation(small_graph, small_config(master_seed=78))
    assert rec1[0].reference_lists != rec2[0].reference_lists


def test_history_totals_grow_by_list_length(small_graph):
    cfg = small_config(years=2, final_agent_count=16,
                       target_final_woman_fraction=0.375)
    sim = Simulator(small_graph, cfg)
    records, agents = sim.run()
    for a in agents.values():
        assert int(a.history.sum()) % cfg.list_length == 0
        # at least: seed list + one paper per year
        assert int(a.history.sum()) >= cfg.list_length * (1 + cfg.years)


def test_estimate_sizes_invariant_through_meetings(small_graph):
    cfg = small_config(years=1, final_agent_count=16,
                       target_final_woman_fraction=0.375)
    sim = Simulator(small_graph, cfg)
    sim._init_population()
    sizes = {aid: len(a.estimate) for aid, a in sim.agents.items()}
    counts = {aid: 0 for aid in sim.ids}
    for rnd in range(4):
        sim._run_round(0, rnd, counts)
    assert {aid: len(a.estimate) for aid, a in sim.agents.items()} == sizes


def test_round_robin_pairing(small_graph):
    cfg = small_config(pairing="round_robin")
    sim = Simulator(small_graph, cfg)
    sim._init_population()
    for rnd in range(cfg.meetings_per_year):
        partners = sim._partners(0, rnd)
        for pos, partner in enumerate(partners):
            assert partner != sim.ids[pos]
    records = cs.run_simulation(small_graph, cfg)
    assert len(records) == cfg.years


def test_agent_streams_do_not_depend_on_population(small_graph):
    a = Simulator(small_graph, small_config())
    b = Simulator(small_graph, small_config(n_initial_agents=18,
                                            final_agent_count=22,
                                            initial_woman_fraction=1 / 3,
                                            target_final_woman_fraction=0.5))
    ra = a._rng(2, 5, 1, 3).random(4)
    rb = b._rng(2, 5, 1, 3).random(4)
    assert (ra == rb).all()


def test_citations_csv_layout(small_graph, tmp_path):
    cfg = small_config(years=1, final_agent_count=16,
                       target_final_woman_fraction=0.375)
    cs.run_simulation(small_graph, cfg, out_dir=str(tmp_path))
    lines = (tmp_path / "citations_year_0.csv").read_text().splitlines()
    assert lines[0] == "agent_id,agent_gender,position,cited_author_id,cited_gender"
    assert len(lines) == 1 + 16 * cfg.list_length
    first = lines[1].split(",")
    assert first[1] in ("W", "M")
    assert first[4] in ("W", "M")
    pop_lines = (tmp_path / "population_year_0.csv").read_text().splitlines()
    assert len(pop_lines) == 1 + 16


def test_cds_adoption_assigns_expected_share(small_graph):
    cfg = small_config(cds_adoption_fraction=0.5,
                       n_initial_agents=20, final_agent_count=24,
                       initial_woman_fraction=0.4,
                       target_final_woman_fraction=0.5)
    sim = Simulator(small_graph, cfg)
    sim._init_population()
    men = [a for a in sim.agents.values() if a.gender is Gender.MAN]
    adopters = [a for a in men if a.id in sim._adopters]
    assert len(adopters) == round(0.5 * len(men))
    # adopters draw gamma near the CDS center, far below the default 0.06
    assert np.mean([a.params.gamma for a in adopters]) < 0.03
