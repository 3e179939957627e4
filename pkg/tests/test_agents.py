import math

import numpy as np
import pytest

import citesim as cs
from citesim.errors import ConfigurationError, StateError
from citesim.graph import CoauthorGraph, Estimate, Gender


def complete_graph(genders):
    n = len(genders)
    edges = [(a, b) for a in range(n) for b in range(a + 1, n)]
    return CoauthorGraph(n, edges, genders)


def test_sample_params_exact_means_at_zero_sd():
    dists = cs.default_param_distributions()
    zeroed = cs.ParamDistributions(
        women=cs.GenderParamDist(0.51, 0.0, 0.60, 0.0, 0.0, 0.04, 0.0, 0.1),
        men=cs.GenderParamDist(0.45, 0.0, 0.44, 0.0, 0.0, 0.06, 0.0, 0.1))
    rng = np.random.default_rng(0)
    w = cs.sample_params(Gender.WOMAN, zeroed, rng)
    m = cs.sample_params(Gender.MAN, zeroed, rng)
    assert (w.alpha, w.beta, w.gamma, w.zeta) == (0.51, 0.60, 0.04, 0.1)
    assert (m.alpha, m.beta, m.gamma, m.zeta) == (0.45, 0.44, 0.06, 0.1)
    assert dists.women.alpha_mean == 0.51  # defaults carry the same centers


def test_sample_params_alpha_tail_bound():
    # woman alpha ~ N(0.51, 0.01): all of 10^4 draws within 5 sigma
    dists = cs.default_param_distributions()
    rng = np.random.default_rng(1)
    draws = [cs.sample_params(Gender.WOMAN, dists, rng).alpha for _ in range(10_000)]
    assert all(abs(a - 0.51) < 0.05 for a in draws)


def test_sample_params_skew_normal_mean_oracle():
    # skew-normal(loc .6, scale .1, shape 10): mean = .6 + .1 * d * sqrt(2/pi)
    dists = cs.ParamDistributions(
        women=cs.GenderParamDist(0.51, 0.01, 0.60, 0.1, 10.0, 0.04, 0.005, 0.1),
        men=cs.GenderParamDist(0.45, 0.01, 0.60, 0.1, 10.0, 0.06, 0.005, 0.1))
    rng = np.random.default_rng(2)
    draws = [cs.sample_params(Gender.MAN, dists, rng).beta for _ in range(10_000)]
    delta = 10.0 / math.sqrt(101.0)
    want = 0.6 + 0.1 * delta * math.sqrt(2 / math.pi)
    assert np.mean(draws) == pytest.approx(want, abs=0.005)
    assert np.mean(np.asarray(draws) > 0.6) > 0.5


def test_sample_params_clamps():
    wild = cs.ParamDistributions(
        women=cs.GenderParamDist(0.5, 5.0, 0.5, 5.0, 0.0, 0.0, 5.0, 0.1),
        men=cs.GenderParamDist(0.5, 5.0, 0.5, 5.0, 0.0, 0.0, 5.0, 0.1))
    rng = np.random.default_rng(3)
    for _ in range(2000):
        p = cs.sample_params(Gender.WOMAN, wild, rng)
        assert 0.001 <= p.alpha <= 0.999
        assert 0.001 <= p.beta <= 0.999
        assert 0.0 <= p.gamma <= 1.0
        assert p.alpha != 0.0 and p.beta != 1.0


def test_sample_params_gendered_ordering():
    dists = cs.default_param_distributions()
    rng = np.random.default_rng(4)
    w = [cs.sample_params(Gender.WOMAN, dists, rng) for _ in range(1000)]
    m = [cs.sample_params(Gender.MAN, dists, rng) for _ in range(1000)]
    # 3 sigma margins on the mean differences
    for attr, sd, sign in (("alpha", 0.01, 1), ("beta", 0.1, 1), ("gamma", 0.005, -1)):
        dw = np.mean([getattr(p, attr) for p in w])
        dm = np.mean([getattr(p, attr) for p in m])
        margin = 3 * sd * math.sqrt(2 / 1000)
        assert sign * (dw - dm) > margin


def test_dist_validation():
    with pytest.raises(ConfigurationError):
        cs.GenderParamDist(0.5, -0.1, 0.5, 0.1, 0.0, 0.05, 0.005, 0.1).validate()
    with pytest.raises(ConfigurationError):
        cs.GenderParamDist(0.5, 0.1, 0.5, 0.1, 0.0, 0.05, 0.005, 0.0).validate()


# -- estimates -------------------------------------------------------------------


def test_init_estimate_all_women_complete_graph():
    g = complete_graph([True] * 10)
    params = cs.AgentParams(alpha=0.7, beta=0.5, gamma=0.05, zeta=0.1)
    est = cs.init_estimate(g, params, cs.DiffusionParams(length=50), np.random.default_rng(5))
    assert all(g.is_woman[u] for u in est.nodes)
    k = len(est)
    assert len(est.induced_edges()) == k * (k - 1) // 2


def test_init_estimate_alpha_monotone():
    g = cs.generate_synthetic(800, 0.4, 5.0, 0.1, seed=6)
    diff = cs.DiffusionParams()
    lo = cs.init_estimate(g, cs.AgentParams(0.001, 0.5, 0.0, 0.1), diff,
                          np.random.default_rng(7))
    hi = cs.init_estimate(g, cs.AgentParams(0.999, 0.5, 0.0, 0.1), diff,
                          np.random.default_rng(7))
    assert hi.woman_fraction() >= lo.woman_fraction()


def test_init_estimate_dedup_bound():
    g = cs.generate_synthetic(100, 0.4, 4.0, 0.1, seed=8)
    est = cs.init_estimate(g, cs.AgentParams(0.5, 0.5, 0.0, 0.1),
                           cs.DiffusionParams(length=500), np.random.default_rng(9))
    assert len(est) <= 100
    assert len(est.nodes) == len(set(est.nodes))


def test_estimate_closure_property():
    # every estimate edge exists in C, and every C edge between estimate
    # nodes is present (induced subgraph)
    g = cs.generate_synthetic(300, 0.4, 4.0, 0.2, seed=10)
    est = cs.init_estimate(g, cs.AgentParams(0.6, 0.5, 0.0, 0.1),
                           cs.DiffusionParams(), np.random.default_rng(11))
    got = set(est.induced_edges())
    all_edges = set(g.edges())
    assert got <= all_edges
    members = set(est.nodes)
    want = {(u, v) for u, v in all_edges if u in members and v in members}
    assert got == want


# -- histories ---------------------------------------------------------------------


def _agent(graph, nodes, gender=Gender.WOMAN, beta=0.5):
    return cs.Agent(id=0, gender=gender,
                    params=cs.AgentParams(0.5, beta, 0.05, 0.1),
                    estimate=Estimate(graph, nodes))


def test_seed_history_single_author():
    g = CoauthorGraph(2, [(0, 1)], [True, False])
    agent = _agent(g, [0])
    cs.seed_history(agent, 70, np.random.default_rng(0))
    assert agent.history_counts() == {0: 70}


def test_seed_history_total_and_determinism():
    g = cs.generate_synthetic(100, 0.4, 4.0, 0.1, seed=12)
    a = _agent(g, range(0, 100, 2))
    cs.seed_history(a, 70, np.random.default_rng(1))
    assert int(a.history.sum()) == 70
    b = _agent(g, range(0, 100, 2))
    cs.seed_history(b, 70, np.random.default_rng(1))
    assert (a.history == b.history).all()
    empty = _agent(g, [])
    with pytest.raises(StateError):
        cs.seed_history(empty, 70, np.random.default_rng(2))


def _with_history(graph, keys):
    a = _agent(graph, [0])
    a.record_citations(list(keys))
    return a


def test_history_overlap_jaccard():
    g = cs.generate_synthetic(100, 0.4, 4.0, 0.1, seed=13)
    a = _with_history(g, [1, 2, 3])
    b = _with_history(g, [3, 4])
    assert cs.history_overlap(a, b, "jaccard") == pytest.approx(0.25)
    same = _with_history(g, [1, 2, 3])
    assert cs.history_overlap(a, same, "jaccard") == 1.0
    disjoint = _with_history(g, [8, 9])
    assert cs.history_overlap(a, disjoint, "jaccard") == 0.0


def test_history_overlap_other_modes():
    g = cs.generate_synthetic(100, 0.4, 4.0, 0.1, seed=13)
    a = _with_history(g, [1, 2, 3, 4])
    b = _with_history(g, [3, 4, 5])
    assert cs.history_overlap(a, b, "field_fraction") == pytest.approx(2 / 100)
    assert cs.history_overlap(a, b, "own_fraction") == pytest.approx(2 / 4)
    assert cs.history_overlap(b, a, "own_fraction") == pytest.approx(2 / 3)
    with pytest.raises(ConfigurationError):
        cs.history_overlap(a, b, "cosine")


def test_history_overlap_empty_histories():
    g = cs.generate_synthetic(100, 0.4, 4.0, 0.1, seed=13)
    a = _agent(g, [0])
    b = _agent(g, [1])
    assert cs.history_overlap(a, b, "jaccard") == 0.0
    assert cs.history_overlap(a, b, "own_fraction") == 0.0


def test_record_citations_counts_multiplicity():
    g = cs.generate_synthetic(100, 0.4, 4.0, 0.1, seed=13)
    a = _agent(g, [0])
    a.record_citations([5, 5, 7])
    a.record_citations([5])
    assert a.history_counts() == {5: 3, 7: 1}
    assert a.history_keys == {5, 7}


# -- snapshots -----------------------------------------------------------------------


def test_population_json_round_trip():
    g = cs.generate_synthetic(80, 0.4, 4.0, 0.1, seed=14)
    agents = []
    for i in range(3):
        a = cs.Agent(id=i, gender=Gender.WOMAN if i % 2 else Gender.MAN,
                     params=cs.AgentParams(0.5 + i / 100, 0.6, 0.04, 0.1),
                     estimate=Estimate(g, range(i, 40 + i)))
        cs.seed_history(a, 30, np.random.default_rng(i))
        agents.append(a)
    blob = cs.population_to_json(agents)
    back = cs.population_from_json(blob, g)
    assert len(back) == 3
    for orig, restored in zip(agents, back):
        assert restored.id == orig.id
        assert restored.gender == orig.gender
        assert restored.params == orig.params
        assert restored.estimate.nodes == orig.estimate.nodes
        assert (restored.history == orig.history).all()
        assert restored.history_keys == orig.history_keys
        # induced edges rebuilt from the graph
        assert restored.estimate.induced_edges() == orig.estimate.induced_edges()
