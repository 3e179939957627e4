"""The two biased walk kernels: estimate-building diffusion and citation lists.

A step prefers women with weight `bias` and men with weight `1 - bias`,
normalized over the current neighborhood; single-gender neighborhoods fall
back to a uniform pick. Estimate walks take Pareto-distributed leaps;
citation walks move one hop at a time over an agent's estimate.
"""

import numpy as np

import citesim as cs
from citesim.graph import CoauthorGraph, Estimate

# step law on a fixed star neighborhood: two women, two men
star = CoauthorGraph(5, [(0, i) for i in range(1, 5)],
                     [False, True, True, False, False])
rng = np.random.default_rng(0)
counts = np.zeros(5)
for _ in range(50_000):
    counts[cs.biased_step(star, 0, 0.6, rng)] += 1
print("Step frequencies from a 2W/2M neighborhood at bias 0.6:")
print("  women: %.3f %.3f  (expected 0.300 each)" % (counts[1] / 5e4, counts[2] / 5e4))
print("  men:   %.3f %.3f  (expected 0.200 each)" % (counts[3] / 5e4, counts[4] / 5e4))

params = cs.DiffusionParams(mu=3.0, d=3, length=500)
pmf = cs.step_size_pmf(params)
print("\nPareto hop counts (mu=3, d=3): P(1)=%.4f P(2)=%.4f P(3)=%.4f"
      % tuple(pmf))

graph = cs.generate_synthetic(2000, 0.32, 2.5, 0.1, seed=2)
print("\nEstimates from 500-step diffusive walks on a 2000-author field:")
for alpha in (0.2, 0.5, 0.8):
    est = cs.init_estimate(graph, cs.AgentParams(alpha, 0.5, 0.05, 0.1),
                           params, np.random.default_rng(3))
    print("  walk bias %.1f -> estimate of %d authors, %.3f women"
          % (alpha, len(est), est.woman_fraction()))

est = cs.init_estimate(graph, cs.AgentParams(0.5, 0.5, 0.05, 0.1),
                       params, np.random.default_rng(4))
print("\nCitation lists (70 authors) sampled from one estimate:")
for beta in (0.2, 0.44, 0.6, 0.9):
    rng = np.random.default_rng(5)
    women = 0
    for _ in range(200):
        lst = cs.citation_walk(est, beta, 70, rng)
        women += sum(1 for x in lst if graph.is_woman[x])
    print("  sampling bias %.2f -> %.3f of citations go to women"
          % (beta, women / (200 * 70)))
