"""How agents learn new authors from a discussion.

The receiver rebuilds the true transition structure A over the distinct
discussed authors, forms the internal estimate
Ahat = (1 - e^-zeta) A (I - e^-zeta A)^-1, keeps authors with an incident
weight above the threshold, and swaps them into its field estimate against
an equal number of nodes absent from the discussion.
"""

import math

import numpy as np

import citesim as cs
from citesim.graph import Estimate, Gender

# a tight pair has a high estimated weight; zeta controls the smear
A = np.array([[0.0, 1.0], [1.0, 0.0]])
for zeta in (0.05, 0.1, 1.0, 50.0):
    ahat = cs.learned_transition_estimate(A, zeta).matrix
    print("zeta %5.2f: pair weight %.4f (diagonal leak %.4f)"
          % (zeta, ahat[0, 1], ahat[0, 0]))

q = math.exp(-0.1)
print("closed form at zeta=0.1: 1/(1+e^-zeta) = %.4f" % (1 / (1 + q)))

graph = cs.generate_synthetic(400, 0.35, 2.5, 0.1, seed=7)
A = cs.true_transition_matrix(graph, list(range(0, 60, 2)))
est = cs.learned_transition_estimate(A, 0.1, authors=list(range(0, 60, 2)))
central = cs.select_central_authors(est, threshold=0.2)
print("\n30 discussed authors -> %d pass the 0.2 centrality threshold" % len(central))

agent = cs.Agent(id=0, gender=Gender.MAN,
                 params=cs.AgentParams(0.5, 0.44, 0.06, 0.1),
                 estimate=Estimate(graph, range(100, 160)))
before = set(agent.estimate.nodes)
rng = np.random.default_rng(8)
report = cs.apply_learning(agent, list(range(0, 60, 2)), graph,
                           threshold=0.2, rng=rng)
print("one learning event: learned %d authors %s" % (report.n_learned,
                                                     report.learned[:6]))
print("forgot the same number: %s" % (report.forgotten[:6],))
print("estimate size unchanged: %s (%d authors)"
      % (len(agent.estimate) == len(before), len(agent.estimate)))
