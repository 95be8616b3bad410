"""
Vertex connectivity three ways
==============================

The library answers "how many nodes must fail before the network splits?"
with a max-flow routine. On small graphs it can be checked against two
slow oracles: trying every removal set, and counting disjoint paths.
"""

from itertools import combinations

from keygraph import (ModelParams, brute_force_vertex_connectivity, count_disjoint_paths,
                      is_k_connected, sample_onoff_graph, survives_removal, vertex_connectivity)
from keygraph.scaling import consensus_tolerance

prm = ModelParams(n=10, K=3, P=12, p=0.8)

for seed in range(6):
    g = sample_onoff_graph(prm, seed)
    kappa = vertex_connectivity(g)
    assert kappa == brute_force_vertex_connectivity(g)

    # Menger: the minimum over non-adjacent pairs of disjoint path counts
    gaps = [count_disjoint_paths(g, u, v) for u, v in combinations(range(g.n), 2)
            if not g.has_edge(u, v)]
    menger = min(gaps) if gaps else g.n - 1

    # removal view for k = 2: no single node failure disconnects the graph
    two = all(survives_removal(g, [v]) for v in range(g.n))
    assert two == is_k_connected(g, 2)

    print(f"seed {seed}: edges={g.m:2d} kappa={kappa} menger={menger} "
          f"2-connected={two} byzantine tolerance f={consensus_tolerance(kappa, g.n)}")
