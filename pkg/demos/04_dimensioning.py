"""
Dimensioning a deployment
=========================

Given a target network size and a desired margin alpha above the critical
point, solve for the channel probability (or the ring size) that makes the
network k-connected with high probability, then check the regime the
theory assumes.
"""

from keygraph import ModelParams, alpha_from_params, p_e_exact, p_required, validate_regime
from keygraph.errors import InfeasibleError
from keygraph.scaling import K_required

n, k, P = 10_000, 3, 100_000

for K in (20, 40, 80):
    try:
        p = p_required(n, k, alpha=2.0, K=K, P=P)
    except InfeasibleError as err:
        print(f"K={K}: infeasible, needs p={err.required_p:.3f}")
        continue
    prm = ModelParams(n, K, P, p)
    back = alpha_from_params(prm, k).alpha
    print(f"K={K}: p={p:.4f} p_e={p_e_exact(prm):.6f} alpha back={back:.6f}")
    for check in validate_regime(prm, k).failed():
        print(f"    regime warning: {check.name} (value {check.value:.4g})")

# the other direction: fix the radio, find the smallest ring
K = K_required(n, k, alpha=2.0, p=0.3, P=P)
print(f"with p=0.3 the smallest ring is K={K}")
