"""
Link probabilities in a key-predistribution network
===================================================

Two sensors can talk securely only if their key rings overlap and the radio
channel between them is up. This script compares the exact overlap
probability with its small-ring approximation and checks both against
sampled rings.
"""

import numpy as np

from keygraph import ModelParams, p_s_approx, p_s_exact, sample_key_rings, shared_key_distribution

# exact overlap probability against the K^2/P approximation
print("   K       P      exact    approx  rel.err")
for K, P in [(2, 100), (10, 1000), (20, 10_000), (40, 100_000), (100, 100_000)]:
    exact, approx = p_s_exact(K, P), p_s_approx(K, P)
    print(f"{K:4d} {P:7d}  {exact:.6f}  {approx:.6f}  {abs(approx - exact) / exact:.3f}")

# sample 20000 ring pairs and count shared keys
K, P, pairs = 4, 60, 20_000
rings = sample_key_rings(ModelParams(2 * pairs, K, P, 1.0), seed=11).rings
shared = (rings[0::2, :, None] == rings[1::2, None, :]).sum(axis=(1, 2))

observed = np.bincount(shared, minlength=K + 1) / pairs
expected = shared_key_distribution(K, P)
print(f"\nshared keys between two rings, K={K}, P={P}")
for u, (o, e) in enumerate(zip(observed, expected)):
    print(f"  u={u}: sampled {o:.4f}  exact {e:.4f}")
