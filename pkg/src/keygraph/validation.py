"""Built-in property suites run by ``keygraph validate``.

Each check compares an implementation path against an independent oracle or
a known bound and returns a :class:`CheckResult`; nothing here raises on a
failed comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .graph import (brute_force_vertex_connectivity, is_k_connected,
                    survives_removal, vertex_connectivity)
from .model import (ModelParams, p_e_exact, p_s_exact, sample_er_graph,
                    sample_onoff_graph, shared_key_distribution)
from .montecarlo import coupling_experiment, edge_frequency
from .rng import derive_seed


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def enumerate_p_s(K: int, P: int) -> float:
    """Exact key-sharing probability by listing every pair of rings (tiny pools only)."""
    rings = [frozenset(c) for c in combinations(range(P), K)]
    shared = sum(not a.isdisjoint(b) for a in rings for b in rings)
    return shared / len(rings) ** 2


def check_kernels() -> list[CheckResult]:
    results = []
    worst = 0.0
    for P in range(2, 9):
        for K in range(1, P + 1):
            worst = max(worst, abs(p_s_exact(K, P) - enumerate_p_s(K, P)))
    results.append(CheckResult("p_s matches ring enumeration (P <= 8)", worst < 1e-12,
                               f"max abs error {worst:.3g}"))
    bound_fail = [(K, P) for K in range(1, 11) for P in (2 * K, 3 * K, 10 * K, 1000, 10**5)
                  if P >= 2 * K and P > K and p_s_exact(K, P) > K * K / (P - K)]
    results.append(CheckResult("p_s <= K^2/(P-K)", not bound_fail, f"violations {bound_fail}"))
    lemb_fail = []
    for K, P in [(2, 5), (3, 20), (4, 100), (8, 10**4), (10, 50)]:
        dist = shared_key_distribution(K, P)
        for u in range(1, K + 1):
            if dist[u] > (K * K / (P - K)) ** u / math.factorial(u):
                lemb_fail.append((K, P, u))
    results.append(CheckResult("shared-key counts within (K^2/(P-K))^u/u!", not lemb_fail,
                               f"violations {lemb_fail}"))
    return results


def check_oracles(graphs: int = 150, seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(derive_seed(seed, "validate-oracles"))
    kappa_bad = removal_bad = 0
    for t in range(graphs):
        n = int(rng.integers(2, 10))
        if t % 2:
            g = sample_er_graph(n, float(rng.uniform(0.2, 0.9)), derive_seed(seed, "g", t))
        else:
            prm = ModelParams(n, 2, int(rng.integers(4, 12)), float(rng.uniform(0.4, 1.0)))
            g = sample_onoff_graph(prm, derive_seed(seed, "g", t))
        kappa_bad += vertex_connectivity(g) != brute_force_vertex_connectivity(g)
        for k in (1, 2, 3):
            if g.n >= k + 1:
                by_removal = all(survives_removal(g, s) for s in combinations(range(g.n), k - 1))
                removal_bad += is_k_connected(g, k) != by_removal
    return [
        CheckResult("vertex connectivity matches brute force", kappa_bad == 0,
                    f"{kappa_bad} mismatches over {graphs} graphs"),
        CheckResult("k-connectivity matches removal of every (k-1)-set", removal_bad == 0,
                    f"{removal_bad} mismatches"),
    ]


def check_sampling(trials: int = 4000, seed: int = 0) -> list[CheckResult]:
    prm = ModelParams(6, 2, 5, 0.5)
    freq = edge_frequency(prm, (0, 1), trials, derive_seed(seed, "validate-edge"))
    p_e = p_e_exact(prm)
    se = math.sqrt(p_e * (1 - p_e) / trials)
    ok = abs(freq - p_e) <= 3 * se
    return [CheckResult("edge frequency matches p_e", ok,
                        f"empirical {freq:.4f} vs exact {p_e:.4f} (3 se = {3 * se:.4f})")]


def check_coupling(trials: int = 200, seed: int = 0) -> list[CheckResult]:
    rep = coupling_experiment(ModelParams(30, 3, 40, 1.0), 0.4, 0.8, 2, trials,
                              derive_seed(seed, "validate-coupling"))
    ok = rep.containment_violations == 0 and rep.monotonicity_violations == 0
    return [CheckResult("coupled graphs nested and monotone", ok,
                        f"containment {rep.containment_violations}, "
                        f"monotonicity {rep.monotonicity_violations} over {trials} trials")]


def run_all(seed: int = 0) -> list[CheckResult]:
    return (check_kernels() + check_oracles(seed=seed) + check_sampling(seed=seed)
            + check_coupling(seed=seed))
