import math
from fractions import Fraction
from itertools import combinations

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from keygraph.errors import InvalidArgumentError
from keygraph.graph import complete_graph, empty_graph
from keygraph.model import (KeyRingAssignment, ModelParams, _partial_fisher_yates,
                            degree_pmf_exact, induce_random_key_graph, key_graph_pairwise,
                            layer_seeds, p_e_exact, p_s_approx, p_s_exact,
                            sample_coupled_er_pair, sample_er_graph, sample_key_rings,
                            sample_onoff_graph, shared_key_distribution)
from keygraph.rng import derive_seed, generator
from keygraph.validation import enumerate_p_s


def exact_p_s(K, P):
    """Independent oracle: rational arithmetic, high-precision for big pools."""
    if P < 2 * K:
        return 1.0
    with mpmath.workdps(60):
        return float(1 - mpmath.binomial(P - K, K) / mpmath.binomial(P, K))


class TestModelParams:
    @pytest.mark.parametrize("kwargs", [
        dict(n=0, K=1, P=1, p=0.5),
        dict(n=5, K=0, P=5, p=0.5),
        dict(n=5, K=6, P=5, p=0.5),
        dict(n=5, K=2, P=5, p=1.5),
        dict(n=5, K=2, P=5, p=-0.1),
        dict(n=5, K=2.5, P=5, p=0.5),
    ])
    def test_invariants(self, kwargs):
        with pytest.raises(InvalidArgumentError):
            ModelParams(**kwargs)


class TestKeyRings:
    def test_full_pool(self):
        rings = sample_key_rings(ModelParams(4, 5, 5, 1.0), 1)
        assert all(rings.ring(i) == set(range(5)) for i in range(4))

    def test_ring_shape_and_range(self):
        rings = sample_key_rings(ModelParams(200, 7, 30, 1.0), 3)
        assert rings.rings.shape == (200, 7)
        assert all(len(rings.ring(i)) == 7 for i in range(200))
        assert rings.rings.max() < 30

    def test_deterministic(self):
        prm = ModelParams(50, 4, 100, 1.0)
        assert sample_key_rings(prm, 9) == sample_key_rings(prm, 9)
        assert sample_key_rings(prm, 9) != sample_key_rings(prm, 10)

    def test_key_frequency(self):
        # each key appears in a ring with probability K/P = 0.4
        rings = sample_key_rings(ModelParams(100_000, 2, 5, 1.0), 11)
        freq = np.bincount(rings.rings.ravel(), minlength=5) / 100_000
        assert np.all(np.abs(freq - 0.4) <= 0.01)

    @pytest.mark.parametrize("K, P", [(2, 6), (3, 7), (4, 6)])
    def test_subsets_uniform(self, K, P):
        # (2, 6) goes through rejection, the others through row permutation
        rings = sample_key_rings(ModelParams(30_000, K, P, 1.0), 5)
        index = {c: i for i, c in enumerate(combinations(range(P), K))}
        counts = np.bincount([index[tuple(r)] for r in rings.rings.tolist()], minlength=len(index))
        assert stats.chisquare(counts).pvalue > 0.001

    def test_partial_fisher_yates_uniform(self):
        rng = generator(4)
        draws = [tuple(sorted(_partial_fisher_yates(rng, 3, 6))) for _ in range(20_000)]
        assert all(len(set(d)) == 3 and max(d) < 6 for d in draws)
        index = {c: i for i, c in enumerate(combinations(range(6), 3))}
        counts = np.bincount([index[d] for d in draws], minlength=20)
        assert stats.chisquare(counts).pvalue > 0.001

    def test_assignment_validation(self):
        with pytest.raises(InvalidArgumentError):
            KeyRingAssignment(np.array([[0, 0]]), 5)
        with pytest.raises(InvalidArgumentError):
            KeyRingAssignment(np.array([[0, 5]]), 5)


class TestKeyGraph:
    def test_identical_rings_complete(self):
        rings = KeyRingAssignment(np.tile([1, 3], (5, 1)), 10)
        assert induce_random_key_graph(rings) == complete_graph(5)

    def test_disjoint_rings_empty(self):
        rings = KeyRingAssignment(np.arange(10).reshape(5, 2), 10)
        assert induce_random_key_graph(rings) == empty_graph(5)

    def test_small_example(self):
        rings = KeyRingAssignment(np.array([[0, 1], [1, 2], [3, 4]]), 5)
        assert induce_random_key_graph(rings).edges().tolist() == [[0, 1]]

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 40), st.integers(1, 6), st.integers(0, 30), st.integers(0, 2**32))
    def test_matches_pairwise(self, n, K, extra, seed):
        rings = sample_key_rings(ModelParams(n, K, K + extra, 1.0), seed)
        assert induce_random_key_graph(rings) == key_graph_pairwise(rings)


class TestErGraph:
    def test_extremes(self):
        assert sample_er_graph(7, 1.0, 1) == complete_graph(7)
        assert sample_er_graph(7, 0.0, 1) == empty_graph(7)

    def test_mean_edge_count(self):
        counts = [sample_er_graph(1000, 0.01, derive_seed(1, t)).m for t in range(200)]
        mean = np.mean(counts)
        se = np.std(counts, ddof=1) / math.sqrt(len(counts))
        assert abs(mean - 4995) <= 3 * se

    def test_deterministic(self):
        assert sample_er_graph(60, 0.3, 8) == sample_er_graph(60, 0.3, 8)


class TestOnOffGraph:
    def test_p_zero_empty(self):
        assert sample_onoff_graph(ModelParams(20, 2, 5, 0.0), 3) == empty_graph(20)

    def test_full_keys_full_channel(self):
        assert sample_onoff_graph(ModelParams(9, 4, 4, 1.0), 3) == complete_graph(9)

    def test_is_intersection_of_layers(self):
        prm = ModelParams(80, 3, 60, 0.4)
        key_seed, channel_seed = layer_seeds(21)
        key_graph = induce_random_key_graph(sample_key_rings(prm, key_seed))
        er = sample_er_graph(prm.n, prm.p, channel_seed)
        assert sample_onoff_graph(prm, 21) == key_graph.intersection(er)

    def test_deterministic(self):
        prm = ModelParams(300, 5, 400, 0.5)
        a, b = sample_onoff_graph(prm, 77), sample_onoff_graph(prm, 77)
        assert a == b and np.array_equal(a.indices, b.indices)

    def test_edge_frequency_matches_p_e(self):
        prm = ModelParams(40, 3, 30, 0.6)
        trials = 3000
        hits = np.zeros(prm.n * prm.n)
        for t in range(trials):
            hits[sample_onoff_graph(prm, derive_seed(2, t)).edge_keys] += 1
        p_e = p_e_exact(prm)
        se = math.sqrt(p_e * (1 - p_e) / trials)
        for i, j in [(0, 1), (5, 17), (38, 39)]:
            assert abs(hits[i * prm.n + j] / trials - p_e) <= 3 * se
        # averaged over all pairs the standard error is far smaller
        pairs = prm.n * (prm.n - 1) // 2
        assert abs(hits.sum() / trials / pairs - p_e) <= 3 * se


class TestCoupledPair:
    def test_equal_probabilities(self):
        low, high = sample_coupled_er_pair(30, 0.3, 0.3, 4)
        assert low == high

    def test_zero_low(self):
        low, high = sample_coupled_er_pair(30, 0.0, 0.3, 4)
        assert low == empty_graph(30) and high.m > 0

    def test_order_enforced(self):
        with pytest.raises(InvalidArgumentError):
            sample_coupled_er_pair(10, 0.5, 0.3, 1)
        with pytest.raises(InvalidArgumentError):
            sample_coupled_er_pair(10, 0.0, 0.0, 1)

    def test_containment_and_marginals(self):
        n, trials = 60, 300
        low_m, high_m = [], []
        for t in range(trials):
            low, high = sample_coupled_er_pair(n, 0.1, 0.25, derive_seed(6, t))
            assert low.is_subgraph_of(high)
            low_m.append(low.m)
            high_m.append(high.m)
        pairs = n * (n - 1) / 2
        for counts, p in ((low_m, 0.1), (high_m, 0.25)):
            se = np.std(counts, ddof=1) / math.sqrt(trials)
            assert abs(np.mean(counts) - pairs * p) <= 3 * se


class TestPs:
    def test_small_pool_is_one(self):
        assert p_s_exact(3, 5) == 1.0

    def test_examples(self):
        assert p_s_exact(2, 5) == pytest.approx(0.7, abs=1e-15)
        assert p_s_exact(2, 100) == pytest.approx(394 / 9900, abs=1e-15)

    def test_invalid(self):
        with pytest.raises(InvalidArgumentError):
            p_s_exact(6, 5)
        with pytest.raises(InvalidArgumentError):
            p_s_exact(0, 5)

    @pytest.mark.parametrize("P", range(2, 9))
    def test_matches_enumeration(self, P):
        for K in range(1, P + 1):
            assert p_s_exact(K, P) == pytest.approx(enumerate_p_s(K, P), abs=1e-14)

    @pytest.mark.parametrize("K, P", [
        (2, 1001), (40, 10**5), (100, 10**6), (1000, 10**7), (2, 10**9), (500, 1001),
        (5000, 10**5), (30, 2000),
    ])
    def test_large_pool_precision(self, K, P):
        assert abs(p_s_exact(K, P) - exact_p_s(K, P)) < 1e-12

    def test_threshold_boundary_continuous(self):
        # the rational path and the log path meet at P = 1000 / 1001
        for K in (2, 10, 30):
            assert p_s_exact(K, 1000) == pytest.approx(exact_p_s(K, 1000), abs=1e-14)
            assert p_s_exact(K, 1001) == pytest.approx(exact_p_s(K, 1001), abs=1e-14)

    def test_upper_bound_grid(self):
        for K in range(1, 11):
            for P in np.unique(np.geomspace(2 * K, 10**6, 10).astype(int)):
                assert p_s_exact(K, int(P)) <= K * K / (P - K)

    def test_approx_examples(self):
        assert p_s_approx(2, 100) == 0.04
        assert p_s_approx(1, 1) == 1.0

    def test_approx_error_quadratic(self):
        # grid scan gave max |exact - K^2/P| * P^2 / K^4 = 0.405; frozen with headroom
        for K in range(2, 11):
            for P in (10**3, 3 * 10**3, 10**4, 10**5, 10**6):
                assert abs(p_s_exact(K, P) - p_s_approx(K, P)) <= 0.5 * K**4 / P**2


class TestPe:
    def test_examples(self):
        assert p_e_exact(ModelParams(10, 2, 5, 1.0)) == p_s_exact(2, 5)
        assert p_e_exact(ModelParams(10, 2, 5, 0.0)) == 0.0
        assert p_e_exact(ModelParams(10, 2, 5, 0.5)) == pytest.approx(0.35, abs=1e-15)


class TestSharedKeyDistribution:
    def test_example(self):
        assert np.allclose(shared_key_distribution(2, 5), [0.3, 0.6, 0.1], atol=1e-15)

    @pytest.mark.parametrize("K, P", [(1, 1), (2, 3), (3, 5), (2, 5), (7, 10), (4, 1000),
                                      (3, 1001), (10, 5000), (40, 10**5), (700, 1200),
                                      (8, 10**4), (300, 10**6)])
    def test_sums_to_one_and_complements_p_s(self, K, P):
        dist = shared_key_distribution(K, P)
        assert len(dist) == K + 1
        assert abs(dist.sum() - 1) <= 1e-12
        assert abs(dist[0] - (1 - p_s_exact(K, P))) <= 1e-12

    @pytest.mark.parametrize("K, P", [(3, 1001), (10, 5000), (40, 10**5), (700, 1200), (8, 10**4)])
    def test_matches_hypergeometric(self, K, P):
        expected = stats.hypergeom.pmf(np.arange(K + 1), P, K, K)
        assert np.allclose(shared_key_distribution(K, P), expected, rtol=1e-8, atol=1e-15)

    def test_matches_rational_small(self):
        K, P = 4, 13
        total = math.comb(P, K)
        expected = [float(Fraction(math.comb(K, u) * math.comb(P - K, K - u), total))
                    for u in range(K + 1)]
        assert np.allclose(shared_key_distribution(K, P), expected, atol=1e-15)

    def test_infeasible_entries_zero(self):
        dist = shared_key_distribution(3, 5)
        assert dist[0] == 0.0

    def test_bound(self):
        dist = shared_key_distribution(2, 5)
        assert dist[1] <= 4 / 3
        for K, P in [(2, 5), (3, 20), (4, 100), (8, 10**4), (10, 10**3)]:
            dist = shared_key_distribution(K, P)
            for u in range(1, K + 1):
                assert dist[u] <= (K * K / (P - K)) ** u / math.factorial(u)

    def test_matches_monte_carlo(self):
        K, P, pairs = 3, 20, 20_000
        rings = sample_key_rings(ModelParams(2 * pairs, K, P, 1.0), 12).rings
        both = np.sort(np.concatenate([rings[0::2], rings[1::2]], axis=1), axis=1)
        shared = np.sum(both[:, 1:] == both[:, :-1], axis=1)
        observed = np.bincount(shared, minlength=K + 1)
        expected = shared_key_distribution(K, P) * pairs
        # merge the sparse tail bin
        obs = np.append(observed[:2], observed[2:].sum())
        exp = np.append(expected[:2], expected[2:].sum())
        assert stats.chisquare(obs, exp).pvalue > 0.01


class TestDegreePmf:
    def test_complete(self):
        assert degree_pmf_exact(ModelParams(6, 3, 3, 1.0), 5) == pytest.approx(1.0)

    def test_empty(self):
        assert degree_pmf_exact(ModelParams(6, 2, 10, 0.0), 0) == pytest.approx(1.0)

    def test_isolated_probability(self):
        prm = ModelParams(1000, 5, 5, math.log(1000) / 1000)
        # (1 - ln(1000)/1000)^999 evaluated at 50 digits
        assert degree_pmf_exact(prm, 0) == pytest.approx(9.831070511524845e-4, rel=1e-12)

    def test_range(self):
        with pytest.raises(InvalidArgumentError):
            degree_pmf_exact(ModelParams(6, 2, 10, 0.5), 6)
        with pytest.raises(InvalidArgumentError):
            degree_pmf_exact(ModelParams(6, 2, 10, 0.5), -1)

    def test_sums_to_one(self):
        prm = ModelParams(50, 3, 40, 0.7)
        assert sum(degree_pmf_exact(prm, l) for l in range(50)) == pytest.approx(1.0, abs=1e-12)
