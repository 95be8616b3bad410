"""The on/off secure-link graph model and its exact link-probability kernels.

Nodes receive key rings of ``K`` distinct keys drawn uniformly from a pool of
``P`` keys. Two nodes share a *secure link* when their rings intersect and
their wireless channel is on, which happens independently per pair with
probability ``p``. The resulting graph is the edge-intersection of a random
key graph and an Erdős–Rényi graph on the same nodes.

Sampling is deterministic given a 64-bit seed. Channel states are a
counter-based uniform field indexed by the pair key ``i * n + j``, so the
channel layer of :func:`sample_onoff_graph` is exactly the graph that
:func:`sample_er_graph` returns for the derived channel seed, while only the
pairs that share a key ever need to be evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import sparse
from scipy.special import gammaln
from scipy.stats import binom

from .errors import InvalidArgumentError
from .graph import Graph, complete_graph, empty_graph
from .rng import check_seed, derive_seed, generator, uniform_field

#: exact rational arithmetic is used for pools up to this size
EXACT_POOL_LIMIT = 1000

_ER_BLOCK = 4_000_000


@dataclass(frozen=True)
class ModelParams:
    """Node count ``n``, ring size ``K``, pool size ``P`` and channel-on probability ``p``."""

    n: int
    K: int
    P: int
    p: float

    def __post_init__(self):
        for name in ("n", "K", "P"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidArgumentError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        object.__setattr__(self, "p", float(self.p))
        if self.n < 1:
            raise InvalidArgumentError(f"invariant n >= 1 violated: n={self.n}")
        if self.K < 1:
            raise InvalidArgumentError(f"invariant K >= 1 violated: K={self.K}")
        if self.K > self.P:
            raise InvalidArgumentError(f"invariant K <= P violated: K={self.K}, P={self.P}")
        if not 0.0 <= self.p <= 1.0:
            raise InvalidArgumentError(f"invariant 0 <= p <= 1 violated: p={self.p}")

    def with_p(self, p: float) -> "ModelParams":
        return ModelParams(self.n, self.K, self.P, p)


@dataclass(frozen=True, eq=False)
class KeyRingAssignment:
    """Key rings as an ``(n, K)`` integer array, each row sorted and duplicate-free."""

    rings: np.ndarray
    P: int

    def __post_init__(self):
        rings = np.array(self.rings, dtype=np.int64, copy=True)
        if rings.ndim != 2 or rings.shape[1] < 1:
            raise InvalidArgumentError("rings must be a non-empty (n, K) array")
        rings.sort(axis=1)
        if rings.size and (rings.min() < 0 or rings.max() >= self.P):
            raise InvalidArgumentError(f"key identifiers must lie in 0..{self.P - 1}")
        if np.any(rings[:, 1:] == rings[:, :-1]):
            raise InvalidArgumentError("keys within a ring must be distinct")
        rings.flags.writeable = False
        object.__setattr__(self, "rings", rings)

    @property
    def n(self) -> int:
        return self.rings.shape[0]

    @property
    def K(self) -> int:
        return self.rings.shape[1]

    def ring(self, i: int) -> frozenset[int]:
        return frozenset(self.rings[i].tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, KeyRingAssignment):
            return NotImplemented
        return self.P == other.P and np.array_equal(self.rings, other.rings)


# -- samplers -----------------------------------------------------------------

def sample_key_rings(params: ModelParams, seed: int) -> KeyRingAssignment:
    """Draw an independent uniform ``K``-subset of ``0..P-1`` for every node."""
    n, K, P = params.n, params.K, params.P
    rng = generator(seed)
    if K == P:
        return KeyRingAssignment(np.tile(np.arange(P), (n, 1)), P)
    if K * (K - 1) <= P // 2:
        rings = _rings_by_rejection(rng, n, K, P)
    elif n * P <= 20_000_000:
        rings = rng.permuted(np.tile(np.arange(P, dtype=np.int64), (n, 1)), axis=1)[:, :K]
    else:
        rings = np.array([_partial_fisher_yates(rng, K, P) for _ in range(n)], dtype=np.int64)
    return KeyRingAssignment(rings, P)


def _rings_by_rejection(rng: np.random.Generator, n: int, K: int, P: int) -> np.ndarray:
    # iid draws conditioned on distinctness are uniform over K-subsets;
    # the caller keeps the rejection rate at or below about 1/4
    rings = np.sort(rng.integers(0, P, size=(n, K)), axis=1)
    bad = np.flatnonzero(np.any(rings[:, 1:] == rings[:, :-1], axis=1))
    while len(bad):
        redraw = np.sort(rng.integers(0, P, size=(len(bad), K)), axis=1)
        rings[bad] = redraw
        bad = bad[np.any(redraw[:, 1:] == redraw[:, :-1], axis=1)]
    return rings


def _partial_fisher_yates(rng: np.random.Generator, K: int, P: int) -> list[int]:
    """First ``K`` entries of a lazy shuffle of ``0..P-1``; O(K) time and memory."""
    swaps: dict[int, int] = {}
    picks = rng.integers(np.arange(K), P)
    out = []
    for i, j in enumerate(picks.tolist()):
        out.append(swaps.get(j, j))
        swaps[j] = swaps.get(i, i)
    return out


def induce_random_key_graph(rings: KeyRingAssignment) -> Graph:
    """Join two nodes whenever their key rings share at least one key.

    Computed as the sparse product of the node-key incidence matrix with its
    transpose, i.e. a join through the key -> holders index.
    """
    return Graph.from_edge_keys(rings.n, np.sort(_shared_key_pairs(rings)))


def _shared_key_pairs(rings: KeyRingAssignment) -> np.ndarray:
    """Unsorted pair keys ``i * n + j`` (``i < j``) of rings sharing a key."""
    n, K = rings.rings.shape
    if n == 1:
        return np.zeros(0, dtype=np.int64)
    rows = np.repeat(np.arange(n, dtype=np.int64), K)
    incidence = sparse.csr_matrix(
        (np.ones(n * K, dtype=np.int32), (rows, rings.rings.ravel())), shape=(n, rings.P))
    shared = incidence @ incidence.T
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(shared.indptr))
    dst = shared.indices.astype(np.int64)
    upper = dst > src
    return src[upper] * n + dst[upper]


def key_graph_pairwise(rings: KeyRingAssignment) -> Graph:
    """Same graph as :func:`induce_random_key_graph` by direct ring intersection; O(n^2 K)."""
    sets = [rings.ring(i) for i in range(rings.n)]
    edges = [(i, j) for i in range(rings.n) for j in range(i + 1, rings.n)
             if not sets[i].isdisjoint(sets[j])]
    return Graph.from_edges(rings.n, edges)


def channel_on(n: int, p: float, seed: int, edge_keys: np.ndarray) -> np.ndarray:
    """Channel states of the pairs ``edge_keys`` (``i * n + j``) under channel seed ``seed``."""
    if p >= 1.0:
        return np.ones(len(edge_keys), dtype=bool)
    return uniform_field(seed, edge_keys) < p


def sample_er_graph(n: int, p: float, seed: int) -> Graph:
    """Erdős–Rényi graph: every pair present independently with probability ``p``."""
    n = int(n)
    p = float(p)
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise InvalidArgumentError(f"p must lie in [0, 1], got {p}")
    check_seed(seed)
    if p == 0.0 or n == 1:
        return empty_graph(n)
    if p == 1.0:
        return complete_graph(n)
    rows_per_block = max(1, _ER_BLOCK // n)
    cols = np.arange(n, dtype=np.int64)
    kept = []
    for start in range(0, n - 1, rows_per_block):
        i = np.arange(start, min(start + rows_per_block, n - 1), dtype=np.int64)
        keys = (i[:, None] * n + cols[None, :])[cols[None, :] > i[:, None]]
        kept.append(keys[uniform_field(seed, keys) < p])
    return Graph.from_edge_keys(n, np.concatenate(kept))


def layer_seeds(seed: int) -> tuple[int, int]:
    """(key-ring seed, channel seed) used by :func:`sample_onoff_graph`."""
    return derive_seed(seed, "key-layer"), derive_seed(seed, "channel-layer")


def sample_onoff_graph(params: ModelParams, seed: int) -> Graph:
    """Random key graph intersected with an independent Erdős–Rényi channel graph."""
    key_seed, channel_seed = layer_seeds(seed)
    if params.p == 0.0:
        return empty_graph(params.n)
    keys = _shared_key_pairs(sample_key_rings(params, key_seed))
    keys = keys[channel_on(params.n, params.p, channel_seed, keys)]
    return Graph.from_edge_keys(params.n, np.sort(keys))


def sample_coupled_er_pair(n: int, p_low: float, p_high: float, seed: int) -> tuple[Graph, Graph]:
    """Coupled ``(G(n, p_low), G(n, p_high))`` with the first a spanning subgraph of the second.

    The high graph is sampled directly; the low graph keeps each of its edges
    through an independent ``G(n, p_low / p_high)`` filter.
    """
    p_low, p_high = float(p_low), float(p_high)
    if not 0.0 < p_high <= 1.0:
        raise InvalidArgumentError(f"p_high must lie in (0, 1], got {p_high}")
    if not 0.0 <= p_low <= p_high:
        raise InvalidArgumentError(f"need 0 <= p_low <= p_high, got p_low={p_low}, p_high={p_high}")
    high = sample_er_graph(n, p_high, derive_seed(seed, "coupled-high"))
    thin = sample_er_graph(n, p_low / p_high, derive_seed(seed, "coupled-thin"))
    return high.intersection(thin), high


# -- exact probability kernels ------------------------------------------------

def _check_ring_sizes(K: int, P: int) -> tuple[int, int]:
    if isinstance(K, bool) or isinstance(P, bool):
        raise InvalidArgumentError("K and P must be integers")
    K, P = int(K), int(P)
    if K < 1:
        raise InvalidArgumentError(f"invariant K >= 1 violated: K={K}")
    if K > P:
        raise InvalidArgumentError(f"invariant K <= P violated: K={K}, P={P}")
    return K, P


def _log_no_shared_key(K: int, P: int) -> float:
    # C(P-K, K) / C(P, K) = prod_{i<K} (1 - K / (P - i)); valid for P >= 2K
    terms = np.log1p(-K / (P - np.arange(K, dtype=np.float64)))
    return math.fsum(terms.tolist())


def p_s_exact(K: int, P: int) -> float:
    """Probability that two independent uniform ``K``-subsets of a ``P``-pool intersect."""
    K, P = _check_ring_sizes(K, P)
    if P < 2 * K:
        return 1.0
    if P <= EXACT_POOL_LIMIT:
        return float(1 - Fraction(math.comb(P - K, K), math.comb(P, K)))
    return -math.expm1(_log_no_shared_key(K, P))


def p_s_approx(K: int, P: int) -> float:
    """First-order approximation ``min(K^2 / P, 1)``."""
    K, P = _check_ring_sizes(K, P)
    return min(K * K / P, 1.0)


def p_e_exact(params: ModelParams) -> float:
    """Probability that a given pair of nodes shares a secure link."""
    return params.p * p_s_exact(params.K, params.P)


def shared_key_distribution(K: int, P: int) -> np.ndarray:
    """Distribution of the number of keys shared by two rings.

    Entry ``u`` is ``C(K, u) C(P-K, K-u) / C(P, K)`` for ``u = 0..K``.
    """
    K, P = _check_ring_sizes(K, P)
    u = np.arange(K + 1)
    if P <= EXACT_POOL_LIMIT:
        total = math.comb(P, K)
        return np.array([float(Fraction(math.comb(K, i) * math.comb(P - K, K - i), total))
                         for i in range(K + 1)])
    if P >= 2 * K:
        # log pmf(u+1) - log pmf(u) = 2 log(K-u) - log(u+1) - log(P-2K+u+1)
        steps = 2 * np.log(K - u[:-1]) - np.log(u[:-1] + 1) - np.log(P - 2 * K + u[:-1] + 1)
        logs = _log_no_shared_key(K, P) + np.concatenate([[0.0], np.cumsum(steps)])
        return np.exp(logs)
    out = np.zeros(K + 1)
    feasible = u >= 2 * K - P
    uf = u[feasible]
    out[feasible] = np.exp(_log_comb(K, uf) + _log_comb(P - K, K - uf) - _log_comb(P, K))
    return out


def _log_comb(a, b):
    return gammaln(np.asarray(a) + 1.0) - gammaln(np.asarray(b) + 1.0) - gammaln(np.asarray(a) - b + 1.0)


def degree_pmf_exact(params: ModelParams, ell: int) -> float:
    """Probability that a given node has exactly ``ell`` secure links (Binomial(n-1, p_e))."""
    ell = int(ell)
    if not 0 <= ell <= params.n - 1:
        raise InvalidArgumentError(f"ell must lie in 0..{params.n - 1}, got {ell}")
    return float(binom.pmf(ell, params.n - 1, p_e_exact(params)))
