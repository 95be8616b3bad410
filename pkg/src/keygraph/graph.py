"""Undirected simple graphs and connectivity algorithms.

Graphs are stored in compressed sparse row form: ``indptr`` and ``indices``
describe a sorted adjacency list per node. A :class:`Graph` never changes
after construction, so derived structures (adjacency lists, the node-split
flow network) are computed lazily and cached.

Conventions for degenerate inputs:

* a single node is connected and has vertex connectivity 0;
* a disconnected graph has vertex connectivity 0;
* the complete graph on n nodes has vertex connectivity n - 1;
* no graph on n <= k nodes is k-connected.
"""

from __future__ import annotations

import io
import os
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, maximum_flow

from .errors import BudgetExceededError, InvalidArgumentError, ParseError

#: largest graph accepted by :func:`brute_force_vertex_connectivity`
BRUTE_FORCE_MAX_NODES = 12


class Graph:
    """Immutable undirected simple graph on nodes ``0..n-1``.

    Build instances with :meth:`from_edges` (or the small constructors in this
    module) rather than calling ``Graph(...)`` directly.
    """

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        self._n = int(n)
        indptr = np.asarray(indptr, dtype=np.int64)
        indices = np.asarray(indices, dtype=np.int64)
        indptr.flags.writeable = False
        indices.flags.writeable = False
        self._indptr = indptr
        self._indices = indices

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build a graph from an iterable or ``(m, 2)`` array of node pairs.

        Pair orientation does not matter and repeated pairs collapse to one
        edge. Self-loops and out-of-range endpoints raise
        :class:`InvalidArgumentError`.
        """
        n = int(n)
        if n < 1:
            raise InvalidArgumentError(f"graph needs at least one node, got n={n}")
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        if e.size == 0:
            return cls(n, np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64))
        e = e.reshape(-1, 2)
        if e.min() < 0 or e.max() >= n:
            raise InvalidArgumentError(f"edge endpoint outside 0..{n - 1}")
        if np.any(e[:, 0] == e[:, 1]):
            raise InvalidArgumentError("self-loops are not allowed")
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        return cls.from_edge_keys(n, np.unique(lo * n + hi))

    @classmethod
    def from_edge_keys(cls, n: int, keys: np.ndarray) -> "Graph":
        """Build from sorted unique keys ``i * n + j`` with ``i < j``. No validation."""
        keys = np.asarray(keys, dtype=np.int64)
        lo, hi = np.divmod(keys, n)
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.argsort(src * n + dst, kind="stable")
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        g = cls(n, indptr, dst)
        g.__dict__["edge_keys"] = _readonly(keys)
        return g

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        """Number of undirected edges."""
        return len(self._indices) // 2

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    def degrees(self) -> np.ndarray:
        return np.diff(self._indptr)

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbors of ``v``."""
        return self._indices[self._indptr[v]:self._indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    @cached_property
    def edge_keys(self) -> np.ndarray:
        """Sorted keys ``i * n + j`` (``i < j``) identifying each edge once."""
        src = np.repeat(np.arange(self._n, dtype=np.int64), self.degrees())
        mask = src < self._indices
        return _readonly(src[mask] * self._n + self._indices[mask])

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges with the smaller endpoint first, sorted."""
        lo, hi = np.divmod(self.edge_keys, self._n)
        return np.column_stack([lo, hi])

    @cached_property
    def adjacency(self) -> list[list[int]]:
        """Adjacency as plain Python lists, for traversal-heavy code."""
        flat = self._indices.tolist()
        ptr = self._indptr.tolist()
        return [flat[ptr[v]:ptr[v + 1]] for v in range(self._n)]

    def to_csr(self) -> csr_matrix:
        data = np.ones(len(self._indices), dtype=np.int8)
        return csr_matrix((data, self._indices, self._indptr), shape=(self._n, self._n))

    def is_complete(self) -> bool:
        return self.m == self._n * (self._n - 1) // 2

    def intersection(self, other: "Graph") -> "Graph":
        """Graph whose edges are present in both ``self`` and ``other``."""
        if other.n != self._n:
            raise InvalidArgumentError(f"node counts differ: {self._n} vs {other.n}")
        keys = np.intersect1d(self.edge_keys, other.edge_keys, assume_unique=True)
        return Graph.from_edge_keys(self._n, keys)

    def is_subgraph_of(self, other: "Graph") -> bool:
        """True when every edge of ``self`` is an edge of ``other`` (same node set)."""
        if other.n != self._n:
            return False
        return bool(np.all(np.isin(self.edge_keys, other.edge_keys, assume_unique=True)))

    def induced_subgraph(self, nodes) -> "Graph":
        """Subgraph induced by ``nodes``, relabelled ``0..len(nodes)-1`` in sorted order."""
        keep = np.array(sorted(node_set(self, nodes)), dtype=np.int64)
        if len(keep) == 0:
            raise InvalidArgumentError("induced subgraph needs at least one node")
        relabel = np.full(self._n, -1, dtype=np.int64)
        relabel[keep] = np.arange(len(keep))
        e = self.edges()
        a, b = relabel[e[:, 0]], relabel[e[:, 1]]
        mask = (a >= 0) & (b >= 0)
        return Graph.from_edge_keys(len(keep), np.sort(a[mask] * len(keep) + b[mask]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other.n and np.array_equal(self.edge_keys, other.edge_keys)

    def __hash__(self) -> int:
        return hash((self._n, self.edge_keys.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"

    @cached_property
    def _split_network(self) -> csr_matrix:
        # node x -> (in = 2x, out = 2x + 1); in->out and u_out->v_in all have capacity 1
        n = self._n
        src_nodes = np.repeat(np.arange(n, dtype=np.int64), self.degrees())
        rows = np.concatenate([2 * np.arange(n), 2 * src_nodes + 1])
        cols = np.concatenate([2 * np.arange(n) + 1, 2 * self._indices])
        data = np.ones(len(rows), dtype=np.int32)
        net = csr_matrix((data, (rows, cols)), shape=(2 * n, 2 * n))
        net.sort_indices()
        return net


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def node_set(g: Graph, nodes) -> frozenset[int]:
    """Validate an iterable of node indices against ``g`` and return it as a frozenset."""
    out = frozenset(int(v) for v in nodes)
    for v in out:
        if not 0 <= v < g.n:
            raise InvalidArgumentError(f"node {v} outside 0..{g.n - 1}")
    return out


# -- small constructors -------------------------------------------------------

def empty_graph(n: int) -> Graph:
    return Graph.from_edges(n, [])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """Hub 0 joined to nodes ``1..leaves``."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


# -- connectivity -------------------------------------------------------------

def min_degree(g: Graph) -> int:
    """Smallest node degree (0 for a single node)."""
    return int(g.degrees().min())


def is_connected(g: Graph) -> bool:
    if g.n == 1:
        return True
    if g.m < g.n - 1:
        return False
    ncomp, _ = connected_components(g.to_csr(), directed=False)
    return ncomp == 1


def count_disjoint_paths(g: Graph, u: int, v: int) -> int:
    """Maximum number of internally vertex-disjoint ``u``-``v`` paths.

    A direct edge between ``u`` and ``v`` counts as one path.
    """
    u, v = int(u), int(v)
    if u == v:
        raise InvalidArgumentError("endpoints must differ")
    for x in (u, v):
        if not 0 <= x < g.n:
            raise InvalidArgumentError(f"node {x} outside 0..{g.n - 1}")
    return _local_connectivity(g, u, v)


def _local_connectivity(g: Graph, u: int, v: int) -> int:
    return int(maximum_flow(g._split_network, 2 * u + 1, 2 * v).flow_value)


def _separating_pairs(g: Graph, v: int) -> Iterator[tuple[int, int]]:
    """Pairs whose local connectivities have minimum equal to kappa(g).

    ``v`` should be a minimum-degree node of a connected, non-complete graph.
    Any minimum separator either misses ``v`` (then it separates ``v`` from
    some non-neighbor) or contains it (then it separates two non-adjacent
    neighbors of ``v``).
    """
    nbrs = g.neighbors(v)
    is_nbr = np.zeros(g.n, dtype=bool)
    is_nbr[nbrs] = True
    is_nbr[v] = True
    for w in np.flatnonzero(~is_nbr):
        yield v, int(w)
    nb = nbrs.tolist()
    for i, x in enumerate(nb):
        for y in nb[i + 1:]:
            if not g.has_edge(x, y):
                yield x, y


def vertex_connectivity(g: Graph) -> int:
    """Minimum number of nodes whose removal disconnects ``g``."""
    if g.n == 1 or not is_connected(g):
        return 0
    if g.is_complete():
        return g.n - 1
    degrees = g.degrees()
    v = int(np.argmin(degrees))
    best = int(degrees[v])
    for a, b in _separating_pairs(g, v):
        best = min(best, _local_connectivity(g, a, b))
        if best == 1:
            break
    return best


def _has_articulation_point(g: Graph) -> bool:
    """Iterative Tarjan lowpoint search; ``g`` must be connected with n >= 3."""
    adj = g.adjacency
    disc = [-1] * g.n
    low = [0] * g.n
    disc[0] = 0
    clock = 1
    root_children = 0
    stack = [(0, -1, iter(adj[0]))]
    while stack:
        v, parent, it = stack[-1]
        for w in it:
            if disc[w] == -1:
                disc[w] = low[w] = clock
                clock += 1
                stack.append((w, v, iter(adj[w])))
                break
            if w != parent and disc[w] < low[v]:
                low[v] = disc[w]
        else:
            stack.pop()
            if stack:
                u = stack[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
                if u == 0:
                    root_children += 1
                elif low[v] >= disc[u]:
                    return True
    return root_children > 1


def is_k_connected(g: Graph, k: int) -> bool:
    """True iff ``vertex_connectivity(g) >= k``, exiting early where possible."""
    k = int(k)
    if k < 1:
        raise InvalidArgumentError(f"k must be a positive integer, got {k}")
    if g.n <= k or min_degree(g) < k or not is_connected(g):
        return False
    if k == 1 or g.is_complete():
        return True
    if k == 2:
        return not _has_articulation_point(g)
    v = int(np.argmin(g.degrees()))
    return all(_local_connectivity(g, a, b) >= k for a, b in _separating_pairs(g, v))


def survives_removal(g: Graph, removed) -> bool:
    """Whether the nodes left after deleting ``removed`` still form a connected graph."""
    gone = node_set(g, removed)
    if len(gone) >= g.n:
        raise InvalidArgumentError("cannot remove every node")
    alive = [v for v in range(g.n) if v not in gone]
    if len(alive) == 1:
        return True
    adj = g.adjacency
    seen = {alive[0]}
    frontier = [alive[0]]
    while frontier:
        v = frontier.pop()
        for w in adj[v]:
            if w not in seen and w not in gone:
                seen.add(w)
                frontier.append(w)
    return len(seen) == len(alive)


def brute_force_vertex_connectivity(g: Graph) -> int:
    """Vertex connectivity by exhaustive search over removal sets.

    Only for small graphs (``n <= 12``); serves as a test oracle.
    """
    n = g.n
    if n > BRUTE_FORCE_MAX_NODES:
        raise BudgetExceededError(
            f"brute force limited to n <= {BRUTE_FORCE_MAX_NODES}, got n={n}")
    masks = [sum(1 << w for w in nb) for nb in g.adjacency]
    full = (1 << n) - 1
    for size in range(n - 1):
        for removed in combinations(range(n), size):
            alive = full
            for v in removed:
                alive &= ~(1 << v)
            if not _mask_connected(masks, alive):
                return size
    return n - 1


def _mask_connected(masks: list[int], alive: int) -> bool:
    start = alive & -alive
    reached = start
    frontier = start
    while frontier:
        nxt = 0
        while frontier:
            bit = frontier & -frontier
            frontier ^= bit
            nxt |= masks[bit.bit_length() - 1]
        nxt &= alive & ~reached
        reached |= nxt
        frontier = nxt
    return reached == alive


# -- edge-list text format ----------------------------------------------------

def format_edgelist(g: Graph) -> str:
    """Serialize as ``"n m"`` followed by one ``"i j"`` line per edge (``i < j``)."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{i} {j}" for i, j in g.edges().tolist())
    return "\n".join(lines) + "\n"


def write_edgelist(g: Graph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_edgelist(g))


def parse_edgelist(text: str | Iterable[str]) -> Graph:
    """Parse the edge-list format; errors carry the offending line number."""
    lines = io.StringIO(text) if isinstance(text, str) else text
    header = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two integers, got {line!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"expected two integers, got {line!r}", lineno) from None
        if header is None:
            if a < 1 or b < 0:
                raise ParseError(f"header needs n >= 1 and m >= 0, got {line!r}", lineno)
            header = (a, b)
            continue
        n, m = header
        if len(edges) == m:
            raise ParseError(f"more than the declared {m} edges", lineno)
        if not (0 <= a < b < n):
            raise ParseError(f"edge must satisfy 0 <= i < j < {n}, got {line!r}", lineno)
        if (a, b) in seen:
            raise ParseError(f"duplicate edge {a} {b}", lineno)
        seen.add((a, b))
        edges.append((a, b))
    if header is None:
        raise ParseError("missing 'n m' header", 1)
    if len(edges) != header[1]:
        raise ParseError(f"declared {header[1]} edges, found {len(edges)}")
    return Graph.from_edges(header[0], edges)


def read_edgelist(path: str | os.PathLike) -> Graph:
    with open(path, encoding="ascii") as fh:
        return parse_edgelist(fh)
