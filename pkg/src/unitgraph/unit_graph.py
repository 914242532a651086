"""Unit graphs G(R) over direct sums of residue rings and their invariants.

Two distinct vertices are adjacent when their sum is a unit. Vertices are
indexed in lexicographic order of their residue tuples, so for ``Z_n`` the
vertex index is the residue itself.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import asdict, dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, maximum_flow

from .errors import DomainError, ResourceError
from .ring_core import RingElement, RingSpec, euler_phi, unit_mask

DEFAULT_VERTEX_BUDGET = 10_000

_ROW_BLOCK = 512


@dataclass(frozen=True, eq=False)
class UnitGraph:
    spec: RingSpec
    edges: np.ndarray  # (E, 2) int64, i < j, lexicographic
    adjacency_matrix: csr_matrix  # symmetric 0/1, int32

    @property
    def num_vertices(self) -> int:
        return self.spec.size

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def vertices(self) -> list[RingElement]:
        return list(self.spec.elements())

    @cached_property
    def adjacency(self) -> list[list[int]]:
        """Sorted neighbour lists, one per vertex."""
        a = self.adjacency_matrix
        return [a.indices[a.indptr[v] : a.indptr[v + 1]].tolist() for v in range(a.shape[0])]

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.adjacency_matrix.indptr)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency_matrix[i, j])


def build_unit_graph(spec: RingSpec, vertex_budget: int = DEFAULT_VERTEX_BUDGET) -> UnitGraph:
    size = spec.size
    if size > vertex_budget:
        raise ResourceError(f"{spec} has {size} vertices, budget is {vertex_budget}")
    table = spec.residue_table()
    masks = [unit_mask(m) for m in spec.moduli]
    blocks = []
    for start in range(0, size, _ROW_BLOCK):
        rows = table[start : start + _ROW_BLOCK]
        block = np.ones((len(rows), size), dtype=bool)
        for c, m in enumerate(spec.moduli):
            block &= masks[c][(rows[:, c, None] + table[None, :, c]) % m]
        block[np.arange(len(rows)), np.arange(start, start + len(rows))] = False
        blocks.append(block)
    dense = np.vstack(blocks)
    edges = np.argwhere(np.triu(dense, 1)).astype(np.int64).reshape(-1, 2)
    adj = csr_matrix(dense.astype(np.int32))
    adj.sort_indices()
    return UnitGraph(spec=spec, edges=edges, adjacency_matrix=adj)


def edge_count(g: UnitGraph) -> int:
    return g.num_edges


def expected_edge_count(spec: RingSpec) -> int:
    """Closed-form edge count of G(Z_{n1} + ... + Z_{nr})."""
    size = spec.size
    phis = math.prod(euler_phi(m) for m in spec.moduli)
    if all(m % 2 == 1 for m in spec.moduli):
        return (size - 1) * phis // 2
    return size * phis // 2


def is_connected(g: UnitGraph) -> bool:
    if g.num_vertices <= 1:
        return True
    n_comp, _ = connected_components(g.adjacency_matrix, directed=False)
    return n_comp == 1


def diameter(g: UnitGraph) -> float:
    """Largest shortest-path distance; ``math.inf`` when disconnected.

    Level-synchronous BFS from blocks of sources at once, one sparse product
    per level; dense BLAS products once the graph is dense enough.
    """
    n = g.num_vertices
    if n <= 1:
        return 0
    if not is_connected(g):
        return math.inf
    adj = g.adjacency_matrix.astype(np.float32)
    if g.num_edges * 20 > n * n:
        adj = adj.toarray()
    chunk = max(1, min(n, 4_000_000 // n))
    best = 0
    for start in range(0, n, chunk):
        src = np.arange(start, min(n, start + chunk))
        seen = np.zeros((len(src), n), dtype=bool)
        seen[np.arange(len(src)), src] = True
        frontier = seen.copy()
        depth = 0
        while not seen.all():
            reached = np.asarray(frontier.astype(np.float32) @ adj) > 0
            frontier = reached & ~seen
            seen |= frontier
            depth += 1
        best = max(best, depth)
    return best


def girth(g: UnitGraph) -> float:
    """Length of the shortest cycle; ``math.inf`` for forests.

    A BFS from every root; a non-tree edge (u, w) closes a closed walk of length
    dist(u) + dist(w) + 1 that contains a cycle no longer than it, and the
    minimum over all roots is attained by a shortest cycle. The search stops
    once it meets the trivial lower bound: 3, or 4 for bipartite graphs.
    """
    nbrs = g.adjacency
    floor = 4 if bipartition(g) is not None else 3
    best = math.inf
    for root in range(g.num_vertices):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if 2 * du + 1 >= best:
                break
            for w in nbrs[u]:
                dw = dist.get(w)
                if dw is None:
                    dist[w] = du + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    best = min(best, du + dw + 1)
        if best == floor:
            break
    return best


def bipartition(g: UnitGraph) -> list[int] | None:
    """A proper 2-colouring (0/1 per vertex), or None if the graph has an odd cycle."""
    nbrs = g.adjacency
    colour = [-1] * g.num_vertices
    for root in range(g.num_vertices):
        if colour[root] != -1:
            continue
        colour[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in nbrs[u]:
                if colour[w] == -1:
                    colour[w] = 1 - colour[u]
                    queue.append(w)
                elif colour[w] == colour[u]:
                    return None
    return colour


def is_bipartite(g: UnitGraph, witness: bool = False):
    colouring = bipartition(g)
    if witness:
        return colouring is not None, colouring
    return colouring is not None


def is_proper_colouring(g: UnitGraph, colouring) -> bool:
    c = np.asarray(colouring)
    return bool(np.all(c[g.edges[:, 0]] != c[g.edges[:, 1]])) if g.num_edges else True


class DegreeStats(NamedTuple):
    min_degree: int
    max_degree: int
    histogram: dict[int, int]  # degree -> number of vertices


def degree_stats(g: UnitGraph) -> DegreeStats:
    deg = g.degrees
    return DegreeStats(int(deg.min()), int(deg.max()), dict(sorted(Counter(deg.tolist()).items())))


def dominating_set(g: UnitGraph) -> list[int]:
    """Greedy dominating set; ties broken by the smallest vertex index."""
    n = g.num_vertices
    closed = g.adjacency_matrix.astype(bool).toarray()
    closed[np.arange(n), np.arange(n)] = True
    undominated = np.ones(n, dtype=bool)
    chosen = []
    while undominated.any():
        gain = closed[:, undominated].sum(axis=1)
        v = int(np.argmax(gain))
        chosen.append(v)
        undominated &= ~closed[v]
    return chosen


def edge_connectivity(g: UnitGraph, method: str = "dominating") -> int:
    """Exact edge connectivity from unit-capacity max-flows; 0 when disconnected.

    ``method="all"`` takes the minimum over max-flows from vertex 0 to every
    other vertex. ``method="dominating"`` (default) only runs flows between
    members of a dominating set D: when the connectivity is below the minimum
    degree, each side of a minimum cut has a vertex with no neighbour across
    the cut, so D meets both sides.
    """
    n = g.num_vertices
    if n <= 1 or not is_connected(g):
        return 0
    cap = g.adjacency_matrix
    best = int(g.degrees.min())
    if method == "all":
        source, targets = 0, range(1, n)
    elif method == "dominating":
        dom = dominating_set(g)
        source, targets = dom[0], dom[1:]
    else:
        raise DomainError(f"unknown method {method!r}")
    for t in targets:
        best = min(best, int(maximum_flow(cap, source, t).flow_value))
        if best <= 1:
            break
    return best


@dataclass(frozen=True)
class GraphInvariants:
    connected: bool
    diameter: float
    girth: float
    bipartite: bool
    min_degree: int
    max_degree: int
    edge_count: int
    edge_connectivity: int

    def to_dict(self) -> dict:
        return {k: _encode_inf(v) for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, d: dict) -> GraphInvariants:
        return cls(**{k: _decode_inf(v) for k, v in d.items()})


def _encode_inf(v):
    return "inf" if isinstance(v, float) and math.isinf(v) else v


def _decode_inf(v):
    return math.inf if v == "inf" else v


def analyze_graph(g: UnitGraph) -> GraphInvariants:
    stats = degree_stats(g)
    inv = GraphInvariants(
        connected=is_connected(g),
        diameter=diameter(g),
        girth=girth(g),
        bipartite=is_bipartite(g),
        min_degree=stats.min_degree,
        max_degree=stats.max_degree,
        edge_count=edge_count(g),
        edge_connectivity=edge_connectivity(g),
    )
    assert inv.edge_connectivity <= inv.min_degree
    return inv


def graph_to_text(g: UnitGraph) -> str:
    lines = [f"p {g.num_vertices} {g.num_edges}"]
    lines.extend(f"{i} {j}" for i, j in g.edges.tolist())
    return "\n".join(lines) + "\n"


def parse_graph_text(text: str) -> tuple[int, list[tuple[int, int]]]:
    """Inverse of graph_to_text: (vertex count, edge list)."""
    lines = text.strip().splitlines()
    head = lines[0].split()
    if len(head) != 3 or head[0] != "p":
        raise DomainError(f"bad graph header: {lines[0]!r}")
    n, m = int(head[1]), int(head[2])
    edges = [tuple(int(t) for t in line.split()) for line in lines[1:]]
    if len(edges) != m:
        raise DomainError(f"header announces {m} edges, found {len(edges)}")
    return n, edges
