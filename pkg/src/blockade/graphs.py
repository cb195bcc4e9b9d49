"""Graph structures and small polynomial algorithms shared by the solvers.

Vertices are integers in [0, n). Graphs are immutable after construction;
"removing" vertices is expressed by passing removed-vertex sets or bitmasks
to the algorithms, which keeps separation loops allocation-free.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class GraphError(ValueError):
    """Malformed graph input."""


def _as_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class UndirectedGraph:
    """Simple undirected graph with bitset adjacency."""

    __slots__ = ("n", "edges", "adj", "masks")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        seen = set()
        canon = []
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
            canon.append(e)
        canon.sort()
        self.n = n
        self.edges = tuple(canon)
        masks = [0] * n
        for u, v in canon:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        self.masks = tuple(masks)
        self.adj = tuple(
            tuple(v for v in range(n) if masks[u] >> v & 1) for u in range(n)
        )

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.masks[u] >> v & 1)

    def complement(self) -> "UndirectedGraph":
        edges = [
            (u, v)
            for u in range(self.n)
            for v in range(u + 1, self.n)
            if not self.has_edge(u, v)
        ]
        return UndirectedGraph(self.n, edges)

    def induced(self, vertices: Sequence[int]) -> "UndirectedGraph":
        """Induced subgraph with vertices relabeled to 0..len-1 in given order."""
        index = {v: i for i, v in enumerate(vertices)}
        edges = [
            (index[u], index[v])
            for u, v in self.edges
            if u in index and v in index
        ]
        return UndirectedGraph(len(vertices), edges)

    def __repr__(self) -> str:
        return f"UndirectedGraph(n={self.n}, m={len(self.edges)})"


class Arc:
    """Directed arc with the attribute slots the problems use."""

    __slots__ = ("u", "v", "capacity", "length", "cost")

    def __init__(self, u: int, v: int, capacity: int = 0, length: int = 0, cost: int = 0):
        if u == v:
            raise GraphError(f"self-loop arc at {u}")
        if capacity < 0 or length < 0 or cost < 0:
            raise GraphError("arc attributes must be nonnegative")
        self.u = u
        self.v = v
        self.capacity = capacity
        self.length = length
        self.cost = cost

    def __repr__(self) -> str:
        return (
            f"Arc({self.u}->{self.v}, cap={self.capacity}, "
            f"len={self.length}, cost={self.cost})"
        )


class Digraph:
    """Directed graph; parallel arcs are allowed (flow instances use them)."""

    __slots__ = ("n", "arcs", "out_arcs", "in_arcs")

    def __init__(self, n: int, arcs: Iterable[Arc]):
        arcs = tuple(arcs)
        for a in arcs:
            if not (0 <= a.u < n and 0 <= a.v < n):
                raise GraphError(f"arc ({a.u},{a.v}) out of range for n={n}")
        self.n = n
        self.arcs = arcs
        out_arcs = [[] for _ in range(n)]
        in_arcs = [[] for _ in range(n)]
        for i, a in enumerate(arcs):
            out_arcs[a.u].append(i)
            in_arcs[a.v].append(i)
        self.out_arcs = tuple(map(tuple, out_arcs))
        self.in_arcs = tuple(map(tuple, in_arcs))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={len(self.arcs)})"


class BipartiteGraph:
    """Bipartite graph with sides U and V indexed separately from 0."""

    __slots__ = ("size_u", "size_v", "edges", "adj_u", "adj_v", "masks_u", "masks_v")

    def __init__(self, size_u: int, size_v: int, edges: Iterable[tuple[int, int]]):
        seen = set()
        canon = []
        for u, v in edges:
            if not (0 <= u < size_u and 0 <= v < size_v):
                raise GraphError(
                    f"edge ({u},{v}) out of range for {size_u}x{size_v}"
                )
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
            canon.append((u, v))
        canon.sort()
        self.size_u = size_u
        self.size_v = size_v
        self.edges = tuple(canon)
        masks_u = [0] * size_u
        masks_v = [0] * size_v
        for u, v in canon:
            masks_u[u] |= 1 << v
            masks_v[v] |= 1 << u
        self.masks_u = tuple(masks_u)
        self.masks_v = tuple(masks_v)
        self.adj_u = tuple(
            tuple(v for v in range(size_v) if masks_u[u] >> v & 1)
            for u in range(size_u)
        )
        self.adj_v = tuple(
            tuple(u for u in range(size_u) if masks_v[v] >> u & 1)
            for v in range(size_v)
        )

    def __repr__(self) -> str:
        return (
            f"BipartiteGraph(|U|={self.size_u}, |V|={self.size_v}, "
            f"m={len(self.edges)})"
        )


def neighborhood_of_set(g: BipartiteGraph, subset_u: Iterable[int]) -> set[int]:
    """N_G(U'): union of the V-side neighborhoods of the given U vertices."""
    mask = 0
    for u in subset_u:
        if not 0 <= u < g.size_u:
            raise GraphError(f"vertex {u} not on the U side")
        mask |= g.masks_u[u]
    return {v for v in range(g.size_v) if mask >> v & 1}


def neighborhood_mask(g: BipartiteGraph, subset_mask: int) -> int:
    """Bitmask variant of neighborhood_of_set, for enumeration loops."""
    mask = 0
    u = 0
    while subset_mask:
        if subset_mask & 1:
            mask |= g.masks_u[u]
        subset_mask >>= 1
        u += 1
    return mask


def connected_components(
    g: UndirectedGraph, removed: Iterable[int] = ()
) -> list[list[int]]:
    """Components of G minus the removed vertices, each sorted, ordered by minimum vertex."""
    removed_mask = _as_mask(removed)
    seen = removed_mask
    comps = []
    for start in range(g.n):
        if seen >> start & 1:
            continue
        stack = [start]
        seen |= 1 << start
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.adj[v]:
                if not seen >> w & 1:
                    seen |= 1 << w
                    stack.append(w)
        comp.sort()
        comps.append(comp)
    return comps


def component_count(g: UndirectedGraph, removed_mask: int) -> int:
    """Number of components of G minus the masked vertices (0 if none remain)."""
    seen = removed_mask
    full = (1 << g.n) - 1
    count = 0
    for start in range(g.n):
        if seen >> start & 1:
            continue
        count += 1
        stack = [start]
        seen |= 1 << start
        while stack:
            v = stack.pop()
            frontier = g.masks[v] & ~seen & full
            while frontier:
                w = (frontier & -frontier).bit_length() - 1
                seen |= 1 << w
                stack.append(w)
                frontier &= frontier - 1
    return count


def greedy_coloring(g: UndirectedGraph) -> tuple[int, list[int]]:
    """Sequential greedy coloring in fixed vertex order 0..n-1.

    Returns (colorCount, colorOf). Proper by construction; colorCount is an
    upper bound on the chromatic number and hence at least omega(G).
    """
    color_of = [-1] * g.n
    count = 0
    for v in range(g.n):
        used = {color_of[w] for w in g.adj[v] if color_of[w] >= 0}
        c = 0
        while c in used:
            c += 1
        color_of[v] = c
        count = max(count, c + 1)
    return count, color_of


def coreness(g: UndirectedGraph) -> list[int]:
    """k-core numbers by iterative minimum-degree peeling.

    Ties peel the smallest vertex id first, so the result is deterministic.
    core(v)+1 upper-bounds the size of any clique through v.
    """
    deg = [g.degree(v) for v in range(g.n)]
    alive = set(range(g.n))
    core = [0] * g.n
    level = 0
    while alive:
        v = min(alive, key=lambda u: (deg[u], u))
        level = max(level, deg[v])
        core[v] = level
        alive.remove(v)
        for w in g.adj[v]:
            if w in alive:
                deg[w] -= 1
    return core


def parse_dimacs(text: str) -> UndirectedGraph:
    """Parse the DIMACS undirected format (c/p/e lines, 1-indexed vertices).

    Rejects duplicate problem lines and out-of-range endpoints. Duplicate
    edges are collapsed; self-loops are rejected.
    """
    n = None
    declared_m = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise GraphError(f"line {lineno}: duplicate p line")
            if len(parts) != 4 or parts[1] != "edge":
                raise GraphError(f"line {lineno}: expected 'p edge <n> <m>'")
            n = int(parts[2])
            declared_m = int(parts[3])
            if n < 0 or declared_m < 0:
                raise GraphError(f"line {lineno}: negative size")
        elif parts[0] == "e":
            if n is None:
                raise GraphError(f"line {lineno}: edge before p line")
            if len(parts) != 3:
                raise GraphError(f"line {lineno}: expected 'e <u> <v>'")
            u, v = int(parts[1]), int(parts[2])
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphError(f"line {lineno}: endpoint out of range")
            if u == v:
                raise GraphError(f"line {lineno}: self-loop")
            a, b = u - 1, v - 1
            edges.add((a, b) if a < b else (b, a))
        else:
            raise GraphError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise GraphError("missing p line")
    return UndirectedGraph(n, sorted(edges))


def write_dimacs(g: UndirectedGraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        for chunk in comment.splitlines():
            lines.append(f"c {chunk}")
    lines.append(f"p edge {g.n} {len(g.edges)}")
    for u, v in g.edges:
        lines.append(f"e {u + 1} {v + 1}")
    return "\n".join(lines) + "\n"
