"""Maximum flow / minimum cut and constrained shortest paths on digraphs."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graphs import Digraph, GraphError
from ._kernels import push_relabel_max_flow


class FlowError(ValueError):
    """Invalid flow computation request."""


@dataclass(frozen=True)
class FlowResult:
    value: int
    flow: tuple[int, ...]
    cut_arcs: tuple[int, ...]
    source_side: frozenset[int]


def _residual_arrays(
    g: Digraph,
    disabled_arcs: frozenset[int],
    removed_vertices: frozenset[int],
) -> tuple[list[int], list[int], list[int], list[int], list[int]]:
    """Forward-star residual representation: arcs e and e^1 are twins."""
    head: list[int] = []
    cap: list[int] = []
    orig: list[int] = []
    first = [-1] * g.n
    nxt: list[int] = []

    def add(u: int, v: int, c: int, arc_id: int) -> None:
        head.append(v)
        cap.append(c)
        orig.append(arc_id)
        nxt.append(first[u])
        first[u] = len(head) - 1
        head.append(u)
        cap.append(0)
        orig.append(-1)
        nxt.append(first[v])
        first[v] = len(head) - 1

    for i, a in enumerate(g.arcs):
        if i in disabled_arcs:
            continue
        if a.u in removed_vertices or a.v in removed_vertices:
            continue
        if a.capacity != int(a.capacity):
            raise FlowError("capacities must be integers")
        add(a.u, a.v, int(a.capacity), i)
    return head, cap, orig, first, nxt


def max_flow_min_cut(
    g: Digraph,
    s: int,
    t: int,
    disabled_arcs: Iterable[int] = (),
    removed_vertices: Iterable[int] = (),
) -> FlowResult:
    """Max flow and a matching min cut between s and t with integer capacities.

    Highest-label push-relabel with the gap heuristic. The reported cut is
    the set of arcs leaving the residual-reachable source side; its capacity
    equals the flow value. Arcs in disabled_arcs and arcs touching
    removed_vertices are treated as absent.
    """
    if s == t:
        raise FlowError("source and sink must differ")
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise FlowError("source or sink out of range")
    disabled = frozenset(disabled_arcs)
    removed = frozenset(removed_vertices)
    if s in removed or t in removed:
        raise FlowError("source and sink cannot be removed")

    head, cap, orig, first, nxt = _residual_arrays(g, disabled, removed)
    value = push_relabel_max_flow(g.n, s, t, head, cap, first, nxt)

    flow = [0] * len(g.arcs)
    for e in range(1, len(head), 2):
        if orig[e - 1] >= 0:
            flow[orig[e - 1]] = cap[e]

    side = {s}
    stack = [s]
    while stack:
        u = stack.pop()
        e = first[u]
        while e != -1:
            if cap[e] > 0 and head[e] not in side:
                side.add(head[e])
                stack.append(head[e])
            e = nxt[e]
    cut = tuple(
        i
        for i, a in enumerate(g.arcs)
        if i not in disabled
        and a.u not in removed
        and a.v not in removed
        and a.u in side
        and a.v not in side
    )
    return FlowResult(value, tuple(flow), cut, frozenset(side))


def shortest_path_avoiding(
    g: Digraph,
    s: int,
    t: int,
    forbidden: Iterable[int] = (),
) -> tuple[list[int], int] | None:
    """Shortest s-t path by arc length that avoids the forbidden vertices.

    Returns (path, length) or None when t is unreachable. Among all shortest
    paths the lexicographically smallest vertex sequence is returned, so the
    answer is deterministic.
    """
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise GraphError("endpoint out of range")
    forbidden = frozenset(forbidden)
    if s in forbidden or t in forbidden:
        raise GraphError("endpoints cannot be forbidden")

    def dijkstra(source: int, arc_lists: Sequence[Sequence[int]], backward: bool) -> list[float]:
        dist = [float("inf")] * g.n
        dist[source] = 0
        heap = [(0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for i in arc_lists[u]:
                a = g.arcs[i]
                v = a.u if backward else a.v
                if v in forbidden:
                    continue
                nd = d + a.length
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        return dist

    dist_s = dijkstra(s, g.out_arcs, backward=False)
    if dist_s[t] == float("inf"):
        return None
    dist_t = dijkstra(t, g.in_arcs, backward=True)
    total = dist_s[t]

    # Walk forward always taking the smallest next vertex that stays on a
    # shortest path; this yields the lexicographically smallest sequence.
    path = [s]
    u = s
    while u != t:
        best = None
        for i in g.out_arcs[u]:
            a = g.arcs[i]
            if a.v in forbidden:
                continue
            if dist_s[u] + a.length + dist_t[a.v] == total:
                if best is None or a.v < best:
                    best = a.v
        assert best is not None
        path.append(best)
        u = best
    return path, int(total)
