"""Maximum bipartite matching (Hopcroft-Karp)."""

from __future__ import annotations

from collections import deque
from typing import Iterable

from .graphs import BipartiteGraph

_INF = float("inf")


def maximum_matching(
    g: BipartiteGraph,
    removed_u: Iterable[int] = (),
    removed_v: Iterable[int] = (),
) -> tuple[tuple[int, int], ...]:
    """Maximum matching of g minus the removed vertices.

    Returns the matched pairs (u, v) sorted by u. Phases scan vertices in
    increasing id order, so the matching is deterministic.
    """
    removed_u = frozenset(removed_u)
    removed_v = frozenset(removed_v)
    match_u = [-1] * g.size_u
    match_v = [-1] * g.size_v
    dist = [0.0] * g.size_u

    def bfs() -> bool:
        queue = deque()
        for u in range(g.size_u):
            if u in removed_u:
                dist[u] = _INF
            elif match_u[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = _INF
        found = False
        while queue:
            u = queue.popleft()
            for v in g.adj_u[u]:
                if v in removed_v:
                    continue
                w = match_v[v]
                if w == -1:
                    found = True
                elif dist[w] == _INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in g.adj_u[u]:
            if v in removed_v:
                continue
            w = match_v[v]
            if w == -1 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_u[u] = v
                match_v[v] = u
                return True
        dist[u] = _INF
        return False

    while bfs():
        for u in range(g.size_u):
            if u not in removed_u and match_u[u] == -1:
                dfs(u)

    return tuple((u, match_u[u]) for u in range(g.size_u) if match_u[u] != -1)


def has_complete_matching(
    g: BipartiteGraph,
    removed_u: Iterable[int] = (),
    removed_v: Iterable[int] = (),
) -> bool:
    """Whether every surviving U vertex can be matched simultaneously."""
    removed_u = frozenset(removed_u)
    want = g.size_u - len(removed_u & set(range(g.size_u)))
    return len(maximum_matching(g, removed_u, removed_v)) == want
