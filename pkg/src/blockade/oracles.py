"""Reference oracles: definitional, enumeration-based solvers for tiny instances.

These never touch the LP or branch-and-bound machinery; each one restates
its problem as a plain search with its own helper algorithms, so they can
serve as independent ground truth in tests. Every oracle enforces a hard
size cap and an explicit budget, and refuses (OracleBudgetError) rather
than truncating the search.

Size caps: bcmbp |V|<=12, mbcmbp |V|<=9 and m<=3, vkcut n<=12,
mvvsp n<=12, mfbp/mfip <=16 arcs, cip n<=14 and k<=3, max_clique n<=20,
gosdc <=8 jobs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations, product

from .graphs import UndirectedGraph
from .instances import (
    BcmbpInstance,
    CipInstance,
    GosdcInstance,
    KCutInstance,
    MbcmbpInstance,
    MfbpInstance,
    MfipInstance,
    MvvspInstance,
)


class OracleBudgetError(RuntimeError):
    """The requested enumeration exceeds the oracle's budget or size cap."""


@dataclass(frozen=True)
class OracleBudget:
    max_subsets: int = 2_000_000
    max_seconds: float = 120.0


class _Meter:
    """Charges enumeration work against a budget; raises instead of truncating."""

    def __init__(self, budget: OracleBudget | None):
        self.budget = budget or OracleBudget()
        self.start = time.monotonic()
        self.count = 0

    def require(self, estimate: int, what: str) -> None:
        if estimate > self.budget.max_subsets:
            raise OracleBudgetError(
                f"{what}: {estimate} candidates exceed budget "
                f"{self.budget.max_subsets}"
            )

    def charge(self, k: int = 1) -> None:
        self.count += k
        if self.count % 4096 < k:
            if time.monotonic() - self.start > self.budget.max_seconds:
                raise OracleBudgetError("time budget exhausted")
        if self.count > self.budget.max_subsets:
            raise OracleBudgetError("subset budget exhausted")


def _cap(condition: bool, message: str) -> None:
    if not condition:
        raise OracleBudgetError(message)


def _popcount(x: int) -> int:
    return bin(x).count("1")


# ---------------------------------------------------------------------------
# Matching robustness


def oracle_bcmbp(
    inst: BcmbpInstance, budget: OracleBudget | None = None
) -> tuple[int, tuple[int, ...]]:
    """kappa(G) = min over nonempty U' of |N(U')| - |U'|, with the first
    minimizing U' in (size, lexicographic) order as witness."""
    g = inst.graph
    _cap(g.size_v <= 12, "bcmbp oracle capped at |V| <= 12")
    meter = _Meter(budget)
    meter.require(2 ** g.size_u, "bcmbp")
    best = None
    witness: tuple[int, ...] = ()
    for size in range(1, g.size_u + 1):
        for subset in combinations(range(g.size_u), size):
            meter.charge()
            nmask = 0
            for u in subset:
                nmask |= g.masks_u[u]
            value = _popcount(nmask) - size
            if best is None or value < best:
                best = value
                witness = subset
    assert best is not None
    return best, witness


def oracle_mbcmbp(
    inst: MbcmbpInstance, budget: OracleBudget | None = None
) -> tuple[int, tuple[int, ...]]:
    """Best worst-part matching robustness over all assignments of V to parts.

    Returns (value, assignment) where assignment[v] is the part index of v
    in the first assignment maximizing the inner minimum. The reported value
    clamps at zero: when even the best assignment leaves some part below a
    surplus of zero, blocking is free and the problem value is zero.
    """
    g = inst.graph
    m = inst.m
    _cap(g.size_v <= 9, "mbcmbp oracle capped at |V| <= 9")
    _cap(m <= 3, "mbcmbp oracle capped at m <= 3")
    meter = _Meter(budget)
    meter.require(m ** g.size_v, "mbcmbp")

    # Nonempty-subset neighborhoods per part, computed once.
    part_subsets: list[list[tuple[int, int]]] = []
    for part in inst.parts:
        rows = []
        for size in range(1, len(part) + 1):
            for subset in combinations(part, size):
                nmask = 0
                for u in subset:
                    nmask |= g.masks_u[u]
                rows.append((size, nmask))
        part_subsets.append(rows)

    best: int | None = None
    best_assign: tuple[int, ...] = ()
    for assign in product(range(m), repeat=g.size_v):
        meter.charge()
        vmasks = [0] * m
        for v, i in enumerate(assign):
            vmasks[i] |= 1 << v
        worst = None
        for i in range(m):
            vm = vmasks[i]
            for size, nmask in part_subsets[i]:
                surplus = _popcount(nmask & vm) - size
                if worst is None or surplus < worst:
                    worst = surplus
        assert worst is not None
        if best is None or worst > best:
            best = worst
            best_assign = assign
    assert best is not None
    return max(0, best), best_assign


# ---------------------------------------------------------------------------
# Vertex k-cut


def oracle_vkcut(
    inst: KCutInstance, budget: OracleBudget | None = None
) -> tuple[int, tuple[int, ...]] | None:
    """Smallest vertex set whose removal leaves at least k components.

    Returns (size, removed) with the first such set in (size, lexicographic)
    order, or None when no removal works (fewer than k mutually nonadjacent
    vertices exist).
    """
    g = inst.graph
    _cap(g.n <= 12, "vkcut oracle capped at n <= 12")
    meter = _Meter(budget)
    meter.require(2 ** g.n, "vkcut")
    for size in range(0, g.n - inst.k + 1):
        for subset in combinations(range(g.n), size):
            meter.charge()
            removed = 0
            for v in subset:
                removed |= 1 << v
            if _component_count(g, removed) >= inst.k:
                return size, subset
    return None


def _component_count(g: UndirectedGraph, removed_mask: int) -> int:
    seen = removed_mask
    count = 0
    for start in range(g.n):
        if seen >> start & 1:
            continue
        count += 1
        stack = [start]
        seen |= 1 << start
        while stack:
            v = stack.pop()
            for w in g.adj[v]:
                if not seen >> w & 1:
                    seen |= 1 << w
                    stack.append(w)
    return count


# ---------------------------------------------------------------------------
# Shortest-path blocker


def oracle_mvvsp(
    inst: MvvspInstance, budget: OracleBudget | None = None
) -> tuple[int, tuple[int, ...]] | None:
    """Smallest internal vertex set whose removal makes dist(s,t) exceed d.

    Returns (size, removed) with the first such set in (size, lexicographic)
    order, or None when blocking is impossible (an s-t path of length <= d
    with no internal vertices exists).
    """
    g = inst.graph
    _cap(g.n <= 12, "mvvsp oracle capped at n <= 12")
    internal = [v for v in range(g.n) if v != inst.s and v != inst.t]
    meter = _Meter(budget)
    meter.require(2 ** len(internal), "mvvsp")
    for size in range(0, len(internal) + 1):
        for subset in combinations(internal, size):
            meter.charge()
            dist = _dijkstra(g, inst.s, frozenset(subset))
            if dist[inst.t] > inst.d:
                return size, subset
    return None


def _dijkstra(g, s: int, removed: frozenset[int]) -> list[float]:
    import heapq

    dist = [float("inf")] * g.n
    if s in removed:
        return dist
    dist[s] = 0
    heap = [(0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for i in g.out_arcs[u]:
            a = g.arcs[i]
            if a.v in removed:
                continue
            nd = d + a.length
            if nd < dist[a.v]:
                dist[a.v] = nd
                heapq.heappush(heap, (nd, a.v))
    return dist


# ---------------------------------------------------------------------------
# Flow blocking and interdiction


def _ek_max_flow(
    n: int,
    arcs: list[tuple[int, int, int]],
    s: int,
    t: int,
) -> tuple[int, frozenset[int]]:
    """Edmonds-Karp on an aggregated capacity matrix.

    Returns (value, source side of a min cut by residual reachability).
    """
    cap = [[0] * n for _ in range(n)]
    for u, v, c in arcs:
        cap[u][v] += c
    value = 0
    while True:
        parent = [-1] * n
        parent[s] = s
        queue = [s]
        qi = 0
        while qi < len(queue) and parent[t] == -1:
            u = queue[qi]
            qi += 1
            row = cap[u]
            for v in range(n):
                if row[v] > 0 and parent[v] == -1:
                    parent[v] = u
                    queue.append(v)
        if parent[t] == -1:
            break
        # Bottleneck along the path.
        aug = None
        v = t
        while v != s:
            u = parent[v]
            if aug is None or cap[u][v] < aug:
                aug = cap[u][v]
            v = u
        v = t
        while v != s:
            u = parent[v]
            cap[u][v] -= aug
            cap[v][u] += aug
            v = u
        value += aug
    reach = {s}
    stack = [s]
    while stack:
        u = stack.pop()
        for v in range(n):
            if cap[u][v] > 0 and v not in reach:
                reach.add(v)
                stack.append(v)
    return value, frozenset(reach)


def oracle_mfbp(
    inst: MfbpInstance, budget: OracleBudget | None = None
) -> tuple[int, tuple[int, ...]]:
    """Cheapest arc subset whose removal caps the max flow at phi.

    Tests subsets in (cost, size, mask) order and returns the first feasible
    one, so the witness is deterministic. Subsets of an already-infeasible
    set are skipped without a flow computation.
    """
    g = inst.graph
    m = len(g.arcs)
    _cap(m <= 16, "mfbp oracle capped at 16 arcs")
    meter = _Meter(budget)
    meter.require(2 ** m, "mfbp")
    costs = [a.cost for a in g.arcs]
    order = sorted(
        range(2 ** m),
        key=lambda mask: (
            sum(costs[i] for i in range(m) if mask >> i & 1),
            _popcount(mask),
            mask,
        ),
    )
    infeasible: list[int] = []
    for mask in order:
        meter.charge()
        if any(mask & bad == mask for bad in infeasible):
            continue
        arcs = [
            (a.u, a.v, a.capacity)
            for i, a in enumerate(g.arcs)
            if not mask >> i & 1
        ]
        value, _ = _ek_max_flow(g.n, arcs, inst.s, inst.t)
        if value <= inst.phi:
            cost = sum(costs[i] for i in range(m) if mask >> i & 1)
            blocked = tuple(i for i in range(m) if mask >> i & 1)
            return cost, blocked
        infeasible.append(mask)
    raise AssertionError("removing every arc always blocks the flow")


def oracle_mfip(
    inst: MfipInstance, budget: OracleBudget | None = None
) -> tuple[int, tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Best interdiction within budget, minimizing the residual max flow.

    Returns (value, interdicted arcs, crossing non-interdicted arcs of a
    residual min cut, source side of that cut). The witness is the first
    minimizer in (size, mask) order.
    """
    g = inst.graph
    m = len(g.arcs)
    _cap(m <= 16, "mfip oracle capped at 16 arcs")
    meter = _Meter(budget)
    meter.require(2 ** m, "mfip")
    costs = [a.cost for a in g.arcs]
    best_value: int | None = None
    best_mask = 0
    for size in range(0, m + 1):
        for subset in combinations(range(m), size):
            mask = 0
            cost = 0
            for i in subset:
                mask |= 1 << i
                cost += costs[i]
            if cost > inst.budget:
                continue
            meter.charge()
            arcs = [
                (a.u, a.v, a.capacity)
                for i, a in enumerate(g.arcs)
                if not mask >> i & 1
            ]
            value, _ = _ek_max_flow(g.n, arcs, inst.s, inst.t)
            if best_value is None or value < best_value:
                best_value = value
                best_mask = mask
        if best_value == 0:
            break
    assert best_value is not None
    arcs = [
        (a.u, a.v, a.capacity)
        for i, a in enumerate(g.arcs)
        if not best_mask >> i & 1
    ]
    _, reach = _ek_max_flow(g.n, arcs, inst.s, inst.t)
    beta = tuple(
        i
        for i, a in enumerate(g.arcs)
        if not best_mask >> i & 1 and a.u in reach and a.v not in reach
    )
    interdicted = tuple(i for i in range(m) if best_mask >> i & 1)
    alpha = tuple(sorted(reach))
    return best_value, interdicted, beta, alpha


# ---------------------------------------------------------------------------
# Clique interdiction


def _clique_search(masks: list[int], cand: int) -> tuple[int, int]:
    """(size, mask) of a maximum clique within cand; first maximum found in
    the fixed include-lowest-vertex-first order."""
    best_size = 0
    best_mask = 0

    def rec(size: int, chosen: int, cand: int) -> None:
        nonlocal best_size, best_mask
        if size + _popcount(cand) <= best_size:
            return
        if not cand:
            if size > best_size:
                best_size = size
                best_mask = chosen
            return
        v = (cand & -cand).bit_length() - 1
        bit = 1 << v
        rec(size + 1, chosen | bit, cand & masks[v])
        rec(size, chosen, cand ^ bit)

    rec(0, 0, cand)
    return best_size, best_mask


def oracle_max_clique(
    g: UndirectedGraph, budget: OracleBudget | None = None
) -> tuple[int, tuple[int, ...]]:
    """Maximum clique by plain branch and bound with the counting bound."""
    _cap(g.n <= 20, "max clique oracle capped at n <= 20")
    size, mask = _clique_search(list(g.masks), (1 << g.n) - 1)
    clique = tuple(v for v in range(g.n) if mask >> v & 1)
    return size, clique


def oracle_cip(
    inst: CipInstance, budget: OracleBudget | None = None
) -> tuple[int, tuple[int, ...]]:
    """Minimum surviving clique number over all removals of at most k vertices.

    Returns (value, removed) with the first minimizer in (size,
    lexicographic) order.
    """
    g = inst.graph
    _cap(g.n <= 14, "cip oracle capped at n <= 14")
    _cap(inst.k <= 3, "cip oracle capped at k <= 3")
    meter = _Meter(budget)
    masks = list(g.masks)
    full = (1 << g.n) - 1
    best: int | None = None
    witness: tuple[int, ...] = ()
    for size in range(0, min(inst.k, g.n) + 1):
        for subset in combinations(range(g.n), size):
            meter.charge()
            removed = 0
            for v in subset:
                removed |= 1 << v
            value, _ = _clique_search(masks, full & ~removed)
            if best is None or value < best:
                best = value
                witness = subset
        if best == 0:
            break
    assert best is not None
    return best, witness


# ---------------------------------------------------------------------------
# Scheduling


def oracle_gosdc(
    inst: GosdcInstance, budget: OracleBudget | None = None
) -> tuple[int, tuple[int, ...]]:
    """Minimum makespan by branch and bound over job insertion orders.

    Jobs are inserted one at a time at the earliest slot that avoids every
    already-placed conflicting job. Inserting in order of an optimal
    schedule's start times reproduces a schedule at least as good, so the
    minimum over insertion orders is exact. Returns (makespan, starts).
    """
    _cap(inst.jobs <= 8, "gosdc oracle capped at 8 jobs")
    meter = _Meter(budget)
    n = inst.jobs
    p = inst.ptimes
    conflicts: list[set[int]] = [set() for _ in range(n)]
    for a, b in inst.conflict_pairs():
        conflicts[a].add(b)
        conflicts[b].add(a)

    # Sequential schedule in id order: always feasible incumbent.
    best = sum(p)
    acc = 0
    seq = []
    for j in range(n):
        seq.append(acc)
        acc += p[j]
    best_starts = tuple(seq)

    start = [0] * n

    def earliest_slot(j: int, placed_mask: int) -> int:
        t = 0
        while True:
            clash = False
            for k in conflicts[j]:
                if placed_mask >> k & 1:
                    if start[k] < t + p[j] and t < start[k] + p[k]:
                        t = start[k] + p[k]
                        clash = True
            if not clash:
                return t

    def rec(placed_mask: int, cmax: int) -> None:
        nonlocal best, best_starts
        meter.charge()
        if cmax >= best:
            return
        if placed_mask == (1 << n) - 1:
            best = cmax
            best_starts = tuple(start)
            return
        for j in range(n):
            if placed_mask >> j & 1:
                continue
            t = earliest_slot(j, placed_mask)
            start[j] = t
            rec(placed_mask | (1 << j), max(cmax, t + p[j]))

    rec(0, 0)
    return best, best_starts
