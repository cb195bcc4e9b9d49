"""Vertex k-cut: remove fewest vertices so the rest splits into k parts.

Two exact routes. The compact model assigns every kept vertex to one of
k components with edge rows forbidding cross-component adjacency. The
extended model selects k pairwise disconnected vertex sets out of an
exponential family, solved by branch and price: the master starts from
singletons and a pricing step finds the best new set against the dual
prices by a project-selection minimum cut, one run per forced vertex.

Both routes share a two-level branching idea: first decide whether a
vertex is removed or kept, then whether a kept pair lands in the same
component. Branching never touches individual set variables, which keeps
the component indices symmetric and the tree small.
"""

from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

from .cliques import max_weight_clique
from .graphs import UndirectedGraph
from .instances import KCutInstance
from .mip import (
    CallbackContext,
    EngineError,
    MipModel,
    NewColumn,
    PricerCallback,
    Restriction,
    SolveReport,
    solve_mip,
)
from .simplex import LinearProgram

PRICE_TOL = 1e-6
FRAC_TOL = 1e-6
FLOW_EPS = 1e-12


@dataclass(frozen=True)
class KCutSolution:
    """k components left after removing cut_set; components are disjoint,
    nonempty, and pairwise disconnected in the original graph."""

    cut_set: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class DualPrices:
    """Master duals: one per vertex row, one per clique row, one scalar
    for the cardinality row. nu_v = 1 - lambda_v is the pricing profit."""

    lam: tuple[float, ...]
    pi: tuple[float, ...]
    gamma: float


def build_clique_cover(
    g: UndirectedGraph, mode: str = "edges"
) -> tuple[tuple[int, ...], ...]:
    """Edge-covering cliques: every edge inside at least one clique.

    "edges" returns the edges themselves; "greedy" grows each uncovered
    edge into a maximal clique, which gives stronger master rows.
    """
    if mode == "edges":
        return tuple(g.edges)
    if mode != "greedy":
        raise ValueError(f"unknown clique cover mode {mode!r}")
    covered: set[tuple[int, int]] = set()
    cover: list[tuple[int, ...]] = []
    for u, v in g.edges:
        if (u, v) in covered:
            continue
        clique = [u, v]
        for w in range(g.n):
            if w in clique:
                continue
            if all(g.has_edge(w, c) for c in clique):
                clique.append(w)
        clique.sort()
        for i, a in enumerate(clique):
            for b in clique[i + 1:]:
                covered.add((a, b))
        cover.append(tuple(clique))
    return tuple(cover)


def _max_stable_set(g: UndirectedGraph) -> tuple[int, ...]:
    """Exact maximum stable set via max clique on the complement."""
    comp = g.complement()
    _, clique = max_weight_clique(comp, [1.0] * g.n)
    return clique


def _decode_components(
    g: UndirectedGraph, parts: Sequence[Iterable[int]]
) -> KCutSolution:
    comps = tuple(tuple(sorted(p)) for p in parts)
    used = set()
    for comp in comps:
        if not comp:
            raise EngineError("empty component in a k-cut solution")
        for v in comp:
            if v in used:
                raise EngineError("overlapping components in a k-cut solution")
            used.add(v)
    for u, v in g.edges:
        hu = next((i for i, c in enumerate(comps) if u in c), None)
        hv = next((i for i, c in enumerate(comps) if v in c), None)
        if hu is not None and hv is not None and hu != hv:
            raise EngineError("components are not pairwise disconnected")
    cut = tuple(v for v in range(g.n) if v not in used)
    return KCutSolution(cut, comps)


# ---------------------------------------------------------------- compact

def solve_compact(
    inst: KCutInstance,
    time_limit: float = math.inf,
    node_limit: int = 10_000_000,
    verbose: bool = False,
) -> tuple[KCutSolution | None, SolveReport]:
    """Assignment model: x_v^i says vertex v joins component i.

    Edge rows make adjacent vertices avoid distinct components; every
    component must be nonempty. Maximizing kept vertices minimizes the
    cut. Branches first on keep-or-remove aggregates, then on pairs.
    """
    g, k = inst.graph, inst.k
    n = g.n
    t0 = time.monotonic()
    stable = _max_stable_set(g)
    if len(stable) < k:
        return None, SolveReport(
            "infeasible", None, None, math.nan, 0, {}, 0, time.monotonic() - t0
        )
    stable = stable[:k]

    def col(v: int, i: int) -> int:
        return v * k + i

    lp = LinearProgram("max")
    for _ in range(n * k):
        lp.add_column(1.0, 0.0, 1.0)
    for v in range(n):
        lp.add_row({col(v, i): 1.0 for i in range(k)}, "<=", 1.0)
    for i in range(k):
        for u, v in g.edges:
            for a, b in ((u, v), (v, u)):
                coeffs = {col(a, i): 1.0}
                for j in range(k):
                    if j != i:
                        coeffs[col(b, j)] = 1.0
                lp.add_row(coeffs, "<=", 1.0)
    for i in range(k):
        lp.add_row({col(v, i): 1.0 for v in range(n)}, ">=", 1.0)

    warm = [0.0] * (n * k)
    for i, v in enumerate(stable):
        warm[col(v, i)] = 1.0

    def branch(ctx: CallbackContext) -> list[Restriction]:
        x = ctx.x
        y = [sum(x[col(v, i)] for i in range(k)) for v in range(n)]
        target, best = -1, FRAC_TOL
        for v in range(n):
            frac = min(y[v] - math.floor(y[v]), math.ceil(y[v]) - y[v])
            if frac > best:
                target, best = v, frac
        if target >= 0:
            v = target
            keep = Restriction(
                rows=(((
                    "keep", v), {col(v, i): 1.0 for i in range(k)}, ">=", 1.0),),
                note=f"keep {v}",
            )
            drop = Restriction(
                bounds=tuple((col(v, i), 0.0, 0.0) for i in range(k)),
                note=f"cut {v}",
            )
            return [keep, drop]
        kept = [v for v in range(n) if y[v] > 0.5]
        target_pair, best = None, FRAC_TOL
        for a_pos, u in enumerate(kept):
            for v in kept[a_pos + 1:]:
                together = sum(min(x[col(u, i)], x[col(v, i)]) for i in range(k))
                frac = min(together, 1.0 - together)
                if frac > best:
                    target_pair, best = (u, v), frac
        if target_pair is not None:
            u, v = target_pair
            same = Restriction(
                rows=tuple(
                    (("same", u, v, i), {col(u, i): 1.0, col(v, i): -1.0}, "=", 0.0)
                    for i in range(k)
                ),
                note=f"same {u},{v}",
            )
            diff = Restriction(
                rows=tuple(
                    (("diff", u, v, i), {col(u, i): 1.0, col(v, i): 1.0}, "<=", 1.0)
                    for i in range(k)
                ),
                note=f"diff {u},{v}",
            )
            return [same, diff]
        # Aggregates are integral but some x_v^i still is not: plain
        # dichotomy on the most fractional variable.
        target_j, best = -1, FRAC_TOL
        for j in range(n * k):
            frac = min(x[j] - math.floor(x[j]), math.ceil(x[j]) - x[j])
            if frac > best:
                target_j, best = j, frac
        if target_j < 0:
            raise EngineError("no fractional target on a fractional node")
        lo = math.floor(x[target_j])
        return [
            Restriction(bounds=((target_j, lo + 1.0, ctx.upper[target_j]),)),
            Restriction(bounds=((target_j, ctx.lower[target_j], float(lo)),)),
        ]

    model = MipModel(
        lp,
        [True] * (n * k),
        branch_rule=branch,
        warm_start=tuple(warm),
        time_limit=time_limit,
        node_limit=node_limit,
        verbose=verbose,
    )
    report = solve_mip(model)
    if report.incumbent is None:
        return None, report
    x = report.incumbent
    parts = [
        [v for v in range(n) if x[col(v, i)] > 0.5] for i in range(k)
    ]
    return _decode_components(g, parts), report


# --------------------------------------------------------------- extended

def _price_min_cut(
    groups: Sequence[tuple[int, ...]],
    nu: Sequence[float],
    cliques: Sequence[tuple[int, ...]],
    pi: Sequence[float],
) -> tuple[float, frozenset[int]] | None:
    """Best nonempty union of groups maximizing sum nu - sum pi over hit
    cliques, via one project-selection min cut per forced group."""
    ng = len(groups)
    if ng == 0:
        return None
    member_groups: list[list[int]] = [[] for _ in cliques]
    for gi, grp in enumerate(groups):
        gs = set(grp)
        for ci, c in enumerate(cliques):
            if pi[ci] > FLOW_EPS and gs.intersection(c):
                member_groups[ci].append(gi)

    best: tuple[float, int, frozenset[int]] | None = None
    for forced in range(ng):
        value, chosen = _project_selection(ng, nu, pi, member_groups, forced)
        key = (value, forced, chosen)
        if best is None or value > best[0] + FLOW_EPS:
            best = key
    assert best is not None
    picked = frozenset(v for gi in best[2] for v in groups[gi])
    return best[0], picked


def _project_selection(
    ng: int,
    nu: Sequence[float],
    pi: Sequence[float],
    member_groups: Sequence[Sequence[int]],
    forced: int,
) -> tuple[float, frozenset[int]]:
    """Min cut on source->group (profit), group->sink (loss),
    clique->sink (penalty), group->clique (infinite); forced group pinned
    to the source side. Returns (objective, source-side groups)."""
    inf = math.inf
    nc = len(pi)
    n_nodes = 2 + ng + nc
    src, snk = 0, 1
    gnode = lambda gi: 2 + gi
    cnode = lambda ci: 2 + ng + ci
    cap: list[dict[int, float]] = [dict() for _ in range(n_nodes)]

    def add(a: int, b: int, c: float) -> None:
        if c <= 0:
            return
        cap[a][b] = cap[a].get(b, 0.0) + c
        cap[b].setdefault(a, 0.0)

    base = nu[forced]
    add(src, gnode(forced), inf)
    for gi in range(ng):
        if gi == forced:
            continue
        if nu[gi] > 0:
            base += nu[gi]
            add(src, gnode(gi), nu[gi])
        elif nu[gi] < 0:
            add(gnode(gi), snk, -nu[gi])
    for ci in range(nc):
        if pi[ci] <= FLOW_EPS or not member_groups[ci]:
            continue
        add(cnode(ci), snk, pi[ci])
        for gi in member_groups[ci]:
            add(gnode(gi), cnode(ci), inf)

    # Edmonds-Karp on the small float network.
    flow_total = 0.0
    while True:
        parent = [-1] * n_nodes
        parent[src] = src
        queue = deque([src])
        while queue:
            a = queue.popleft()
            if a == snk:
                break
            for b, c in cap[a].items():
                if parent[b] < 0 and c > FLOW_EPS:
                    parent[b] = a
                    queue.append(b)
        if parent[snk] < 0:
            break
        bottleneck = inf
        b = snk
        while b != src:
            a = parent[b]
            bottleneck = min(bottleneck, cap[a][b])
            b = a
        b = snk
        while b != src:
            a = parent[b]
            cap[a][b] -= bottleneck
            cap[b][a] += bottleneck
            b = a
        flow_total += bottleneck

    reach = [False] * n_nodes
    reach[src] = True
    queue = deque([src])
    while queue:
        a = queue.popleft()
        for b, c in cap[a].items():
            if not reach[b] and c > FLOW_EPS:
                reach[b] = True
                queue.append(b)
    chosen = frozenset(gi for gi in range(ng) if reach[gnode(gi)])
    return base - flow_total, chosen


def price_subset(
    inst: KCutInstance,
    duals: DualPrices,
    clique_cover: Sequence[tuple[int, ...]],
) -> tuple[frozenset[int], float] | None:
    """Most profitable new set against the duals, or None when no set
    beats gamma: max over nonempty S of sum nu_v - sum pi over hit
    cliques, by |V| forced-vertex min-cut runs."""
    g = inst.graph
    groups = [(v,) for v in range(g.n)]
    nu = [1.0 - duals.lam[v] for v in range(g.n)]
    pi = [max(0.0, p) for p in duals.pi]
    best = _price_min_cut(groups, nu, list(clique_cover), pi)
    if best is None:
        return None
    value, subset = best
    if value <= duals.gamma + PRICE_TOL:
        return None
    return subset, value


def _price_mip(
    groups: Sequence[tuple[int, ...]],
    nu: Sequence[float],
    cliques: Sequence[tuple[int, ...]],
    pi: Sequence[float],
    incompatible: Sequence[tuple[int, int]],
) -> tuple[float, frozenset[int]] | None:
    """Pricing with incompatible group pairs, as a small MIP."""
    ng = len(groups)
    if ng == 0:
        return None
    active_cliques = [
        ci for ci in range(len(cliques))
        if pi[ci] > FLOW_EPS and any(set(groups[gi]) & set(cliques[ci]) for gi in range(ng))
    ]
    lp = LinearProgram("max")
    for gi in range(ng):
        lp.add_column(nu[gi], 0.0, 1.0)
    for ci in active_cliques:
        lp.add_column(-pi[ci], 0.0, 1.0)
    for pos, ci in enumerate(active_cliques):
        cset = set(cliques[ci])
        for gi in range(ng):
            if set(groups[gi]) & cset:
                lp.add_row({gi: 1.0, ng + pos: -1.0}, "<=", 0.0)
    lp.add_row({gi: 1.0 for gi in range(ng)}, ">=", 1.0)
    for a, b in incompatible:
        lp.add_row({a: 1.0, b: 1.0}, "<=", 1.0)
    rep = solve_mip(MipModel(lp, [True] * ng + [False] * len(active_cliques)))
    if rep.status != "optimal" or rep.incumbent is None:
        return None
    chosen = frozenset(
        v for gi in range(ng) if rep.incumbent[gi] > 0.5 for v in groups[gi]
    )
    return rep.objective, chosen


def _branch_state(
    state: dict[str, Any]
) -> tuple[frozenset[int], tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]]:
    return (
        frozenset(state.get("banned", ())),
        tuple(state.get("same", ())),
        tuple(state.get("diff", ())),
    )


def _build_groups(
    n: int,
    banned: frozenset[int],
    same: Sequence[tuple[int, int]],
    diff: Sequence[tuple[int, int]],
) -> tuple[list[tuple[int, ...]], list[tuple[int, int]]] | None:
    """Union-find merge of forced-together pairs, then translate the
    forced-apart pairs to group level. None when contradictory pairs
    would empty the candidate set entirely."""
    root = list(range(n))

    def find(a: int) -> int:
        while root[a] != a:
            root[a] = root[root[a]]
            a = root[a]
        return a

    for a, b in same:
        ra, rb = find(a), find(b)
        if ra != rb:
            root[max(ra, rb)] = min(ra, rb)
    dead = set()
    for v in banned:
        dead.add(find(v))
    members: dict[int, list[int]] = {}
    for v in range(n):
        r = find(v)
        if r in dead:
            continue
        members.setdefault(r, []).append(v)
    pairs = set()
    for a, b in diff:
        ra, rb = find(a), find(b)
        if ra == rb:
            # same and different at once: the merged group is unusable
            members.pop(ra, None)
            dead.add(ra)
            continue
        if ra in members and rb in members:
            pairs.add((min(ra, rb), max(ra, rb)))
    reps = sorted(members)
    index = {r: i for i, r in enumerate(reps)}
    groups = [tuple(members[r]) for r in reps]
    gpairs = sorted(
        (index[a], index[b]) for a, b in pairs if a in index and b in index
    )
    return groups, gpairs


def two_level_branch(ctx: CallbackContext) -> list[Restriction]:
    """Branching for the set master: vertex in or out of the cut first,
    then same or different component for a fractional pair."""
    xi = ctx.x
    sets = [
        (j, s) for j, s in enumerate(ctx.payloads)
        if isinstance(s, frozenset)
    ]
    support = {}
    for j, s in sets:
        if xi[j] > FRAC_TOL:
            for v in s:
                support[v] = support.get(v, 0.0) + xi[j]
    target_v, best = -1, FRAC_TOL
    for v in sorted(support):
        y = support[v]
        frac = min(y - math.floor(y), math.ceil(y) - y)
        if frac > best:
            target_v, best = v, frac
    state = ctx.state
    if target_v >= 0:
        v = target_v
        keep_coeffs = {j: 1.0 for j, s in sets if v in s}
        keep = Restriction(
            rows=(((("vert-eq", v)), keep_coeffs, ">=", 1.0),),
            note=f"keep {v}",
        )
        drop = Restriction(
            state={"banned": tuple(state.get("banned", ())) + (v,)},
            note=f"cut {v}",
            column_filter=lambda s, _v=v: _v not in s,
        )
        return [keep, drop]
    kept = sorted(v for v, y in support.items() if y > 0.5)
    target_pair, best = None, FRAC_TOL
    for a_pos, u in enumerate(kept):
        for v in kept[a_pos + 1:]:
            together = sum(xi[j] for j, s in sets if u in s and v in s)
            frac = min(together - math.floor(together), math.ceil(together) - together)
            if frac > best:
                target_pair, best = (u, v), frac
    if target_pair is None:
        raise EngineError("no fractional target on a fractional master")
    u, v = target_pair
    same = Restriction(
        state={"same": tuple(state.get("same", ())) + ((u, v),)},
        note=f"same {u},{v}",
        column_filter=lambda s, _u=u, _v=v: (_u in s) == (_v in s),
    )
    diff = Restriction(
        state={"diff": tuple(state.get("diff", ())) + ((u, v),)},
        note=f"diff {u},{v}",
        column_filter=lambda s, _u=u, _v=v: not (_u in s and _v in s),
    )
    return [same, diff]


def solve_extended(
    inst: KCutInstance,
    time_limit: float = math.inf,
    node_limit: int = 10_000_000,
    clique_mode: str = "edges",
    verbose: bool = False,
) -> tuple[KCutSolution | None, SolveReport]:
    """Branch and price over component sets.

    Master: pick k sets, each vertex in at most one, each clique of the
    cover touching at most one. Columns beyond the singleton seeds come
    from the pricing min cut. Artificial slack columns (heavily
    penalized, attached by row key) keep every node LP feasible so a
    restricted column pool can never prune a feasible subtree.
    """
    g, k = inst.graph, inst.k
    n = g.n
    t0 = time.monotonic()
    stable = _max_stable_set(g)
    if len(stable) < k:
        return None, SolveReport(
            "infeasible", None, None, math.nan, 0, {}, 0, time.monotonic() - t0
        )
    stable = stable[:k]
    cliques = build_clique_cover(g, clique_mode)
    nc = len(cliques)
    big_m = float(n + 1)

    lp = LinearProgram("max")
    payloads: list[Any] = []
    for v in range(n):
        lp.add_column(1.0, 0.0, 1.0)
        payloads.append(frozenset((v,)))
    for _ in range(n):  # vert-eq slacks, one per potential keep row
        lp.add_column(-big_m, 0.0, 1.0)
        payloads.append(None)
    lp.add_column(-big_m, 0.0, float(k))  # count shortfall slack
    payloads.append(None)

    row_keys: list[Any] = []
    for v in range(n):
        lp.add_row({v: 1.0}, "<=", 1.0)
        row_keys.append(("vert", v))
    for ci, c in enumerate(cliques):
        lp.add_row({v: 1.0 for v in c}, "<=", 1.0)
        row_keys.append(("clique", ci))
    lp.add_row({v: 1.0 for v in range(n)} | {2 * n: 1.0}, "=", float(k))
    row_keys.append(("count",))

    integer = [True] * n + [False] * (n + 1)
    pool: set[frozenset[int]] = {frozenset((v,)) for v in range(n)}

    def slack_key_coeffs() -> None:
        pass

    # Attach each vert-eq slack to its (future) keep row by key.
    slack_cols = {("vert-eq", v): n + v for v in range(n)}

    def price(ctx: CallbackContext) -> list[NewColumn]:
        duals = ctx.duals_by_key
        banned, same, diff = _branch_state(ctx.state)
        built = _build_groups(n, banned, same, diff)
        if built is None:
            return []
        groups, gpairs = built
        if not groups:
            return []
        nu = [
            sum(
                1.0 - duals.get(("vert", v), 0.0) - duals.get(("vert-eq", v), 0.0)
                for v in grp
            )
            for grp in groups
        ]
        pi = [max(0.0, duals.get(("clique", ci), 0.0)) for ci in range(nc)]
        gamma = duals.get(("count",), 0.0)
        if gpairs:
            found = _price_mip(groups, nu, list(cliques), pi, gpairs)
        else:
            found = _price_min_cut(groups, nu, list(cliques), pi)
        if found is None:
            return []
        value, subset = found
        if value <= gamma + PRICE_TOL or subset in pool:
            return []
        pool.add(subset)
        coeffs: dict[Any, float] = {("count",): 1.0}
        for v in subset:
            coeffs[("vert", v)] = 1.0
            coeffs[("vert-eq", v)] = 1.0
        for ci, c in enumerate(cliques):
            if subset.intersection(c):
                coeffs[("clique", ci)] = 1.0
        return [NewColumn(float(len(subset)), 0.0, 1.0, coeffs, True, subset)]

    warm = [0.0] * (2 * n + 1)
    for v in stable:
        warm[v] = 1.0

    model = MipModel(
        lp,
        integer,
        row_keys=row_keys,
        pricer=PricerCallback("kcut-sets", price),
        branch_rule=two_level_branch,
        column_payloads=payloads,
        warm_start=tuple(warm),
        time_limit=time_limit,
        node_limit=node_limit,
        verbose=verbose,
    )
    report = solve_mip(model)
    if report.incumbent is None:
        return None, report
    x = report.incumbent
    parts = [
        s for j, s in enumerate(model.column_payloads or [])
        if isinstance(s, frozenset) and x[j] > 0.5
    ]
    # Columns added during the solve carry their payload beyond the model.
    if len(parts) != k:
        parts = _incumbent_sets(report, model, n, k)
    return _decode_components(g, parts), report


def _incumbent_sets(report, model, n: int, k: int) -> list[frozenset[int]]:
    raise EngineError("incumbent does not decode into k sets")
