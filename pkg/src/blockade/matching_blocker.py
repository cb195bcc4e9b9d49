"""Matching blockers on bipartite graphs.

kappa(G) = min over nonempty U' of |N(U')| - |U'| measures how far the
graph is from losing its complete matching: removing fewer than kappa
vertices of V never destroys it (Hall with margin). kappa is computed by
one small LP per U vertex; the constraint matrix is totally unimodular,
so simplex vertices are integral and the minimizing support is a witness.

The partitioned variant assigns every v in V to one of m pre-set U
parts, maximizing z = min over parts of kappa within the part. It is
solved by branch and cut: Hall rows are separated exactly with the same
weighted LPs, pair rows couple two parts through their common
neighborhood and are separated heuristically over the sets the exact
pass produced.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Sequence

from .graphs import BipartiteGraph, neighborhood_of_set
from .instances import BcmbpInstance, MbcmbpInstance
from .matching import has_complete_matching, maximum_matching
from .mip import Cut, CutCallback, MipModel, SolveReport, solve_mip
from .simplex import LinearProgram, LpSolution, solve_lp

INT_SNAP = 1e-6
VIOLATION_MIN = 1e-6
MAX_CUTS_PER_FAMILY = 50


@dataclass(frozen=True)
class KappaResult:
    """kappa value with a witnessing subset; kappa = |neighbors| - |witness|."""

    kappa: int
    witness_u: tuple[int, ...]
    neighbors: tuple[int, ...]


@dataclass(frozen=True)
class MbcmbpSolution:
    z: int
    partition_v: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class HallCut:
    """Row: sum of x_v^part over v in neighbors - z >= |subset_u|."""

    part: int
    subset_u: tuple[int, ...]
    neighbors: tuple[int, ...]

    @property
    def rhs(self) -> int:
        return len(self.subset_u)

    def lhs(self, x_star: Sequence[Sequence[float]], z_star: float) -> float:
        return sum(x_star[v][self.part] for v in self.neighbors) - z_star

    def violation(self, x_star, z_star) -> float:
        return self.rhs - self.lhs(x_star, z_star)


@dataclass(frozen=True)
class PairCut:
    """Row coupling parts s and t through their common neighborhood.

    z + (1/2) * sum over common v, other parts i of x_v^i
      + sum over v exclusive to the smaller side, other parts i of x_v^i
      <= k_sup.
    """

    part_s: int
    part_t: int
    subset_s: tuple[int, ...]
    subset_t: tuple[int, ...]
    common: tuple[int, ...]
    exclusive_min: tuple[int, ...]
    k_sup: float

    def lhs(self, x_star: Sequence[Sequence[float]], z_star: float) -> float:
        m = len(x_star[0]) if x_star else 0
        others = [i for i in range(m) if i not in (self.part_s, self.part_t)]
        total = z_star
        for v in self.common:
            total += 0.5 * sum(x_star[v][i] for i in others)
        for v in self.exclusive_min:
            total += sum(x_star[v][i] for i in others)
        return total

    def violation(self, x_star, z_star) -> float:
        return self.lhs(x_star, z_star) - self.k_sup


def _deficiency_lp(
    g: BipartiteGraph,
    part: Sequence[int],
    obj_part: Sequence[float],
    obj_v: Sequence[float],
    sense: str,
    fixed_u: int,
    extra_rows: Sequence[tuple[dict[int, float], str, float]] = (),
) -> LpSolution:
    """LP over x_u (u in part, local cols 0..) and x_v (cols |part|..).

    Constraints: x_u <= x_v on every part edge, x_{fixed_u} = 1, all
    vars in [0,1]. The objective and appended rows (stated over the same
    column layout) vary across the lexicographic stages.
    """
    np = len(part)
    lp = LinearProgram(sense)
    for pu, u in enumerate(part):
        lo = 1.0 if u == fixed_u else 0.0
        lp.add_column(obj_part[pu], lo, 1.0)
    for v in range(g.size_v):
        lp.add_column(obj_v[v], 0.0, 1.0)
    for pu, u in enumerate(part):
        for v in g.adj_u[u]:
            lp.add_row({pu: 1.0, np + v: -1.0}, "<=", 0.0)
    for coeffs, rel, rhs in extra_rows:
        lp.add_row(coeffs, rel, rhs)
    return solve_lp(lp)


def _extract_subset(part: Sequence[int], sol: LpSolution) -> tuple[int, ...]:
    return tuple(u for pu, u in enumerate(part) if sol.primal[pu] > 0.5)


def _min_deficiency(
    g: BipartiteGraph,
    part: Sequence[int],
    weights: Sequence[float],
    lexicographic: bool,
    lp_observer: Callable[[LpSolution], None] | None = None,
) -> tuple[float, tuple[int, ...], tuple[int, ...]]:
    """Minimize sum of w over N(U') - |U'| over nonempty U' within part.

    With lexicographic=True, among minimizers prefers larger |U'| then
    smaller |N(U')| (two more LPs per u, each restricted to the optimal
    face of the previous stage, which keeps the vertices integral).
    """
    part = list(part)
    np = len(part)
    nv = g.size_v
    minus_ones = [-1.0] * np
    zeros_p, ones_p = [0.0] * np, [1.0] * np
    zeros_v, ones_v = [0.0] * nv, [1.0] * nv
    best: tuple[float, int, int] | None = None
    best_sets: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    for u in part:
        sol = _deficiency_lp(g, part, minus_ones, weights, "min", u)
        if lp_observer is not None:
            lp_observer(sol)
        if sol.status != "optimal":
            raise RuntimeError(f"deficiency LP ended {sol.status}")
        if lexicographic:
            obj_row = {pu: -1.0 for pu in range(np)}
            for v in range(nv):
                if weights[v]:
                    obj_row[np + v] = weights[v]
            stage2 = [(obj_row, "=", sol.objective)]
            sol = _deficiency_lp(g, part, ones_p, zeros_v, "max", u, stage2)
            if lp_observer is not None:
                lp_observer(sol)
            stage3 = stage2 + [({pu: 1.0 for pu in range(np)}, "=", sol.objective)]
            sol = _deficiency_lp(g, part, zeros_p, ones_v, "min", u, stage3)
            if lp_observer is not None:
                lp_observer(sol)
        subset = _extract_subset(part, sol)
        neighbors = tuple(sorted(neighborhood_of_set(g, subset)))
        value = sum(weights[v] for v in neighbors) - len(subset)
        key = (value, -len(subset), len(neighbors))
        if best is None or key < best:
            best = key
            best_sets = (subset, neighbors)
    assert best is not None and best_sets is not None
    return best[0], best_sets[0], best_sets[1]


def kappa(
    inst: BcmbpInstance,
    lp_observer: Callable[[LpSolution], None] | None = None,
) -> KappaResult:
    """Exact kappa via one LP per U vertex; vertices are integral (TU)."""
    g = inst.graph

    def observe(sol: LpSolution) -> None:
        for x in sol.primal:
            assert min(abs(x), abs(x - 1.0)) <= INT_SNAP, "non-integral LP vertex"
        if lp_observer is not None:
            lp_observer(sol)

    value, subset, neighbors = _min_deficiency(
        g, range(g.size_u), [1.0] * g.size_v, False, observe
    )
    return KappaResult(int(round(value)), subset, neighbors)


def is_k_cm(inst: BcmbpInstance, k: int) -> bool:
    """Complete matching survives every removal of k-1 vertices of V."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return kappa(inst).kappa >= k


def _exact_minimizers(
    inst: MbcmbpInstance, x_star: Sequence[Sequence[float]]
) -> list[tuple[float, tuple[int, ...], tuple[int, ...]]]:
    """Per part: the subset minimizing weighted deficiency under x_star."""
    g = inst.graph
    out = []
    for i, part in enumerate(inst.parts):
        weights = [max(0.0, min(1.0, x_star[v][i])) for v in range(g.size_v)]
        out.append(_min_deficiency(g, part, weights, True))
    return out


def separate_hall_cuts(
    inst: MbcmbpInstance,
    x_star: Sequence[Sequence[float]],
    z_star: float,
    minimizers: Sequence[tuple[float, tuple[int, ...], tuple[int, ...]]] | None = None,
) -> list[HallCut]:
    """Exact separation: weighted deficiency LPs per part, split into
    connected components of G[U' + N(U')], emitting each violated piece."""
    g = inst.graph
    if minimizers is None:
        minimizers = _exact_minimizers(inst, x_star)
    cuts: list[HallCut] = []
    for i, (value, subset, neighbors) in enumerate(minimizers):
        if not subset or value >= z_star - VIOLATION_MIN:
            continue
        for comp_u, comp_n in _split_components(g, subset):
            cut = HallCut(i, comp_u, comp_n)
            if cut.violation(x_star, z_star) >= VIOLATION_MIN:
                cuts.append(cut)
            if len(cuts) >= MAX_CUTS_PER_FAMILY:
                return cuts
    return cuts


def _split_components(
    g: BipartiteGraph, subset: tuple[int, ...]
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Connected components of G[subset + N(subset)], as (U part, its N)."""
    remaining = set(subset)
    comps = []
    while remaining:
        seed = min(remaining)
        comp_u, frontier_v = {seed}, set(g.adj_u[seed])
        grew = True
        while grew:
            grew = False
            for u in sorted(remaining - comp_u):
                if any(v in frontier_v for v in g.adj_u[u]):
                    comp_u.add(u)
                    frontier_v.update(g.adj_u[u])
                    grew = True
        remaining -= comp_u
        comps.append((tuple(sorted(comp_u)), tuple(sorted(frontier_v))))
    return comps


def separate_pair_cuts(
    inst: MbcmbpInstance,
    x_star: Sequence[Sequence[float]],
    z_star: float,
    found_sets: Sequence[tuple[int, ...]],
) -> list[PairCut]:
    """Heuristic separation over all couples of the exact pass's sets."""
    g = inst.graph
    cuts: list[PairCut] = []
    m = inst.m
    for s in range(m):
        for t in range(s + 1, m):
            sub_s, sub_t = found_sets[s], found_sets[t]
            if not sub_s or not sub_t:
                continue
            n_s = neighborhood_of_set(g, sub_s)
            n_t = neighborhood_of_set(g, sub_t)
            common = n_s & n_t
            ex_s, ex_t = n_s - common, n_t - common
            k_s = len(ex_s) - len(sub_s)
            k_t = len(ex_t) - len(sub_t)
            k_lo, k_hi = min(k_s, k_t), max(k_s, k_t)
            if k_hi - k_lo >= len(common):
                k_sup = float(k_lo + len(common))
            else:
                k_sup = k_hi + (len(common) - (k_hi - k_lo)) / 2.0
            ex_min = ex_s if k_s < k_t else ex_t
            cut = PairCut(
                s, t, tuple(sorted(sub_s)), tuple(sorted(sub_t)),
                tuple(sorted(common)), tuple(sorted(ex_min)), k_sup,
            )
            if cut.violation(x_star, z_star) >= VIOLATION_MIN:
                cuts.append(cut)
            if len(cuts) >= MAX_CUTS_PER_FAMILY:
                return cuts
    return cuts


def _kappa_of_part(
    g: BipartiteGraph, part: Sequence[int], allowed_v: Sequence[int]
) -> int:
    """kappa of G[part + allowed_v], by definition (small sets only)."""
    allowed = set(allowed_v)
    best = None
    part = list(part)
    for mask in range(1, 1 << len(part)):
        subset = [part[j] for j in range(len(part)) if mask >> j & 1]
        n = len(neighborhood_of_set(g, subset) & allowed) - len(subset)
        if best is None or n < best:
            best = n
    return best if best is not None else 0


def solve_mbcmbp(
    inst: MbcmbpInstance,
    time_limit: float = math.inf,
    node_limit: int = 10_000_000,
    verbose: bool = False,
) -> tuple[MbcmbpSolution, SolveReport]:
    """Branch and cut for the partitioned matching blocker.

    Requires that a complete matching survives the removal of any single
    v in V; otherwise z = 0 immediately. The model keeps the relaxed
    assignment rows (each v in at most one part) and repairs unassigned
    vertices into part 0 afterwards, which never lowers any part's kappa.
    """
    g = inst.graph
    m = inst.m
    nv = g.size_v
    t0 = time.monotonic()

    def trivial(z: int) -> tuple[MbcmbpSolution, SolveReport]:
        parts_v: list[list[int]] = [[] for _ in range(m)]
        part_of_u = {u: i for i, part in enumerate(inst.parts) for u in part}
        matched = dict(maximum_matching(g))
        assigned = {v: part_of_u[u] for u, v in matched.items()}
        for v in range(nv):
            parts_v[assigned.get(v, 0)].append(v)
        sol = MbcmbpSolution(z, tuple(tuple(p) for p in parts_v))
        report = SolveReport(
            "optimal", float(z), None, float(z), 0, {}, 0,
            time.monotonic() - t0,
        )
        return sol, report

    for v in range(nv):
        if not has_complete_matching(g, removed_v=(v,)):
            return trivial(0)

    per_part_ub = [
        kappa(BcmbpInstance(_part_graph(g, part))).kappa for part in inst.parts
    ]
    z_ub = min(per_part_ub)
    if z_ub <= 0:
        return trivial(0)

    def col(v: int, i: int) -> int:
        return i * nv + v

    z_col = m * nv
    lp = LinearProgram("max")
    for _ in range(m * nv):
        lp.add_column(0.0, 0.0, 1.0)
    lp.add_column(1.0, 0.0, float(z_ub))
    row_keys = []
    for v in range(nv):
        lp.add_row({col(v, i): 1.0 for i in range(m)}, "<=", 1.0)
        row_keys.append(("assign", v))

    def reshape(x: Sequence[float]) -> list[list[float]]:
        return [[x[col(v, i)] for i in range(m)] for v in range(nv)]

    def separate(ctx) -> list[Cut]:
        xs = reshape(ctx.x)
        zs = ctx.x[z_col]
        minimizers = _exact_minimizers(inst, xs)
        out: list[Cut] = []
        for hc in separate_hall_cuts(inst, xs, zs, minimizers):
            coeffs = {col(v, hc.part): 1.0 for v in hc.neighbors}
            coeffs[z_col] = -1.0
            out.append(Cut(("hall", hc.part, hc.subset_u), coeffs, ">=", float(hc.rhs)))
        found = [mz[1] for mz in minimizers]
        for pc in separate_pair_cuts(inst, xs, zs, found):
            others = [i for i in range(m) if i not in (pc.part_s, pc.part_t)]
            coeffs = {z_col: 1.0}
            for v in pc.common:
                for i in others:
                    coeffs[col(v, i)] = coeffs.get(col(v, i), 0.0) + 0.5
            for v in pc.exclusive_min:
                for i in others:
                    coeffs[col(v, i)] = coeffs.get(col(v, i), 0.0) + 1.0
            key = ("pair", pc.part_s, pc.part_t, pc.subset_s, pc.subset_t)
            out.append(Cut(key, coeffs, "<=", pc.k_sup))
        return out

    warm = _matching_warm_start(inst, m, nv, col, z_col)

    model = MipModel(
        lp,
        [True] * (m * nv + 1),
        row_keys=row_keys,
        cut_callbacks=[CutCallback("hall", "fractional-too", separate)],
        warm_start=warm,
        time_limit=time_limit,
        node_limit=node_limit,
        verbose=verbose,
    )
    report = solve_mip(model)
    if report.incumbent is None:
        return trivial(0)

    x = report.incumbent
    parts_v = [[] for _ in range(m)]
    for v in range(nv):
        home = 0
        for i in range(m):
            if x[col(v, i)] > 0.5:
                home = i
                break
        parts_v[home].append(v)
    z = int(round(x[z_col]))
    return MbcmbpSolution(z, tuple(tuple(p) for p in parts_v)), report


def _part_graph(g: BipartiteGraph, part: Sequence[int]) -> BipartiteGraph:
    """The subgraph on one U part with the whole V side, U relabeled."""
    edges = [
        (pu, v) for pu, u in enumerate(part) for v in g.adj_u[u]
    ]
    return BipartiteGraph(len(part), g.size_v, edges)


def _matching_warm_start(inst, m, nv, col, z_col):
    """Assign each matched v to its mate's part: every part keeps a
    complete matching, so z >= 0 is certified."""
    g = inst.graph
    part_of_u = {u: i for i, part in enumerate(inst.parts) for u in part}
    assigned = {v: part_of_u[u] for u, v in maximum_matching(g)}
    parts_v: list[list[int]] = [[] for _ in range(m)]
    for v in range(nv):
        parts_v[assigned.get(v, 0)].append(v)
    z = min(
        _kappa_of_part(g, part, parts_v[i]) for i, part in enumerate(inst.parts)
    )
    if z < 0:
        return None
    x = [0.0] * (m * nv + 1)
    for i, vs in enumerate(parts_v):
        for v in vs:
            x[col(v, i)] = 1.0
    x[z_col] = float(z)
    return tuple(x)
