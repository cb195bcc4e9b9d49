"""Problem instance types.

Kept free of solver imports so the reference oracles and the file-format
layer can use them without pulling in the LP machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphs import BipartiteGraph, Digraph, GraphError, UndirectedGraph


@dataclass(frozen=True)
class BcmbpInstance:
    """Complete-matching robustness on a bipartite graph.

    kappa(G) = min over nonempty U' of |N(U')| - |U'|; the graph is k-CM
    exactly when kappa >= k. The smaller side is U (enforced here).
    """

    graph: BipartiteGraph

    def __post_init__(self):
        if self.graph.size_u > self.graph.size_v:
            raise GraphError("U side must not be larger than V side")
        if self.graph.size_u == 0:
            raise GraphError("U side must be nonempty")


@dataclass(frozen=True)
class MbcmbpInstance:
    """Partitioned variant: U comes pre-split into parts U_1..U_m and the
    solver assigns every V vertex to exactly one part, maximizing the worst
    per-part matching robustness."""

    graph: BipartiteGraph
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = set()
        for part in self.parts:
            if not part:
                raise GraphError("every U part must be nonempty")
            for u in part:
                if not 0 <= u < self.graph.size_u:
                    raise GraphError(f"part vertex {u} out of range")
                if u in seen:
                    raise GraphError(f"vertex {u} in two parts")
                seen.add(u)
        if len(seen) != self.graph.size_u:
            raise GraphError("parts must partition the U side")
        if len(self.parts) < 1:
            raise GraphError("need at least one part")

    @property
    def m(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class KCutInstance:
    """Remove fewest vertices so the rest has at least k components."""

    graph: UndirectedGraph
    k: int

    def __post_init__(self):
        if not 2 <= self.k <= max(self.graph.n, 2):
            raise GraphError(f"k={self.k} out of range")


@dataclass(frozen=True)
class MvvspInstance:
    """Remove fewest internal vertices so every s-t path is longer than d."""

    graph: Digraph
    s: int
    t: int
    d: int

    def __post_init__(self):
        if self.s == self.t:
            raise GraphError("s and t must differ")
        if not (0 <= self.s < self.graph.n and 0 <= self.t < self.graph.n):
            raise GraphError("endpoint out of range")
        if self.d < 1:
            raise GraphError("d must be positive")
        for a in self.graph.arcs:
            if a.length < 1:
                raise GraphError("arc lengths must be positive")


@dataclass(frozen=True)
class MfbpInstance:
    """Cheapest arc removal forcing the max flow down to at most phi.

    Arc capacity slots hold the flow capacities, cost slots the removal
    costs.
    """

    graph: Digraph
    s: int
    t: int
    phi: int

    def __post_init__(self):
        if self.s == self.t:
            raise GraphError("s and t must differ")
        if not (0 <= self.s < self.graph.n and 0 <= self.t < self.graph.n):
            raise GraphError("endpoint out of range")
        if self.phi < 0:
            raise GraphError("phi must be nonnegative")


@dataclass(frozen=True)
class MfipInstance:
    """Budgeted arc interdiction minimizing the residual max flow.

    Arc capacity slots hold the flow capacities, cost slots the
    interdiction costs; budget bounds the total interdiction cost.
    """

    graph: Digraph
    s: int
    t: int
    budget: int

    def __post_init__(self):
        if self.s == self.t:
            raise GraphError("s and t must differ")
        if not (0 <= self.s < self.graph.n and 0 <= self.t < self.graph.n):
            raise GraphError("endpoint out of range")
        if self.budget < 0:
            raise GraphError("budget must be nonnegative")


@dataclass(frozen=True)
class CipInstance:
    """Remove at most k vertices to minimize the largest surviving clique."""

    graph: UndirectedGraph
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise GraphError("k must be nonnegative")


@dataclass(frozen=True)
class GosdcInstance:
    """Makespan minimization with machine and incompatibility conflicts.

    Job j runs for ptimes[j] time units on machine machine_of[j]. Two jobs
    on the same machine never overlap, and neither do jobs listed in
    incompatible.
    """

    machines: int
    machine_of: tuple[int, ...]
    ptimes: tuple[int, ...]
    incompatible: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        n = len(self.machine_of)
        if len(self.ptimes) != n:
            raise GraphError("machine_of and ptimes lengths differ")
        if self.machines < 1:
            raise GraphError("need at least one machine")
        for i in self.machine_of:
            if not 0 <= i < self.machines:
                raise GraphError(f"machine id {i} out of range")
        for p in self.ptimes:
            if p < 1:
                raise GraphError("processing times must be positive")
        canon = set()
        for a, b in self.incompatible:
            if a == b or not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"bad incompatible pair ({a},{b})")
            canon.add((a, b) if a < b else (b, a))
        object.__setattr__(self, "incompatible", tuple(sorted(canon)))

    @property
    def jobs(self) -> int:
        return len(self.machine_of)

    def conflict_pairs(self) -> tuple[tuple[int, int], ...]:
        """All pairs that may not overlap: same machine or incompatible."""
        pairs = set(self.incompatible)
        n = self.jobs
        for a in range(n):
            for b in range(a + 1, n):
                if self.machine_of[a] == self.machine_of[b]:
                    pairs.add((a, b))
        return tuple(sorted(pairs))
