"""Branch-and-cut / branch-and-price engine on top of the simplex core.

Depth-first search. At every node the LP relaxation is solved, then cutting
planes are separated to quiescence, then the pricer is asked for columns,
alternating until neither adds anything. Integer-valued candidates must
survive the lazy (integer-scope) callbacks before they become incumbents.

Rows are identified by problem-supplied keys so that columns generated
later can state their coefficients in earlier rows; cuts are global (valid
everywhere), branching restrictions live only in their subtree.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

from .simplex import (
    AT_LOWER,
    BASIC,
    LinearProgram,
    LpError,
    SimplexSolver,
)

INT_TOL = 1e-6
CUT_VIOLATION_MIN = 1e-6


class EngineError(RuntimeError):
    """Contract violation inside the solve (callbacks, basis, limits misuse)."""


@dataclass(frozen=True)
class Cut:
    """One violated inequality returned by a separator."""

    key: Any
    coeffs: Mapping[int, float]
    relation: str
    rhs: float


@dataclass(frozen=True)
class NewColumn:
    """One improving column returned by a pricer."""

    obj: float
    lower: float
    upper: float
    coeffs_by_key: Mapping[Any, float]
    integer: bool = True
    payload: Any = None


@dataclass(frozen=True)
class Restriction:
    """What a branch child adds: bound changes, local rows, state updates.

    column_filter, when given, is a predicate over column payloads that
    holds in the whole subtree: columns whose payload it rejects are fixed
    to zero there, including columns priced in later elsewhere.
    """

    bounds: tuple[tuple[int, float, float], ...] = ()
    rows: tuple[tuple[Any, Mapping[int, float], str, float], ...] = ()
    state: Mapping[str, Any] = field(default_factory=dict)
    note: str = ""
    column_filter: Callable[[Any], bool] | None = None


@dataclass
class CallbackContext:
    x: tuple[float, ...]
    duals_by_key: dict[Any, float]
    state: dict[str, Any]
    depth: int
    payloads: Sequence[Any]
    lower: Sequence[float]
    upper: Sequence[float]
    objective: float


@dataclass
class CutCallback:
    name: str
    scope: str  # "integer-only" | "fractional-too"
    separate: Callable[[CallbackContext], list[Cut]]

    def __post_init__(self):
        if self.scope not in ("integer-only", "fractional-too"):
            raise EngineError(f"unknown cut scope {self.scope!r}")


@dataclass
class PricerCallback:
    name: str
    price: Callable[[CallbackContext], list[NewColumn]]


@dataclass
class MipModel:
    lp: LinearProgram
    integer: list[bool]
    row_keys: list[Any] | None = None
    cut_callbacks: list[CutCallback] = field(default_factory=list)
    pricer: PricerCallback | None = None
    branch_rule: Callable[[CallbackContext], list[Restriction]] | None = None
    column_payloads: list[Any] | None = None
    warm_start: tuple[float, ...] | None = None
    time_limit: float = math.inf
    node_limit: int = 10_000_000
    gap_tol: float = 1e-9
    verbose: bool = False


def register_branch_rule(
    model: MipModel, rule: Callable[[CallbackContext], list[Restriction]]
) -> None:
    model.branch_rule = rule


@dataclass(frozen=True)
class SolveReport:
    status: str  # "optimal" | "feasible" | "infeasible" | "limit"
    objective: float | None
    incumbent: tuple[float, ...] | None
    bound: float
    nodes: int
    cuts_added: dict[str, int]
    columns_added: int
    wall_seconds: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "status": self.status,
                "objective": self.objective,
                "incumbent": list(self.incumbent) if self.incumbent else None,
                "bound": self.bound,
                "nodes": self.nodes,
                "cutsAdded": dict(self.cuts_added),
                "columnsAdded": self.columns_added,
                "wallSeconds": round(self.wall_seconds, 4),
            }
        )


@dataclass
class _ColumnDef:
    obj: float
    lower: float
    upper: float
    integer: bool
    coeffs_by_key: dict[Any, float]
    payload: Any


@dataclass
class _RowDef:
    key: Any
    coeffs: dict[int, float]
    relation: str
    rhs: float


class _Node:
    __slots__ = ("depth", "restriction", "parent_bound", "warm", "state")

    def __init__(self, depth, restriction, parent_bound, warm, state):
        self.depth = depth
        self.restriction = restriction
        self.parent_bound = parent_bound
        self.warm = warm
        self.state = state


class _Engine:
    def __init__(self, model: MipModel):
        self.model = model
        lp = model.lp
        if len(model.integer) != lp.num_cols:
            raise EngineError("integer flag list does not match column count")
        for j, is_int in enumerate(model.integer):
            if is_int and not (
                math.isfinite(lp.lower[j]) and math.isfinite(lp.upper[j])
            ):
                raise EngineError(f"integer column {j} must have finite bounds")
        keys = model.row_keys
        if keys is None:
            keys = [("row", i) for i in range(lp.num_rows)]
        if len(keys) != lp.num_rows:
            raise EngineError("row key list does not match row count")
        payloads = model.column_payloads
        if payloads is None:
            payloads = [None] * lp.num_cols
        if len(payloads) != lp.num_cols:
            raise EngineError("payload list does not match column count")

        self.sense = lp.sense
        self.cols: list[_ColumnDef] = [
            _ColumnDef(
                lp.obj[j], lp.lower[j], lp.upper[j], model.integer[j], {}, payloads[j]
            )
            for j in range(lp.num_cols)
        ]
        self.base_rows: list[_RowDef] = [
            _RowDef(keys[i], dict(r.coeffs), r.relation, r.rhs)
            for i, r in enumerate(lp.rows)
        ]
        self.cut_rows: list[_RowDef] = []
        self.seen_cut_keys: set[Any] = set()
        self.cuts_added: dict[str, int] = {cb.name: 0 for cb in model.cut_callbacks}
        self.columns_added = 0
        self.nodes = 0
        self.incumbent: tuple[float, ...] | None = None
        self.incumbent_obj: float | None = None
        self.t0 = time.monotonic()
        self.minimize = self.sense == "min"

    # objective comparison helpers: everything below is in USER sense.
    def _better(self, a: float, b: float) -> bool:
        return a < b if self.minimize else a > b

    def _prune_bound(self, bound: float) -> bool:
        if self.incumbent_obj is None:
            return False
        slack = self.model.gap_tol * (1 + abs(self.incumbent_obj)) + 1e-12
        if self.minimize:
            return bound >= self.incumbent_obj - slack
        return bound <= self.incumbent_obj + slack

    def _elapsed(self) -> float:
        return time.monotonic() - self.t0

    def _build_lp(self, local_rows: list[_RowDef], bounds, filters) -> tuple[LinearProgram, list[_RowDef]]:
        lp = LinearProgram(self.sense)
        lower, upper = bounds
        for j, col in enumerate(self.cols):
            if col.payload is not None and any(not f(col.payload) for f in filters):
                lp.add_column(col.obj, 0.0, 0.0)
            else:
                lp.add_column(col.obj, lower[j], upper[j])
        rows = self.base_rows + self.cut_rows + local_rows
        for r in rows:
            coeffs = dict(r.coeffs)
            for j, col in enumerate(self.cols):
                a = col.coeffs_by_key.get(r.key)
                if a:
                    coeffs[j] = coeffs.get(j, 0.0) + a
            lp.add_row(coeffs, r.relation, r.rhs)
        return lp, rows

    def _warm_tags(self, rows: list[_RowDef], warm) -> tuple[tuple, tuple] | None:
        if warm is None:
            return None
        col_tags, row_tag_map = warm
        if len(col_tags) < len(self.cols):
            col_tags = tuple(col_tags) + (AT_LOWER,) * (len(self.cols) - len(col_tags))
        row_tags = tuple(row_tag_map.get(id(r), BASIC) for r in rows)
        return col_tags, row_tags

    def solve(self) -> SolveReport:
        model = self.model
        state0: dict[str, Any] = {}
        neutral = -math.inf if self.minimize else math.inf
        root = _Node(0, Restriction(), neutral, None, state0)
        stack: list[tuple[str, Any]] = [("node", root)]
        lower = [c.lower for c in self.cols]
        upper = [c.upper for c in self.cols]
        local_rows: list[_RowDef] = []
        filters: list[Callable[[Any], bool]] = []
        status_forced: str | None = None

        if model.warm_start is not None:
            self._try_warm_start(model.warm_start)

        best_open_bound: float | None = None

        while stack:
            kind, payload = stack.pop()
            if kind == "undo":
                saved_bounds, nrows, nfilters = payload
                for j, lo, hi in saved_bounds:
                    lower[j], upper[j] = lo, hi
                del local_rows[nrows:]
                del filters[nfilters:]
                continue
            node: _Node = payload
            if self._elapsed() > model.time_limit or self.nodes >= model.node_limit:
                status_forced = "limit"
                # Account for this and all remaining open nodes in the bound.
                bounds_left = [node.parent_bound] + [
                    p.parent_bound for k, p in stack if k == "node"
                ]
                cand = min(bounds_left) if self.minimize else max(bounds_left)
                if best_open_bound is None or self._better(cand, best_open_bound):
                    best_open_bound = cand
                continue

            # Apply restriction; push the undo record first.
            saved = []
            for j, lo, hi in node.restriction.bounds:
                while j >= len(lower):
                    lower.append(self.cols[len(lower)].lower)
                    upper.append(self.cols[len(upper)].upper)
                saved.append((j, lower[j], upper[j]))
                lower[j], upper[j] = lo, hi
            nrows_before = len(local_rows)
            for key, coeffs, rel, rhs in node.restriction.rows:
                local_rows.append(_RowDef(key, dict(coeffs), rel, rhs))
            nfilters_before = len(filters)
            if node.restriction.column_filter is not None:
                filters.append(node.restriction.column_filter)
            stack.append(("undo", (saved, nrows_before, nfilters_before)))
            state = dict(node.state)
            state.update(node.restriction.state)

            if self._prune_bound(node.parent_bound):
                continue

            self.nodes += 1
            result = self._process_node(node, lower, upper, local_rows, filters, state)
            if result is None:
                continue
            ctx, children = result
            for child in reversed(children):
                stack.append(
                    (
                        "node",
                        _Node(node.depth + 1, child, ctx.objective, self._last_warm, dict(ctx.state)),
                    )
                )

        wall = self._elapsed()
        if status_forced == "limit":
            bound = best_open_bound
            if bound is None:
                bound = self.incumbent_obj if self.incumbent_obj is not None else math.nan
            if self.incumbent is not None:
                return self._report("feasible", bound, wall)
            return self._report("limit", bound, wall)
        if self.incumbent is None:
            return self._report("infeasible", math.nan, wall)
        return self._report("optimal", self.incumbent_obj, wall)

    def _report(self, status: str, bound: float, wall: float) -> SolveReport:
        return SolveReport(
            status=status,
            objective=self.incumbent_obj,
            incumbent=self.incumbent,
            bound=bound,
            nodes=self.nodes,
            cuts_added=dict(self.cuts_added),
            columns_added=self.columns_added,
            wall_seconds=wall,
        )

    def _try_warm_start(self, x: tuple[float, ...]) -> None:
        """Install a problem-supplied starting point as incumbent if valid."""
        if len(x) != len(self.cols):
            return
        for j, col in enumerate(self.cols):
            if x[j] < col.lower - INT_TOL or x[j] > col.upper + INT_TOL:
                return
            if col.integer and abs(x[j] - round(x[j])) > INT_TOL:
                return
        for r in self.base_rows:
            lhs = sum(a * x[j] for j, a in r.coeffs.items())
            if r.relation == "<=" and lhs > r.rhs + 1e-7:
                return
            if r.relation == ">=" and lhs < r.rhs - 1e-7:
                return
            if r.relation == "=" and abs(lhs - r.rhs) > 1e-7:
                return
        obj = sum(col.obj * x[j] for j, col in enumerate(self.cols))
        snapped = tuple(
            float(round(v)) if col.integer else float(v)
            for v, col in zip(x, self.cols)
        )
        # Lazy constraints still apply: run integer-scope callbacks on it.
        ctx = CallbackContext(
            snapped, {}, {}, 0, [c.payload for c in self.cols],
            [c.lower for c in self.cols], [c.upper for c in self.cols], obj,
        )
        for cb in self.model.cut_callbacks:
            if cb.separate(ctx):
                return
        self.incumbent = snapped
        self.incumbent_obj = obj

    def _process_node(self, node, lower, upper, local_rows, filters, state):
        model = self.model
        self._last_warm = node.warm
        warm = node.warm
        while True:
            lp, rows = self._build_lp(local_rows, (lower, upper), filters)
            tags = self._warm_tags(rows, warm)
            sol = SimplexSolver(lp).solve(tags)
            if sol.status == "infeasible":
                self._trace(node.depth, None, "infeasible")
                return None
            if sol.status == "unbounded":
                raise EngineError("node LP unbounded; model must be bounded")
            warm = (sol.col_status, {id(r): t for r, t in zip(rows, sol.row_status)})
            self._last_warm = warm
            if self._prune_bound(sol.objective):
                self._trace(node.depth, sol.objective, "bound-pruned")
                return None

            x = sol.primal
            duals = {}
            for r, d in zip(rows, sol.dual):
                duals[r.key] = duals.get(r.key, 0.0) + d
            ctx = CallbackContext(
                x, duals, state, node.depth,
                [c.payload for c in self.cols], lower, upper, sol.objective,
            )

            frac_col = self._most_fractional(x)
            integral = frac_col < 0

            cuts = self._run_separators(ctx, integral)
            if cuts:
                self._install_cuts(cuts, x)
                continue

            # Pricing runs even on integral masters: the node bound is only
            # valid once no column prices out.
            if model.pricer is not None:
                new_cols = model.pricer.price(ctx)
                if new_cols:
                    self._install_columns(new_cols, lower, upper, filters)
                    continue

            if integral:
                snapped = tuple(
                    float(round(v)) if self.cols[j].integer else float(v)
                    for j, v in enumerate(x)
                )
                obj = sum(c.obj * v for c, v in zip(self.cols, snapped))
                if self.incumbent_obj is None or self._better(obj, self.incumbent_obj):
                    self.incumbent = snapped
                    self.incumbent_obj = obj
                    self._trace(node.depth, sol.objective, "incumbent")
                else:
                    self._trace(node.depth, sol.objective, "integral")
                return None

            # Branch.
            if model.branch_rule is not None:
                children = model.branch_rule(ctx)
                if not children:
                    raise EngineError("branch rule returned no children on a fractional node")
            else:
                j = frac_col
                v = x[j]
                children = [
                    Restriction(bounds=((j, lower[j], math.floor(v)),), note=f"x{j}<={math.floor(v)}"),
                    Restriction(bounds=((j, math.ceil(v), upper[j]),), note=f"x{j}>={math.ceil(v)}"),
                ]
            self._trace(node.depth, sol.objective, f"branch({len(children)})")
            return ctx, children

    def _most_fractional(self, x) -> int:
        best = -1
        best_score = INT_TOL
        for j, col in enumerate(self.cols):
            if not col.integer:
                continue
            frac = x[j] - math.floor(x[j])
            score = min(frac, 1.0 - frac)
            if score > best_score:
                best = j
                best_score = score
        return best

    def _run_separators(self, ctx: CallbackContext, integral: bool) -> list[tuple[str, Cut]]:
        found: list[tuple[str, Cut]] = []
        for cb in self.model.cut_callbacks:
            if cb.scope == "integer-only" and not integral:
                continue
            for cut in cb.separate(ctx):
                found.append((cb.name, cut))
        return found

    def _install_cuts(self, cuts: list[tuple[str, Cut]], x) -> None:
        added = 0
        for name, cut in cuts:
            lhs = sum(a * x[j] for j, a in cut.coeffs.items())
            if cut.relation == "<=":
                viol = lhs - cut.rhs
            elif cut.relation == ">=":
                viol = cut.rhs - lhs
            else:
                viol = abs(lhs - cut.rhs)
            if viol < CUT_VIOLATION_MIN - 1e-12:
                raise EngineError(
                    f"separator {name} returned a cut violated by {viol:.2e}"
                )
            if cut.key in self.seen_cut_keys:
                continue
            self.seen_cut_keys.add(cut.key)
            self.cut_rows.append(_RowDef(cut.key, dict(cut.coeffs), cut.relation, cut.rhs))
            self.cuts_added[name] = self.cuts_added.get(name, 0) + 1
            added += 1
        if added == 0:
            raise EngineError("separators repeated only already-known cuts")

    def _install_columns(self, new_cols: list[NewColumn], lower, upper, filters) -> None:
        for nc in new_cols:
            if nc.payload is not None and any(not f(nc.payload) for f in filters):
                raise EngineError(
                    "pricer returned a column banned by an active branching filter"
                )
            self.cols.append(
                _ColumnDef(
                    nc.obj, nc.lower, nc.upper, nc.integer,
                    dict(nc.coeffs_by_key), nc.payload,
                )
            )
            lower.append(nc.lower)
            upper.append(nc.upper)
            self.columns_added += 1

    def _trace(self, depth: int, obj, action: str) -> None:
        if self.model.verbose:
            o = "-" if obj is None else f"{obj:.6f}"
            print(f"node depth={depth} lp={o} {action}")


def solve_mip(model: MipModel) -> SolveReport:
    """Depth-first branch and cut (and price) over the model's LP."""
    return _Engine(model).solve()
