"""Bounded-variable revised simplex with warm starts.

Primal phase 1 / phase 2 for cold solves, dual simplex for warm restarts
after rows are added or bounds tightened. The basis inverse is kept dense
and refactorized periodically. Solutions are always basic, so extreme-point
arguments (Benders separation) can rely on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

FEAS_TOL = 1e-7
OPT_TOL = 1e-7
PIVOT_TOL = 1e-9
REFACTOR_EVERY = 64

_RELATIONS = ("<=", ">=", "=")

# Column / row status tags.
BASIC = "basic"
AT_LOWER = "lower"
AT_UPPER = "upper"
FREE = "free"


class LpError(ValueError):
    """Malformed linear program or solver breakdown."""


@dataclass
class _Row:
    coeffs: dict[int, float]
    relation: str
    rhs: float


class LinearProgram:
    """A linear program built column by column and row by row.

    sense is "min" or "max". Columns carry (objective, lower, upper); rows
    carry sparse coefficients, a relation from {<=, >=, =} and a finite
    right-hand side.
    """

    def __init__(self, sense: str = "min"):
        if sense not in ("min", "max"):
            raise LpError(f"unknown sense {sense!r}")
        self.sense = sense
        self.obj: list[float] = []
        self.lower: list[float] = []
        self.upper: list[float] = []
        self.rows: list[_Row] = []

    @property
    def num_cols(self) -> int:
        return len(self.obj)

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def add_column(
        self,
        obj: float = 0.0,
        lower: float = 0.0,
        upper: float = math.inf,
        coeffs: Mapping[int, float] | None = None,
    ) -> int:
        """Append a column; optional coeffs place it into existing rows."""
        if lower > upper:
            raise LpError(f"lower {lower} exceeds upper {upper}")
        if math.isnan(obj) or math.isnan(lower) or math.isnan(upper):
            raise LpError("nan in column data")
        j = len(self.obj)
        self.obj.append(float(obj))
        self.lower.append(float(lower))
        self.upper.append(float(upper))
        if coeffs:
            for i, a in coeffs.items():
                if not 0 <= i < len(self.rows):
                    raise LpError(f"row {i} out of range")
                if a:
                    self.rows[i].coeffs[j] = float(a)
        return j

    def add_row(
        self,
        coeffs: Mapping[int, float],
        relation: str,
        rhs: float,
    ) -> int:
        """Append a row over existing columns."""
        if relation not in _RELATIONS:
            raise LpError(f"unknown relation {relation!r}")
        if not math.isfinite(rhs):
            raise LpError("rhs must be finite")
        clean = {}
        for j, a in coeffs.items():
            if not 0 <= j < len(self.obj):
                raise LpError(f"column {j} out of range")
            if a:
                clean[int(j)] = float(a)
        self.rows.append(_Row(clean, relation, float(rhs)))
        return len(self.rows) - 1

    def dump(self) -> str:
        """Readable text form, one row per line."""
        out = [f"{self.sense} " + " + ".join(
            f"{c:g} x{j}" for j, c in enumerate(self.obj) if c
        )]
        for i, r in enumerate(self.rows):
            lhs = " + ".join(f"{a:g} x{j}" for j, a in sorted(r.coeffs.items()))
            out.append(f"r{i}: {lhs or '0'} {r.relation} {r.rhs:g}")
        for j in range(self.num_cols):
            out.append(f"x{j} in [{self.lower[j]:g}, {self.upper[j]:g}]")
        return "\n".join(out)


def add_row(lp: LinearProgram, coeffs, relation, rhs) -> int:
    return lp.add_row(coeffs, relation, rhs)


def add_column(lp: LinearProgram, obj=0.0, lower=0.0, upper=math.inf, coeffs=None) -> int:
    return lp.add_column(obj, lower, upper, coeffs)


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    objective: float
    primal: tuple[float, ...]
    dual: tuple[float, ...]
    reduced_cost: tuple[float, ...]
    col_status: tuple[str, ...]
    row_status: tuple[str, ...]

    @property
    def basis(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        """Warm-start tags accepted by solve_lp."""
        return (self.col_status, self.row_status)


_B, _L, _U, _F = 0, 1, 2, 3
_TAGS = (BASIC, AT_LOWER, AT_UPPER, FREE)
_TAG_CODE = {BASIC: _B, AT_LOWER: _L, AT_UPPER: _U, FREE: _F}


class SimplexSolver:
    """Dense working form of a LinearProgram.

    Internally always minimizes; the user-facing sense is translated on the
    way in and out.
    """

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        n = lp.num_cols
        m = lp.num_rows
        self.n = n
        self.m = m
        N = n + m
        self.N = N
        sign = 1.0 if lp.sense == "min" else -1.0
        self.sense_sign = sign
        self.c = np.zeros(N)
        self.c[:n] = np.asarray(lp.obj) * sign
        self.lo = np.full(N, -math.inf)
        self.hi = np.full(N, math.inf)
        self.lo[:n] = lp.lower
        self.hi[:n] = lp.upper
        A = np.zeros((m, N))
        b = np.zeros(m)
        for i, row in enumerate(lp.rows):
            for j, a in row.coeffs.items():
                A[i, j] = a
            b[i] = row.rhs
            s = n + i
            A[i, s] = 1.0
            if row.relation == "<=":
                self.lo[s], self.hi[s] = 0.0, math.inf
            elif row.relation == ">=":
                self.lo[s], self.hi[s] = -math.inf, 0.0
            else:
                self.lo[s], self.hi[s] = 0.0, 0.0
        self.A = A
        self.b = b
        self.status = np.empty(N, dtype=np.int8)
        self.basis: list[int] = []
        self.binv = np.eye(m)
        self._pivots_since_refactor = 0

    # -- basis plumbing ----------------------------------------------------

    def _default_status(self, j: int) -> int:
        if math.isfinite(self.lo[j]):
            return _L
        if math.isfinite(self.hi[j]):
            return _U
        return _F

    def _set_slack_basis(self) -> None:
        self.basis = list(range(self.n, self.N))
        for j in range(self.N):
            self.status[j] = self._default_status(j)
        for j in self.basis:
            self.status[j] = _B
        self._refactor()

    def _install_tags(self, col_tags: Sequence[str], row_tags: Sequence[str]) -> bool:
        if len(col_tags) != self.n or len(row_tags) != self.m:
            return False
        basis = []
        for j, tag in enumerate(list(col_tags) + list(row_tags)):
            code = _TAG_CODE.get(tag)
            if code is None:
                return False
            if code == _B:
                basis.append(j)
            elif code == _L and not math.isfinite(self.lo[j]):
                code = self._default_status(j)
            elif code == _U and not math.isfinite(self.hi[j]):
                code = self._default_status(j)
            self.status[j] = code
        if len(basis) != self.m:
            return False
        self.basis = basis
        for j in basis:
            self.status[j] = _B
        return self._refactor(strict=False)

    def _refactor(self, strict: bool = True) -> bool:
        B = self.A[:, self.basis]
        try:
            self.binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            if strict:
                raise LpError("singular basis")
            return False
        if not np.all(np.isfinite(self.binv)):
            if strict:
                raise LpError("singular basis")
            return False
        self._pivots_since_refactor = 0
        return True

    def _nonbasic_value(self, j: int) -> float:
        s = self.status[j]
        if s == _L:
            return self.lo[j]
        if s == _U:
            return self.hi[j]
        return 0.0

    def _nonbasic_vector(self) -> np.ndarray:
        v = np.zeros(self.N)
        at_l = self.status == _L
        at_u = self.status == _U
        v[at_l] = self.lo[at_l]
        v[at_u] = self.hi[at_u]
        return v

    def _rhs_effective(self) -> np.ndarray:
        return self.b - self.A @ self._nonbasic_vector()

    def _basic_values(self) -> np.ndarray:
        return self.binv @ self._rhs_effective()

    def _pivot(self, leave_pos: int, enter: int, w: np.ndarray, leave_status: int) -> None:
        piv = w[leave_pos]
        if abs(piv) < PIVOT_TOL:
            raise LpError("numerically zero pivot")
        old = self.basis[leave_pos]
        self.basis[leave_pos] = enter
        self.status[enter] = _B
        self.status[old] = leave_status
        row = self.binv[leave_pos, :] / piv
        self.binv -= np.outer(w, row)
        self.binv[leave_pos, :] = row
        self._pivots_since_refactor += 1
        if self._pivots_since_refactor >= REFACTOR_EVERY:
            self._refactor()

    # -- primal simplex ----------------------------------------------------

    def _primal(self, phase1: bool) -> str:
        """Runs primal iterations; returns "ok", "unbounded" or "infeasible"."""
        m, N = self.m, self.N
        max_iter = 20000 + 200 * (m + N)
        degenerate_run = 0
        bland_after = 5 * (m + N)
        for _ in range(max_iter):
            xb = self._basic_values()
            if phase1:
                c_use = np.zeros(N)
                infeas = 0.0
                for pos, j in enumerate(self.basis):
                    if xb[pos] < self.lo[j] - FEAS_TOL:
                        c_use[j] = -1.0
                        infeas += self.lo[j] - xb[pos]
                    elif xb[pos] > self.hi[j] + FEAS_TOL:
                        c_use[j] = 1.0
                        infeas += xb[pos] - self.hi[j]
                if infeas <= FEAS_TOL:
                    return "ok"
            else:
                c_use = self.c
            cb = c_use[self.basis]
            y = cb @ self.binv
            rc = c_use - y @ self.A
            use_bland = degenerate_run >= bland_after

            score = np.full(N, -math.inf)
            at_l = self.status == _L
            at_u = self.status == _U
            at_f = self.status == _F
            score[at_l] = -rc[at_l]
            score[at_u] = rc[at_u]
            score[at_f] = np.abs(rc[at_f])
            if use_bland:
                eligible = np.nonzero(score > OPT_TOL)[0]
                enter = int(eligible[0]) if eligible.size else -1
            else:
                enter = int(np.argmax(score))
                if score[enter] <= OPT_TOL:
                    enter = -1
            if enter < 0:
                if phase1:
                    return "infeasible"
                return "ok"
            if self.status[enter] == _L:
                sigma = 1.0
            elif self.status[enter] == _U:
                sigma = -1.0
            else:
                sigma = 1.0 if rc[enter] < 0 else -1.0

            w = self.binv @ self.A[:, enter]
            # Ratio test. The entering variable moves by t >= 0 in
            # direction sigma; basic i changes at rate -sigma*w[i].
            v_enter = self._nonbasic_value(enter)
            if sigma > 0:
                t_own = self.hi[enter] - v_enter
            else:
                t_own = v_enter - self.lo[enter]
            t_best = t_own
            leave_pos = -1
            leave_status = _L
            leave_piv = 0.0
            for pos, j in enumerate(self.basis):
                rate = -sigma * w[pos]
                if abs(rate) < PIVOT_TOL:
                    continue
                x = xb[pos]
                below = x < self.lo[j] - FEAS_TOL
                above = x > self.hi[j] + FEAS_TOL
                if phase1 and below:
                    if rate > 0:
                        t, st = (self.lo[j] - x) / rate, _L
                    else:
                        continue
                elif phase1 and above:
                    if rate < 0:
                        t, st = (self.hi[j] - x) / rate, _U
                    else:
                        continue
                else:
                    if rate > 0:
                        if not math.isfinite(self.hi[j]):
                            continue
                        t, st = (self.hi[j] - x) / rate, _U
                    else:
                        if not math.isfinite(self.lo[j]):
                            continue
                        t, st = (self.lo[j] - x) / rate, _L
                if t < 0:
                    t = 0.0
                better = t < t_best - 1e-12
                tie = abs(t - t_best) <= 1e-12 and leave_pos >= 0
                if better or (
                    tie
                    and (
                        (use_bland and j < self.basis[leave_pos])
                        or (not use_bland and abs(w[pos]) > abs(leave_piv))
                    )
                ):
                    t_best = t
                    leave_pos = pos
                    leave_status = st
                    leave_piv = w[pos]
            if not math.isfinite(t_best):
                return "unbounded" if not phase1 else "infeasible"
            if t_best <= 1e-12:
                degenerate_run += 1
            else:
                degenerate_run = 0
            if leave_pos < 0:
                # Bound flip.
                self.status[enter] = _U if sigma > 0 else _L
            else:
                self._pivot(leave_pos, enter, w, leave_status)
        raise LpError("primal simplex iteration limit")

    # -- dual simplex ------------------------------------------------------

    def _dual_feasible(self) -> bool:
        cb = self.c[self.basis]
        y = cb @ self.binv
        rc = self.c - y @ self.A
        for j in range(self.N):
            s = self.status[j]
            if s == _L and rc[j] < -1e-6:
                return False
            if s == _U and rc[j] > 1e-6:
                return False
            if s == _F and abs(rc[j]) > 1e-6:
                return False
        return True

    def _dual(self) -> str:
        """Dual simplex from a dual-feasible basis; "ok" or "infeasible"."""
        m, N = self.m, self.N
        max_iter = 20000 + 200 * (m + N)
        degenerate_run = 0
        bland_after = 5 * (m + N)
        for _ in range(max_iter):
            xb = self._basic_values()
            leave_pos = -1
            worst = FEAS_TOL
            above = False
            for pos, j in enumerate(self.basis):
                lo, hi = self.lo[j], self.hi[j]
                if xb[pos] < lo - worst:
                    worst = lo - xb[pos]
                    leave_pos = pos
                    above = False
                elif xb[pos] > hi + worst:
                    worst = xb[pos] - hi
                    leave_pos = pos
                    above = True
            if leave_pos < 0:
                return "ok"
            cb = self.c[self.basis]
            y = cb @ self.binv
            rc = self.c - y @ self.A
            alpha = self.binv[leave_pos, :] @ self.A
            s = 1.0 if above else -1.0
            use_bland = degenerate_run >= bland_after

            enter = -1
            best_ratio = math.inf
            best_piv = 0.0
            for j in range(N):
                st = self.status[j]
                if st == _B:
                    continue
                a = s * alpha[j]
                if st == _L or st == _F:
                    ok = a > PIVOT_TOL
                elif st == _U:
                    ok = a < -PIVOT_TOL
                else:
                    ok = False
                if st == _F and not ok:
                    ok = a < -PIVOT_TOL
                if not ok:
                    continue
                ratio = rc[j] / a
                if ratio < 0:
                    ratio = 0.0
                if (
                    ratio < best_ratio - 1e-12
                    or (
                        abs(ratio - best_ratio) <= 1e-12
                        and enter >= 0
                        and (
                            (use_bland and j < enter)
                            or (not use_bland and abs(alpha[j]) > abs(best_piv))
                        )
                    )
                ):
                    best_ratio = ratio
                    enter = j
                    best_piv = alpha[j]
            if enter < 0:
                return "infeasible"
            if best_ratio <= 1e-12:
                degenerate_run += 1
            else:
                degenerate_run = 0
            leave_status = _U if above else _L
            w = self.binv @ self.A[:, enter]
            self._pivot(leave_pos, enter, w, leave_status)
        raise LpError("dual simplex iteration limit")

    # -- drivers -----------------------------------------------------------

    def solve(self, warm: tuple[Sequence[str], Sequence[str]] | None = None) -> LpSolution:
        warm_ok = False
        if warm is not None:
            warm_ok = self._install_tags(warm[0], warm[1])
        if not warm_ok:
            self._set_slack_basis()
        if warm_ok and self._dual_feasible():
            verdict = self._dual()
            if verdict == "infeasible":
                return self._report("infeasible")
            # Dual simplex ends primal and dual feasible: optimal.
            return self._report("optimal")
        verdict = self._primal(phase1=True)
        if verdict == "infeasible":
            return self._report("infeasible")
        verdict = self._primal(phase1=False)
        if verdict == "unbounded":
            return self._report("unbounded")
        return self._report("optimal")

    def _report(self, status: str) -> LpSolution:
        n, m = self.n, self.m
        sign = self.sense_sign
        if status != "optimal":
            empty = (0.0,) * n
            return LpSolution(
                status,
                math.inf * (1 if status == "infeasible" else -1) * sign,
                empty,
                (0.0,) * m,
                empty,
                tuple(_TAGS[self.status[j]] for j in range(n)),
                tuple(_TAGS[self.status[n + i]] for i in range(m)),
            )
        xb = self._basic_values()
        x = np.empty(self.N)
        for j in range(self.N):
            if self.status[j] != _B:
                x[j] = self._nonbasic_value(j)
        for pos, j in enumerate(self.basis):
            x[j] = xb[pos]
        cb = self.c[self.basis]
        y = cb @ self.binv
        rc = self.c - y @ self.A
        obj = float(self.c[: n] @ x[: n]) * sign
        return LpSolution(
            "optimal",
            obj,
            tuple(float(v) for v in x[:n]),
            tuple(float(v) * sign for v in y),
            tuple(float(v) * sign for v in rc[:n]),
            tuple(_TAGS[self.status[j]] for j in range(n)),
            tuple(_TAGS[self.status[n + i]] for i in range(m)),
        )


def solve_lp(
    lp: LinearProgram,
    warm_basis: tuple[Sequence[str], Sequence[str]] | None = None,
) -> LpSolution:
    """Solve to a basic optimal solution; warm_basis are LpSolution.basis tags."""
    return SimplexSolver(lp).solve(warm_basis)


def duality_gap(lp: LinearProgram, sol: LpSolution) -> float:
    """|primal - dual| objective gap certified from the returned solution.

    The dual objective is rebuilt from the row duals and reduced costs, so
    this is an independent identity check rather than a reprint of the
    primal value.
    """
    if sol.status != "optimal":
        raise LpError("duality gap needs an optimal solution")
    dual_obj = 0.0
    for i, row in enumerate(lp.rows):
        dual_obj += sol.dual[i] * row.rhs
    for j in range(lp.num_cols):
        tag = sol.col_status[j]
        if tag == AT_LOWER:
            bound = lp.lower[j]
        elif tag == AT_UPPER:
            bound = lp.upper[j]
        else:
            continue
        if bound:
            dual_obj += sol.reduced_cost[j] * bound
    # Slack contribution: a nonbasic slack sits at 0 except equality rows,
    # where the bound is 0 as well, so slacks never contribute.
    return abs(sol.objective - dual_obj)
