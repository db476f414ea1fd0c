"""Dense-tableau two-phase simplex for linear programs over x >= 0.

Problems are stated as   min c.x   s.t.   G x <= h,  A_eq x = b_eq,  x >= 0,
with either constraint block optionally empty.  Pivoting is deterministic:
Dantzig pricing (most negative reduced cost, lowest index on ties) with an
automatic, reversible switch to Bland's rule whenever the objective stalls,
which rules out cycling.  Each Bland episode either terminates or ends with
a strict improvement, and a basis value can never recur after a strict
decrease, so the solver always terminates.

Long Gauss-Jordan pivot chains accumulate floating-point drift, so the
tableau is refactorized from the pristine constraint data at a fixed pivot
cadence and before any optimal/unbounded declaration on a dirty tableau.

The hot operations (pricing, ratio test, tableau pivot) live in _kernels and
run under the active numba/numpy backend.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DimensionError, DomainError

STALL_LIMIT = 100        # degenerate pivots tolerated before Bland's rule engages
STALL_EPS = 1e-12        # objective change below this counts as a stall
REFRESH_EVERY = 400      # pivots between tableau refactorizations


@dataclass(frozen=True)
class LinearProgram:
    """min c.x  s.t.  G x <= h,  A_eq x = b_eq,  x >= 0."""

    c: np.ndarray
    G: np.ndarray
    h: np.ndarray
    A_eq: np.ndarray = None
    b_eq: np.ndarray = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        c = np.ascontiguousarray(self.c, dtype=np.float64)
        G = np.ascontiguousarray(self.G, dtype=np.float64)
        h = np.ascontiguousarray(self.h, dtype=np.float64)
        A_eq = self.A_eq if self.A_eq is not None else np.zeros((0, c.size))
        b_eq = self.b_eq if self.b_eq is not None else np.zeros(0)
        A_eq = np.ascontiguousarray(A_eq, dtype=np.float64)
        b_eq = np.ascontiguousarray(b_eq, dtype=np.float64)
        if G.ndim != 2 or A_eq.ndim != 2 or c.ndim != 1 or h.ndim != 1 or b_eq.ndim != 1:
            raise DimensionError("G/A_eq must be 2-d, c/h/b_eq 1-d")
        if G.shape != (h.size, c.size):
            raise DimensionError(
                f"G shape {G.shape} inconsistent with c ({c.size}) and h ({h.size})")
        if A_eq.shape != (b_eq.size, c.size):
            raise DimensionError(
                f"A_eq shape {A_eq.shape} inconsistent with c ({c.size}) "
                f"and b_eq ({b_eq.size})")
        for arr in (c, G, h, A_eq, b_eq):
            if not np.isfinite(arr).all():
                raise DomainError("LP data must be finite")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "A_eq", A_eq)
        object.__setattr__(self, "b_eq", b_eq)

    @property
    def num_vars(self):
        return self.c.size

    @property
    def num_constraints(self):
        return self.h.size + self.b_eq.size


@dataclass
class LpSolution:
    x: np.ndarray
    objective: float
    status: str              # optimal | infeasible | iteration_limit | unbounded
    iterations: int
    max_violation: float     # worst primal feasibility violation
    duality_gap: float
    cs_gap: float            # worst complementary-slackness product
    certified: bool          # feasibility + dual feasibility + gap all within tol


def _refresh(T, D, basis, n_obj):
    """Recompute T in place from the pristine rows D under the current basis."""
    q = basis.size
    active = np.flatnonzero(basis >= 0)
    cols = basis[active]
    try:
        X = np.linalg.solve(D[active][:, cols], D[active, :])
    except np.linalg.LinAlgError:
        return False
    T[active, :] = X
    T[np.flatnonzero(basis < 0), :] = 0.0
    for j in range(n_obj):
        crow = D[q + j]
        T[q + j, :] = crow - crow[cols] @ X
    return True


def _run(T, D, basis, q, limit, tol, max_iter, it, n_obj):
    """Pivot until optimal on the last row of T; returns (iterations, status)."""
    bland = False
    stall = 0
    dirty = 0
    last_obj = T[-1, -1]
    while True:
        if bland:
            col = _kernels.price_bland(T[-1], limit, tol)
        else:
            col = _kernels.price_dantzig(T[-1], limit, tol)
        if col < 0:
            if dirty and _refresh(T, D, basis, n_obj):
                dirty = 0
                continue
            return it, "optimal"
        if it >= max_iter:
            return it, "iteration_limit"
        row = _kernels.ratio_test(T, col, q, basis, bland, tol)
        if row < 0:
            if dirty and _refresh(T, D, basis, n_obj):
                dirty = 0
                continue
            return it, "unbounded"
        _kernels.pivot_update(T, row, col)
        basis[row] = col
        it += 1
        dirty += 1
        if dirty >= REFRESH_EVERY and _refresh(T, D, basis, n_obj):
            dirty = 0
        obj = T[-1, -1]
        if abs(obj - last_obj) <= STALL_EPS:
            stall += 1
            if stall >= STALL_LIMIT:
                bland = True
        else:
            stall = 0
            bland = False
        last_obj = obj


def solve_lp(lp: LinearProgram, tol=1e-9, max_iter=None) -> LpSolution:
    """Solve the LP to a certified basic optimal solution.

    Phase 1 introduces one artificial variable per equality row and per
    inequality row whose right-hand side is negative at the origin.  The
    returned solution carries a duality-gap / complementary-slackness
    certificate computed from the final tableau.
    """
    q_eq = lp.b_eq.size
    q_in = lp.h.size
    q = q_eq + q_in
    p = lp.num_vars
    if max_iter is None:
        max_iter = 1000 + 60 * (q + 1)

    rhs_scale = 1.0 + float(np.abs(np.concatenate([lp.b_eq, lp.h])).max(initial=0.0))
    flip_in = lp.h < 0.0
    art_rows = np.concatenate([np.arange(q_eq),
                               q_eq + np.flatnonzero(flip_in)]).astype(np.int64)
    n_art = art_rows.size
    n_slack = q_in
    width = p + n_slack + n_art + 1

    # pristine standardized rows: constraints (sign-normalized), then the
    # raw phase-2 and phase-1 cost rows
    D = np.zeros((q + 2, width))
    D[:q_eq, :p] = lp.A_eq
    D[:q_eq, -1] = lp.b_eq
    D[:q_eq][lp.b_eq < 0.0, :] *= -1.0
    D[q_eq:q, :p] = lp.G
    D[q_eq + np.arange(q_in), p + np.arange(q_in)] = 1.0
    D[q_eq:q, -1] = lp.h
    D[q_eq:q][flip_in, :] *= -1.0
    for a, r in enumerate(art_rows):
        D[r, p + n_slack + a] = 1.0
    D[q, :p] = lp.c
    D[q + 1, p + n_slack:p + n_slack + n_art] = 1.0

    basis = np.full(q, -1, dtype=np.int64)
    basis[q_eq:] = p + np.arange(q_in)
    for a, r in enumerate(art_rows):
        basis[r] = p + n_slack + a

    T = D.copy()
    for r in art_rows:
        T[q + 1, :] -= T[r, :]

    iterations = 0
    if n_art > 0:
        iterations, status = _run(T, D, basis, q, width - 1, tol, max_iter,
                                  iterations, n_obj=2)
        infeas = -T[-1, -1]
        if status == "iteration_limit" or infeas > tol * rhs_scale:
            x = _extract(T, basis, q, p)
            return _finish(lp, x, "infeasible" if status == "optimal" else status,
                           iterations, T, p, q_eq, q_in, tol)
        # drive any leftover basic artificials out, or retire redundant rows
        for r in np.flatnonzero(basis >= p + n_slack):
            piv = np.flatnonzero(np.abs(T[r, :p + n_slack]) > tol)
            if piv.size:
                _kernels.pivot_update(T, int(r), int(piv[0]))
                basis[r] = int(piv[0])
            else:
                T[r, :] = 0.0
                basis[r] = -1

    drop = np.s_[p + n_slack:p + n_slack + n_art]
    T = np.ascontiguousarray(np.delete(T[:q + 1], drop, axis=1))
    D = np.ascontiguousarray(np.delete(D[:q + 1], drop, axis=1))
    iterations, status = _run(T, D, basis, q, p + n_slack, tol, max_iter,
                              iterations, n_obj=1)
    x = _extract(T, basis, q, p)
    return _finish(lp, x, status, iterations, T, p, q_eq, q_in, tol)


def _extract(T, basis, q, p):
    x = np.zeros(T.shape[1] - 1)
    for r in range(q):
        if 0 <= basis[r] < x.size:
            x[basis[r]] = T[r, -1]
    return x[:p]


def _finish(lp, x, status, iterations, T, p, q_eq, q_in, tol):
    q = q_eq + q_in
    objective = float(lp.c @ x)
    resid_in = lp.G @ x - lp.h
    resid_eq = lp.A_eq @ x - lp.b_eq
    scale = 1.0 + float(np.abs(np.concatenate([lp.h, lp.b_eq])).max(initial=0.0))
    max_violation = float(max(resid_in.max(initial=0.0),
                              np.abs(resid_eq).max(initial=0.0),
                              -x.min(initial=0.0), 0.0))
    duality_gap = np.inf
    cs_gap = np.inf
    certified = False
    if status == "optimal":
        rc_slack = T[q, p:p + q_in]
        if q_eq == 0:
            # inequality duals live in the slack reduced costs (row-sign
            # flips cancel in the product), giving a strong-duality check
            duality_gap = abs(objective + float(lp.h @ rc_slack))
        else:
            # with equality rows, fall back on the tableau identity
            # T[q, -1] == -objective, which bounds the accumulated drift
            duality_gap = abs(objective + T[q, -1])
        cs_gap = float(np.abs(resid_in * rc_slack).max(initial=0.0))
        rc_min = float(T[q, :p + q_in].min(initial=0.0))
        certified = (max_violation <= tol * scale
                     and rc_min >= -tol * (1.0 + abs(objective))
                     and duality_gap <= tol * (1.0 + abs(objective)) * 10.0
                     and cs_gap <= tol * scale * 10.0)
    return LpSolution(x=x, objective=objective, status=status,
                      iterations=iterations, max_violation=max_violation,
                      duality_gap=duality_gap, cs_gap=cs_gap, certified=certified)
