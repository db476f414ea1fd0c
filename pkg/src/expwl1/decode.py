"""Weighted l1 decoding by exact LP reformulation.

The program solved is: minimize the weighted l1 norm of z subject to an l1
bound ||A z - y||_1 <= eta.  Three equivalent reformulations are available:

* ``canonical``  -- epigraph variables t for |z_i| next to the split
  z = z+ - z-: variables (z+, z-, t, u), 3N + n of them, 2N + 2n + 1
  constraints.  This is the documented reference form.
* ``condensed``  -- drops t and prices z+ + z- directly, which is exact
  because no optimal vertex keeps both halves of a split pair basic:
  variables (z+, z-, u), 2N + n of them, 2n + 1 constraints.
* ``equality``   -- eta = 0 only: the noise block disappears and the fit
  becomes A(z+ - z-) = y, n equality rows over 2N variables.  This avoids
  the heavy degeneracy of the paired inequalities when the budget is zero.

All forms share the same optimal value and yield optimal z = z+ - z-;
decode() picks equality when eta = 0 and the condensed form otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import graphs
from .errors import DimensionError, DomainError, ExpWl1Error
from .simplex import LinearProgram, solve_lp
from .weights import WeightVector


def _matrix_shape(A):
    if isinstance(A, graphs.SparseBinaryMatrix):
        return A.n, A.N
    A = np.asarray(A)
    if A.ndim != 2:
        raise DimensionError("dense measurement matrix must be 2-d")
    return A.shape


def _matrix_dense(A):
    if isinstance(A, graphs.SparseBinaryMatrix):
        return A.to_dense()
    return np.asarray(A, dtype=np.float64)


def matrix_apply(A, z):
    """A @ z for either a SparseBinaryMatrix or a dense ndarray."""
    if isinstance(A, graphs.SparseBinaryMatrix):
        return graphs.apply(A, z)
    return np.asarray(A, dtype=np.float64) @ np.asarray(z, dtype=np.float64)


@dataclass
class DecodeProblem:
    """Measurement matrix, observed vector, weights, and l1 noise budget."""

    A: object
    y: np.ndarray
    omega: WeightVector
    eta: float = 0.0

    def __post_init__(self):
        n, N = _matrix_shape(self.A)
        y = np.ascontiguousarray(self.y, dtype=np.float64)
        if y.shape != (n,):
            raise DimensionError(f"y has length {y.size}, expected n={n}")
        if len(self.omega) != N:
            raise DimensionError(
                f"weight vector length {len(self.omega)} != N={N}")
        if self.eta < 0:
            raise DomainError("noise budget eta must be >= 0")
        self.y = y
        self.eta = float(self.eta)

    @property
    def shape(self):
        return _matrix_shape(self.A)


@dataclass
class DecodeResult:
    x_hat: np.ndarray
    objective: float
    residual: float
    status: str            # optimal | infeasible | iteration_limit
    iterations: int


def build_lp(problem: DecodeProblem, form="canonical") -> LinearProgram:
    """Emit the LP reformulation of the weighted l1 decoding program."""
    n, N = problem.shape
    Ad = _matrix_dense(problem.A)
    y = problem.y
    om = problem.omega.omega
    I = np.eye(N)

    if form == "canonical":
        # variables: z+ (N), z- (N), t (N), u (n)
        p = 3 * N + n
        G = np.zeros((2 * N + 2 * n + 1, p))
        h = np.zeros(2 * N + 2 * n + 1)
        G[:N, :N] = I
        G[:N, N:2 * N] = -I
        G[:N, 2 * N:3 * N] = -I
        G[N:2 * N, :N] = -I
        G[N:2 * N, N:2 * N] = I
        G[N:2 * N, 2 * N:3 * N] = -I
        r = 2 * N
        G[r:r + n, :N] = Ad
        G[r:r + n, N:2 * N] = -Ad
        G[r:r + n, 3 * N:] = -np.eye(n)
        h[r:r + n] = y
        G[r + n:r + 2 * n, :N] = -Ad
        G[r + n:r + 2 * n, N:2 * N] = Ad
        G[r + n:r + 2 * n, 3 * N:] = -np.eye(n)
        h[r + n:r + 2 * n] = -y
        G[-1, 3 * N:] = 1.0
        h[-1] = problem.eta
        c = np.concatenate([np.zeros(2 * N), om, np.zeros(n)])
        return LinearProgram(c=c, G=G, h=h, meta={"form": form, "N": N, "n": n})

    if form == "condensed":
        # variables: z+ (N), z- (N), u (n)
        p = 2 * N + n
        G = np.zeros((2 * n + 1, p))
        h = np.zeros(2 * n + 1)
        G[:n, :N] = Ad
        G[:n, N:2 * N] = -Ad
        G[:n, 2 * N:] = -np.eye(n)
        h[:n] = y
        G[n:2 * n, :N] = -Ad
        G[n:2 * n, N:2 * N] = Ad
        G[n:2 * n, 2 * N:] = -np.eye(n)
        h[n:2 * n] = -y
        G[-1, 2 * N:] = 1.0
        h[-1] = problem.eta
        c = np.concatenate([om, om, np.zeros(n)])
        return LinearProgram(c=c, G=G, h=h, meta={"form": form, "N": N, "n": n})

    if form == "equality":
        if problem.eta != 0.0:
            raise DomainError("equality form requires eta = 0")
        # variables: z+ (N), z- (N)
        A_eq = np.hstack([Ad, -Ad])
        c = np.concatenate([om, om])
        return LinearProgram(c=c, G=np.zeros((0, 2 * N)), h=np.zeros(0),
                             A_eq=A_eq, b_eq=y,
                             meta={"form": form, "N": N, "n": n})

    raise DomainError(f"unknown LP form {form!r}")


def decode(problem: DecodeProblem, form=None, tol=1e-9,
           max_iter=None) -> DecodeResult:
    """Minimize the weighted l1 norm over the eta-feasible set.

    With uniform weights this is plain l1 decoding.  The result's objective
    is the LP optimum, which coincides with the weighted l1 norm of x_hat
    whenever the status is optimal.  form=None selects the fastest
    equivalent reformulation for the problem.
    """
    n, N = problem.shape
    if form is None:
        form = "equality" if problem.eta == 0.0 else "condensed"
    lp = build_lp(problem, form=form)
    sol = solve_lp(lp, tol=tol, max_iter=max_iter)
    if sol.status == "unbounded":
        raise ExpWl1Error("decoding LP reported unbounded; weights must be >= 1")
    x_hat = sol.x[:N] - sol.x[N:2 * N]
    residual = float(np.abs(matrix_apply(problem.A, x_hat) - problem.y).sum())
    return DecodeResult(x_hat=x_hat, objective=sol.objective,
                        residual=residual, status=sol.status,
                        iterations=sol.iterations)
