"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The active backend is chosen once at import time from the environment
variable ``EXPWL1_BACKEND``:

* unset or ``auto`` -- use numba when it imports, numpy otherwise
* ``numba``         -- require numba, raise if unavailable
* ``numpy``         -- force the pure-numpy implementations

Both backends implement identical selection/tie-breaking semantics so the
simplex solver follows the same pivot sequence either way (floating-point
summation order differs only inside the sparse matvec).

``benchmarks/backend_bench.py`` times one backend against the other.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_VAR = "EXPWL1_BACKEND"


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def _np_apply_cols(cols, z, n):
    """y[j] = sum of z[i] over columns i whose neighbor list contains row j."""
    d = cols.shape[1]
    vals = np.repeat(z, d)
    return np.bincount(cols.ravel(), weights=vals, minlength=n)


def _np_pivot_update(T, pivrow, pivcol):
    """In-place Gauss-Jordan pivot on tableau row ``pivrow``, col ``pivcol``."""
    T[pivrow, :] /= T[pivrow, pivcol]
    factors = T[:, pivcol].copy()
    factors[pivrow] = 0.0
    T -= np.outer(factors, T[pivrow, :])
    # keep the pivot column exactly canonical
    T[:, pivcol] = 0.0
    T[pivrow, pivcol] = 1.0


def _np_price_dantzig(obj, limit, tol):
    """Most negative reduced cost below -tol; lowest index on ties; -1 if none."""
    seg = obj[:limit]
    j = int(np.argmin(seg))
    if seg[j] < -tol:
        return j
    return -1


def _np_price_bland(obj, limit, tol):
    """First reduced cost below -tol; -1 if none."""
    idx = np.nonzero(obj[:limit] < -tol)[0]
    if idx.size == 0:
        return -1
    return int(idx[0])


def _np_ratio_test(T, pivcol, nrows, basis, bland, tol):
    """Leaving row by the minimum-ratio rule.

    Rows with column entry <= tol are ineligible.  Under Bland's rule ties
    break toward the smallest basis label; otherwise near-ties break toward
    the largest pivot element (numerical stability).  Returns -1 when the
    column is unbounded.
    """
    col = T[:nrows, pivcol]
    rhs = T[:nrows, -1]
    eligible = col > tol
    if not eligible.any():
        return -1
    ratios = np.full(nrows, np.inf)
    ratios[eligible] = rhs[eligible] / col[eligible]
    best = ratios.min()
    if bland:
        ties = np.nonzero(ratios <= best)[0]
        return int(ties[np.argmin(basis[ties])])
    window = best + 1e-9 * abs(best) + 1e-12
    near = np.nonzero(ratios <= window)[0]
    return int(near[np.argmax(col[near])])


# ---------------------------------------------------------------------------
# numba implementations (compiled lazily, cached on disk)
# ---------------------------------------------------------------------------

def _build_numba_kernels():
    from numba import njit

    @njit(cache=True)
    def apply_cols(cols, z, n):
        N, d = cols.shape
        y = np.zeros(n)
        for i in range(N):
            zi = z[i]
            for a in range(d):
                y[cols[i, a]] += zi
        return y

    @njit(cache=True)
    def pivot_update(T, pivrow, pivcol):
        nrows, ncols = T.shape
        piv = T[pivrow, pivcol]
        for c in range(ncols):
            T[pivrow, c] /= piv
        for r in range(nrows):
            if r == pivrow:
                continue
            f = T[r, pivcol]
            if f != 0.0:
                for c in range(ncols):
                    T[r, c] -= f * T[pivrow, c]
        for r in range(nrows):
            T[r, pivcol] = 0.0
        T[pivrow, pivcol] = 1.0

    @njit(cache=True)
    def price_dantzig(obj, limit, tol):
        best = -tol
        j = -1
        for c in range(limit):
            if obj[c] < best:
                best = obj[c]
                j = c
        return j

    @njit(cache=True)
    def price_bland(obj, limit, tol):
        for c in range(limit):
            if obj[c] < -tol:
                return c
        return -1

    @njit(cache=True)
    def ratio_test(T, pivcol, nrows, basis, bland, tol):
        best = np.inf
        row = -1
        for r in range(nrows):
            a = T[r, pivcol]
            if a > tol:
                q = T[r, -1] / a
                if q < best:
                    best = q
                    row = r
                elif q <= best and bland and row >= 0 and basis[r] < basis[row]:
                    row = r
        if row < 0 or bland:
            return row
        # near-ties resolved toward the largest pivot element
        window = best + 1e-9 * abs(best) + 1e-12
        amax = 0.0
        for r in range(nrows):
            a = T[r, pivcol]
            if a > tol and T[r, -1] / a <= window and a > amax:
                amax = a
                row = r
        return row

    return {
        "apply_cols": apply_cols,
        "pivot_update": pivot_update,
        "price_dantzig": price_dantzig,
        "price_bland": price_bland,
        "ratio_test": ratio_test,
    }


_NUMPY_KERNELS = {
    "apply_cols": _np_apply_cols,
    "pivot_update": _np_pivot_update,
    "price_dantzig": _np_price_dantzig,
    "price_bland": _np_price_bland,
    "ratio_test": _np_ratio_test,
}

_backend_name = None
apply_cols = None
pivot_update = None
price_dantzig = None
price_bland = None
ratio_test = None


def set_backend(name):
    """Activate a kernel backend ("numba" or "numpy"). Returns the name."""
    global _backend_name, apply_cols, pivot_update, price_dantzig
    global price_bland, ratio_test
    if name == "numba":
        table = _build_numba_kernels()
    elif name == "numpy":
        table = _NUMPY_KERNELS
    else:
        raise ValueError(f"unknown backend {name!r}; expected 'numba' or 'numpy'")
    apply_cols = table["apply_cols"]
    pivot_update = table["pivot_update"]
    price_dantzig = table["price_dantzig"]
    price_bland = table["price_bland"]
    ratio_test = table["ratio_test"]
    _backend_name = name
    return name


def backend_name():
    return _backend_name


def _init_from_env():
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if choice in ("", "auto"):
        try:
            return set_backend("numba")
        except ImportError:
            return set_backend("numpy")
    return set_backend(choice)


_init_from_env()
