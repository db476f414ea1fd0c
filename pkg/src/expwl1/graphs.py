"""Left-d-regular bipartite graphs stored column-wise.

A graph with N left (variable) nodes, n right (check) nodes and left degree
d doubles as a sparse binary measurement matrix: entry (j, i) is 1 iff row j
is among the d neighbors of column i.  Columns keep their neighbor lists
sorted so unions, file output and equality are canonical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import BudgetError, DimensionError, DomainError

DEFAULT_ENUMERATION_BUDGET = 2_000_000


@dataclass
class SparseBinaryMatrix:
    """Sparse binary matrix / bipartite adjacency structure.

    cols[i] lists the d distinct check rows of column i, strictly increasing.
    Instances are treated as immutable after construction; every operation
    here is read-only.
    """

    n: int
    N: int
    d: int
    cols: np.ndarray
    seed: int = 0

    def __post_init__(self):
        if self.d < 1 or self.d > self.n:
            raise DomainError(f"degree d={self.d} must satisfy 1 <= d <= n={self.n}")
        if self.N < 1:
            raise DomainError("need at least one column")
        cols = np.ascontiguousarray(self.cols, dtype=np.int32)
        if cols.shape != (self.N, self.d):
            raise DimensionError(f"cols shape {cols.shape} != ({self.N}, {self.d})")
        if cols.min(initial=0) < 0 or cols.max(initial=0) >= self.n:
            raise DomainError("column entries must be row indices in [0, n)")
        if self.d > 1 and not (np.diff(cols, axis=1) > 0).all():
            raise DomainError("each column must list d distinct rows, strictly increasing")
        self.cols = cols

    @property
    def shape(self):
        return (self.n, self.N)

    def to_dense(self):
        """0/1 dense ndarray of shape (n, N)."""
        A = np.zeros((self.n, self.N))
        for i in range(self.N):
            A[self.cols[i], i] = 1.0
        return A

    def column_masks(self):
        """Neighbor set of each column as a python-int bitmask over rows."""
        masks = []
        for i in range(self.N):
            m = 0
            for j in self.cols[i]:
                m |= 1 << int(j)
            masks.append(m)
        return masks

    def save(self, path):
        """Text format: header "n N d seed", then one line of rows per column."""
        with open(path, "w") as fh:
            fh.write(f"{self.n} {self.N} {self.d} {self.seed}\n")
            for i in range(self.N):
                fh.write(" ".join(str(int(j)) for j in self.cols[i]) + "\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            header = fh.readline().split()
            if len(header) != 4:
                raise DomainError(f"{path}: malformed header, expected 'n N d seed'")
            n, N, d, seed = (int(v) for v in header)
            cols = np.zeros((N, d), dtype=np.int32)
            for i in range(N):
                row = fh.readline().split()
                if len(row) != d:
                    raise DomainError(f"{path}: column {i} has {len(row)} entries, expected {d}")
                cols[i] = sorted(int(v) for v in row)
        return cls(n=n, N=N, d=d, cols=cols, seed=seed)

@dataclass
class EdgeSet:
    """A set of (column, row) edges of an owning SparseBinaryMatrix."""

    edges: list

    def __len__(self):
        return len(self.edges)

    def restricted_to(self, columns):
        keep = set(int(i) for i in columns)
        return EdgeSet([e for e in self.edges if e[0] in keep])

@dataclass
class ExpansionReport:
    """Worst-case neighborhood deficit over column subsets of size <= k.

    The deficit 1 - |Gamma(S)|/(d|S|) of the worst set is also kept as the
    exact integer fraction deficit_num/deficit_den so threshold comparisons
    (such as the 1/6 certification cut) never hinge on float rounding.
    """

    k: int
    epsilon: float
    worst_set: tuple
    exhaustive: bool
    deficit_num: int = 0
    deficit_den: int = 1

def generate(N, n, d, seed) -> SparseBinaryMatrix:
    """Random left-d-regular graph: each column draws d distinct rows uniformly.

    Columns are independent; the draw is without replacement so every column
    has exactly d ones.  Deterministic for a fixed seed.
    """
    if d < 1 or d > n:
        raise DomainError(f"degree d={d} must satisfy 1 <= d <= n={n}")
    if N < 1:
        raise DomainError("need at least one column")
    rng = np.random.default_rng(seed)
    cols = np.zeros((N, d), dtype=np.int32)
    for i in range(N):
        cols[i] = np.sort(rng.choice(n, size=d, replace=False))
    return SparseBinaryMatrix(n=n, N=N, d=d, cols=cols, seed=int(seed))

def apply(A: SparseBinaryMatrix, z) -> np.ndarray:
    """Matrix-vector product A z in O(dN) time."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (A.N,):
        raise DimensionError(f"vector length {z.shape} incompatible with N={A.N}")
    return _kernels.apply_cols(A.cols, z, A.n)

def neighbors(A: SparseBinaryMatrix, S) -> np.ndarray:
    """Union of neighbor rows over the columns in S, sorted ascending."""
    S = np.asarray(sorted(int(i) for i in S), dtype=np.int64)
    if S.size == 0:
        return np.zeros(0, dtype=np.int32)
    if S.min() < 0 or S.max() >= A.N:
        raise DomainError(f"column index out of range [0, {A.N})")
    return np.unique(A.cols[S])

def collision_set(A: SparseBinaryMatrix, order) -> EdgeSet:
    """Edges that land on a check row already hit by an earlier column.

    ``order`` is the column ordering under which "earlier" is evaluated
    (a permutation of [0, N)).  An edge (i, j) is a collision iff some
    column preceding i in the order also contains row j.
    """
    order = [int(i) for i in order]
    if sorted(order) != list(range(A.N)):
        raise DomainError("order must be a permutation of all column indices")
    seen = np.zeros(A.n, dtype=bool)
    edges = []
    for i in order:
        for j in A.cols[i]:
            j = int(j)
            if seen[j]:
                edges.append((i, j))
        seen[A.cols[i]] = True
    return EdgeSet(edges)

def _enumeration_count(N, k):
    return sum(math.comb(N, t) for t in range(1, k + 1))

def expansion_coefficient(A: SparseBinaryMatrix, k, mode="exhaustive",
                          trials=None, seed=None,
                          budget=DEFAULT_ENUMERATION_BUDGET) -> ExpansionReport:
    """Expansion coefficient eps_k = max over |S| <= k of 1 - |Gamma(S)|/(d|S|).

    Exhaustive mode enumerates every subset (exact answer, refused above the
    enumeration budget); monte_carlo samples subsets uniformly per size and
    returns a lower bound.
    """
    if k < 1 or k > A.N:
        raise DomainError(f"k={k} must satisfy 1 <= k <= N={A.N}")
    masks = A.column_masks()
    d = A.d

    if mode == "exhaustive":
        total = _enumeration_count(A.N, k)
        if total > budget:
            raise BudgetError(
                f"{total} subsets exceed the enumeration budget {budget}; "
                "use mode='monte_carlo'")
        # worst deficit kept as exact fraction (num/den), compared cross-wise
        best = [0, 1, ()]

        def visit(start, mask, chosen):
            for i in range(start, A.N):
                m2 = mask | masks[i]
                c2 = chosen + (i,)
                num = d * len(c2) - m2.bit_count()
                den = d * len(c2)
                if num * best[1] > best[0] * den or not best[2]:
                    best[0], best[1], best[2] = num, den, c2
                if len(c2) < k:
                    visit(i + 1, m2, c2)

        visit(0, 0, ())
        return ExpansionReport(k=k, epsilon=best[0] / best[1],
                               worst_set=best[2], exhaustive=True,
                               deficit_num=best[0], deficit_den=best[1])

    if mode == "monte_carlo":
        if trials is None or trials < 1:
            raise DomainError("monte_carlo mode needs trials >= 1")
        rng = np.random.default_rng(seed)
        best = [0, 1, ()]
        for _ in range(trials):
            t = int(rng.integers(1, k + 1))
            S = rng.choice(A.N, size=t, replace=False)
            m = 0
            for i in S:
                m |= masks[int(i)]
            num = d * t - m.bit_count()
            den = d * t
            if num * best[1] > best[0] * den or not best[2]:
                best[0], best[1], best[2] = num, den, tuple(sorted(int(i) for i in S))
        return ExpansionReport(k=k, epsilon=best[0] / best[1],
                               worst_set=best[2], exhaustive=False,
                               deficit_num=best[0], deficit_den=best[1])

    raise DomainError(f"unknown mode {mode!r}")

def edge_count_between(A: SparseBinaryMatrix, S_a, S_b) -> int:
    """|Gamma(S_a)| + |Gamma(S_b)| - |Gamma(S_a u S_b)| for disjoint column sets.

    By inclusion-exclusion this counts the check rows shared between the two
    neighborhoods.
    """
    set_a = set(int(i) for i in S_a)
    set_b = set(int(i) for i in S_b)
    if set_a & set_b:
        raise DomainError("column sets must be disjoint")
    ga = neighbors(A, set_a).size
    gb = neighbors(A, set_b).size
    gu = neighbors(A, set_a | set_b).size
    return ga + gb - gu
