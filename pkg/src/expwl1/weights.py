"""Weight vectors, weighted norms, weighted best s-term approximation.

Weights are per-index reals >= 1.  The weighted cardinality of an index set
uses squared weights, omega(S) = sum_{i in S} omega_i^2, and a set is within
budget s when omega(S) <= s.  All operations are pure and inputs immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError

TWO_LEVEL_ZERO_GUARD = 1e-8  # divide-by-w guard when the prior confidence w is 0

KNAPSACK_ORACLE_MAX_N = 24


@dataclass
class WeightVector:
    """Per-index weights omega >= 1 plus the scheme that produced them."""

    omega: np.ndarray
    scheme: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        om = np.ascontiguousarray(self.omega, dtype=np.float64)
        if om.ndim != 1:
            raise DimensionError("omega must be a 1-d vector")
        if not np.isfinite(om).all():
            raise DomainError("weights must be finite")
        if (om < 1.0).any():
            raise DomainError("weights must satisfy omega_i >= 1")
        self.omega = om

    def __len__(self):
        return self.omega.size

    def save(self, path):
        """Text format: header "N scheme [param]", then one weight per line."""
        parts = [str(len(self)), self.scheme]
        if self.scheme == "polynomial":
            parts.append(repr(float(self.params["alpha"])))
        elif self.scheme == "two_level":
            parts.append(repr(float(self.params["w"])))
        with open(path, "w") as fh:
            fh.write(" ".join(parts) + "\n")
            for v in self.omega:
                fh.write(repr(float(v)) + "\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            header = fh.readline().split()
            if len(header) < 2:
                raise DomainError(f"{path}: malformed header, expected 'N scheme [param]'")
            N = int(header[0])
            scheme = header[1]
            params = {}
            if scheme == "polynomial":
                params["alpha"] = float(header[2])
            elif scheme == "two_level":
                params["w"] = float(header[2])
            omega = np.array([float(fh.readline()) for _ in range(N)])
        return cls(omega=omega, scheme=scheme, params=params)


@dataclass
class WeightedSignal:
    """A signal together with its support and weighted-cardinality bookkeeping."""

    x: np.ndarray
    support: np.ndarray
    weighted_cardinality: float
    budget: float

    @classmethod
    def from_vector(cls, x, omega: WeightVector, budget):
        x = np.asarray(x, dtype=np.float64)
        support = np.flatnonzero(x)
        wc = weighted_cardinality(support, omega)
        if wc > budget + 1e-12:
            raise DomainError(
                f"signal support has weighted cardinality {wc} > budget {budget}")
        return cls(x=x, support=support, weighted_cardinality=wc, budget=float(budget))

    @property
    def k(self):
        return int(self.support.size)


@dataclass
class ParameterRecommendation:
    """Measurement count / degree suggestion for a target expansion quality."""

    n: int
    d: int
    gamma: float
    epsilon: float
    delta: float
    scheme: str
    constants: dict
    s: float
    k: int

    def __post_init__(self):
        if self.n < 1 or self.d < 1 or self.n < self.d:
            raise DomainError("recommendation must satisfy n >= d >= 1")


def _check_lengths(x, omega):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != omega.omega.shape:
        raise DimensionError(
            f"vector length {x.shape} != weight length {omega.omega.shape}")
    return x


def weighted_norm(x, omega: WeightVector, p=1.0) -> float:
    """(sum_i omega_i^(2-p) |x_i|^p)^(1/p) for p in (0, 2].

    p=1 gives sum omega_i |x_i|; at p=2 the weights cancel.
    """
    x = _check_lengths(x, omega)
    if not 0.0 < p <= 2.0:
        raise DomainError(f"p={p} outside (0, 2]")
    if p == 1.0:
        return float(np.sum(omega.omega * np.abs(x)))
    return float(np.sum(omega.omega ** (2.0 - p) * np.abs(x) ** p) ** (1.0 / p))


def weighted_l0(x, omega: WeightVector) -> float:
    """Sum of squared weights over the support of x."""
    x = _check_lengths(x, omega)
    return float(np.sum(omega.omega[x != 0.0] ** 2))


def weighted_cardinality(S, omega: WeightVector) -> float:
    """omega(S) = sum of squared weights over the index set S; always >= |S|."""
    idx = np.asarray(sorted(int(i) for i in S), dtype=np.int64)
    if idx.size == 0:
        return 0.0
    if idx.min() < 0 or idx.max() >= len(omega):
        raise DomainError(f"index out of range [0, {len(omega)})")
    return float(np.sum(omega.omega[idx] ** 2))


def best_weighted_s_term(x, omega: WeightVector, s):
    """Greedy weighted best s-term approximation.

    Scans indices by decreasing |x_i|/omega_i and keeps every index that
    still fits the squared-weight budget s.  Returns (S, sigma) with
    sigma = weighted l1 norm of x off S.  Exact for uniform weights; in
    general sigma exceeds the true optimum by at most the largest single
    kept-value omega_i|x_i| among skipped indices (fractional-knapsack
    argument), which tests check against the exact oracle.
    """
    x = _check_lengths(x, omega)
    if s < 0:
        raise DomainError("budget s must be >= 0")
    om = omega.omega
    value = om * np.abs(x)
    density = np.abs(x) / om
    # stable sort: decreasing density, ties toward lower index
    order = np.argsort(-density, kind="stable")
    cost = om ** 2
    chosen = []
    spent = 0.0
    for i in order:
        if x[i] == 0.0:
            break  # remaining items carry no value
        if spent + cost[i] <= s + 1e-12:
            chosen.append(int(i))
            spent += cost[i]
    S = np.array(sorted(chosen), dtype=np.int64)
    mask = np.ones(x.size, dtype=bool)
    mask[S] = False
    sigma = float(np.sum(value[mask]))
    return S, sigma


def best_weighted_s_term_exact(x, omega: WeightVector, s):
    """Exact minimizer of the off-support weighted l1 norm (small N only).

    Branch-and-bound over subsets with the fractional-knapsack upper bound;
    exponential worst case, so refuses N > KNAPSACK_ORACLE_MAX_N.
    """
    x = _check_lengths(x, omega)
    if x.size > KNAPSACK_ORACLE_MAX_N:
        raise DomainError(f"exact oracle limited to N <= {KNAPSACK_ORACLE_MAX_N}")
    if s < 0:
        raise DomainError("budget s must be >= 0")
    om = omega.omega
    values = om * np.abs(x)
    costs = om ** 2
    live = np.flatnonzero(values > 0.0)
    order = live[np.argsort(-(values[live] / costs[live]), kind="stable")]
    v = values[order]
    c = costs[order]
    m = order.size
    total = float(values.sum())

    best_val = -1.0
    best_mask = 0

    def frac_bound(idx, cap):
        out = 0.0
        for t in range(idx, m):
            if c[t] <= cap:
                out += v[t]
                cap -= c[t]
            else:
                out += v[t] * cap / c[t]
                break
        return out

    def dfs(idx, cap, val, mask):
        nonlocal best_val, best_mask
        if val > best_val:
            best_val = val
            best_mask = mask
        if idx == m:
            return
        if val + frac_bound(idx, cap) <= best_val + 1e-15:
            return
        if c[idx] <= cap + 1e-12:
            dfs(idx + 1, cap - c[idx], val + v[idx], mask | (1 << idx))
        dfs(idx + 1, cap, val, mask)

    dfs(0, float(s), 0.0, 0)
    S = sorted(int(order[t]) for t in range(m) if best_mask >> t & 1)
    return np.array(S, dtype=np.int64), float(total - best_val)


def make_weights(scheme, N, alpha=None, w=None, support=None) -> WeightVector:
    """Build a weight vector from one of the catalogued schemes.

    uniform      -- all ones
    polynomial   -- omega_i = i^(alpha/2), 1-based indices, alpha >= 0
    two_level    -- 1 on the estimated support, 1/w elsewhere, w in [0, 1]
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    if scheme == "uniform":
        return WeightVector(np.ones(N), "uniform")
    if scheme == "polynomial":
        if alpha is None or alpha < 0:
            raise DomainError("polynomial scheme needs alpha >= 0")
        idx = np.arange(1, N + 1, dtype=np.float64)
        return WeightVector(idx ** (alpha / 2.0), "polynomial", {"alpha": float(alpha)})
    if scheme == "two_level":
        if w is None or w < 0 or w > 1:
            raise DomainError("two_level scheme needs w in [0, 1]")
        if support is None:
            raise DomainError("two_level scheme needs an estimated support")
        sup = np.asarray(sorted(int(i) for i in support), dtype=np.int64)
        if sup.size and (sup.min() < 0 or sup.max() >= N):
            raise DomainError(f"estimated support outside [0, {N})")
        off = 1.0 / (w + TWO_LEVEL_ZERO_GUARD) if w == 0 else 1.0 / w
        omega = np.full(N, off)
        omega[sup] = 1.0
        return WeightVector(omega, "two_level",
                            {"w": float(w), "support": tuple(int(i) for i in sup)})
    raise DomainError(f"unknown weight scheme {scheme!r}")


def polynomial_budget_bound(k, alpha) -> float:
    """(k+1)^(1+alpha), an upper bound for sum_{i=1..k} i^alpha."""
    if k < 1:
        raise DomainError("k must be >= 1")
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    return float((k + 1) ** (1.0 + alpha))


def recommend_parameters(scheme, N, k, epsilon, delta=0.05, s=None,
                         c_n=1.0, c_d=1.0, alpha=None, w=None) -> ParameterRecommendation:
    """Measurement count and degree for a target expansion coefficient.

    n = ceil(c_n * s / (epsilon^2 * gamma)) and d = ceil(c_d * epsilon * n / k),
    with gamma depending on the weight scheme.  epsilon targets the order-2k
    expansion coefficient and must stay below 1/6 for certification to be
    possible; the order constants c_n, c_d default to 1.
    """
    if not 1 <= k <= N:
        raise DomainError(f"need 1 <= k <= N, got k={k}, N={N}")
    if not 0.0 < epsilon < 1.0 / 6.0:
        raise DomainError(
            f"epsilon={epsilon} outside (0, 1/6); certification requires eps_2k < 1/6")
    if not 0.0 < delta < 1.0:
        raise DomainError("delta must lie in (0, 1)")
    if s is not None and s < k:
        raise DomainError("budget s must be >= k")

    if scheme == "uniform":
        if N <= k:
            raise DomainError("uniform scheme needs N > k")
        s_eff = float(k)
        gamma = 1.0 / (2.0 * math.log(N / k))
    elif scheme == "polynomial":
        if alpha is None or alpha < 0:
            raise DomainError("polynomial scheme needs alpha >= 0")
        if N <= k:
            raise DomainError("polynomial scheme needs N > k")
        s_eff = float(s) if s is not None else polynomial_budget_bound(k, alpha)
        gamma = s_eff / (k * math.log(N / k))
    elif scheme == "two_level":
        if w is None or not 0.0 < w <= 1.0:
            raise DomainError("two_level scheme needs w in (0, 1]")
        if s is None:
            raise DomainError("two_level scheme needs the weighted budget s")
        if N <= s:
            raise DomainError("two_level scheme needs N > s")
        s_eff = float(s)
        gamma = min(1.0, 1.0 / (2.0 * w ** 2 * math.log(N / s_eff)))
    elif scheme == "known_support":
        s_eff = float(k)
        gamma = 1.0
    else:
        raise DomainError(f"unknown weight scheme {scheme!r}")

    n = math.ceil(c_n * s_eff / (epsilon ** 2 * gamma))
    n = max(n, 1)
    d = min(max(math.ceil(c_d * epsilon * n / k), 1), n)
    return ParameterRecommendation(
        n=n, d=d, gamma=gamma, epsilon=float(epsilon), delta=float(delta),
        scheme=scheme, constants={"c_n": float(c_n), "c_d": float(c_d)},
        s=s_eff, k=int(k))
