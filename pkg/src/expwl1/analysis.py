"""Expansion certification and empirical checks of the recovery guarantees.

A matrix is *certified* at sparsity k when its order-2k expansion
coefficient was computed exhaustively and falls below 1/6; the certificate
then carries the null-space-property constants (rho, tau) and the error
constants (c1, c2, C1, C2) they induce.  Universal quantifiers (all v, all
S) are not decidable by sampling, so the checkers here are falsification
harnesses: they search adversarially and report violations, never proofs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import graphs
from .errors import CertificationError, DomainError
from .weights import (WeightVector, best_weighted_s_term,
                      best_weighted_s_term_exact, weighted_norm,
                      KNAPSACK_ORACLE_MAX_N)

CERTIFY_EPS_LIMIT = 1.0 / 6.0
COLLISION_SLACK_TOL = 1e-12
RNSP_SLACK_TOL = 1e-9
ERROR_BOUND_TOL = 1e-9


@dataclass
class RnspConstants:
    """Null-space-property constants induced by the expansion coefficient."""

    rho: float
    tau: float
    epsilon_2k: float
    d: int

    def __post_init__(self):
        if not 0.0 <= self.epsilon_2k < CERTIFY_EPS_LIMIT:
            raise CertificationError(
                f"epsilon_2k={self.epsilon_2k} not in [0, 1/6); "
                "constants require eps_2k < 1/6")
        if not self.rho < 1.0:
            raise DomainError("rho must be < 1")


@dataclass
class ErrorConstants:
    c1: float
    c2: float
    C1: float
    C2: float


@dataclass
class Certificate:
    matrix_id: str
    k: int
    epsilon_2k: float
    exhaustive: bool
    rnsp: RnspConstants | None
    errors: ErrorConstants | None
    certified: bool


@dataclass
class CollisionBoundReport:
    lhs: float
    rhs: float
    holds: bool
    epsilon_k: float
    k: int


@dataclass
class RnspSampleReport:
    trials: int
    violations: int
    max_slack: float     # max over trials of lhs - rhs; expected <= 0
    rho: float
    tau: float
    s: float
    k: int


@dataclass
class FailureEstimate:
    failures: int
    trials: int
    probability: float
    epsilon: float
    k: int
    exhaustive: bool     # per-graph expansion check was exhaustive


def rnsp_constants(epsilon_2k, d) -> RnspConstants:
    """rho = 2e/(1-4e), tau = 1/(sqrt(d)(1-4e)) for e = epsilon_2k < 1/6."""
    if d < 1:
        raise DomainError("degree d must be >= 1")
    if not 0.0 <= epsilon_2k < CERTIFY_EPS_LIMIT:
        raise CertificationError(
            f"epsilon_2k={epsilon_2k} must satisfy eps_2k < 1/6")
    denom = 1.0 - 4.0 * epsilon_2k
    rho = 2.0 * epsilon_2k / denom
    tau = 1.0 / (math.sqrt(d) * denom)
    return RnspConstants(rho=rho, tau=tau, epsilon_2k=float(epsilon_2k), d=int(d))


def error_constants(c: RnspConstants) -> ErrorConstants:
    """c1 = 2(1+rho)/(1-rho), c2 = 4 tau/(1-rho); C1 = c1, C2 = 2 c2."""
    if not c.rho < 1.0:
        raise DomainError("rho must be < 1")
    c1 = 2.0 * (1.0 + c.rho) / (1.0 - c.rho)
    c2 = 4.0 * c.tau / (1.0 - c.rho)
    return ErrorConstants(c1=c1, c2=c2, C1=c1, C2=2.0 * c2)


def matrix_id(A: graphs.SparseBinaryMatrix) -> str:
    return f"n{A.n}N{A.N}d{A.d}seed{A.seed}"


def certify(A: graphs.SparseBinaryMatrix, k, mode="exhaustive", trials=None,
            seed=None, budget=graphs.DEFAULT_ENUMERATION_BUDGET) -> Certificate:
    """Measure eps_2k and attach constants; certified only if exhaustive and < 1/6."""
    if 2 * k > A.N:
        raise DomainError(f"need 2k <= N, got k={k}, N={A.N}")
    report = graphs.expansion_coefficient(A, 2 * k, mode=mode, trials=trials,
                                          seed=seed, budget=budget)
    # strict eps_2k < 1/6 decided on the exact integer fraction, not floats
    below_limit = 6 * report.deficit_num < report.deficit_den
    rnsp = errs = None
    if below_limit:
        # float epsilon may round onto the threshold; keep it strictly inside
        eps = min(report.epsilon, float(np.nextafter(CERTIFY_EPS_LIMIT, 0.0)))
        rnsp = rnsp_constants(eps, A.d)
        errs = error_constants(rnsp)
    return Certificate(matrix_id=matrix_id(A), k=int(k),
                       epsilon_2k=report.epsilon, exhaustive=report.exhaustive,
                       rnsp=rnsp, errors=errs,
                       certified=bool(report.exhaustive and below_limit))


def check_collision_bound(A: graphs.SparseBinaryMatrix, x, omega: WeightVector,
                          budget=graphs.DEFAULT_ENUMERATION_BUDGET) -> CollisionBoundReport:
    """Weighted collision mass against eps_k * d * ||x||_{w,1}.

    Columns are ordered by decreasing omega_i |x_i| (ties toward lower index)
    before the collision set is evaluated; only collision edges from the
    support of x contribute to the left side.  eps_k is exhaustive for
    k = |supp(x)|.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (A.N,):
        raise DomainError(f"x must have length N={A.N}")
    supp = np.flatnonzero(x)
    k = int(supp.size)
    if k == 0:
        return CollisionBoundReport(lhs=0.0, rhs=0.0, holds=True, epsilon_k=0.0, k=0)
    keyed = omega.omega * np.abs(x)
    order = np.argsort(-keyed, kind="stable")
    collisions = graphs.collision_set(A, order)
    supp_set = set(int(i) for i in supp)
    lhs = float(sum(keyed[i] for (i, _) in collisions.edges if i in supp_set))
    eps_k = graphs.expansion_coefficient(A, k, mode="exhaustive", budget=budget).epsilon
    rhs = eps_k * A.d * weighted_norm(x, omega, 1.0)
    return CollisionBoundReport(lhs=lhs, rhs=rhs,
                                holds=bool(lhs <= rhs + COLLISION_SLACK_TOL),
                                epsilon_k=eps_k, k=k)


def _greedy_adversarial_set(v, omega: WeightVector, rho, s, k):
    """Greedy knapsack on gain omega_i|v_i|(1+rho), subject to omega(S)<=s, |S|<=k."""
    gain = omega.omega * np.abs(v) * (1.0 + rho)
    cost = omega.omega ** 2
    order = np.argsort(-gain, kind="stable")
    chosen = []
    spent = 0.0
    for i in order:
        if len(chosen) >= k:
            break
        if spent + cost[i] <= s + 1e-12:
            chosen.append(int(i))
            spent += cost[i]
    return np.array(sorted(chosen), dtype=np.int64)


def check_rnsp_sampled(A: graphs.SparseBinaryMatrix, omega: WeightVector, s, k,
                       trials, seed, certificate: Certificate | None = None) -> RnspSampleReport:
    """Sampled falsification of the weighted robust null space property.

    Draws Gaussian v, picks an adversarial support set greedily per draw,
    and checks ||v_S||_{w,1} <= rho ||v_{S^c}||_{w,1} + tau sqrt(s) ||Av||_1
    with the certified constants.  Requires an exhaustive certificate.
    """
    if certificate is None:
        certificate = certify(A, k)
    if not certificate.certified:
        raise CertificationError(
            f"matrix {certificate.matrix_id} lacks an exhaustive certificate "
            f"with eps_2k < 1/6 (got eps_2k={certificate.epsilon_2k:.4f}, "
            f"exhaustive={certificate.exhaustive})")
    rho = certificate.rnsp.rho
    tau = certificate.rnsp.tau
    om = omega.omega
    violations = 0
    max_slack = -np.inf
    for t in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence((seed, t)))
        v = rng.standard_normal(A.N)
        S = _greedy_adversarial_set(v, omega, rho, s, k)
        mask = np.zeros(A.N, dtype=bool)
        mask[S] = True
        lhs = float(np.sum(om[mask] * np.abs(v[mask])))
        tail = float(np.sum(om[~mask] * np.abs(v[~mask])))
        av = float(np.abs(graphs.apply(A, v)).sum())
        slack = lhs - (rho * tail + tau * math.sqrt(s) * av)
        if slack > max_slack:
            max_slack = slack
        if slack > RNSP_SLACK_TOL:
            violations += 1
    return RnspSampleReport(trials=int(trials), violations=violations,
                            max_slack=float(max_slack), rho=rho, tau=tau,
                            s=float(s), k=int(k))


def recovery_error_bound(x, x_hat, omega: WeightVector, s, eta,
                         consts: ErrorConstants):
    """(lhs, rhs, holds) for ||x_hat - x||_{w,1} <= C1 sigma_s + C2 sqrt(s) eta.

    sigma_s is the weighted best s-term approximation error of x, computed
    exactly when N is small enough for the knapsack oracle.
    """
    x = np.asarray(x, dtype=np.float64)
    x_hat = np.asarray(x_hat, dtype=np.float64)
    if x.shape != x_hat.shape:
        raise DomainError("x and x_hat must have equal length")
    if x.size <= KNAPSACK_ORACLE_MAX_N:
        _, sigma = best_weighted_s_term_exact(x, omega, s)
    else:
        _, sigma = best_weighted_s_term(x, omega, s)
    lhs = weighted_norm(x_hat - x, omega, 1.0)
    rhs = consts.C1 * sigma + consts.C2 * math.sqrt(s) * eta
    return lhs, rhs, bool(lhs <= rhs + ERROR_BOUND_TOL)


def expansion_failure_estimate(N, n, d, k, epsilon, trials, seed,
                               budget=graphs.DEFAULT_ENUMERATION_BUDGET,
                               sample_subsets=2000) -> FailureEstimate:
    """Monte-Carlo estimate of the probability a random graph fails to expand.

    A trial graph fails when some subset of at most k columns has
    neighborhood deficit exceeding epsilon.  Subsets are enumerated
    exhaustively when the count fits the budget, otherwise sampled (which
    can only under-count failures).  Trial t draws its graph from the
    stream (seed, t), independently of scheduling.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    if not 0.0 <= epsilon < 1.0:
        raise DomainError("epsilon must lie in [0, 1)")
    exhaustive = graphs._enumeration_count(N, k) <= budget
    failures = 0
    for t in range(trials):
        ss = np.random.SeedSequence((seed, t))
        graph_seed, subset_seed = (int(v) for v in ss.generate_state(2))
        A = graphs.generate(N, n, d, graph_seed)
        if exhaustive:
            rep = graphs.expansion_coefficient(A, k, mode="exhaustive", budget=budget)
        else:
            rep = graphs.expansion_coefficient(A, k, mode="monte_carlo",
                                               trials=sample_subsets, seed=subset_seed)
        if rep.epsilon > epsilon:
            failures += 1
    return FailureEstimate(failures=failures, trials=int(trials),
                           probability=failures / trials, epsilon=float(epsilon),
                           k=int(k), exhaustive=exhaustive)
