import itertools
import math

import numpy as np
import pytest

from expwl1 import analysis, graphs
from expwl1.decode import DecodeProblem, decode
from expwl1.errors import CertificationError, DomainError
from expwl1.weights import WeightVector, make_weights


def mat(col_lists, n):
    cols = np.array([sorted(c) for c in col_lists], dtype=np.int32)
    return graphs.SparseBinaryMatrix(n=n, N=len(col_lists), d=cols.shape[1], cols=cols)


def eps_oracle(A, k):
    best = 0.0
    for t in range(1, k + 1):
        for S in itertools.combinations(range(A.N), t):
            rows = set()
            for i in S:
                rows |= set(int(j) for j in A.cols[i])
            best = max(best, 1.0 - len(rows) / (A.d * t))
    return best


# ---------------------------------------------------------------- constants

def test_rnsp_constants_example():
    c = analysis.rnsp_constants(0.1, 4)
    assert c.rho == pytest.approx(1.0 / 3.0)
    assert c.tau == pytest.approx(1.0 / (2.0 * 0.6))


def test_rnsp_constants_perfect_expansion():
    c = analysis.rnsp_constants(0.0, 9)
    assert c.rho == 0.0
    assert c.tau == pytest.approx(1.0 / 3.0)


def test_rnsp_constants_boundary_rejected():
    with pytest.raises(CertificationError, match="1/6"):
        analysis.rnsp_constants(1.0 / 6.0, 4)


def test_rnsp_constants_monotone():
    eps = np.linspace(0.0, 1.0 / 6.0 - 1e-6, 20)
    rhos = [analysis.rnsp_constants(e, 4).rho for e in eps]
    taus = [analysis.rnsp_constants(e, 4).tau for e in eps]
    assert all(a < b for a, b in zip(rhos, rhos[1:]))
    assert all(a < b for a, b in zip(taus, taus[1:]))


def test_error_constants_example():
    e = analysis.error_constants(analysis.rnsp_constants(0.1, 4))
    assert e.c1 == pytest.approx(4.0)
    assert e.c2 == pytest.approx(5.0)
    assert e.C1 == pytest.approx(4.0)
    assert e.C2 == pytest.approx(10.0)


def test_error_constants_zero_rho():
    e = analysis.error_constants(analysis.RnspConstants(rho=0.0, tau=1.0,
                                                        epsilon_2k=0.0, d=1))
    assert (e.c1, e.c2, e.C1, e.C2) == (2.0, 4.0, 2.0, 8.0)


def test_error_constants_limit_small_eps():
    for d in (1, 4, 16):
        e = analysis.error_constants(analysis.rnsp_constants(1e-12, d))
        assert e.c1 == pytest.approx(2.0, rel=1e-9)
        assert e.c2 == pytest.approx(4.0 / math.sqrt(d), rel=1e-9)
        assert e.c1 >= 2.0 and e.C2 == pytest.approx(2 * e.c2)


# ---------------------------------------------------------------- collision bound

def test_collision_bound_disjoint_columns():
    A = mat([[0], [1], [2]], n=3)
    rep = analysis.check_collision_bound(A, [1.0, -2.0, 0.5],
                                         make_weights("uniform", 3))
    assert rep.lhs == 0.0
    assert rep.holds


def test_collision_bound_equality_witness():
    A = mat([[0], [0]], n=1)
    rep = analysis.check_collision_bound(A, [1.0, 1.0], make_weights("uniform", 2))
    assert rep.lhs == pytest.approx(1.0)
    assert rep.epsilon_k == pytest.approx(0.5)
    assert rep.rhs == pytest.approx(1.0)
    assert rep.holds


def test_collision_bound_randomized():
    rng = np.random.default_rng(17)
    for _ in range(40):
        N = int(rng.integers(4, 13))
        n = int(rng.integers(3, 9))
        d = int(rng.integers(1, min(n, 3) + 1))
        A = graphs.generate(N, n, d, int(rng.integers(1 << 31)))
        k = int(rng.integers(1, min(N, 6)))
        x = np.zeros(N)
        sup = rng.choice(N, size=k, replace=False)
        x[sup] = rng.standard_normal(k)
        om = WeightVector(1.0 + rng.random(N) * 2)
        rep = analysis.check_collision_bound(A, x, om)
        assert rep.holds, (rep.lhs, rep.rhs)


def test_collision_bound_zero_signal():
    A = mat([[0], [1]], n=2)
    rep = analysis.check_collision_bound(A, [0.0, 0.0], make_weights("uniform", 2))
    assert rep.k == 0 and rep.holds


# ---------------------------------------------------------------- certify

def test_certify_identity_columns():
    A = mat([[0], [1], [2], [3]], n=4)
    cert = analysis.certify(A, 2)
    assert cert.certified
    assert cert.epsilon_2k == 0.0
    assert cert.rnsp.rho == 0.0


def test_certify_all_equal_columns():
    A = mat([[0], [0], [0], [0]], n=1)
    cert = analysis.certify(A, 2)       # eps_4 = 1 - 1/4
    assert cert.epsilon_2k == pytest.approx(0.75)
    assert not cert.certified
    assert cert.rnsp is None


def test_certify_matches_bruteforce():
    rng = np.random.default_rng(18)
    for _ in range(8):
        A = graphs.generate(16, 12, 4, int(rng.integers(1 << 31)))
        cert = analysis.certify(A, 2)
        eps = eps_oracle(A, 4)
        assert cert.epsilon_2k == pytest.approx(eps, abs=1e-12)
        assert cert.certified == (eps < 1.0 / 6.0 - 1e-15)


def test_certify_exact_boundary_not_certified():
    # one column pair shares exactly d/6 of its 2d slots: deficit = 1/6 exactly
    rng = np.random.default_rng(19)
    base = graphs.generate(6, 50, 12, 5)
    cols = base.cols.copy()
    cols[1] = cols[0].copy()
    cols[1, 4:] = np.setdiff1d(np.arange(50), cols[0])[:8]
    # columns 0 and 1 now share exactly 4 rows; deficit 4/24 = 1/6
    A = graphs.SparseBinaryMatrix(n=50, N=6, d=12, cols=np.sort(cols, axis=1))
    rep = graphs.expansion_coefficient(A, 2)
    if rep.deficit_num * 6 == rep.deficit_den:     # worst set is that pair
        cert = analysis.certify(A, 1)
        assert not cert.certified


def test_certify_requires_2k_columns():
    A = mat([[0], [1]], n=2)
    with pytest.raises(DomainError):
        analysis.certify(A, 2)


# ---------------------------------------------------------------- rnsp sampling

CERT_SHAPES = [(18, 600, 15, 0), (20, 700, 18, 0), (22, 800, 18, 0),
               (24, 900, 20, 0), (21, 750, 16, 0)]


def test_rnsp_sampled_zero_violations():
    N, n, d, seed = CERT_SHAPES[1]
    A = graphs.generate(N, n, d, seed)
    cert = analysis.certify(A, 2)
    assert cert.certified
    om = make_weights("polynomial", N, alpha=1.0)
    rep = analysis.check_rnsp_sampled(A, om, s=6.0, k=2, trials=300, seed=3,
                                      certificate=cert)
    assert rep.violations == 0
    assert rep.max_slack <= 1e-9


def test_rnsp_sampled_needs_certificate():
    A = mat([[0], [0], [0], [0]], n=1)
    with pytest.raises(CertificationError):
        analysis.check_rnsp_sampled(A, make_weights("uniform", 4), s=2.0, k=2,
                                    trials=5, seed=0)


def test_rnsp_singleton_structure():
    # ||A e_i||_1 = d, so the inequality on S = {i} reduces to
    # omega_i <= tau sqrt(s) d, which the certified constants satisfy
    N, n, d, seed = CERT_SHAPES[0]
    A = graphs.generate(N, n, d, seed)
    cert = analysis.certify(A, 1)
    assert cert.certified
    om = make_weights("uniform", N)
    s = 1.0
    for i in range(N):
        v = np.zeros(N)
        v[i] = 1.0
        av = np.abs(graphs.apply(A, v)).sum()
        assert av == pytest.approx(d)
        assert om.omega[i] <= cert.rnsp.tau * math.sqrt(s) * av + 1e-12


# ---------------------------------------------------------------- error bound

def test_recovery_error_bound_trivial():
    om = make_weights("uniform", 6)
    consts = analysis.error_constants(analysis.rnsp_constants(0.05, 4))
    x = np.array([1.0, 0.0, 2.0, 0.0, 0.0, 0.0])
    lhs, rhs, holds = analysis.recovery_error_bound(x, x, om, s=2.0, eta=0.0,
                                                    consts=consts)
    assert lhs == 0.0 and holds


def test_recovery_error_bound_sparse_noiseless():
    om = make_weights("uniform", 6)
    consts = analysis.error_constants(analysis.rnsp_constants(0.05, 4))
    x = np.array([1.0, 0.0, 2.0, 0.0, 0.0, 0.0])
    x_wrong = x + np.array([0.0, 0.1, 0.0, 0.0, 0.0, 0.0])
    lhs, rhs, holds = analysis.recovery_error_bound(x, x_wrong, om, s=2.0,
                                                    eta=0.0, consts=consts)
    assert rhs == 0.0 and not holds     # sigma_s and eta both vanish


def test_recovery_error_bound_end_to_end():
    rng = np.random.default_rng(20)
    for (N, n, d, seed) in CERT_SHAPES[:3]:
        A = graphs.generate(N, n, d, seed)
        cert = analysis.certify(A, 2)
        assert cert.certified
        om = make_weights("polynomial", N, alpha=0.4)
        s = 4.0
        x = np.zeros(N)
        x[[0, 2]] = rng.standard_normal(2)
        e = rng.standard_normal(n)
        e *= 1e-4 / np.abs(e).sum()
        y = graphs.apply(A, x) + e
        eta = float(np.abs(e).sum())
        res = decode(DecodeProblem(A=A, y=y, omega=om, eta=eta))
        assert res.status == "optimal"
        lhs, rhs, holds = analysis.recovery_error_bound(
            x, res.x_hat, om, s=s, eta=eta, consts=cert.errors)
        assert holds, (lhs, rhs)


# ---------------------------------------------------------------- failure estimate

def test_failure_estimate_k1_never_fails():
    rep = analysis.expansion_failure_estimate(N=20, n=10, d=3, k=1,
                                              epsilon=0.25, trials=40, seed=1)
    assert rep.probability == 0.0


def test_failure_estimate_full_columns():
    rep = analysis.expansion_failure_estimate(N=16, n=4, d=4, k=1,
                                              epsilon=0.25, trials=20, seed=2)
    assert rep.probability == 0.0


def test_failure_estimate_decreasing_in_n():
    probs = []
    for n in (32, 48, 64):
        rep = analysis.expansion_failure_estimate(N=24, n=n, d=4, k=2,
                                                  epsilon=0.25, trials=120,
                                                  seed=11)
        probs.append(rep.probability)
    assert probs[0] >= probs[1] >= probs[2]
    assert probs[0] > probs[2]      # strictly easier with more rows here


def test_failure_estimate_deterministic():
    a = analysis.expansion_failure_estimate(N=32, n=16, d=4, k=2, epsilon=0.2,
                                            trials=50, seed=9)
    b = analysis.expansion_failure_estimate(N=32, n=16, d=4, k=2, epsilon=0.2,
                                            trials=50, seed=9)
    assert a.failures == b.failures
