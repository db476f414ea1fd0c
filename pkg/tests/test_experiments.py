import numpy as np
import pytest

from expwl1 import experiments as ex
from expwl1.errors import DomainError
from expwl1.weights import make_weights


def inclusion_probs_oracle(omega, budget):
    """Exact inclusion probabilities of the sequential weighted draw."""
    om2 = omega ** 2
    inv = 1.0 / om2
    N = len(omega)
    probs = np.zeros(N)

    def rec(avail, remaining, pmass):
        fits = [i for i in avail if om2[i] <= remaining + 1e-12]
        if not fits:
            return
        tot = sum(inv[i] for i in fits)
        for i in fits:
            pi = pmass * inv[i] / tot
            probs[i] += pi
            rec(avail - {i}, remaining - om2[i], pi)

    rec(frozenset(range(N)), budget, 1.0)
    return probs


# ---------------------------------------------------------------- supports

def test_support_uniform_weights_exact_size():
    model = ex.SignalModel(N=10, weights=make_weights("uniform", 10), budget=3.0)
    for seed in range(5):
        S = ex.sample_support(model, seed)
        assert S.size == 3


def test_support_budget_too_small():
    om = make_weights("two_level", 4, w=0.5, support=set())   # all weights 2
    model = ex.SignalModel(N=4, weights=om, budget=3.0)
    with pytest.raises(DomainError):
        ex.sample_support(model, 0)


def test_support_respects_budget():
    om = make_weights("polynomial", 12, alpha=0.8)
    model = ex.SignalModel(N=12, weights=om, budget=5.0)
    for seed in range(20):
        S = ex.sample_support(model, seed)
        assert np.sum(om.omega[S] ** 2) <= 5.0 + 1e-9


def test_support_inclusion_frequencies_match_oracle():
    om = make_weights("polynomial", 6, alpha=0.4)
    budget = 4.0
    exact = inclusion_probs_oracle(om.omega, budget)
    model = ex.SignalModel(N=6, weights=om, budget=budget)
    draws = 20000
    rng = np.random.default_rng(123)
    freq = np.zeros(6)
    for _ in range(draws):
        freq[ex.sample_support(model, rng)] += 1
    freq /= draws
    se = np.sqrt(exact * (1 - exact) / draws) + 1e-12
    assert np.all(np.abs(freq - exact) < 4 * se + 1e-3)
    assert freq[0] > freq[-1]                      # low indices favored
    assert np.all(np.diff(exact) <= 1e-12)         # oracle itself is monotone


# ---------------------------------------------------------------- signals

def test_signal_empty_support():
    model = ex.SignalModel(N=5, weights=make_weights("uniform", 5), budget=5.0)
    sig = ex.draw_signal(model, np.array([], dtype=np.int64), 0)
    assert np.all(sig.x == 0.0)


def test_signal_reproducible():
    model = ex.SignalModel(N=8, weights=make_weights("uniform", 8), budget=8.0)
    S = np.array([1, 4, 6])
    a = ex.draw_signal(model, S, 42).x
    b = ex.draw_signal(model, S, 42).x
    assert np.array_equal(a, b)


def test_signal_amplitude_moments():
    # nonzeros are standard normal + uniform(0,1): mean 1/2, var 1 + 1/12
    model = ex.SignalModel(N=1, weights=make_weights("uniform", 1), budget=1.0)
    rng = np.random.default_rng(7)
    vals = np.array([ex.draw_signal(model, [0], rng).x[0] for _ in range(100000)])
    n = vals.size
    true_var = 1.0 + 1.0 / 12.0
    se_mean = np.sqrt(true_var / n)
    assert abs(vals.mean() - 0.5) < 3 * se_mean
    se_var = true_var * np.sqrt(2.0 / (n - 1)) * 2.0   # generous for kurtosis
    assert abs(vals.var() - true_var) < 3 * se_var


# ---------------------------------------------------------------- noise

def test_noise_zero_level():
    y, eta1, eta2 = ex.add_noise(np.ones(4), 0.0, 0)
    assert np.array_equal(y, np.ones(4))
    assert eta1 == eta2 == 0.0


def test_noise_rescaled_exactly():
    y0 = np.zeros(50)
    y, eta1, eta2 = ex.add_noise(y0, 1e-6, 3)
    e = y - y0
    assert np.linalg.norm(e) == pytest.approx(1e-6, rel=1e-12)
    assert eta2 == 1e-6
    assert eta1 == pytest.approx(np.abs(e).sum())
    assert eta1 <= np.sqrt(50) * eta2 + 1e-18


# ---------------------------------------------------------------- success

def test_success_examples():
    x = np.zeros(3)
    assert ex.success_criterion(x, x + 1e-7 / np.sqrt(3), 1e-6)
    assert not ex.success_criterion(x, x + 1e-4, 1e-6)
    assert ex.success_criterion(x, x, 0.0)
    assert not ex.success_criterion(x, x + 1.0, 0.0)


# ---------------------------------------------------------------- grid

def easy_config(**kw):
    base = dict(N=24, d_rule="4", m_over_N_list=(0.9,), s_over_m_list=(0.05,),
                trials=3, weights_scheme="polynomial", alpha=0.4,
                noise_l2=0.0, decoder="both")
    base.update(kw)
    return ex.PhaseGridConfig(**base)


def test_trivial_grid_recovers():
    grid = ex.run_phase_grid(easy_config(), master_seed=5)
    assert len(grid.cells) == 2     # one cell per decoder
    for c in grid.cells:
        assert c.prob == 1.0
        assert c.trials == 3 and c.successes == 3
        assert c.k >= 1


def test_paired_trials_share_data():
    cfg = easy_config()
    recs = ex.run_trial(cfg, "expander", 21, 1.05, 0, 0, master_seed=9)
    assert {r.decoder for r in recs} == {"weighted", "unweighted"}
    a, b = recs
    assert a.k == b.k and a.s == b.s and a.eta == b.eta
    assert a.gen_time == b.gen_time and a.encode_time == b.encode_time


def test_grid_deterministic_modulo_timing():
    cfg = easy_config(m_over_N_list=(0.5, 0.9), s_over_m_list=(0.1, 0.3),
                      trials=2)
    g1 = ex.run_phase_grid(cfg, master_seed=3)
    g2 = ex.run_phase_grid(cfg, master_seed=3)
    for c1, c2 in zip(g1.cells, g2.cells):
        for field in ("kind", "decoder", "m_over_N", "s_over_m_norm", "m", "s",
                      "k", "trials", "successes", "prob", "mean_rel_err_l2",
                      "mean_rel_err_lw1"):
            assert getattr(c1, field) == getattr(c2, field)


def test_grid_independent_of_worker_count():
    cfg = easy_config(m_over_N_list=(0.5, 0.9), s_over_m_list=(0.1, 0.3),
                      trials=2)
    g1 = ex.run_phase_grid(cfg, master_seed=7, jobs=1)
    g2 = ex.run_phase_grid(cfg, master_seed=7, jobs=2)
    for c1, c2 in zip(g1.cells, g2.cells):
        assert (c1.kind, c1.decoder, c1.m, c1.s, c1.k, c1.successes,
                c1.mean_rel_err_l2) == \
               (c2.kind, c2.decoder, c2.m, c2.s, c2.k, c2.successes,
                c2.mean_rel_err_l2)


def test_grid_seed_changes_results():
    cfg = easy_config(m_over_N_list=(0.3,), s_over_m_list=(1.2,), trials=4)
    g1 = ex.run_phase_grid(cfg, master_seed=1)
    g2 = ex.run_phase_grid(cfg, master_seed=2)
    assert any(c1.mean_rel_err_l2 != c2.mean_rel_err_l2
               for c1, c2 in zip(g1.cells, g2.cells))


def test_success_monotone_in_m_within_two_se():
    # sanity property of phase transitions: at fixed s/m, more measurements
    # never hurt beyond statistical noise
    cfg = ex.PhaseGridConfig(N=64, d_rule="2logN", trials=15,
                             m_over_N_list=(0.3, 0.5, 0.7, 0.9),
                             s_over_m_list=(0.25, 0.6, 1.0),
                             weights_scheme="polynomial", alpha=0.4,
                             noise_l2=1e-6, decoder="weighted")
    grid = ex.run_phase_grid(cfg, master_seed=21)
    by_s = {}
    for c in grid.cells:
        by_s.setdefault(c.s_over_m, []).append(c)
    for cells in by_s.values():
        cells.sort(key=lambda c: c.m_over_N)
        for a, b in zip(cells, cells[1:]):
            se = np.sqrt(a.prob * (1 - a.prob) / a.trials
                         + b.prob * (1 - b.prob) / b.trials)
            assert b.prob >= a.prob - 2 * se - 1e-12


def test_gaussian_kind_runs():
    cfg = easy_config(matrix="gaussian", trials=2)
    grid = ex.run_phase_grid(cfg, master_seed=4)
    assert all(c.kind == "gaussian_dense" for c in grid.cells)
    assert all(c.prob == 1.0 for c in grid.cells)


# ---------------------------------------------------------------- CSV

def test_csv_empty_grid(tmp_path):
    grid = ex.PhaseGrid(cells=[], master_seed=0, config=easy_config())
    path = tmp_path / "g.csv"
    ex.emit_csv(grid, path)
    assert path.read_text() == ex.CSV_HEADER + "\n"


def test_csv_rows_sorted_and_round_trip(tmp_path):
    cfg = easy_config(m_over_N_list=(0.9, 0.5), s_over_m_list=(0.3, 0.1),
                      trials=2)
    grid = ex.run_phase_grid(cfg, master_seed=3)
    path = tmp_path / "g.csv"
    ex.emit_csv(grid, path)
    rows = ex.read_csv(path)
    assert len(rows) == 8
    keys = [(r["kind"], r["decoder"], r["m_over_N"], r["s_over_m_norm"])
            for r in rows]
    assert keys == sorted(keys)
    by_key = {(c.kind, c.decoder, c.m_over_N, c.s_over_m_norm): c
              for c in grid.cells}
    for r in rows:
        c = by_key[(r["kind"], r["decoder"], r["m_over_N"], r["s_over_m_norm"])]
        assert r["prob"] == c.prob
        assert r["mean_rel_err_l2"] == c.mean_rel_err_l2
        assert r["mean_runtime_s"] == c.mean_runtime_s
        assert r["s"] == c.s and r["m"] == c.m and r["k"] == c.k


def test_csv_header_exact():
    assert ex.CSV_HEADER == ("kind,decoder,m_over_N,s_over_m_norm,m,s,k,trials,"
                             "successes,prob,mean_rel_err_l2,mean_rel_err_lw1,"
                             "mean_runtime_s")


# ---------------------------------------------------------------- bench

def test_bench_zero_trials_empty(tmp_path):
    cfg = easy_config(trials=0)
    rows = ex.run_benchmark(cfg, master_seed=0)
    assert rows == []
    path = tmp_path / "b.csv"
    ex.emit_csv(rows, path)
    assert path.read_text() == ex.BENCH_HEADER + "\n"


def test_bench_non_timing_fields_stable():
    cfg = easy_config(trials=2, matrix="both")
    r1 = ex.run_benchmark(cfg, master_seed=6)
    r2 = ex.run_benchmark(cfg, master_seed=6)
    assert [(r.kind, r.m, r.trials) for r in r1] == \
           [(r.kind, r.m, r.trials) for r in r2]
    assert {r.kind for r in r1} == {"expander", "gaussian_dense"}


# ---------------------------------------------------------------- config

def test_config_file_parsing(tmp_path):
    path = tmp_path / "cfg.txt"
    path.write_text("""
# comment line
N = 64
d_rule = 5
m_over_N_list = 0.2, 0.4
s_over_m_list = 0.1
trials = 7
matrix = expander
weights_scheme = polynomial
alpha = 0.4
noise_l2 = 1e-6
decoder = weighted
""")
    cfg = ex.PhaseGridConfig.from_file(path)
    assert cfg.N == 64 and cfg.degree() == 5
    assert cfg.m_over_N_list == (0.2, 0.4)
    assert cfg.trials == 7 and cfg.decoder == "weighted"
    assert cfg.noise_l2 == 1e-6


def test_config_unknown_key(tmp_path):
    path = tmp_path / "cfg.txt"
    path.write_text("frobnicate = 3\n")
    with pytest.raises(DomainError):
        ex.PhaseGridConfig.from_file(path)


def test_config_default_axes():
    cfg = ex.PhaseGridConfig(N=1024)
    mr, ms, sr = cfg.axes()
    assert cfg.degree() == 14              # ceil(2 ln 1024)
    assert len(mr) == 13 and len(sr) == 20
    assert mr[0] == pytest.approx(max(2 * 14 / 1024, 0.05))
    assert mr[-1] == pytest.approx(0.35)
    assert sr[0] == pytest.approx(1.0 / min(ms))
    assert sr[-1] == pytest.approx(2.5)
