"""End-to-end recovery experiments: signals, noise, phase grids, runtimes.

Signals follow the weighted-sparse model: an index enters the support with
probability proportional to one over its squared weight, while the squared
weights themselves are the cost charged against the sparsity budget s.
Nonzero amplitudes are sums of a standard normal and a uniform(0,1) draw.

Every trial derives its random streams from (master seed, cell index, trial
index), so grids are reproducible regardless of worker count or scheduling;
only the timing columns vary between runs.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import graphs
from .decode import DecodeProblem, decode, matrix_apply
from .errors import DimensionError, DomainError
from .weights import WeightVector, WeightedSignal, make_weights, weighted_norm

CSV_HEADER = ("kind,decoder,m_over_N,s_over_m_norm,m,s,k,trials,successes,"
              "prob,mean_rel_err_l2,mean_rel_err_lw1,mean_runtime_s")
BENCH_HEADER = "kind,m,trials,mean_gen_s,mean_encode_s,mean_decode_s,mean_total_s"
ZERO_ETA_FLOOR = 1e-6


def _as_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass
class SignalModel:
    """Support/amplitude model for weighted-sparse test signals."""

    N: int
    weights: WeightVector
    budget: float
    amplitude_rule: str = "gauss_plus_uniform"
    scale: float = 1.0

    def __post_init__(self):
        if len(self.weights) != self.N:
            raise DimensionError("weight vector length must equal N")
        if self.amplitude_rule != "gauss_plus_uniform":
            raise DomainError(f"unknown amplitude rule {self.amplitude_rule!r}")


@dataclass
class TrialRecord:
    seed: tuple
    kind: str
    decoder: str
    m: int
    s: float
    k: int
    eta: float
    gen_time: float
    encode_time: float
    decode_time: float
    success: bool
    rel_err_l2: float
    rel_err_l1: float
    rel_err_lw1: float


@dataclass
class PhaseCell:
    kind: str
    decoder: str
    m_over_N: float
    s_over_m: float
    s_over_m_norm: float
    m: int
    s: float
    k: int
    trials: int
    successes: int
    prob: float
    mean_rel_err_l2: float
    mean_rel_err_lw1: float
    mean_runtime_s: float


@dataclass
class PhaseGrid:
    cells: list
    master_seed: int
    config: "PhaseGridConfig"


@dataclass
class BenchRow:
    kind: str
    m: int
    trials: int
    mean_gen_s: float
    mean_encode_s: float
    mean_decode_s: float
    mean_total_s: float


def sample_support(model: SignalModel, seed) -> np.ndarray:
    """Draw a support with omega(S) <= budget, inclusion prob ~ omega_i^-2.

    Indices are drawn one at a time without replacement among those whose
    squared weight still fits the remaining budget; sampling stops when no
    remaining index fits.
    """
    rng = _as_rng(seed)
    om2 = model.weights.omega ** 2
    inv = om2 ** -1.0
    remaining = float(model.budget)
    alive = np.ones(model.N, dtype=bool)
    chosen = []
    while True:
        fits = alive & (om2 <= remaining + 1e-12)
        idx = np.flatnonzero(fits)
        if idx.size == 0:
            break
        p = inv[idx] / inv[idx].sum()
        pick = int(rng.choice(idx, p=p))
        chosen.append(pick)
        alive[pick] = False
        remaining -= om2[pick]
    if not chosen:
        raise DomainError(
            f"budget s={model.budget} below the smallest squared weight; nothing fits")
    return np.array(sorted(chosen), dtype=np.int64)


def draw_signal(model: SignalModel, S, seed) -> WeightedSignal:
    """Nonzeros on S are scale * (standard normal + uniform(0,1))."""
    rng = _as_rng(seed)
    S = np.asarray(S, dtype=np.int64)
    x = np.zeros(model.N)
    if S.size:
        x[S] = model.scale * (rng.standard_normal(S.size) + rng.random(S.size))
    return WeightedSignal.from_vector(x, model.weights, model.budget)


def add_noise(y, sigma_level, seed):
    """Gaussian noise rescaled to ||e||_2 = sigma_level; returns (y+e, eta1, eta2)."""
    if sigma_level < 0:
        raise DomainError("noise level must be >= 0")
    y = np.asarray(y, dtype=np.float64)
    if sigma_level == 0.0:
        return y.copy(), 0.0, 0.0
    rng = _as_rng(seed)
    e = rng.standard_normal(y.size)
    e *= sigma_level / np.linalg.norm(e)
    return y + e, float(np.abs(e).sum()), float(sigma_level)


def success_criterion(x, x_hat, eta, factor=10.0) -> bool:
    """l2 recovery error below factor*eta (absolute floor 1e-6 when eta=0)."""
    if factor <= 0:
        raise DomainError("factor must be > 0")
    err = float(np.linalg.norm(np.asarray(x_hat) - np.asarray(x)))
    if eta > 0:
        return err < factor * eta
    return err < ZERO_ETA_FLOOR


@dataclass
class PhaseGridConfig:
    """Flat configuration for phase-transition and runtime experiments."""

    N: int = 256
    d_rule: str = "2logN"           # ceil(2 ln N), or a literal integer
    m_over_N_list: tuple = ()       # empty -> m_points values in [max(2d/N,.05), .35]
    s_over_m_list: tuple = ()       # empty -> s_points values in [1/min(m), 2.5]
    m_points: int = 13
    s_points: int = 20
    trials: int = 25
    matrix: str = "expander"        # expander | gaussian | both
    weights_scheme: str = "polynomial"
    alpha: float = 0.4
    noise_l2: float = 1e-6
    decoder: str = "both"           # weighted | unweighted | both
    success_factor: float = 10.0
    signal_scale: float = 1.0

    def degree(self):
        if self.d_rule == "2logN":
            return math.ceil(2.0 * math.log(self.N))
        return int(self.d_rule)

    def matrix_kinds(self):
        if self.matrix == "both":
            return ("expander", "gaussian_dense")
        if self.matrix == "gaussian":
            return ("gaussian_dense",)
        if self.matrix == "expander":
            return ("expander",)
        raise DomainError(f"unknown matrix kind {self.matrix!r}")

    def decoders(self):
        if self.decoder == "both":
            return ("weighted", "unweighted")
        if self.decoder in ("weighted", "unweighted"):
            return (self.decoder,)
        raise DomainError(f"unknown decoder choice {self.decoder!r}")

    def scheme_weights(self):
        if self.weights_scheme == "uniform":
            return make_weights("uniform", self.N)
        if self.weights_scheme == "polynomial":
            return make_weights("polynomial", self.N, alpha=self.alpha)
        raise DomainError(
            f"weight scheme {self.weights_scheme!r} not usable in experiments")

    def axes(self):
        """Realized (m_over_N values, m values, s_over_m values)."""
        d = self.degree()
        if self.m_over_N_list:
            mratios = tuple(float(v) for v in self.m_over_N_list)
        else:
            lo = max(2.0 * d / self.N, 0.05)
            mratios = tuple(np.linspace(lo, 0.35, self.m_points))
        ms = tuple(int(round(v * self.N)) for v in mratios)
        if any(m < d for m in ms):
            raise DomainError("every m must be >= degree d")
        if self.s_over_m_list:
            sratios = tuple(float(v) for v in self.s_over_m_list)
        else:
            sratios = tuple(np.linspace(1.0 / min(ms), 2.5, self.s_points))
        return mratios, ms, sratios

    @classmethod
    def from_file(cls, path):
        kv = {}
        with open(path) as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise DomainError(f"{path}: expected 'key = value', got {line!r}")
                key, val = (part.strip() for part in line.split("=", 1))
                kv[key] = val
        return cls.from_dict(kv)

    @classmethod
    def from_dict(cls, kv):
        cfg = cls()
        for key, val in kv.items():
            if not hasattr(cfg, key):
                raise DomainError(f"unknown config key {key!r}")
            current = getattr(cfg, key)
            if key in ("m_over_N_list", "s_over_m_list"):
                setattr(cfg, key, tuple(float(v) for v in str(val).split(",") if v.strip()))
            elif isinstance(current, bool):
                setattr(cfg, key, str(val).lower() in ("1", "true", "yes"))
            elif isinstance(current, int):
                setattr(cfg, key, int(val))
            elif isinstance(current, float):
                setattr(cfg, key, float(val))
            else:
                setattr(cfg, key, str(val))
        return cfg

    def describe(self):
        return "\n".join(f"{k} = {v}" for k, v in sorted(asdict(self).items()))


def _generate_matrix(kind, N, m, d, seed):
    if kind == "expander":
        return graphs.generate(N, m, d, seed)
    rng = np.random.default_rng(seed)
    return rng.standard_normal((m, N)) / math.sqrt(m)


def _rel(err, ref):
    return err / ref if ref > 0 else err


def run_trial(config: PhaseGridConfig, kind, m, s, cell_index, trial_index,
              master_seed) -> list:
    """One paired end-to-end trial; returns a TrialRecord per decoder."""
    ss = np.random.SeedSequence((master_seed, cell_index, trial_index))
    seeds = [int(v) for v in ss.generate_state(4)]
    d = config.degree()
    scheme_w = config.scheme_weights()
    model = SignalModel(N=config.N, weights=scheme_w, budget=s,
                        scale=config.signal_scale)

    t0 = time.perf_counter()
    A = _generate_matrix(kind, config.N, m, d, seeds[0])
    gen_time = time.perf_counter() - t0

    S = sample_support(model, np.random.default_rng(seeds[1]))
    signal = draw_signal(model, S, np.random.default_rng(seeds[2]))
    x = signal.x

    t0 = time.perf_counter()
    y_clean = matrix_apply(A, x)
    encode_time = time.perf_counter() - t0

    y, eta1, eta2 = add_noise(y_clean, config.noise_l2,
                              np.random.default_rng(seeds[3]))
    eta_fit = eta1                       # l1 data fidelity for both kinds
    eta_success = eta1 if kind == "expander" else eta2

    records = []
    norm_l2 = float(np.linalg.norm(x))
    norm_l1 = float(np.abs(x).sum())
    norm_lw1 = weighted_norm(x, scheme_w, 1.0)
    for dec in config.decoders():
        om = scheme_w if dec == "weighted" else make_weights("uniform", config.N)
        t0 = time.perf_counter()
        result = decode(DecodeProblem(A=A, y=y, omega=om, eta=eta_fit))
        decode_time = time.perf_counter() - t0
        diff = result.x_hat - x
        records.append(TrialRecord(
            seed=(master_seed, cell_index, trial_index),
            kind=kind, decoder=dec, m=int(m), s=float(s), k=signal.k,
            eta=eta_success,
            gen_time=gen_time, encode_time=encode_time, decode_time=decode_time,
            success=success_criterion(x, result.x_hat, eta_success,
                                      config.success_factor),
            rel_err_l2=_rel(float(np.linalg.norm(diff)), norm_l2),
            rel_err_l1=_rel(float(np.abs(diff).sum()), norm_l1),
            rel_err_lw1=_rel(weighted_norm(diff, scheme_w, 1.0), norm_lw1)))
    return records


def _run_cell(args):
    config, kind, mratio, m, sratio, s_norm, cell_index, master_seed = args
    s = sratio * m
    trial_records = []
    for t in range(config.trials):
        trial_records.extend(
            run_trial(config, kind, m, s, cell_index, t, master_seed))
    cells = []
    for dec in config.decoders():
        recs = [r for r in trial_records if r.decoder == dec]
        k_max = max((r.k for r in recs), default=0)
        succ = sum(r.success for r in recs)
        nt = len(recs)
        cells.append(PhaseCell(
            kind=kind, decoder=dec, m_over_N=float(mratio), s_over_m=float(sratio),
            s_over_m_norm=float(s_norm), m=int(m), s=float(s), k=k_max,
            trials=nt, successes=succ, prob=succ / nt if nt else 0.0,
            mean_rel_err_l2=float(np.mean([r.rel_err_l2 for r in recs])) if nt else 0.0,
            mean_rel_err_lw1=float(np.mean([r.rel_err_lw1 for r in recs])) if nt else 0.0,
            mean_runtime_s=float(np.mean(
                [r.gen_time + r.encode_time + r.decode_time for r in recs])) if nt else 0.0))
    return cells


def run_phase_grid(config: PhaseGridConfig, master_seed=0, jobs=1) -> PhaseGrid:
    """Run trials for every (matrix kind, m/N, s/m) cell of the grid.

    The s/m axis is also reported normalized to [0, 1].  Cell seeds depend
    only on (master_seed, cell index, trial index).
    """
    if config.trials < 1:
        raise DomainError("phase grid needs trials >= 1")
    mratios, ms, sratios = config.axes()
    lo, hi = min(sratios), max(sratios)
    span = hi - lo
    tasks = []
    cell_index = 0
    for kind in config.matrix_kinds():
        for mratio, m in zip(mratios, ms):
            for sratio in sratios:
                s_norm = (sratio - lo) / span if span > 0 else 0.0
                tasks.append((config, kind, mratio, m, sratio, s_norm,
                              cell_index, master_seed))
                cell_index += 1
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_cell = list(pool.map(_run_cell, tasks))
    else:
        per_cell = [_run_cell(t) for t in tasks]
    cells = [c for group in per_cell for c in group]
    cells.sort(key=lambda c: (c.kind, c.decoder, c.m_over_N, c.s_over_m_norm))
    return PhaseGrid(cells=cells, master_seed=int(master_seed), config=config)


def run_benchmark(config: PhaseGridConfig, master_seed=0) -> list:
    """Mean generation + encode + decode wall time per (matrix kind, m)."""
    rows = []
    if config.trials < 1:
        return rows
    mratios, ms, sratios = config.axes()
    sratio = sratios[0]
    cell_index = 0
    for kind in config.matrix_kinds():
        for _, m in zip(mratios, ms):
            recs = []
            for t in range(config.trials):
                recs.extend(run_trial(config, kind, m, sratio * m,
                                      cell_index, t, master_seed))
            cell_index += 1
            gen = float(np.mean([r.gen_time for r in recs]))
            enc = float(np.mean([r.encode_time for r in recs]))
            dec = float(np.mean([r.decode_time for r in recs]))
            rows.append(BenchRow(kind=kind, m=int(m), trials=config.trials,
                                 mean_gen_s=gen, mean_encode_s=enc,
                                 mean_decode_s=dec, mean_total_s=gen + enc + dec))
    return rows


def emit_csv(obj, path):
    """Write a PhaseGrid or a benchmark row list as CSV with a fixed header."""
    if isinstance(obj, PhaseGrid):
        lines = [CSV_HEADER]
        for c in sorted(obj.cells,
                        key=lambda c: (c.kind, c.decoder, c.m_over_N, c.s_over_m_norm)):
            lines.append(",".join([
                c.kind, c.decoder, repr(float(c.m_over_N)),
                repr(float(c.s_over_m_norm)), str(int(c.m)), repr(float(c.s)),
                str(int(c.k)), str(int(c.trials)), str(int(c.successes)),
                repr(float(c.prob)), repr(float(c.mean_rel_err_l2)),
                repr(float(c.mean_rel_err_lw1)), repr(float(c.mean_runtime_s))]))
    else:
        lines = [BENCH_HEADER]
        for r in obj:
            lines.append(",".join([
                r.kind, str(int(r.m)), str(int(r.trials)),
                repr(float(r.mean_gen_s)), repr(float(r.mean_encode_s)),
                repr(float(r.mean_decode_s)), repr(float(r.mean_total_s))]))
    try:
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def read_csv(path):
    """Parse an emit_csv file back into a list of per-row dicts."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            vals = line.split(",")
            row = {}
            for key, val in zip(header, vals):
                if key in ("kind", "decoder"):
                    row[key] = val
                elif key in ("m", "k", "trials", "successes"):
                    row[key] = int(val)
                else:
                    row[key] = float(val)
            rows.append(row)
    return rows


def success_region_fraction(cells, level=0.5):
    """Fraction of grid cells with empirical success probability >= level."""
    cells = list(cells)
    if not cells:
        return 0.0
    hits = sum(1 for c in cells if c.prob >= level)
    return hits / len(cells)
