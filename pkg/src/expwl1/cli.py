"""Command-line entry point: generate / weights / decode / verify / phase / bench.

All randomness flows from the --seed flag of each subcommand.  Progress and
human-readable summaries go to stderr; machine-readable results go to the
requested output files (or stdout for reports without a file argument).

Exit codes: 0 success; 2 infeasible decode; 3 decode iteration limit;
64 usage error; 65 domain/input error; 66 file error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import analysis, experiments, fileio, graphs
from .decode import DecodeProblem, decode
from .errors import ExpWl1Error
from .weights import WeightVector, make_weights

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_ITERATION_LIMIT = 3
EXIT_USAGE = 64
EXIT_DOMAIN = 65
EXIT_FILE = 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser():
    parser = _Parser(prog="expwl1", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("generate", help="random left-d-regular sparse binary matrix")
    p.add_argument("--N", type=int, required=True, help="columns (signal length)")
    p.add_argument("--n", type=int, required=True, help="rows (measurements)")
    p.add_argument("--d", type=int, required=True, help="ones per column")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("weights", help="build and save a weight vector")
    p.add_argument("--scheme", required=True,
                   choices=["uniform", "polynomial", "two_level"])
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--w", type=float, default=None)
    p.add_argument("--support-file", default=None,
                   help="estimated support for two_level, one index per line")
    p.add_argument("--out", required=True)

    p = sub.add_parser("decode", help="weighted l1 decoding of a measurement vector")
    p.add_argument("--matrix", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--weights", default=None, help="weight file; default uniform")
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--form", default="condensed", choices=["condensed", "canonical"])
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="expansion measurement and certification")
    p.add_argument("--matrix", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", default="exhaustive", choices=["exhaustive", "mc"])
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", default=None, help="JSON report path; default stdout")

    p = sub.add_parser("phase", help="phase-transition grid -> CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("bench", help="runtime comparison table -> CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _log(msg):
    print(msg, file=sys.stderr)


def _cmd_generate(args):
    A = graphs.generate(args.N, args.n, args.d, args.seed)
    A.save(args.out)
    _log(f"wrote {args.n}x{args.N} matrix with d={args.d} to {args.out}")
    return EXIT_OK


def _cmd_weights(args):
    support = fileio.read_index_set(args.support_file) if args.support_file else None
    wv = make_weights(args.scheme, args.N, alpha=args.alpha, w=args.w,
                      support=support)
    wv.save(args.out)
    _log(f"wrote {args.scheme} weights of length {args.N} to {args.out}")
    return EXIT_OK


def _cmd_decode(args):
    A = graphs.SparseBinaryMatrix.load(args.matrix)
    y = fileio.read_vector(args.y)
    if args.weights:
        om = WeightVector.load(args.weights)
    else:
        om = make_weights("uniform", A.N)
    result = decode(DecodeProblem(A=A, y=y, omega=om, eta=args.eta),
                    form=args.form)
    fileio.write_vector(result.x_hat, args.out)
    summary = {"status": result.status, "objective": result.objective,
               "residual": result.residual, "iterations": result.iterations}
    print(json.dumps(summary))
    _log(f"decode {result.status}: objective={result.objective:.6g} "
         f"residual={result.residual:.3g} iterations={result.iterations}")
    if result.status == "infeasible":
        return EXIT_INFEASIBLE
    if result.status == "iteration_limit":
        return EXIT_ITERATION_LIMIT
    return EXIT_OK


def _cmd_verify(args):
    A = graphs.SparseBinaryMatrix.load(args.matrix)
    mode = "exhaustive" if args.mode == "exhaustive" else "monte_carlo"
    cert = analysis.certify(A, args.k, mode=mode, trials=args.trials,
                            seed=args.seed)
    report = {
        "matrix": args.matrix, "matrix_id": cert.matrix_id,
        "n": A.n, "N": A.N, "d": A.d,
        "k": cert.k, "epsilon_2k": cert.epsilon_2k,
        "exhaustive": cert.exhaustive, "certified": cert.certified,
    }
    if cert.rnsp is not None:
        report.update(rho=cert.rnsp.rho, tau=cert.rnsp.tau)
        report.update(c1=cert.errors.c1, c2=cert.errors.c2,
                      C1=cert.errors.C1, C2=cert.errors.C2)
    text = json.dumps(report, indent=2)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    _log(f"eps_2k={cert.epsilon_2k:.4f} certified={cert.certified}")
    return EXIT_OK


def _cmd_phase(args):
    config = experiments.PhaseGridConfig.from_file(args.config)
    _log(f"running phase grid, seed={args.seed}, jobs={args.jobs}")
    grid = experiments.run_phase_grid(config, master_seed=args.seed,
                                      jobs=args.jobs)
    experiments.emit_csv(grid, args.out)
    with open(args.out + ".meta.txt", "w") as fh:
        fh.write(config.describe() + f"\nmaster_seed = {args.seed}\n"
                 "amplitude_rule = gauss_plus_uniform\n")
    _log(f"wrote {len(grid.cells)} cells to {args.out}")
    return EXIT_OK


def _cmd_bench(args):
    config = experiments.PhaseGridConfig.from_file(args.config)
    rows = experiments.run_benchmark(config, master_seed=args.seed)
    experiments.emit_csv(rows, args.out)
    _log(f"wrote {len(rows)} benchmark rows to {args.out}")
    return EXIT_OK


_COMMANDS = {
    "generate": _cmd_generate,
    "weights": _cmd_weights,
    "decode": _cmd_decode,
    "verify": _cmd_verify,
    "phase": _cmd_phase,
    "bench": _cmd_bench,
}


def dispatch(argv) -> int:
    """Route an argument list to its subcommand; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        _log(f"error: {exc}")
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except ExpWl1Error as exc:
        _log(f"error: {exc}")
        return EXIT_DOMAIN
    except OSError as exc:
        _log(f"file error: {exc}")
        return EXIT_FILE


def main(argv=None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
