"""Command-line interface.

Subcommands
-----------
fidelity        overlap and squared Bures distance of two density matrices
qfi             finite-difference and SLD Fisher information of a channel path
verify-lemma    fuzz the joint convexity of the squared Bures distance
verify-theorem  fuzz the mixed-state sensitivity bound
scaling         sensitivity vs resource count for product/entangled probes
werner          phase QFI of a GHZ probe admixed with white noise

Exit codes: 0 all checks pass, 1 a verification trial was flagged,
2 configuration or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .channels import apply, channel_derivative
from .errors import QSenseError
from .metrology import bures_distance_sq, delta_x_min, fidelity, qfi_fd, qfi_sld
from .serialize import channel_from_json, load_json, matrix_from_json
from .states import as_density_matrix
from .verify import (
    SuiteConfig,
    qfi_nondecreasing_in_q,
    run_suite,
    scaling_experiment,
    werner_experiment,
    write_scaling_csv,
    write_werner_csv,
)


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}: {exc}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad int list {text!r}: {exc}")


def _emit(obj: dict) -> None:
    print(json.dumps(obj, sort_keys=True, indent=2))


def _finite(x: float):
    return x if x == x and abs(x) != float("inf") else repr(x)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsense",
        description="Quantum parameter-estimation sensitivity bounds and verification suites.",
    )
    parser.add_argument("--version", action="version", version=f"qsense {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fidelity", help="fidelity and squared Bures distance of two states")
    p.add_argument("--rho", required=True, help="density matrix JSON file")
    p.add_argument("--sigma", required=True, help="density matrix JSON file")

    p = sub.add_parser("qfi", help="QFI of a channel path by both routes")
    p.add_argument("--channel", required=True, help="channel spec JSON file")
    p.add_argument("--rho", required=True, help="initial density matrix JSON file")
    p.add_argument("--x", type=float, required=True, help="parameter value")
    p.add_argument("--dx", type=float, default=1e-4, help="finite-difference step")
    p.add_argument("--n", type=int, default=1, help="number of repetitions N")

    p = sub.add_parser("verify-lemma", help="fuzz squared-Bures joint convexity")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--dims", type=_int_list, default=[2, 4, 8])
    p.add_argument("--out", help="full JSON report path")
    p.add_argument("--csv", help="CSV summary path")
    p.add_argument("--plot", help="margin histogram figure path (PNG)")
    p.add_argument(
        "--self-test-invert", action="store_true",
        help="flag satisfied trials instead (harness self-test; expect exit 1)",
    )

    p = sub.add_parser("verify-theorem", help="fuzz the mixed-state sensitivity bound")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--dims", type=_int_list, default=[4, 8])
    p.add_argument("--gamma", type=_float_list, default=[0.0, 0.1, 0.3],
                   help="depolarizing strengths sampled per trial")
    p.add_argument("--dx", type=float, default=1e-4)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--out", help="full JSON report path")
    p.add_argument("--csv", help="CSV summary path")
    p.add_argument("--plot", help="margin histogram figure path (PNG)")
    p.add_argument("--self-test-invert", action="store_true",
                   help="flag satisfied trials instead (harness self-test; expect exit 1)")

    p = sub.add_parser("scaling", help="sensitivity vs subsystem count table")
    p.add_argument("--h", required=True, help="site generator matrix JSON file")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--dx", type=float, default=1e-4)
    p.add_argument("--csv", help="CSV table path")
    p.add_argument("--plot", help="scaling figure path (PNG)")

    p = sub.add_parser("werner", help="QFI of q|GHZ><GHZ| + (1-q) I/2^K over a q grid")
    p.add_argument("--k", type=int, required=True, help="number of qubits")
    p.add_argument("--q-grid", type=_float_list, default=[i / 10 for i in range(11)])
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--dx", type=float, default=1e-4)
    p.add_argument("--csv", help="CSV table path")
    p.add_argument("--plot", help="QFI-vs-q figure path (PNG)")

    return parser


def _cmd_fidelity(args) -> int:
    rho = as_density_matrix(matrix_from_json(load_json(args.rho)))
    sigma = as_density_matrix(matrix_from_json(load_json(args.sigma)))
    f = fidelity(rho, sigma)
    _emit({"fidelity": f, "bures_distance_sq": bures_distance_sq(rho, sigma)})
    return 0


def _cmd_qfi(args) -> int:
    ch = channel_from_json(load_json(args.channel))
    rho0 = as_density_matrix(matrix_from_json(load_json(args.rho)))
    fd = qfi_fd(ch, rho0, args.x, args.dx)
    drho = channel_derivative(ch, rho0, args.x, args.dx)
    sld = qfi_sld(apply(ch, rho0, args.x), drho)
    rep_fd = delta_x_min(fd, args.n)
    rep_sld = delta_x_min(sld, args.n)
    _emit({
        "x": args.x,
        "dx": args.dx,
        "n_repetitions": args.n,
        "qfi_fd": fd,
        "qfi_sld": sld,
        "delta_x_min_fd": _finite(rep_fd.delta_x_min),
        "delta_x_min_sld": _finite(rep_sld.delta_x_min),
    })
    return 0


def _cmd_verify(args, suite: str) -> int:
    config = SuiteConfig(
        suite=suite,
        trials=args.trials,
        master_seed=args.seed,
        dims=tuple(args.dims),
        gammas=tuple(getattr(args, "gamma", [0.0, 0.1, 0.3])),
        dx=getattr(args, "dx", 1e-4),
        n_repetitions=getattr(args, "n", 1),
        invert=args.self_test_invert,
        out_json=args.out,
        out_csv=args.csv,
    )
    outcome = run_suite(config)
    if args.plot:
        from . import figures

        if suite == "lemma":
            figures.plot_lemma_margins(outcome.results, args.plot)
        else:
            figures.plot_theorem_margins(outcome.results, args.plot)
    summary = {k: v for k, v in outcome.report.items() if k != "trials"}
    _emit(summary)
    return outcome.exit_code


def _cmd_scaling(args) -> int:
    h = matrix_from_json(load_json(args.h))
    rows = scaling_experiment(h, args.kmax, n_repetitions=args.n, dx=args.dx)
    if args.csv:
        write_scaling_csv(rows, args.csv)
    if args.plot:
        from . import figures

        figures.plot_scaling(rows, args.plot)
    print("k,delta_product,delta_product_closed,delta_entangled,"
          "delta_entangled_closed,ratio,ratio_expected")
    for r in rows:
        print(f"{r.n_sites},{r.delta_product!r},{r.delta_product_closed!r},"
              f"{r.delta_entangled!r},{r.delta_entangled_closed!r},"
              f"{r.ratio!r},{r.ratio_expected!r}")
    return 0


def _cmd_werner(args) -> int:
    rows = werner_experiment(args.k, args.q_grid, n_repetitions=args.n, dx=args.dx)
    if args.csv:
        write_werner_csv(rows, args.csv)
    if args.plot:
        from . import figures

        figures.plot_werner(rows, args.plot)
    print("q,qfi,delta_x_min")
    for r in rows:
        print(f"{r.q!r},{r.qfi!r},{r.delta_x_min!r}")
    print(f"# qfi_nondecreasing_in_q: {qfi_nondecreasing_in_q(rows)}", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "fidelity":
            return _cmd_fidelity(args)
        if args.command == "qfi":
            return _cmd_qfi(args)
        if args.command == "verify-lemma":
            return _cmd_verify(args, "lemma")
        if args.command == "verify-theorem":
            return _cmd_verify(args, "theorem")
        if args.command == "scaling":
            return _cmd_scaling(args)
        if args.command == "werner":
            return _cmd_werner(args)
        raise AssertionError(f"unhandled command {args.command}")
    except QSenseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
