"""Command-line front end: penalty calculus, solution paths, fits, experiments.

Every subcommand is deterministic given its flags; randomness always comes
from an explicit --seed or config seed. Structured results print as JSON;
tabular series are written as CSV.
"""

import argparse
import json
import sys

import numpy as np

from . import io, quantizer, regression
from .penalty import PenaltyParams, grad, hess, ridge_gap, saddle, value
from .prox import solution_path
from .quantizer import QuantNet, ShiftedPenalty, TrainConfig


def _params(args):
    return PenaltyParams(alpha=args.alpha, beta=args.beta)


def _print_json(obj):
    print(json.dumps(obj, indent=2))


def cmd_eval(args):
    p = _params(args)
    _print_json({
        "alpha": p.alpha, "beta": p.beta, "x": args.x,
        "value": value(p, args.x),
        "grad": grad(p, args.x),
        "hess": hess(p, args.x),
    })
    return 0


def cmd_saddle(args):
    p = _params(args)
    info = saddle(p)
    _print_json({"alpha": p.alpha, "beta": p.beta, "x0": info.x0, "value": info.value})
    return 0


def cmd_ridge_gap(args):
    p = PenaltyParams(alpha=args.alpha, beta=2.0 / args.alpha)
    _print_json({"alpha": p.alpha, "beta": p.beta, "c": args.c,
                 "gap": ridge_gap(p, args.c)})
    return 0


def cmd_path(args):
    p = _params(args)
    path = solution_path(args.lam, p, args.zmin, args.zmax, args.n)
    io.write_csv(args.out, ["z", "theta"],
                 zip(path.z_grid.tolist(), path.theta_values.tolist()))
    print(f"wrote {args.n} path points to {args.out}")
    return 0


def cmd_fit(args):
    X, y = io.read_regression_csv(args.data)
    problem = regression.RegressionProblem(X=X, y=y, lam=args.lam, params=_params(args))
    result = regression.fit(problem, max_iter=args.max_iter, tol=args.tol)
    io.write_json(args.out, {
        "theta": result.theta.tolist(),
        "objective_trace": result.objective_trace,
        "converged": result.converged,
        "iterations": result.iterations,
    })
    print(f"wrote fit ({result.iterations} iterations, "
          f"converged={result.converged}) to {args.out}")
    return 0


def cmd_consistency(args):
    report = regression.consistency_experiment(
        true_theta=args.theta, n_list=args.n_list, replicates=args.reps,
        lam=args.lam, params=_params(args), noise_sd=args.noise_sd, seed=args.seed,
    )
    io.write_json(args.out, {
        "sample_sizes": report.sample_sizes,
        "scaled_errors": report.scaled_errors,
        "replicates": report.replicates,
        "seed": report.seed,
    })
    print(f"wrote consistency report to {args.out}")
    return 0


def _penalty_from_config(cfg):
    pen = cfg["penalty"]
    kind = pen["kind"]
    params = None
    if kind == "foothill":
        params = PenaltyParams(alpha=pen["alpha"], beta=pen["beta"])
    return ShiftedPenalty(kind=kind, params=params)


def _load_experiment(path):
    with open(path) as fh:
        cfg = json.load(fh)
    data_cfg = cfg.get("data", {"kind": "two_gaussians", "n": 1000,
                                "separation": 4.0, "seed": 0})
    if data_cfg.get("kind", "csv" if "path" in data_cfg else None) == "two_gaussians":
        X, y = quantizer.two_gaussians(
            n=data_cfg.get("n", 1000),
            separation=data_cfg.get("separation", 4.0),
            seed=data_cfg.get("seed", 0),
            p=data_cfg.get("p", 2),
        )
    else:
        X, y = io.read_labeled_csv(data_cfg["path"])
    hidden = cfg.get("net", {}).get("hidden", [16, 16])
    sizes = [X.shape[1], *hidden, int(y.max()) + 1]
    return cfg, X, y, sizes


def _run_quant(cfg, X, y, sizes, penalty):
    tc = TrainConfig(
        epochs=cfg["epochs"], batch_size=cfg["batch_size"],
        learning_rate=cfg["learning_rate"], lambda_base=cfg["lambda_base"],
        seed=cfg["seed"], penalty=penalty,
    )
    net = QuantNet.initialize(sizes, np.random.default_rng(tc.seed))
    report = quantizer.train(X, y, net, tc)
    return net, report


def cmd_quantize(args):
    cfg, X, y, sizes = _load_experiment(args.config)
    net, report = _run_quant(cfg, X, y, sizes, _penalty_from_config(cfg))
    snapshot = quantizer.binarize_snapshot(net)
    io.write_json(args.out, {
        "train_accuracy": report.train_accuracy,
        "concentration": report.concentration,
        "lambdas": report.lambdas,
        "final_mu": [mu.tolist() for mu in report.final_mu],
        "quantized_accuracy": quantizer.accuracy(snapshot, X, y),
        "latent_accuracy": quantizer.accuracy(net, X, y),
    })
    if args.epochs_csv:
        io.write_csv(args.epochs_csv, ["epoch", "lambda", "train_acc", "concentration"],
                     zip(range(len(report.lambdas)), report.lambdas,
                         report.train_accuracy, report.concentration))
    print(f"wrote quantization report to {args.out}")
    return 0


def cmd_compare(args):
    cfg, X, y, sizes = _load_experiment(args.config)
    foothill_pen = _penalty_from_config(cfg)
    rows = []
    for pen in (foothill_pen, ShiftedPenalty("mod_l1"), ShiftedPenalty("mod_l2")):
        net, report = _run_quant(cfg, X, y, sizes, pen)
        snapshot = quantizer.binarize_snapshot(net)
        rows.append([
            pen.kind, report.lambdas[-1], report.train_accuracy[-1],
            report.concentration[-1],
            quantizer.accuracy(snapshot, X, y), quantizer.accuracy(net, X, y),
        ])
    io.write_csv(args.out, ["penalty", "final_lambda", "train_accuracy",
                            "concentration", "quantized_accuracy", "latent_accuracy"],
                 rows)
    print(f"wrote comparison to {args.out}")
    return 0


def _add_params(p, alpha_only=False):
    p.add_argument("--alpha", type=float, required=True, help="shape parameter (> 0)")
    if not alpha_only:
        p.add_argument("--beta", type=float, required=True, help="scale parameter (> 0)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="foothill",
        description="Foothill penalty toolkit: calculus, proximal paths, "
                    "penalized regression, binary quantization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="penalty value/grad/hess at a point")
    _add_params(p)
    p.add_argument("--x", type=float, required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("saddle", help="positive saddle point and value there")
    _add_params(p)
    p.set_defaults(func=cmd_saddle)

    p = sub.add_parser("ridge-gap", help="integrated squared gap to x^2 (beta = 2/alpha)")
    _add_params(p, alpha_only=True)
    p.add_argument("--c", type=float, required=True, help="upper integration limit")
    p.set_defaults(func=cmd_ridge_gap)

    p = sub.add_parser("path", help="solution path theta(z) as CSV")
    _add_params(p)
    p.add_argument("--lambda", type=float, required=True, dest="lam")
    p.add_argument("--zmin", type=float, required=True)
    p.add_argument("--zmax", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("fit", help="penalized regression fit from a CSV (y,x1..xp)")
    p.add_argument("--data", required=True)
    p.add_argument("--lambda", type=float, required=True, dest="lam")
    _add_params(p)
    p.add_argument("--max-iter", type=int, default=100_000)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("consistency", help="sqrt(n)-scaled error experiment")
    p.add_argument("--theta", type=float, nargs="+", required=True,
                   help="true coefficient vector")
    p.add_argument("--n-list", type=int, nargs="+", required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--lambda", type=float, default=1.0, dest="lam")
    _add_params(p)
    p.add_argument("--noise-sd", type=float, default=1.0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_consistency)

    p = sub.add_parser("quantize", help="train a binary net from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--epochs-csv", help="optional per-epoch CSV output")
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("compare", help="foothill vs mod_l1 vs mod_l2, shared seed")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError,
            np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
