"""Command-line front end: ``ruinrate {rate,tables,simulate,verify}``.

Exit codes: 0 success, 1 malformed configuration, 2 net benefit condition
fails, 3 a verification check failed.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import rng as rngmod
from .config import load_model, model_from_dict, model_to_dict
from .errors import ConfigError, NoPositiveRate
from .estimate import dual_tail_grid, duality_check, format_value, ruin_prob_curve, verify_bound, write_csv
from .rate import solve_rate
from .simulate import SimConfig, simulate_dual, simulate_surplus
from . import tables

DEFAULT_MODEL = {
    "premium": {"type": "constant", "p": 2.2},
    "sigma": 0.0,
    "jump": {"type": "compound_poisson", "intensity": 1.0, "claims": {"type": "gamma", "shape": 2.0, "rate": 1.0}},
}
STEPS = (0.1, 0.05, 0.01)
TABLE_COLUMNS = ("table", "model", "sigma", "eta", "k", "lambda_star", "paper_value", "discrepancy")


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _u64(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="ruinrate", description="Convergence rates of ruin probabilities.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, paths=20_000, horizon=None):
        p.add_argument("--model", help="model JSON file (default: gamma claims, p=2.2, sigma=0)")
        p.add_argument("--seed", type=_u64, default=42)
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--paths", type=int, default=paths)
        p.add_argument("--step", type=float, default=0.01)
        p.add_argument("--horizon", type=float, default=horizon)
        p.add_argument("--eps", type=float, default=1e-3)
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("rate", help="solve for the convergence rate k")
    p.add_argument("--model")
    p.add_argument("--out", default=None)

    p = sub.add_parser("tables", help="write rate tables and figure data as CSV")
    p.add_argument("--out", default=".")

    p = sub.add_parser("simulate", help="finite-horizon ruin estimates over several step sizes")
    common(p, horizon=5.0)
    p.add_argument("--u", type=_floats, default=[1.0, 3.0, 5.0])
    p.add_argument("--dump-paths", type=int, default=0, help="also write this many paths of each kind")

    p = sub.add_parser("verify", help="duality and exponential-bound checks")
    common(p, horizon=20.0)
    p.add_argument("--u", type=_floats, default=[0.0, 5.0], help="capitals for the bound check")
    p.add_argument("--duality-u", type=_floats, default=[1.0, 3.0, 5.0])
    p.add_argument("--duality-T", type=_floats, default=[1.0, 5.0])
    p.add_argument("--T-grid", type=_floats, default=[1.0, 2.0, 5.0, 10.0, 20.0])
    return parser


def _model(args):
    if args.model is None:
        return model_from_dict(DEFAULT_MODEL)
    return load_model(args.model)


def _sim_config(args, horizon):
    try:
        return SimConfig(
            step=args.step,
            horizon=horizon,
            n_paths=args.paths,
            seed=args.seed,
            eps=args.eps,
            workers=args.workers,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _write_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, default=_json_value)
        fh.write("\n")


def _json_value(value):
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _dumps(doc):
    # repr of a Python float is the shortest string that round-trips
    return json.dumps(doc, indent=2, default=_json_value)


def cmd_rate(args, out):
    model = _model(args)
    result = solve_rate(model)
    doc = {"model": model_to_dict(model), **result.as_dict()}
    text = _dumps(doc)
    out.write(text + "\n")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write_json(os.path.join(args.out, "rate.json"), doc)
    return 0


def _table_rows(cells):
    for c in cells:
        yield [c.table, c.model, c.sigma, c.eta, c.k, c.lam, c.printed, tables.discrepancy(c)]


def cmd_tables(args, out):
    os.makedirs(args.out, exist_ok=True)
    written = []

    def emit(name, columns, rows):
        path = os.path.join(args.out, name)
        with open(path, "w", newline="") as fh:
            write_csv(fh, columns, rows)
        written.append(path)

    emit("table1.csv", TABLE_COLUMNS, _table_rows(tables.table1()))
    emit("table2.csv", TABLE_COLUMNS, _table_rows(tables.table2()))
    emit("table3.csv", TABLE_COLUMNS, _table_rows(tables.table3()))

    sigmas = np.round(np.linspace(0.0, 10.0, 101), 10)
    etas = np.round(np.linspace(0.05, 0.3, 26), 10)
    gamma = tables.CLAIM_LAWS["Gamma(2,1)"]
    curves = [tables.rate_curve(gamma, e, sigmas) for e in tables.ETAS]
    emit("figure1.csv", ["sigma"] + [f"k_eta_{e}" for e in tables.ETAS], _columns(sigmas, curves))

    laws = tables.CLAIM_LAWS
    emit(
        "figure2a.csv",
        ["eta"] + [f"k_{n}" for n in laws],
        _columns(etas, [tables.rate_curve_eta(c, etas, 2.0) for c in laws.values()]),
    )
    emit(
        "figure2b.csv",
        ["sigma"] + [f"k_{n}" for n in laws],
        _columns(sigmas, [tables.rate_curve(c, 0.1, sigmas) for c in laws.values()]),
    )
    levy = tables.LEVY_MODELS
    emit(
        "figure3a.csv",
        ["eta"] + [f"k_{n}" for n in levy],
        _columns(etas, [tables.rate_curve_eta(j, etas, 1.0, compound=False) for j in levy.values()]),
    )
    emit(
        "figure3b.csv",
        ["sigma"] + [f"k_{n}" for n in levy],
        _columns(sigmas, [tables.rate_curve(j, 0.1, sigmas, compound=False) for j in levy.values()]),
    )
    for path in written:
        out.write(path + "\n")
    return 0


def _columns(x, ys):
    for i, xi in enumerate(x):
        yield [float(xi)] + [float(y[i]) for y in ys]


def cmd_simulate(args, out):
    model = _model(args)
    os.makedirs(args.out, exist_ok=True)
    steps = sorted(set(STEPS) | {args.step}, reverse=True)
    horizon = args.horizon
    results = {}
    for h in steps:
        cfg = _sim_config(_with_step(args, h), horizon)
        dual = dual_tail_grid(model, args.u, [horizon], cfg)
        for u in args.u:
            psi = ruin_prob_curve(model, u, [horizon], cfg)[0]
            results[(h, u)] = (psi, dual[(u, horizon)])
    finest = steps[-1]
    rows = []
    for h in steps:
        for u in args.u:
            psi, tail = results[(h, u)]
            ref = results[(finest, u)][0]
            rows.append([h, u, horizon, psi.mean, psi.stderr, tail.mean, tail.stderr, psi.mean - ref.mean])
    path = os.path.join(args.out, "simulate.csv")
    with open(path, "w", newline="") as fh:
        write_csv(fh, ["h", "u", "T", "psi_T_hat", "stderr", "dual_tail_hat", "dual_stderr", "bias"], rows)
    out.write(path + "\n")
    if args.dump_paths:
        cfg = _sim_config(args, horizon)
        folder = os.path.join(args.out, "paths")
        os.makedirs(folder, exist_ok=True)
        u0 = args.u[0]
        for i in range(args.dump_paths):
            simulate_surplus(model, u0, cfg, rngmod.stream(args.seed, rngmod.SURPLUS, 2**33, i)).to_csv(
                os.path.join(folder, f"surplus_{i:04d}.csv")
            )
            simulate_dual(model, 0.0, cfg, rngmod.stream(args.seed, rngmod.DUAL, 2**33, i)).to_csv(
                os.path.join(folder, f"dual_{i:04d}.csv")
            )
        out.write(folder + "\n")
    return 0


def _with_step(args, h):
    ns = argparse.Namespace(**vars(args))
    ns.step = h
    return ns


def cmd_verify(args, out):
    model = _model(args)
    solve_rate(model)
    os.makedirs(args.out, exist_ok=True)
    t_max = max(max(args.T_grid), max(args.duality_T))
    cfg = _sim_config(args, t_max if args.horizon is None else max(args.horizon, t_max))

    duality = duality_check(model, args.duality_u, args.duality_T, cfg)
    with open(os.path.join(args.out, "duality.csv"), "w", newline="") as fh:
        write_csv(
            fh,
            ["u", "T", "psi_T_hat", "psi_T_stderr", "dual_tail_hat", "dual_stderr", "slack", "pass"],
            (
                [r.u, r.T, r.psi_T.mean, r.psi_T.stderr, r.dual_tail.mean, r.dual_tail.stderr, r.slack, r.passed]
                for r in duality
            ),
        )

    reports = [verify_bound(model, u, args.T_grid, cfg) for u in args.u]
    with open(os.path.join(args.out, "bound.csv"), "w", newline="") as fh:
        write_csv(fh, reports[0].COLUMNS, (row for rep in reports for row in rep.csv_rows()))

    passed = all(r.passed for r in duality) and all(rep.passed for rep in reports)
    summary = {
        "model": model_to_dict(model),
        "seed": args.seed,
        "paths": args.paths,
        "step": args.step,
        "eps": args.eps,
        "passed": passed,
        "duality_passed": all(r.passed for r in duality),
        "bounds": [rep.as_dict() for rep in reports],
    }
    _write_json(os.path.join(args.out, "verify.json"), summary)
    out.write(f"duality: {sum(r.passed for r in duality)}/{len(duality)} rows pass\n")
    for rep in reports:
        out.write(f"bound u={format_value(rep.u)}: {sum(r.passed for r in rep.rows)}/{len(rep.rows)} rows pass\n")
    return 0 if passed else 3


COMMANDS = {"rate": cmd_rate, "tables": cmd_tables, "simulate": cmd_simulate, "verify": cmd_verify}


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        return COMMANDS[args.command](args, out)
    except ConfigError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except NoPositiveRate as exc:
        err.write(f"{exc}\n")
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
