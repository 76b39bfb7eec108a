"""Command-line front end.

Three subcommands:

  learn     fit the two-condition network and export composite +
            differential graphs plus a run report
  simulate  draw paired synthetic datasets from a built-in or user-supplied
            graph pair
  lambda    report the selected penalty weights without fitting

Validation and I/O failures exit 1 with a JSON diagnostic line on stderr;
``learn`` exits 2 (artifacts still written) when any node fails to converge.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .data import PenaltyConfig, read_csv, standardize, write_csv
from .exceptions import DiffggmError
from .network import (
    assemble,
    differential,
    differential_to_dot,
    differential_to_json,
    network_to_dot,
    network_to_json,
)
from .regularization import lambda1_grid, select_lambda1_cv, select_lambda2
from .solver import SolverOptions, fit_all
from .synthgen import builtin_experiment, load_spec, sample_pair, spec_to_json


def _diagnostic(**fields) -> None:
    print(json.dumps(fields), file=sys.stderr)


def _load_conditions(args):
    if args.builtin:
        spec1, spec2 = builtin_experiment(args.builtin)
        return sample_pair(spec1, spec2, args.n, args.seed)
    raw1 = read_csv(args.cond1)
    raw2 = read_csv(args.cond2)
    return raw1, raw2


def _select_penalties(data, args):
    """Resolve (lambda1, lambda2) from flags or the selection procedures."""
    report: dict = {"alpha": args.alpha, "folds": args.folds}
    if args.lambda2 is not None:
        lam2 = args.lambda2
        report["lambda2"] = {"value": lam2, "source": "explicit"}
    else:
        heur = select_lambda2(data, args.alpha)
        lam2 = heur.chosen
        report["lambda2"] = {
            "value": heur.chosen,
            "source": "significance-heuristic",
            "s": heur.s,
            "mean_rho_product": heur.mean_rho_product,
            "n_clamped": heur.n_clamped,
        }
    if args.lambda1 is not None:
        lam1 = args.lambda1
        report["lambda1"] = {"value": lam1, "source": "explicit"}
    else:
        selection = select_lambda1_cv(
            data,
            folds=args.folds,
            grid=lambda1_grid(data, args.grid_length),
            seed=args.seed,
        )
        lam1 = selection.chosen
        report["lambda1"] = {
            "value": selection.chosen,
            "source": "cross-validation",
            "grid": [float(x) for x in selection.grid],
            "cv_mean_error": [float(x) for x in selection.mean_errors],
            "cv_se_error": [float(x) for x in selection.se_errors],
        }
    return PenaltyConfig(lambda1=lam1, lambda2=lam2, alpha=args.alpha), report


def cmd_learn(args) -> int:
    out = Path(args.out)
    formats = set(args.format.split(","))
    bad = formats - {"json", "dot"}
    if bad:
        raise ValueError(f"unknown output format(s): {sorted(bad)}")

    raw1, raw2 = _load_conditions(args)
    data = standardize(raw1, raw2)
    pen, report = _select_penalties(data, args)

    solutions = fit_all(data, pen, SolverOptions())
    failed = [s.node_index for s in solutions if not s.converged]
    for j in failed:
        _diagnostic(
            warning="did-not-converge",
            node=data.variable_names[j],
            sweeps=solutions[j].sweeps_used,
        )
    model = assemble(solutions, data.variable_names, force=True)
    subnet = differential(model, structural_only=args.structural_only)

    out.mkdir(parents=True, exist_ok=True)
    if "json" in formats:
        (out / "network.json").write_text(network_to_json(model, subnet))
        (out / "differential.json").write_text(differential_to_json(model, subnet))
    if "dot" in formats:
        (out / "network.dot").write_text(network_to_dot(model))
        (out / "differential.dot").write_text(differential_to_dot(model, subnet))

    report.update(
        {
            "n_samples": data.n_samples,
            "nodes": list(data.variable_names),
            "seed": args.seed,
            "structural_only": args.structural_only,
            "per_node": [
                {
                    "node": data.variable_names[s.node_index],
                    "converged": s.converged,
                    "sweeps": s.sweeps_used,
                    "objective": s.objective,
                }
                for s in solutions
            ],
            "n_edges": len(model.edges),
            "n_differential_edges": len(subnet.edges),
            "differential_edges": [
                [model.nodes[e.source], model.nodes[e.target]] for e in subnet.edges
            ],
        }
    )
    (out / "report.json").write_text(json.dumps(report, indent=2) + "\n")

    print(
        f"lambda1={pen.lambda1:.6g} lambda2={pen.lambda2:.6g} | "
        f"{len(model.edges)} edges, {len(subnet.edges)} differential | "
        f"artifacts in {out}"
    )
    return 2 if failed else 0


def cmd_simulate(args) -> int:
    if args.builtin:
        spec1, spec2 = builtin_experiment(args.builtin)
    else:
        spec1 = load_spec(args.spec1)
        spec2 = load_spec(args.spec2)
    raw1, raw2 = sample_pair(spec1, spec2, args.n, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "cond1.csv", raw1)
    write_csv(out / "cond2.csv", raw2)
    (out / "truth1.json").write_text(spec_to_json(spec1))
    (out / "truth2.json").write_text(spec_to_json(spec2))
    print(f"wrote {args.n}x{spec1.p} samples per condition to {out}")
    return 0


def cmd_lambda(args) -> int:
    raw1, raw2 = _load_conditions(args)
    data = standardize(raw1, raw2)
    _, report = _select_penalties(data, args)
    report["n_samples"] = data.n_samples
    report["nodes"] = list(data.variable_names)
    print(json.dumps(report, indent=2))
    return 0


def _add_input_arguments(parser, with_generation=True):
    parser.add_argument("--cond1", help="CSV of condition-1 samples")
    parser.add_argument("--cond2", help="CSV of condition-2 samples")
    parser.add_argument(
        "--builtin",
        help="built-in experiment name (six-node, grn20) instead of CSV input",
    )
    if with_generation:
        parser.add_argument(
            "--n", type=int, default=200,
            help="samples per condition for --builtin (default 200)",
        )
    parser.add_argument("--seed", type=int, default=0, help="random seed (default 0)")


def _add_penalty_arguments(parser):
    parser.add_argument("--lambda1", type=float, help="explicit lambda1 (skips CV)")
    parser.add_argument(
        "--lambda2", type=float, help="explicit lambda2 (skips the heuristic)"
    )
    parser.add_argument(
        "--alpha", type=float, default=0.01,
        help="significance level for the lambda2 heuristic (default 0.01)",
    )
    parser.add_argument(
        "--folds", type=int, default=10,
        help="cross-validation folds for lambda1 (default 10)",
    )
    parser.add_argument(
        "--grid-length", type=int, default=20,
        help="number of lambda1 candidates (default 20)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diffggm",
        description="Learn two-condition Gaussian graphical models and their "
        "differential sub-network",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    learn = sub.add_parser("learn", help="fit the networks and export graphs")
    _add_input_arguments(learn)
    _add_penalty_arguments(learn)
    learn.add_argument("--out", required=True, help="output directory")
    learn.add_argument(
        "--format", default="json,dot",
        help="comma-separated subset of {json,dot} (default both)",
    )
    learn.add_argument(
        "--structural-only", action="store_true",
        help="count only presence changes as differential (ignore pure "
        "weight changes)",
    )
    learn.set_defaults(func=cmd_learn)

    simulate = sub.add_parser("simulate", help="draw paired synthetic datasets")
    simulate.add_argument("--builtin", help="built-in experiment name")
    simulate.add_argument("--spec1", help="condition-1 graph spec JSON")
    simulate.add_argument("--spec2", help="condition-2 graph spec JSON")
    simulate.add_argument("--n", type=int, required=True, help="samples per condition")
    simulate.add_argument("--seed", type=int, default=0, help="random seed")
    simulate.add_argument("--out", required=True, help="output directory")
    simulate.set_defaults(func=cmd_simulate)

    lam = sub.add_parser("lambda", help="report selected penalties as JSON")
    _add_input_arguments(lam)
    _add_penalty_arguments(lam)
    lam.set_defaults(func=cmd_lambda)

    return parser


def _validate_input_choice(args) -> None:
    if getattr(args, "command", None) == "simulate":
        has_specs = args.spec1 is not None and args.spec2 is not None
        if bool(args.builtin) == has_specs:
            raise ValueError("give either --builtin or both --spec1/--spec2")
        if args.n < 1:
            raise ValueError("--n must be at least 1")
        return
    has_files = args.cond1 is not None and args.cond2 is not None
    if bool(args.builtin) == has_files:
        raise ValueError("give either --builtin or both --cond1/--cond2")
    if args.builtin and args.n < 1:
        raise ValueError("--n must be at least 1")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _validate_input_choice(args)
        return args.func(args)
    except (DiffggmError, OSError, ValueError, np.linalg.LinAlgError) as exc:
        _diagnostic(error=type(exc).__name__, message=str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
