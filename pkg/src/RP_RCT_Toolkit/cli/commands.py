"""
Subcommand implementations. Each returns the process exit code.
"""
import argparse
import logging
import math
import sys

from ..dataio import (
    DatasetSchema,
    LatexExporter,
    dataset_path,
    load_design,
    load_simulation_config,
    overrides,
    read_outcomes,
    render_document,
    render_report,
    render_rows,
    save_json,
    sidecar_path,
    write_dataset,
    write_sidecar,
)
from ..design import DesignSpec, design_report, private_variance, required_n
from ..estimate import ModelPolicy, estimate_outcomes
from ..simulate import (
    ReplicateOptions,
    behavior_bias_study,
    generate_population,
    power_study,
    replicate,
    run_protocol_outcomes,
    true_tau_h,
)
from ..utils.rng import StreamManager
from ..utils.settings import get_settings

logger = logging.getLogger(__name__)


def emit(text: str, out: str = None) -> None:
    """Write command output to a file, or stdout."""
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        logger.info("Output written to %s", out)
    else:
        sys.stdout.write(text)


def _design_spec(args: argparse.Namespace) -> DesignSpec:
    if args.preset:
        return DesignSpec.case_study()
    if args.epsilon is not None:
        return DesignSpec.from_epsilon(args.epsilon, args.gap, args.delta)
    return DesignSpec.symmetric(args.delta, args.r, args.r_prime)


def cmd_design(args: argparse.Namespace) -> int:
    """Print the design, its privacy readings and its cost of privacy."""
    spec = _design_spec(args)
    report = design_report(spec, args.tau0, args.tau1)
    document = report.to_dict()
    if args.effect is not None:
        classical = private_variance(math.inf, spec.delta, args.tau0, args.tau1)
        private = classical / report.efficiency.relative_efficiency
        document["sample_size"] = {
            "effect": args.effect,
            "power": args.power,
            "alpha": args.alpha,
            "classical_n": required_n(classical, args.power, args.alpha, args.effect),
            "private_n": required_n(private, args.power, args.alpha, args.effect),
        }
    if args.save_spec:
        save_json(spec.to_dict(), args.save_spec)
    emit(render_document(document, args.format), args.out)
    return 0


def _bootstrap(args: argparse.Namespace, default: int) -> int:
    return default if args.bootstrap is None else args.bootstrap


def _replicate_options(args: argparse.Namespace) -> ReplicateOptions:
    bootstrap = _bootstrap(args, get_settings().replicate_bootstrap)
    return ReplicateOptions(methods=tuple(args.methods), bootstrap=bootstrap, alpha=args.alpha)


def cmd_simulate(args: argparse.Namespace) -> int:
    """
    One simulated dataset (--reps 1) or a Monte Carlo summary.

    A single run writes <out>.csv with the observed columns and
    <out>.truth.csv with the latent truth.
    """
    config = overrides(
        load_simulation_config(args.config), n=args.n, lam=args.lam, delta=args.delta
    )
    population, spec = config
    fmt = args.format

    if args.study == "behaviors":
        rows = behavior_bias_study(population, spec, args.reps, args.seed, n_jobs=args.jobs)
        emit(render_rows([row.to_dict() for row in rows], fmt), args.out)
        return 0

    if args.reps > 1:
        summary = replicate(
            population, spec, args.reps, args.seed, _replicate_options(args), args.jobs
        )
        emit(render_document(summary.to_dict(), fmt), args.out)
        return 0

    streams = StreamManager(args.seed, 0)
    latent = generate_population(population, streams.get_stream("population"))
    data, sidecars = run_protocol_outcomes(latent, spec, streams.get_stream("protocol"))
    data_file = write_dataset(data, dataset_path(args.out))
    truth_file = write_sidecar(sidecars, sidecar_path(args.out))
    logger.info(
        "Simulated %d units; honest effect %s",
        data.n,
        {name: round(true_tau_h(side), 4) for name, side in sidecars.items()},
    )
    document = {"data": data_file, "truth": truth_file, "n": data.n, "seed": args.seed}
    sys.stdout.write(render_document(document, fmt))
    return 0


def cmd_estimate(args: argparse.Namespace) -> int:
    """Estimate lambda and both honest effects for every outcome column."""
    spec = load_design(args.spec)
    schema = DatasetSchema(
        outcomes=tuple(args.outcome_cols),
        covariates=args.covariates or {},
        missing_token=args.missing_token,
        infer_covariates=args.covariates is None,
    )
    data = read_outcomes(args.data, schema)
    policy = ModelPolicy(
        selection=args.selection,
        direction=args.direction,
        missing_indicators=args.missing_indicators,
    )
    reports = estimate_outcomes(
        data,
        spec,
        alpha=args.alpha,
        bootstrap=_bootstrap(args, get_settings().bootstrap),
        seed=args.seed or 0,
        policy=policy,
        n_jobs=args.jobs,
        tau0=args.tau0,
    )
    if args.format == "latex" and args.out:
        LatexExporter().export_tex(reports, args.out)
        return 0
    emit(render_report(reports, args.format), args.out)
    return 0


def cmd_power(args: argparse.Namespace) -> int:
    """Rejection rate and coverage over an effect or privacy grid."""
    population, spec = load_simulation_config(args.config)
    if args.spec:
        spec = load_design(args.spec)
    kind, grid = args.grid
    rows = power_study(
        population,
        spec,
        kind,
        grid,
        args.reps,
        args.seed,
        _replicate_options(args),
        args.gap,
        args.jobs,
    )
    emit(render_rows([row.to_dict() for row in rows], args.format), args.out)
    return 0


COMMANDS = {
    "design": cmd_design,
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "power": cmd_power,
}
