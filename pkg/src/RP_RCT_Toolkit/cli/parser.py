"""
Argument parser of the RP_RCT_Toolkit command line.
"""
import argparse
from typing import List, Optional, Sequence, Tuple

from ..dataio.exporters import FORMATS
from ..estimate import Method
from ..estimate.bootstrap import MIN_RESAMPLES
from ..simulate.power import GRID_KINDS
from ..utils.settings import get_settings

COVARIATE_SEPARATOR = ":"


def comma_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in comma_list(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def grid_spec(text: str) -> Tuple[str, List[float]]:
    """"effect:0,0.5,1" or "epsilon:1,2,4"."""
    kind, sep, values = text.partition(":")
    if not sep or kind not in GRID_KINDS:
        raise argparse.ArgumentTypeError(
            f"grid must look like KIND:v1,v2,... with KIND in {GRID_KINDS}, got {text!r}"
        )
    grid = float_list(values)
    if not grid:
        raise argparse.ArgumentTypeError("grid has no values")
    return kind, grid


def covariate_kinds(text: str) -> dict:
    """"gpa:numeric,year:categorical" -> {"gpa": "numeric", "year": "categorical"}."""
    kinds = {}
    for item in comma_list(text):
        name, sep, kind = item.partition(COVARIATE_SEPARATOR)
        if not sep:
            raise argparse.ArgumentTypeError(f"expected NAME:KIND, got {item!r}")
        kinds[name.strip()] = kind.strip()
    return kinds


def methods(text: str) -> List[Method]:
    try:
        return [Method(item) for item in comma_list(text)]
    except ValueError:
        choices = ", ".join(m.value for m in Method)
        raise argparse.ArgumentTypeError(f"methods must be among {choices}, got {text!r}")


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="Random seed (required by simulate and power)")
    common.add_argument("--format", choices=FORMATS, default="markdown", help="Output format")
    common.add_argument("--out", help="Output file (simulate: output prefix)")
    common.add_argument("--log-level", help="Logging level (default from settings)")
    common.add_argument("--jobs", type=int, help="Parallel workers (default: env/settings)")
    return common


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    common = _common()
    parser = argparse.ArgumentParser(
        prog="RP_RCT_Toolkit",
        description="Robust, differentially private randomized controlled trials",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    design = sub.add_parser("design", parents=[common], help="Privacy and efficiency of a design")
    source = design.add_mutually_exclusive_group()
    source.add_argument("--epsilon", type=float, help="Target privacy loss")
    source.add_argument("--r", type=float, help="Forced probability of the first symmetric map")
    source.add_argument("--preset", choices=("case-study",), help="Named design")
    design.add_argument("--r-prime", type=float, help="Forced probability of the second map")
    design.add_argument("--gap", type=float, default=settings.gap, help="r - r' for --epsilon")
    design.add_argument("--delta", type=float, default=0.5, help="Treatment probability")
    design.add_argument("--tau0", type=float, default=0.5, help="Pr(Y(0)=1)")
    design.add_argument("--tau1", type=float, default=0.5, help="Pr(Y(1)=1)")
    design.add_argument("--effect", type=float, help="Effect to power for (adds sample sizes)")
    design.add_argument("--power", type=float, default=0.8, help="Target power")
    design.add_argument("--alpha", type=float, default=settings.alpha)
    design.add_argument("--save-spec", help="Write the design as JSON for `estimate --spec`")

    simulate = sub.add_parser(
        "simulate", parents=[common], help="Simulated datasets or Monte Carlo summaries"
    )
    simulate.add_argument("--config", required=True, help="Simulation config (JSON)")
    simulate.add_argument("--reps", type=int, default=1, help="Replicates; 1 writes a dataset")
    simulate.add_argument("--n", type=int, help="Override population size")
    simulate.add_argument("--lambda", dest="lam", type=float, help="Override cheater share")
    simulate.add_argument("--delta", type=float, help="Override treatment probability")
    simulate.add_argument("--study", choices=("behaviors",), help="Cheater-behavior bias study")
    simulate.add_argument("--methods", type=methods, default=[Method.H_DIFF, Method.H_COV])
    simulate.add_argument("--bootstrap", type=int, help="Resamples per replicate")
    simulate.add_argument("--alpha", type=float, default=settings.alpha)

    estimate = sub.add_parser("estimate", parents=[common], help="Analyse a privatized dataset")
    estimate.add_argument("--data", required=True, help="Observed dataset (CSV)")
    estimate.add_argument("--spec", required=True, help="Design the data were collected under")
    estimate.add_argument(
        "--outcome-cols", type=comma_list, default=["y_tilde"], help="Privatized outcome columns"
    )
    estimate.add_argument(
        "--covariates", type=covariate_kinds, help="NAME:KIND list; default: every other column"
    )
    estimate.add_argument("--missing-token", default="", help="Cell text of a missing value")
    estimate.add_argument("--bootstrap", type=int, help="Resamples, 0 for none")
    estimate.add_argument("--alpha", type=float, default=settings.alpha)
    estimate.add_argument("--tau0", type=float, default=0.0, help="Null value of the tests")
    estimate.add_argument("--selection", choices=("aic", "full", "intercept"), default="aic")
    estimate.add_argument("--direction", choices=("backward", "forward"), default="backward")
    estimate.add_argument("--missing-indicators", action="store_true")

    power = sub.add_parser("power", parents=[common], help="Power and coverage over a grid")
    power.add_argument("--config", required=True, help="Simulation config (JSON)")
    power.add_argument("--spec", help="Design document overriding the config's design")
    power.add_argument("--reps", type=int, default=settings.reps)
    power.add_argument("--grid", type=grid_spec, required=True, help="effect:... or epsilon:...")
    power.add_argument("--gap", type=float, default=settings.gap)
    power.add_argument("--methods", type=methods, default=[Method.H_DIFF, Method.H_COV])
    power.add_argument("--bootstrap", type=int, help="Resamples per replicate")
    power.add_argument("--alpha", type=float, default=settings.alpha)
    return parser


def parse_args(
    parser: argparse.ArgumentParser, argv: Optional[Sequence[str]] = None
) -> argparse.Namespace:
    """Parse and apply the checks argparse cannot express; usage errors exit with 2."""
    args = parser.parse_args(argv)
    alpha = getattr(args, "alpha", None)
    if alpha is not None and not 0 < alpha < 1:
        parser.error(f"--alpha must lie in (0, 1), got {alpha}")
    if args.command in ("simulate", "power"):
        if args.seed is None:
            parser.error(f"{args.command} requires --seed")
        if args.reps < 1:
            parser.error(f"--reps must be at least 1, got {args.reps}")
    if args.command == "simulate" and args.reps == 1 and not args.study and not args.out:
        parser.error("simulate with --reps 1 requires --out PREFIX")
    if args.command == "design":
        if args.epsilon is None and args.r is None and args.preset is None:
            parser.error("design needs one of --epsilon, --r/--r-prime or --preset")
        if (args.r is None) != (args.r_prime is None):
            parser.error("--r and --r-prime must be given together")
    bootstrap = getattr(args, "bootstrap", None)
    if bootstrap is not None and (bootstrap < 0 or 0 < bootstrap < MIN_RESAMPLES):
        parser.error(f"--bootstrap must be 0 or at least {MIN_RESAMPLES}, got {bootstrap}")
    if args.format == "latex" and args.command != "estimate":
        parser.error("LaTeX output is only available for estimation reports")
    return args
