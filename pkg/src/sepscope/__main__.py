#!/usr/bin/python3.10
########################################################################################
# __main__.py - Main module for sepscope.                                              #
#                                                                                      #
# Author: Ben Winchester                                                               #
# Copyright: Ben Winchester, 2024                                                      #
# Date created: 10/07/2024                                                             #
# License: Open source                                                                 #
########################################################################################
"""
__main__.py - The main module for sepscope.

sepscope constructs symmetric (N, M)-POVMs and evaluates the separability criteria
built from their measurement probabilities, alongside the PPT, realignment and
Q-matrix baselines. This main module provides a command-line interface entrypoint for
building measurements and states, evaluating criteria, scanning thresholds and
reproducing the worked examples.

Exit codes:
    - 0: success;
    - 2: invalid configuration, including unreadable or malformed files;
    - 3: numerical failure, i.e., a failed validation or a missing sign change.

"""

__version__ = "1.0.0a1"


import argparse
import json
import logging
import math
import os
import re
import sys

from typing import Any, Match, Pattern

from .__utils__ import (
    ArgumentError,
    BISECTION_TOLERANCE,
    COARSE_GRID_SIZE,
    ConfigurationError,
    DETECTION_TOLERANCE,
    get_logger,
    NumericalError,
    ValidationFailedError,
)
from .entanglement.criteria import (
    CriterionVerdict,
    evaluate_corollary,
    evaluate_p_only,
    evaluate_theorem1,
)
from .entanglement.states import (
    build_family_state,
    DensityMatrix,
    random_separable,
    state_diagnostics,
    StateFamily,
)
from .measurement.basis import HermitianOperatorBasis
from .measurement.povm import (
    build_povm,
    NmPovmConfig,
    PovmKind,
    SymmetricPovm,
    validate_povm,
)
from .reproduction import (
    CSV_FLOAT_FORMAT,
    list_targets,
    reproduce,
    ReproductionTarget,
)
from .scanner import (
    Criterion,
    CriterionConfig,
    FamilySpec,
    find_threshold,
)

# ALL_TARGETS:
#   The target name which reproduces every target in turn.
ALL_TARGETS: str = "all"

# DONE:
#   The message to display when a task was successful.
DONE: str = "[   DONE   ]"

# EXIT_CONFIGURATION:
#   The exit code for invalid configuration.
EXIT_CONFIGURATION: int = 2

# EXIT_NUMERICAL:
#   The exit code for numerical failures.
EXIT_NUMERICAL: int = 3

# FAILED:
#   The message to display when a task failed.
FAILED: str = "[  FAILED  ]"

# FILE_ENCODING:
#   The encoding to use when opening and closing files.
FILE_ENCODING: str = "UTF-8"

# INPUT_DATA_DIRECTORY:
#   The name of the input-data directory.
INPUT_DATA_DIRECTORY: str = "input_data"

# OUTPUT_DIRECTORY:
#   The default directory for reproduction outputs.
OUTPUT_DIRECTORY: str = "outputs"

# SEPSCOPE_HEADER_STRING:
#   Header string for the sepscope code.
SEPSCOPE_HEADER_STRING: str = """
                                   .-''''''-.
                                 .'  .--.    '.
                                /   /    \\     \\
                               |   |  ()  |     |
                               |    \\    /  ()  |
                                \\    '--'      /
                                 '.    ()    .'
                                   '-......-'

       ####   #####  ####    ####    ####   ####   ####   #####
      #       #      #   #  #       #      #    #  #   #  #
       ###    ####   ####    ###    #      #    #  ####   ####
          #   #      #          #   #      #    #  #      #
      ####    #####  #      ####     ####   ####   #      #####

                  Separability criteria from symmetric POVMs

{version_line}

                      For more information, contact
                   Benedict Winchester (benedict.winchester@gmail.com)

"""

# SKIPPED:
#   The message to display when a task was skipped.
SKIPPED: str = "[  SKIPPED ]"

# VERSION_REGEX:
#   Regex used for parsing the version number.
VERSION_REGEX: Pattern[str] = re.compile(r"(?P<number>\d\.\d\.\d)([\.](?P<post>.*))?")


def _add_criterion_arguments(parser: argparse.ArgumentParser) -> None:
    """Add the arguments which configure a criterion and its measurements."""

    criterion_arguments = parser.add_argument_group("criterion arguments")
    # Criterion:
    #   The id of the criterion to evaluate.
    criterion_arguments.add_argument(
        "--criterion",
        "-c",
        default=Criterion.THEOREM_1.value,
        choices=[criterion.value for criterion in Criterion],
        help="The criterion to evaluate.",
    )
    criterion_arguments.add_argument(
        "--povm",
        default=PovmKind.GENERAL.value,
        choices=[kind.value for kind in PovmKind],
        help="The kind of local POVM, forced by the gsic and mum criteria.",
    )
    criterion_arguments.add_argument(
        "--n", type=int, default=None, help="The number of POVMs, N."
    )
    criterion_arguments.add_argument(
        "--m", type=int, default=None, help="The number of outcomes per POVM, M."
    )
    criterion_arguments.add_argument(
        "--t", type=float, default=0.01, help="The POVM interpolation parameter."
    )
    criterion_arguments.add_argument(
        "--scheme", default=None, help="The grouping scheme of the Gell-Mann basis."
    )
    criterion_arguments.add_argument(
        "--mu", type=float, default=0, help="The border weight of the rows."
    )
    criterion_arguments.add_argument(
        "--nu", type=float, default=0, help="The border weight of the columns."
    )
    criterion_arguments.add_argument(
        "--l", type=int, default=1, help="The number of bordering rows and columns."
    )
    criterion_arguments.add_argument(
        "--alpha", type=float, default=0, help="The first Q-matrix weight."
    )
    criterion_arguments.add_argument(
        "--beta", type=float, default=0, help="The second Q-matrix weight."
    )
    criterion_arguments.add_argument(
        "--detection-tolerance",
        type=float,
        default=DETECTION_TOLERANCE,
        help="The margin above which a criterion detects entanglement.",
    )


def _parse_args(unparsed_args: list[str]) -> argparse.Namespace:
    """
    Parse the command-line arguments.

    Inputs:
        - unparsed_args:
            The unparsed command-line arguments.

    """

    parser = argparse.ArgumentParser(
        prog="sepscope",
        description="Separability criteria from symmetric (N, M)-POVMs.",
    )

    # Logging and output arguments.
    output_arguments = parser.add_argument_group("output arguments")
    # Verbose:
    #   Used to emit debug logs to the console.
    output_arguments.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        default=False,
        help="Emit debug information to the console.",
    )
    # Quiet:
    #   Used to suppress the banner and status lines.
    output_arguments.add_argument(
        "--quiet",
        "-q",
        action="store_true",
        default=False,
        help="Suppress the banner and the status lines.",
    )
    output_arguments.add_argument(
        "--log-file", default=None, help="A file to which all logs are also written."
    )
    output_arguments.add_argument(
        "--output",
        "-o",
        default=None,
        help="A file to which to write the JSON output instead of stdout.",
    )
    output_arguments.add_argument(
        "--input-data-directory",
        default=INPUT_DATA_DIRECTORY,
        help="The directory holding the reproduction targets.",
    )

    subparsers = parser.add_subparsers(dest="command", required=True)

    # Scan:
    #   Find the threshold of a criterion along a family of states.
    scan_parser = subparsers.add_parser(
        "scan", help="Find the detection threshold along a family of states."
    )
    scan_parser.add_argument(
        "--family",
        "-f",
        required=True,
        choices=[family.value for family in StateFamily],
        help="The family of states to scan.",
    )
    scan_parser.add_argument(
        "--range",
        nargs=2,
        type=float,
        default=[0, 1],
        metavar=("LO", "HI"),
        help="The parameter range to scan.",
    )
    scan_parser.add_argument(
        "--fixed",
        nargs="*",
        default=[],
        metavar="KEY=VALUE",
        help="Fixed secondary parameters, e.g., dim=3 or upsilon=0.2.",
    )
    scan_parser.add_argument(
        "--tol",
        type=float,
        default=BISECTION_TOLERANCE,
        help="The width to which the threshold bracket is resolved.",
    )
    scan_parser.add_argument(
        "--grid-size",
        type=int,
        default=COARSE_GRID_SIZE,
        help="The number of points in the coarse grid.",
    )
    scan_parser.add_argument(
        "--n-jobs", type=int, default=1, help="The number of parallel workers."
    )
    scan_parser.add_argument(
        "--curve", default=None, help="A CSV file to which to write the margin curve."
    )
    _add_criterion_arguments(scan_parser)

    # Reproduce:
    #   Reproduce a target from the reproduction file.
    reproduce_parser = subparsers.add_parser(
        "reproduce", help="Reproduce a target, writing CSV files."
    )
    reproduce_parser.add_argument(
        "target", help=f"The target to reproduce, or '{ALL_TARGETS}'."
    )
    reproduce_parser.add_argument(
        "--out",
        default=OUTPUT_DIRECTORY,
        help="The directory into which to write the outputs.",
    )
    reproduce_parser.add_argument(
        "--grid-size",
        type=int,
        default=COARSE_GRID_SIZE,
        help="The number of points in the coarse grids.",
    )
    reproduce_parser.add_argument(
        "--n-jobs", type=int, default=1, help="The number of parallel workers."
    )

    # POVM:
    #   Build and validate POVMs.
    povm_parser = subparsers.add_parser("povm", help="Build or validate a POVM.")
    povm_subparsers = povm_parser.add_subparsers(dest="action", required=True)
    povm_build_parser = povm_subparsers.add_parser("build", help="Build a POVM.")
    povm_build_parser.add_argument(
        "--dim", type=int, required=True, help="The Hilbert-space dimension, d."
    )
    povm_build_parser.add_argument(
        "--kind",
        default=PovmKind.GENERAL.value,
        choices=[kind.value for kind in PovmKind],
        help="The kind of POVM, fixing (N, M) for gsic and mum.",
    )
    povm_build_parser.add_argument("--n", type=int, default=None, help="N.")
    povm_build_parser.add_argument("--m", type=int, default=None, help="M.")
    povm_build_parser.add_argument(
        "--t", type=float, required=True, help="The interpolation parameter."
    )
    povm_build_parser.add_argument(
        "--scheme", default=None, help="The grouping scheme of the Gell-Mann basis."
    )
    povm_validate_parser = povm_subparsers.add_parser(
        "validate", help="Validate a POVM JSON file."
    )
    povm_validate_parser.add_argument(
        "--in", dest="input_file", required=True, help="The POVM JSON file."
    )

    # State:
    #   Make and check density matrices.
    state_parser = subparsers.add_parser("state", help="Make or check a state.")
    state_subparsers = state_parser.add_subparsers(dest="action", required=True)
    state_make_parser = state_subparsers.add_parser("make", help="Make a state.")
    state_make_parser.add_argument(
        "--family",
        "-f",
        choices=[family.value for family in StateFamily],
        default=None,
        help="The family of the state.",
    )
    state_make_parser.add_argument(
        "--param", type=float, default=None, help="The family parameter."
    )
    state_make_parser.add_argument(
        "--params",
        nargs="+",
        default=[],
        metavar="VALUE|KEY=VALUE",
        help="The family parameter and fixed parameters together, e.g., 0.5 dim=3.",
    )
    state_make_parser.add_argument(
        "--fixed",
        nargs="*",
        default=[],
        metavar="KEY=VALUE",
        help="Fixed secondary parameters, e.g., dim=3 or upsilon=0.2.",
    )
    random_arguments = state_make_parser.add_argument_group(
        "random separable arguments"
    )
    random_arguments.add_argument(
        "--random-separable",
        action="store_true",
        default=False,
        help="Sample a random separable state instead of a family member.",
    )
    random_arguments.add_argument(
        "--dims", type=int, nargs="+", default=[3, 3], help="The local dimensions."
    )
    random_arguments.add_argument(
        "--terms", type=int, default=4, help="The number of product terms."
    )
    random_arguments.add_argument(
        "--seed", type=int, default=0, help="The seed of the random stream."
    )
    random_arguments.add_argument(
        "--mixed",
        action="store_true",
        default=False,
        help="Use mixed, rather than pure, local factors.",
    )
    state_check_parser = state_subparsers.add_parser(
        "check", help="Print the diagnostics of a state."
    )
    state_check_parser.add_argument(
        "--in", dest="input_file", required=True, help="The density-matrix JSON file."
    )

    # Criterion:
    #   Evaluate a criterion on a state.
    criterion_parser = subparsers.add_parser(
        "criterion", help="Evaluate a criterion on a state."
    )
    criterion_subparsers = criterion_parser.add_subparsers(
        dest="action", required=True
    )
    criterion_eval_parser = criterion_subparsers.add_parser(
        "eval", help="Evaluate a criterion, printing the verdict."
    )
    criterion_eval_parser.add_argument(
        "--state", required=True, help="The density-matrix JSON file."
    )
    criterion_eval_parser.add_argument(
        "--povm-a", default=None, help="A POVM JSON file for the first subsystem."
    )
    criterion_eval_parser.add_argument(
        "--povm-b", default=None, help="A POVM JSON file for the second subsystem."
    )
    _add_criterion_arguments(criterion_eval_parser)

    # Basis:
    #   Dump a grouped Gell-Mann basis.
    basis_parser = subparsers.add_parser("basis", help="Dump a grouped basis.")
    basis_subparsers = basis_parser.add_subparsers(dest="action", required=True)
    basis_dump_parser = basis_subparsers.add_parser(
        "dump", help="Dump the grouped Gell-Mann basis as JSON."
    )
    basis_dump_parser.add_argument(
        "--dim", type=int, required=True, help="The Hilbert-space dimension, d."
    )
    basis_dump_parser.add_argument("--n", type=int, default=None, help="N.")
    basis_dump_parser.add_argument("--m", type=int, default=None, help="M.")
    basis_dump_parser.add_argument(
        "--scheme", default=None, help="The grouping scheme."
    )

    return parser.parse_args(unparsed_args)


def _parse_fixed(entries: list[str]) -> dict[str, Any]:
    """
    Parse `KEY=VALUE` fixed parameters, reading integral values as integers.

    Raises:
        - ArgumentError:
            Raised if an entry is malformed.

    """

    fixed: dict[str, Any] = {}
    for entry in entries:
        key, separator, value = entry.partition("=")
        if separator == "" or key == "":
            raise ArgumentError(f"Fixed parameters must be KEY=VALUE, got '{entry}'.")
        try:
            fixed[key] = int(value) if re.fullmatch(r"-?\d+", value) else float(value)
        except ValueError:
            raise ArgumentError(
                f"Fixed parameter '{key}' must be numeric, got '{value}'."
            ) from None

    return fixed


def _split_params(entries: list[str]) -> tuple[float | None, list[str]]:
    """
    Split `--params` entries into the family parameter and `KEY=VALUE` entries.

    Raises:
        - ArgumentError:
            Raised if more than one bare value is given or a bare value is not numeric.

    """

    bare = [entry for entry in entries if "=" not in entry]
    if len(bare) > 1:
        raise ArgumentError(
            f"At most one bare family parameter may be given, got {', '.join(bare)}."
        )
    if len(bare) == 0:
        return None, list(entries)

    try:
        param = float(bare[0])
    except ValueError:
        raise ArgumentError(
            f"The family parameter must be numeric, got '{bare[0]}'."
        ) from None

    return param, [entry for entry in entries if "=" in entry]


def _resolve_counts(
    dim: int, n_groups: int | None, n_outcomes: int | None, kind: str
) -> tuple[int, int]:
    """Return the (N, M) of a POVM, defaulting to (d^2 - 1, 2) for general kinds."""

    match PovmKind.from_name(kind):
        case PovmKind.GSIC:
            return 1, dim**2
        case PovmKind.MUM:
            return dim + 1, dim

    if n_groups is None and n_outcomes is None:
        return dim**2 - 1, 2
    if n_groups is None or n_outcomes is None:
        raise ArgumentError("Both --n and --m must be given for a general POVM.")
    return n_groups, n_outcomes


def _criterion_config(parsed_args: argparse.Namespace) -> CriterionConfig:
    """Build the criterion configuration from the parsed arguments."""

    return CriterionConfig(
        criterion=Criterion.from_name(parsed_args.criterion),
        povm_kind=PovmKind.from_name(parsed_args.povm),
        n_groups=parsed_args.n,
        n_outcomes=parsed_args.m,
        t=parsed_args.t,
        scheme=parsed_args.scheme,
        mu=parsed_args.mu,
        nu=parsed_args.nu,
        l=parsed_args.l,
        alpha=parsed_args.alpha,
        beta=parsed_args.beta,
        tolerance=parsed_args.detection_tolerance,
    )


def _load_json(filename: str) -> Any:
    """Load a JSON file."""

    with open(filename, "r", encoding=FILE_ENCODING) as json_file:
        return json.load(json_file)


def _write_output(payload: Any, output: str | None) -> None:
    """Write a JSON payload to the output file, or to stdout."""

    serialised = json.dumps(payload, indent=2)
    if output is None:
        print(serialised)
        return

    with open(output, "w", encoding=FILE_ENCODING) as output_file:
        output_file.write(serialised + "\n")


class _StatusPrinter:
    """Prints the padded status lines to stderr unless quiet."""

    def __init__(self, quiet: bool) -> None:
        """Instantiate, printing nothing if `quiet`."""

        self.open: bool = False
        self.quiet = quiet

    def start(self, message: str) -> None:
        """Print the message padded with dots to the width of the status column."""

        self.open = True
        if not self.quiet:
            print(
                message + "." * (88 - (len(message) + len(DONE))) + " ",
                end="",
                file=sys.stderr,
                flush=True,
            )

    def finish(self, status: str = DONE) -> None:
        """Print the status ending the current line."""

        self.open = False
        if not self.quiet:
            print(status, file=sys.stderr, flush=True)


def _scan(parsed_args: argparse.Namespace, status: _StatusPrinter) -> int:
    """Find the threshold of a criterion along a family."""

    status.start("Parsing the family and criterion")
    family = FamilySpec(
        family=StateFamily.from_name(parsed_args.family),
        lo=parsed_args.range[0],
        hi=parsed_args.range[1],
        fixed=_parse_fixed(parsed_args.fixed),
    )
    config = _criterion_config(parsed_args)
    status.finish()

    status.start(f"Scanning {config.criterion.value} on {family.label}")
    result = find_threshold(
        family,
        config,
        tolerance=parsed_args.tol,
        grid_size=parsed_args.grid_size,
        n_jobs=parsed_args.n_jobs,
    )
    status.finish()

    status.start("Writing the margin curve")
    if parsed_args.curve is not None:
        result.samples.to_csv(
            parsed_args.curve, index=False, float_format=CSV_FLOAT_FORMAT
        )
        status.finish()
    else:
        status.finish(SKIPPED)

    _write_output(result.to_dict(), parsed_args.output)
    return 0


def _reproduce(parsed_args: argparse.Namespace, status: _StatusPrinter) -> int:
    """Reproduce one or every target."""

    status.start("Parsing the reproduction targets")
    names = (
        list_targets(parsed_args.input_data_directory)
        if parsed_args.target == ALL_TARGETS
        else [parsed_args.target]
    )
    targets = [
        ReproductionTarget.from_reproduction_file(
            parsed_args.input_data_directory, name
        )
        for name in names
    ]
    status.finish()

    summary: dict[str, Any] = {}
    for target in targets:
        status.start(f"Reproducing {target.name}")
        result = reproduce(
            target,
            parsed_args.out,
            __version__,
            n_jobs=parsed_args.n_jobs,
            grid_size=parsed_args.grid_size,
        )
        status.finish()

        for row in result.thresholds.to_dict("records"):
            status.start(f"  {target.name} {row['label']}")
            status.finish(DONE if row["status"] == "ok" else SKIPPED)

        summary[target.name] = result.files

    _write_output(summary, parsed_args.output)
    return 0


def _povm(parsed_args: argparse.Namespace, status: _StatusPrinter) -> int:
    """Build or validate a POVM."""

    logger = logging.getLogger(__name__)

    if parsed_args.action == "build":
        n_groups, n_outcomes = _resolve_counts(
            parsed_args.dim, parsed_args.n, parsed_args.m, parsed_args.kind
        )
        status.start(f"Building the ({n_groups},{n_outcomes})-POVM")
        povm = build_povm(
            NmPovmConfig(
                dim=parsed_args.dim,
                n_groups=n_groups,
                n_outcomes=n_outcomes,
                t=parsed_args.t,
            ),
            HermitianOperatorBasis.for_nm(
                parsed_args.dim, n_groups, n_outcomes, parsed_args.scheme
            ),
            kind=PovmKind.from_name(parsed_args.kind),
        )
        status.finish()
        if povm.degenerate:
            logger.warning("POVM %s is tagged degenerate.", povm.identifier)
        _write_output(povm.to_json(), parsed_args.output)
        return 0

    status.start(f"Validating {parsed_args.input_file}")
    povm = SymmetricPovm.from_json(_load_json(parsed_args.input_file))
    report = validate_povm(povm)
    _write_output(
        {
            "povm": povm.identifier,
            "degenerate": povm.degenerate,
            povm.kind.parameter_name: povm.x,
            **report.to_dict(),
        },
        parsed_args.output,
    )
    if not report.ok:
        raise ValidationFailedError(
            f"POVM {povm.identifier} violates {', '.join(report.failed_relations)}.",
            report,
        )
    status.finish()
    return 0


def _state(parsed_args: argparse.Namespace, status: _StatusPrinter) -> int:
    """Make or check a density matrix."""

    if parsed_args.action == "check":
        status.start(f"Checking {parsed_args.input_file}")
        rho = DensityMatrix.from_json(_load_json(parsed_args.input_file))
        diagnostics = state_diagnostics(rho)
        status.finish()
        _write_output(diagnostics, parsed_args.output)
        return 0

    status.start("Making the state")
    if parsed_args.random_separable:
        rho = random_separable(
            parsed_args.dims,
            parsed_args.terms,
            parsed_args.seed,
            pure=not parsed_args.mixed,
        )
    else:
        param, extra_fixed = _split_params(parsed_args.params)
        if param is not None:
            if parsed_args.param is not None:
                raise ArgumentError("The family parameter was given more than once.")
            parsed_args.param = param
        if parsed_args.family is None or parsed_args.param is None:
            raise ArgumentError(
                "Either --family and --param or --random-separable must be given."
            )
        fixed = _parse_fixed([*parsed_args.fixed, *extra_fixed])
        rho = build_family_state(parsed_args.family, parsed_args.param, **fixed)
        rho.provenance.update(
            {"family": parsed_args.family, "param": parsed_args.param, **fixed}
        )
    status.finish()

    _write_output(rho.to_json(), parsed_args.output)
    return 0


def _evaluate_with_povms(
    rho: DensityMatrix,
    povm_a: SymmetricPovm,
    povm_b: SymmetricPovm,
    config: CriterionConfig,
) -> CriterionVerdict:
    """Evaluate a probability-matrix criterion with POVMs read from file."""

    match config.criterion:
        case Criterion.THEOREM_1:
            return evaluate_theorem1(
                rho,
                povm_a,
                povm_b,
                config.mu,
                config.nu,
                config.l,
                tolerance=config.tolerance,
            )
        case Criterion.P_ONLY:
            return evaluate_p_only(rho, povm_a, povm_b, tolerance=config.tolerance)
        case Criterion.GSIC | Criterion.MUM:
            return evaluate_corollary(
                rho,
                povm_a,
                povm_b,
                config.mu,
                config.nu,
                config.l,
                tolerance=config.tolerance,
            )

    raise ArgumentError(
        f"POVM files are not used by the '{config.criterion.value}' criterion."
    )


def _criterion(parsed_args: argparse.Namespace, status: _StatusPrinter) -> int:
    """Evaluate a criterion on a state."""

    status.start(f"Evaluating {parsed_args.criterion}")
    rho = DensityMatrix.from_json(_load_json(parsed_args.state))
    config = _criterion_config(parsed_args)

    if (parsed_args.povm_a is None) != (parsed_args.povm_b is None):
        raise ArgumentError("--povm-a and --povm-b must be given together.")
    if parsed_args.povm_a is not None:
        verdict = _evaluate_with_povms(
            rho,
            SymmetricPovm.from_json(_load_json(parsed_args.povm_a)),
            SymmetricPovm.from_json(_load_json(parsed_args.povm_b)),
            config,
        )
    else:
        verdict = config.evaluate(rho)
    status.finish()

    _write_output(verdict.to_dict(), parsed_args.output)
    return 0


def _basis(parsed_args: argparse.Namespace, status: _StatusPrinter) -> int:
    """Dump a grouped basis."""

    n_groups, n_outcomes = _resolve_counts(
        parsed_args.dim, parsed_args.n, parsed_args.m, PovmKind.GENERAL.value
    )
    status.start(f"Grouping the d={parsed_args.dim} Gell-Mann basis")
    basis = HermitianOperatorBasis.for_nm(
        parsed_args.dim, n_groups, n_outcomes, parsed_args.scheme
    )
    status.finish()

    _write_output(basis.to_json(), parsed_args.output)
    return 0


def main(unparsed_arguments: list[str]) -> int:
    """
    Main method for sepscope.

    Inputs:
        - unparsed_arguments:
            The unparsed command-line arguments.

    Returns:
        The exit code.

    """

    parsed_args = _parse_args(unparsed_arguments)
    logger = get_logger(parsed_args.verbose, parsed_args.log_file)
    status = _StatusPrinter(parsed_args.quiet)

    # Snippet taken with permission from CLOVER-energy/CLOVER
    # >>>
    if not parsed_args.quiet:
        version_match: Match[str] | None = VERSION_REGEX.match(__version__)
        version_number: str = (
            version_match.group("number") if version_match is not None else __version__
        )
        version_string = f"Version {version_number}"
        print(
            SEPSCOPE_HEADER_STRING.format(
                version_line=(
                    " " * (44 - math.ceil(len(version_string) / 2))
                    + version_string
                    + " " * (44 - math.floor(len(version_string) / 2))
                )
            ),
            file=sys.stderr,
        )
    # <<< end of reproduced snippet

    if parsed_args.output is not None and (
        output_directory := os.path.dirname(parsed_args.output)
    ):
        os.makedirs(output_directory, exist_ok=True)

    command = {
        "basis": _basis,
        "criterion": _criterion,
        "povm": _povm,
        "reproduce": _reproduce,
        "scan": _scan,
        "state": _state,
    }[parsed_args.command]

    try:
        return command(parsed_args, status)
    except ConfigurationError as caught_error:
        if status.open:
            status.finish(FAILED)
        logger.error("Invalid configuration: %s", caught_error)
        print(f"Invalid configuration: {caught_error}", file=sys.stderr)
        return EXIT_CONFIGURATION
    except NumericalError as caught_error:
        if status.open:
            status.finish(FAILED)
        logger.error("Numerical failure: %s", caught_error)
        print(f"Numerical failure: {caught_error}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, json.JSONDecodeError) as caught_error:
        if status.open:
            status.finish(FAILED)
        logger.error("Could not read or write a file: %s", caught_error)
        print(f"File error: {caught_error}", file=sys.stderr)
        return EXIT_CONFIGURATION


def _entrypoint() -> None:
    """Console-script entrypoint."""

    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    _entrypoint()
